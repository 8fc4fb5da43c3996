#include "aefuse/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "aefuse/error.hpp"

namespace aefuse {

namespace {

constexpr const char* kMagic = "AEFv1";

void write_number(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

void write_row(std::ostream& out, std::span<const double> row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) out << ' ';
        write_number(out, row[j]);
    }
    out << '\n';
}

class LineReader {
public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    std::vector<std::string_view> next(const char* what) {
        if (!std::getline(in_, line_))
            throw ParseError(source_, line_no_ + 1, std::string("unexpected end of file, expected ") + what);
        ++line_no_;
        if (!line_.empty() && line_.back() == '\r') line_.pop_back();
        std::vector<std::string_view> tokens;
        std::string_view rest(line_);
        while (!rest.empty()) {
            const auto start = rest.find_first_not_of(" \t");
            if (start == std::string_view::npos) break;
            rest.remove_prefix(start);
            const auto end = rest.find_first_of(" \t");
            tokens.push_back(rest.substr(0, end));
            if (end == std::string_view::npos) break;
            rest.remove_prefix(end);
        }
        return tokens;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }
    std::size_t line() const noexcept { return line_no_; }

    std::size_t parse_count(std::string_view tok) const {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            fail("expected a non-negative integer, got '" + std::string(tok) + "'");
        return v;
    }

    double parse_real(std::string_view tok) const {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            fail("malformed number '" + std::string(tok) + "'");
        if (!std::isfinite(v)) fail("non-finite value '" + std::string(tok) + "'");
        return v;
    }

    std::vector<double> numbers(std::size_t expected, const char* what) {
        const auto tokens = next(what);
        if (tokens.size() != expected)
            fail(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                 std::to_string(tokens.size()));
        std::vector<double> out;
        out.reserve(expected);
        for (auto t : tokens) out.push_back(parse_real(t));
        return out;
    }

    std::size_t keyed_count(const char* key) {
        const auto tokens = next(key);
        if (tokens.size() != 2 || tokens[0] != key) fail(std::string("expected '") + key + " <n>'");
        return parse_count(tokens[1]);
    }

private:
    std::istream& in_;
    std::string source_;
    std::string line_;
    std::size_t line_no_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const Network& net) {
    out << kMagic << '\n';
    out << "layers " << net.depth() << '\n';
    out << "split " << net.split() << '\n';
    out << "tied " << (net.tied() ? 1 : 0) << '\n';
    for (std::size_t i = 0; i < net.depth(); ++i) {
        const Layer& l = net.layer(i);
        out << "layer " << i << ' ' << l.in_dim() << ' ' << l.out_dim() << ' '
            << to_string(l.activation) << '\n';
        for (std::size_t r = 0; r < l.weights.rows(); ++r) write_row(out, l.weights.row(r));
        write_row(out, l.bias.row(0));
    }
}

Network read_model(std::istream& in, const std::string& source) {
    LineReader reader(in, source);
    const auto header = reader.next("header");
    if (header.size() != 1 || header[0] != kMagic) reader.fail("malformed header, expected AEFv1");
    const std::size_t depth = reader.keyed_count("layers");
    const std::size_t split = reader.keyed_count("split");
    const std::size_t tied = reader.keyed_count("tied");
    if (depth == 0) reader.fail("model has no layers");
    if (tied > 1) reader.fail("tied must be 0 or 1");

    const std::size_t split_line = reader.line() - 1;
    std::vector<Layer> layers;
    std::vector<std::size_t> layer_lines;
    for (std::size_t i = 0; i < depth; ++i) {
        const auto tokens = reader.next("layer line");
        layer_lines.push_back(reader.line());
        if (tokens.size() != 5 || tokens[0] != "layer") reader.fail("expected 'layer i in out activation'");
        if (reader.parse_count(tokens[1]) != i) reader.fail("layer index out of order");
        const std::size_t in_dim = reader.parse_count(tokens[2]);
        const std::size_t out_dim = reader.parse_count(tokens[3]);
        if (in_dim == 0 || out_dim == 0) reader.fail("layer dimensions must be positive");
        if (!layers.empty() && layers.back().out_dim() != in_dim)
            reader.fail("dimension mismatch: layer " + std::to_string(i) + " expects " +
                        std::to_string(in_dim) + " inputs but previous layer has " +
                        std::to_string(layers.back().out_dim()) + " outputs");
        Layer layer;
        try {
            layer.activation = parse_activation(tokens[4]);
        } catch (const ConfigError& e) {
            reader.fail(e.what());
        }
        std::vector<double> w;
        w.reserve(in_dim * out_dim);
        for (std::size_t r = 0; r < out_dim; ++r) {
            auto row = reader.numbers(in_dim, "weight row");
            w.insert(w.end(), row.begin(), row.end());
        }
        layer.weights = Matrix(out_dim, in_dim, std::move(w));
        layer.bias = Matrix(1, out_dim, reader.numbers(out_dim, "bias row"));
        layers.push_back(std::move(layer));
    }

    if (tied) {
        for (std::size_t k = 0; k < split && 2 * split == depth; ++k)
            if (layers[depth - 1 - k].weights != transpose(layers[k].weights))
                throw ParseError(source, layer_lines[depth - 1 - k],
                                 "tied decoder layer " + std::to_string(depth - 1 - k) +
                                     " is not the transpose of encoder layer " + std::to_string(k));
    }
    try {
        return Network(std::move(layers), split, tied == 1);
    } catch (const Error& e) {
        throw ParseError(source, split_line, e.what());
    }
}

void save_model(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model to " + path.string());
    write_model(out, net);
    out.flush();
    if (!out) throw DataError("failed writing model to " + path.string());
}

Network load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model " + path.string());
    return read_model(in, path.string());
}

}  // namespace aefuse
