#include "aefuse/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "aefuse/error.hpp"
#include "aefuse/rng.hpp"

namespace aefuse {

namespace {

bool is_gzip_path(const std::filesystem::path& path) { return path.extension() == ".gz"; }

std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t at) {
    return (static_cast<std::uint32_t>(b[at]) << 24) | (static_cast<std::uint32_t>(b[at + 1]) << 16) |
           (static_cast<std::uint32_t>(b[at + 2]) << 8) | static_cast<std::uint32_t>(b[at + 3]);
}

void put_be32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    b.push_back(static_cast<std::uint8_t>(v >> 24));
    b.push_back(static_cast<std::uint8_t>(v >> 16));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
    b.push_back(static_cast<std::uint8_t>(v));
}

std::size_t header_size(const IdxHeader& h) { return 4 + 4 * h.dims.size(); }

std::string hex_magic(std::uint32_t magic) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08X", magic);
    return buf;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

Dataset Dataset::select(const std::vector<std::size_t>& indices) const {
    Dataset out;
    out.x = x.select_rows(indices);
    if (labels) {
        std::vector<int> picked;
        picked.reserve(indices.size());
        for (std::size_t i : indices) picked.push_back(labels->at(i));
        out.labels = std::move(picked);
    }
    out.name = name;
    out.feature_range = feature_range;
    out.normalization = normalization;
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw DataError("file not found: " + path.string());
    std::vector<std::uint8_t> bytes;
    if (is_gzip_path(path)) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw DataError("cannot open " + path.string());
        std::uint8_t buf[1 << 16];
        int got;
        while ((got = gzread(f, buf, sizeof buf)) > 0) bytes.insert(bytes.end(), buf, buf + got);
        int err = 0;
        const char* msg = gzerror(f, &err);
        const std::string message = msg ? msg : "";
        gzclose(f);
        if (got < 0 || (err != Z_OK && err != Z_STREAM_END))
            throw ParseError(path.string(), 0, "gzip stream error: " + message);
        return bytes;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return bytes;
}

IdxHeader parse_idx_header(const std::vector<std::uint8_t>& bytes, const std::string& source) {
    if (bytes.size() < 4) throw ParseError(source, 0, "truncated IDX header");
    if (bytes[0] != 0 || bytes[1] != 0)
        throw ParseError(source, 0, "bad IDX magic " + hex_magic(read_be32(bytes, 0)));
    IdxHeader h;
    h.type_code = bytes[2];
    switch (h.type_code) {
        case 0x08: case 0x09: case 0x0B: case 0x0C: case 0x0D: case 0x0E: break;
        default: throw ParseError(source, 0, "unknown IDX type code in magic " +
                                                 hex_magic(read_be32(bytes, 0)));
    }
    const std::size_t ndims = bytes[3];
    if (ndims == 0) throw ParseError(source, 0, "IDX file declares zero dimensions");
    if (bytes.size() < 4 + 4 * ndims) throw ParseError(source, 0, "truncated IDX header");
    for (std::size_t k = 0; k < ndims; ++k) h.dims.push_back(read_be32(bytes, 4 + 4 * k));
    return h;
}

void write_idx(const std::filesystem::path& path, const std::vector<std::uint32_t>& dims,
               const std::vector<std::uint8_t>& payload) {
    if (dims.empty() || dims.size() > 255) throw ConfigError("write_idx: bad rank");
    std::size_t count = 1;
    for (auto d : dims) count *= d;
    if (count != payload.size())
        throw ShapeError("write_idx: payload of " + std::to_string(payload.size()) +
                         " bytes for " + std::to_string(count) + " elements");
    std::vector<std::uint8_t> bytes{0, 0, 0x08, static_cast<std::uint8_t>(dims.size())};
    for (auto d : dims) put_be32(bytes, d);
    bytes.insert(bytes.end(), payload.begin(), payload.end());
    if (is_gzip_path(path)) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f) throw DataError("cannot write " + path.string());
        const int wrote = gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
        gzclose(f);
        if (wrote != static_cast<int>(bytes.size())) throw DataError("short write to " + path.string());
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("short write to " + path.string());
}

Dataset load_idx(const std::filesystem::path& images,
                 const std::optional<std::filesystem::path>& labels) {
    const auto img_bytes = read_file_bytes(images);
    const IdxHeader ih = parse_idx_header(img_bytes, images.string());
    if (ih.magic() != kIdxImagesMagic)
        throw ParseError(images.string(), 0,
                         "expected image magic " + hex_magic(kIdxImagesMagic) + ", got " +
                             hex_magic(ih.magic()));
    const std::size_t n = ih.dims[0];
    const std::size_t d = static_cast<std::size_t>(ih.dims[1]) * ih.dims[2];
    const std::size_t expected = header_size(ih) + n * d;
    if (img_bytes.size() != expected)
        throw ParseError(images.string(), 0,
                         (img_bytes.size() < expected ? "truncated payload: " : "trailing data: ") +
                             std::to_string(img_bytes.size()) + " bytes, expected " +
                             std::to_string(expected));

    Dataset ds;
    ds.name = images.filename().string();
    ds.feature_range = {0.0, 255.0};
    ds.x = Matrix(n, d);
    auto out = ds.x.data();
    const std::size_t offset = header_size(ih);
    for (std::size_t i = 0; i < n * d; ++i) out[i] = img_bytes[offset + i];

    if (labels) {
        const auto lab_bytes = read_file_bytes(*labels);
        const IdxHeader lh = parse_idx_header(lab_bytes, labels->string());
        if (lh.magic() != kIdxLabelsMagic)
            throw ParseError(labels->string(), 0,
                             "expected label magic " + hex_magic(kIdxLabelsMagic) + ", got " +
                                 hex_magic(lh.magic()));
        if (lh.dims[0] != n)
            throw DataError("label count " + std::to_string(lh.dims[0]) +
                            " does not match image count " + std::to_string(n));
        if (lab_bytes.size() != header_size(lh) + n)
            throw ParseError(labels->string(), 0, "label payload size mismatch");
        std::vector<int> lab(n);
        for (std::size_t i = 0; i < n; ++i) lab[i] = lab_bytes[header_size(lh) + i];
        ds.labels = std::move(lab);
    }
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    const std::string source = path.string();

    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> label_idx;
    std::size_t width = 0;
    bool have_width = false;

    if (options.has_header) {
        if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
        ++line_no;
        const auto names = split_fields(line);
        width = names.size();
        have_width = true;
        if (options.label_column) {
            const auto it = std::find(names.begin(), names.end(), *options.label_column);
            if (it != names.end())
                label_idx = static_cast<std::size_t>(it - names.begin());
        }
    }
    if (options.label_column && !label_idx) {
        const auto idx = parse_int(*options.label_column);
        if (!idx || *idx < 0)
            throw DataError("label column '" + *options.label_column + "' not found in " + source);
        label_idx = static_cast<std::size_t>(*idx);
    }

    std::vector<double> values;
    std::vector<std::string> raw_labels;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (!have_width) {
            width = fields.size();
            have_width = true;
        }
        if (fields.size() != width)
            throw ParseError(source, line_no,
                             "ragged row: " + std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(width));
        if (label_idx && *label_idx >= width)
            throw DataError("label column index " + std::to_string(*label_idx) + " out of range");
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (label_idx && c == *label_idx) {
                raw_labels.emplace_back(fields[c]);
                continue;
            }
            const auto v = parse_double(fields[c]);
            if (!v)
                throw ParseError(source, line_no,
                                 "row " + std::to_string(rows + 1) + " column " +
                                     std::to_string(c + 1) + ": non-numeric value '" +
                                     std::string(fields[c]) + "'");
            values.push_back(*v);
        }
        ++rows;
    }
    if (rows == 0) throw DataError("no data rows in " + source);

    Dataset ds;
    ds.name = path.filename().string();
    const std::size_t d = width - (label_idx ? 1 : 0);
    ds.x = Matrix(rows, d, std::move(values));
    if (label_idx) {
        std::vector<int> lab;
        lab.reserve(rows);
        bool all_int = std::all_of(raw_labels.begin(), raw_labels.end(),
                                   [](const std::string& s) { return parse_int(s).has_value(); });
        std::map<std::string, int> ids;
        for (const auto& s : raw_labels) {
            if (all_int) {
                lab.push_back(*parse_int(s));
            } else {
                auto [it, inserted] = ids.emplace(s, static_cast<int>(ids.size()));
                lab.push_back(it->second);
            }
        }
        ds.labels = std::move(lab);
    }
    const auto [lo, hi] = std::minmax_element(ds.x.data().begin(), ds.x.data().end());
    ds.feature_range = {d ? *lo : 0.0, d ? *hi : 0.0};
    return ds;
}

Dataset normalize(const Dataset& ds, NormalizeMode mode) {
    const std::size_t d = ds.dim();
    Normalization norm;
    norm.offset.assign(d, 0.0);
    norm.range.assign(d, 0.0);
    if (mode == NormalizeMode::GlobalRange) {
        const auto [lo, hi] = ds.feature_range;
        if (!(hi > lo))
            throw DataError("global normalization needs a non-degenerate feature range");
        std::fill(norm.offset.begin(), norm.offset.end(), lo);
        std::fill(norm.range.begin(), norm.range.end(), hi - lo);
    } else {
        if (ds.size() == 0) throw DataError("normalize: empty dataset");
        for (std::size_t j = 0; j < d; ++j) {
            double lo = ds.x(0, j);
            double hi = lo;
            for (std::size_t i = 1; i < ds.size(); ++i) {
                lo = std::min(lo, ds.x(i, j));
                hi = std::max(hi, ds.x(i, j));
            }
            norm.offset[j] = lo;
            norm.range[j] = hi - lo;
            if (!(hi > lo))
                warn("column " + std::to_string(j) + " of " + ds.name +
                     " is constant; normalized to 0");
        }
    }
    Dataset out = ds;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto row = out.x.row(i);
        for (std::size_t j = 0; j < d; ++j)
            row[j] = norm.range[j] > 0.0 ? (row[j] - norm.offset[j]) / norm.range[j] : 0.0;
    }
    out.feature_range = {0.0, 1.0};
    out.normalization = std::move(norm);
    return out;
}

Matrix denormalize(const Dataset& ds, const Matrix& x) {
    if (!ds.normalization) return x;
    const auto& norm = *ds.normalization;
    if (x.cols() != norm.offset.size())
        throw ShapeError("denormalize: " + x.shape_string() + " for " +
                         std::to_string(norm.offset.size()) + " normalized columns");
    Matrix out = x;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = row[j] * norm.range[j] + norm.offset[j];
    }
    return out;
}

Dataset subsample(const Dataset& ds, std::size_t n_keep, std::uint64_t seed) {
    if (n_keep > ds.size())
        throw DataError("cannot keep " + std::to_string(n_keep) + " of " +
                        std::to_string(ds.size()) + " rows");
    Rng rng(seed);
    auto perm = rng.permutation(ds.size());
    perm.resize(n_keep);
    return ds.select(perm);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("split fraction must lie in [0,1]");
    Rng rng(seed);
    const auto perm = rng.permutation(ds.size());
    const auto cut = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ds.size())));
    return {ds.select({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cut)}),
            ds.select({perm.begin() + static_cast<std::ptrdiff_t>(cut), perm.end()})};
}

}  // namespace aefuse
