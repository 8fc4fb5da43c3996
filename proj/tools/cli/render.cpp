#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include "aefuse/error.hpp"

namespace aefuse::cli {

namespace {

constexpr std::size_t kGap = 2;
constexpr int kGapValue = 64;

int to_pixel(double v) {
    if (!std::isfinite(v)) return 0;
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Draws `values` as a w×h tile scaled by `zoom` with its top-left at (x0, y0).
void blit(Image& img, std::span<const double> values, std::size_t w, std::size_t h,
          std::size_t zoom, std::size_t x0, std::size_t y0, double lo, double hi) {
    const double span = hi - lo;
    for (std::size_t ty = 0; ty < h; ++ty)
        for (std::size_t tx = 0; tx < w; ++tx) {
            const double v = values[ty * w + tx];
            const int p = span > 0.0 ? to_pixel((v - lo) / span) : 0;
            for (std::size_t dy = 0; dy < zoom; ++dy)
                for (std::size_t dx = 0; dx < zoom; ++dx)
                    img.at(x0 + tx * zoom + dx, y0 + ty * zoom + dy) = p;
        }
}

}  // namespace

std::pair<std::size_t, std::size_t> tile_shape(std::size_t n) {
    const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (s * s == n) return {s, s};
    return {n, 1};
}

Image reconstruction_grid(const Matrix& originals, const Matrix& codes,
                          const Matrix& reconstructions,
                          std::optional<std::pair<double, double>> code_range) {
    require_same_shape(originals, reconstructions, "reconstruction_grid");
    if (codes.rows() != originals.rows())
        throw ShapeError("reconstruction_grid: " + std::to_string(codes.rows()) + " codes for " +
                         std::to_string(originals.rows()) + " samples");
    const std::size_t n = originals.rows();
    if (n == 0) throw DataError("reconstruction_grid: no samples");
    const auto [iw, ih] = tile_shape(originals.cols());
    const auto [cw, ch] = tile_shape(codes.cols());
    const std::size_t zoom = std::max<std::size_t>(1, iw / cw);
    const std::size_t cell = std::max(iw, cw * zoom);

    double lo = 0.0, hi = 1.0;
    if (code_range) {
        std::tie(lo, hi) = *code_range;
    } else if (codes.size() > 0) {
        const auto [mn, mx] = std::minmax_element(codes.data().begin(), codes.data().end());
        lo = *mn;
        hi = *mx;
    }

    const std::size_t width = n * cell + (n + 1) * kGap;
    const std::size_t height = 2 * ih + ch * zoom + 4 * kGap;
    Image img(width, height, kGapValue);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t x0 = kGap + i * (cell + kGap);
        blit(img, originals.row(i), iw, ih, 1, x0, kGap, 0.0, 1.0);
        blit(img, codes.row(i), cw, ch, zoom, x0, 2 * kGap + ih, lo, hi);
        blit(img, reconstructions.row(i), iw, ih, 1, x0, 3 * kGap + ih + ch * zoom, 0.0, 1.0);
    }
    return img;
}

void write_pgm(std::ostream& out, const Image& image) {
    out << "P2\n" << image.width << ' ' << image.height << "\n255\n";
    for (std::size_t y = 0; y < image.height; ++y) {
        for (std::size_t x = 0; x < image.width; ++x) {
            if (x) out << ' ';
            out << image.at(x, y);
        }
        out << '\n';
    }
}

void write_scatter_svg(std::ostream& out, const Matrix& points, const std::vector<int>& labels,
                       const std::string& title) {
    if (points.cols() != 2) throw ShapeError("scatter needs 2-D points, got " + points.shape_string());
    if (points.rows() == 0) throw DataError("scatter: no points to plot");
    if (labels.size() != points.rows())
        throw ShapeError("scatter: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(points.rows()) + " points");
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                     "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    constexpr double size = 480, margin = 50, plot = size - 2 * margin;

    double lo[2], hi[2];
    for (std::size_t c = 0; c < 2; ++c) {
        lo[c] = hi[c] = points(0, c);
        for (std::size_t r = 1; r < points.rows(); ++r) {
            lo[c] = std::min(lo[c], points(r, c));
            hi[c] = std::max(hi[c], points(r, c));
        }
        if (hi[c] == lo[c]) {
            lo[c] -= 0.5;
            hi[c] += 0.5;
        }
    }
    auto px = [&](double v) { return margin + (v - lo[0]) / (hi[0] - lo[0]) * plot; };
    auto py = [&](double v) { return size - margin - (v - lo[1]) / (hi[1] - lo[1]) * plot; };

    std::map<int, std::size_t> color;
    for (int l : labels) color.emplace(l, color.size());

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size
        << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << size / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << size - margin << "\" x2=\"" << size - margin
        << "\" y2=\"" << size - margin << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << size - margin << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << size / 2 << "\" y=\"" << size - 15
        << "\" text-anchor=\"middle\" font-size=\"12\">V1</text>\n"
        << "<text x=\"15\" y=\"" << size / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
        << "transform=\"rotate(-90 15 " << size / 2 << ")\">V2</text>\n";
    for (std::size_t r = 0; r < points.rows(); ++r)
        out << "<circle cx=\"" << px(points(r, 0)) << "\" cy=\"" << py(points(r, 1))
            << "\" r=\"3\" fill=\"" << kPalette[color[labels[r]] % std::size(kPalette)]
            << "\" fill-opacity=\"0.7\" class=\"label-" << labels[r] << "\"/>\n";
    double ly = margin;
    for (const auto& [label, idx] : color) {
        out << "<circle cx=\"" << size - margin + 10 << "\" cy=\"" << ly << "\" r=\"4\" fill=\""
            << kPalette[idx % std::size(kPalette)] << "\"/>\n"
            << "<text x=\"" << size - margin + 18 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\">" << label << "</text>\n";
        ly += 16;
    }
    out << "</svg>\n";
}

}  // namespace aefuse::cli
