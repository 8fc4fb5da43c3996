#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aefuse/matrix.hpp"

namespace aefuse::cli {

/// 8-bit grayscale raster.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<int> pixels;  // row-major, 0..255

    Image() = default;
    Image(std::size_t w, std::size_t h, int fill = 0) : width(w), height(h), pixels(w * h, fill) {}
    int& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
    int at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

/// Tile shape for a vector of length n: s×s when n = s², else a 1×n strip.
/// Returns (width, height).
std::pair<std::size_t, std::size_t> tile_shape(std::size_t n);

/// Three-row grid: originals, encodings, reconstructions, one column per
/// sample. `originals` and `reconstructions` hold values in [0, 1]; codes are
/// mapped from `code_range` to [0, 255], or from their observed extremes when
/// no range is given.
Image reconstruction_grid(const Matrix& originals, const Matrix& codes,
                          const Matrix& reconstructions,
                          std::optional<std::pair<double, double>> code_range);

/// Plain PGM (P2, maxval 255).
void write_pgm(std::ostream& out, const Image& image);

/// Scatter of 2-D points, one color per label, axes labeled V1 and V2.
void write_scatter_svg(std::ostream& out, const Matrix& points, const std::vector<int>& labels,
                       const std::string& title);

}  // namespace aefuse::cli
