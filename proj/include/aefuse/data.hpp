#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aefuse/matrix.hpp"

namespace aefuse {

/// Per-column affine map applied by `normalize`: x' = (x - offset) / range.
/// A zero range marks a constant column that was mapped to 0.
struct Normalization {
    std::vector<double> offset;
    std::vector<double> range;
};

struct Dataset {
    Matrix x;
    std::optional<std::vector<int>> labels;
    std::string name;
    /// Declared value range of the features: (0, 255) for IDX images,
    /// the observed range for CSV, (0, 1) after normalization.
    std::pair<double, double> feature_range{0.0, 0.0};
    std::optional<Normalization> normalization;

    std::size_t size() const noexcept { return x.rows(); }
    std::size_t dim() const noexcept { return x.cols(); }

    /// Rows at `indices`, labels and metadata carried along.
    Dataset select(const std::vector<std::size_t>& indices) const;
};

/// Parsed header of an IDX file.
struct IdxHeader {
    std::uint8_t type_code = 0;
    std::vector<std::uint32_t> dims;

    std::uint32_t magic() const noexcept {
        return (static_cast<std::uint32_t>(type_code) << 8) |
               static_cast<std::uint32_t>(dims.size());
    }
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Decodes a big-endian IDX header from the first bytes of a file.
/// Throws ParseError on a bad zero prefix, unknown type code or short input.
IdxHeader parse_idx_header(const std::vector<std::uint8_t>& bytes, const std::string& source);

/// Reads a whole file; paths ending in ".gz" are gunzipped.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

/// Writes an unsigned-byte IDX tensor (type code 0x08). ".gz" paths are gzipped.
void write_idx(const std::filesystem::path& path, const std::vector<std::uint32_t>& dims,
               const std::vector<std::uint8_t>& payload);

/// Loads an IDX image file (magic 0x00000803) and, optionally, its IDX label
/// file (magic 0x00000801). Images are flattened to rows of raw byte values.
Dataset load_idx(const std::filesystem::path& images,
                 const std::optional<std::filesystem::path>& labels = std::nullopt);

struct CsvOptions {
    bool has_header = true;
    /// Header name or zero-based column index of the class label.
    std::optional<std::string> label_column;
};

/// Loads a rectangular numeric CSV. Integer labels are kept; other label
/// values are numbered by first appearance.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

enum class NormalizeMode {
    /// (x - min) / (max - min) with the dataset's declared feature range;
    /// divides IDX images by 255.
    GlobalRange,
    /// (x - min_j) / (max_j - min_j) per column.
    PerColumn,
};

Dataset normalize(const Dataset& ds, NormalizeMode mode);
/// Inverse of the mapping recorded by `normalize`.
Matrix denormalize(const Dataset& ds, const Matrix& x);

/// n_keep rows drawn without replacement, in drawn order.
Dataset subsample(const Dataset& ds, std::size_t n_keep, std::uint64_t seed);

/// Shuffled split: the first part holds round(fraction·n) rows.
std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction, std::uint64_t seed);

}  // namespace aefuse
