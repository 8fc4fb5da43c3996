#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "aefuse/network.hpp"

namespace aefuse {

/// AEFv1 text model format:
///
///   AEFv1
///   layers L
///   split k
///   tied 0|1
///   layer i in out activation      (repeated L times, each followed by)
///   <out lines of in numbers>      row-major W
///   <one line of out numbers>      b
///
/// Numbers are written with 17 significant digits so a load reproduces every
/// weight bit-exactly.
void write_model(std::ostream& out, const Network& net);
/// Throws ParseError (with line number) on malformed, truncated or non-finite
/// content, or when a tied decoder is not the transpose of its encoder.
Network read_model(std::istream& in, const std::string& source = "<stream>");

void save_model(const Network& net, const std::filesystem::path& path);
Network load_model(const std::filesystem::path& path);

}  // namespace aefuse
