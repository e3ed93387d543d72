#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wrfrft/radar.hpp"
#include "wrfrft/wrfrft.hpp"

namespace wrfrft {

// Echo file: ASCII header
//   WRFRFT-ECHO 1
//   key=value            (dtype, cells, pulses, radar fields)
//   end_header
// followed by little-endian complex samples, pulse-major.
enum class EchoDtype { complex64, complex128 };
const char* to_string(EchoDtype d);
std::size_t element_bytes(EchoDtype d);

void save_echo_file(const EchoMatrix& echo, const std::string& path, EchoDtype dtype = EchoDtype::complex64);
/// Throws MalformedHeaderError, TruncatedPayloadError (also for trailing bytes)
/// or DtypeMismatchError (unknown dtype, or not the `expected` one).
EchoMatrix load_echo_file(const std::string& path, std::optional<EchoDtype> expected = std::nullopt);

// Real matrix file for slices and maps: same header style with magic
// WRFRFT-MATRIX 1, float64 row-major payload.
struct MatrixFile {
  std::string name;
  std::string row_axis;
  std::string col_axis;
  double row_min = 0.0, row_step = 1.0;
  double col_min = 0.0, col_step = 1.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
};
MatrixFile matrix_from_slice(const Slice& s, const SearchGrid& grid);
void save_matrix_file(const MatrixFile& m, const std::string& path);
MatrixFile load_matrix_file(const std::string& path);

}  // namespace wrfrft
