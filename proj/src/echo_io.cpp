#include "wrfrft/echo_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "wrfrft/errors.hpp"

namespace wrfrft {

namespace {

constexpr const char* kEchoMagic = "WRFRFT-ECHO 1";
constexpr const char* kMatrixMagic = "WRFRFT-MATRIX 1";
constexpr const char* kEndHeader = "end_header";

template <typename T>
void to_little(T& v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

using Header = std::map<std::string, std::string>;

// Reads the header and leaves `in` at the first payload byte.
Header read_header(std::ifstream& in, const std::string& path, const char* magic) {
  std::string line;
  if (!std::getline(in, line) || line != magic)
    throw MalformedHeaderError(path + ": missing '" + magic + "' magic line");
  Header h;
  for (int guard = 0; guard < 256; ++guard) {
    if (!std::getline(in, line)) throw MalformedHeaderError(path + ": header ended before '" + kEndHeader + "'");
    if (line == kEndHeader) return h;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) throw MalformedHeaderError(path + ": bad header line '" + line + "'");
    if (!h.emplace(line.substr(0, eq), line.substr(eq + 1)).second)
      throw MalformedHeaderError(path + ": duplicate key '" + line.substr(0, eq) + "'");
  }
  throw MalformedHeaderError(path + ": header too long");
}

const std::string& field(const Header& h, const std::string& key, const std::string& path) {
  const auto it = h.find(key);
  if (it == h.end()) throw MalformedHeaderError(path + ": header lacks '" + key + "'");
  return it->second;
}

double number(const Header& h, const std::string& key, const std::string& path) {
  const std::string& s = field(h, key, path);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw MalformedHeaderError(path + ": '" + key + "' is not a number: " + s);
  return v;
}

std::size_t count(const Header& h, const std::string& key, const std::string& path) {
  const std::string& s = field(h, key, path);
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v == 0)
    throw MalformedHeaderError(path + ": '" + key + "' must be a positive integer: " + s);
  return v;
}

// Payload bytes left after the header, checked against the expected size.
void check_payload(std::ifstream& in, const std::string& path, std::uintmax_t expected) {
  const auto here = static_cast<std::uintmax_t>(in.tellg());
  const auto total = std::filesystem::file_size(path);
  const auto actual = total - here;
  if (actual != expected) {
    std::ostringstream msg;
    msg << path << ": payload holds " << actual << " bytes, expected " << expected;
    throw TruncatedPayloadError(msg.str(), static_cast<long long>(expected), static_cast<long long>(actual));
  }
}

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

}  // namespace

const char* to_string(EchoDtype d) { return d == EchoDtype::complex64 ? "complex64" : "complex128"; }

std::size_t element_bytes(EchoDtype d) { return d == EchoDtype::complex64 ? 8 : 16; }

void save_echo_file(const EchoMatrix& echo, const std::string& path, EchoDtype dtype) {
  const RadarParams& r = echo.radar();
  std::ofstream out = open_out(path);
  out << kEchoMagic << '\n'
      << "dtype=" << to_string(dtype) << '\n'
      << "cells=" << echo.num_cells() << '\n'
      << "pulses=" << echo.num_pulses() << '\n'
      << "carrier_hz=" << fmt(r.carrier_hz) << '\n'
      << "bandwidth_hz=" << fmt(r.bandwidth_hz) << '\n'
      << "sample_rate_hz=" << fmt(r.sample_rate_hz) << '\n'
      << "prf_hz=" << fmt(r.prf_hz) << '\n'
      << "pulse_width_s=" << fmt(r.pulse_width_s) << '\n'
      << "t0_s=" << fmt(r.t0_s) << '\n'
      << "t1_s=" << fmt(r.t1_s) << '\n'
      << kEndHeader << '\n';
  const auto data = echo.data();
  if (dtype == EchoDtype::complex64) {
    std::vector<float> buf(2 * data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      buf[2 * i] = static_cast<float>(data[i].real());
      buf[2 * i + 1] = static_cast<float>(data[i].imag());
      to_little(buf[2 * i]);
      to_little(buf[2 * i + 1]);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  } else {
    std::vector<double> buf(2 * data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      buf[2 * i] = data[i].real();
      buf[2 * i + 1] = data[i].imag();
      to_little(buf[2 * i]);
      to_little(buf[2 * i + 1]);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failed for " + path);
}

EchoMatrix load_echo_file(const std::string& path, std::optional<EchoDtype> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const Header h = read_header(in, path, kEchoMagic);

  const std::string& dt = field(h, "dtype", path);
  EchoDtype dtype;
  if (dt == "complex64") dtype = EchoDtype::complex64;
  else if (dt == "complex128") dtype = EchoDtype::complex128;
  else throw DtypeMismatchError(path + ": unsupported dtype '" + dt + "' (complex64 or complex128)");
  if (expected && *expected != dtype)
    throw DtypeMismatchError(path + ": dtype is " + dt + ", expected " + to_string(*expected));

  RadarParams r;
  r.carrier_hz = number(h, "carrier_hz", path);
  r.bandwidth_hz = number(h, "bandwidth_hz", path);
  r.sample_rate_hz = number(h, "sample_rate_hz", path);
  r.prf_hz = number(h, "prf_hz", path);
  r.pulse_width_s = number(h, "pulse_width_s", path);
  r.t0_s = number(h, "t0_s", path);
  r.t1_s = number(h, "t1_s", path);
  const std::size_t cells = count(h, "cells", path);
  const std::size_t pulses = count(h, "pulses", path);
  r.num_cells = cells;
  try {
    r.validate();
  } catch (const ValidationError& e) {
    throw MalformedHeaderError(path + ": " + e.what());
  }

  const std::uintmax_t n = static_cast<std::uintmax_t>(cells) * pulses;
  check_payload(in, path, n * element_bytes(dtype));
  EchoMatrix echo(r, cells, pulses);
  auto data = echo.data();
  if (dtype == EchoDtype::complex64) {
    std::vector<float> buf(2 * n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    for (std::size_t i = 0; i < n; ++i) {
      to_little(buf[2 * i]);
      to_little(buf[2 * i + 1]);
      data[i] = {buf[2 * i], buf[2 * i + 1]};
    }
  } else {
    std::vector<double> buf(2 * n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
    for (std::size_t i = 0; i < n; ++i) {
      to_little(buf[2 * i]);
      to_little(buf[2 * i + 1]);
      data[i] = {buf[2 * i], buf[2 * i + 1]};
    }
  }
  if (!in) throw IoError("read failed for " + path);
  return echo;
}

MatrixFile matrix_from_slice(const Slice& s, const SearchGrid& grid) {
  const GridAxis& ax = grid[s.spec.x];
  const GridAxis& ay = grid[s.spec.y];
  MatrixFile m;
  m.name = s.spec.name;
  m.row_axis = kAxisNames[static_cast<int>(s.spec.y)];
  m.col_axis = kAxisNames[static_cast<int>(s.spec.x)];
  m.row_min = ay.min;
  m.row_step = ay.step;
  m.col_min = ax.min;
  m.col_step = ax.step;
  m.rows = s.rows;
  m.cols = s.cols;
  m.values = s.amplitude;
  return m;
}

void save_matrix_file(const MatrixFile& m, const std::string& path) {
  if (m.values.size() != m.rows * m.cols) throw ValidationError("matrix size does not match rows x cols");
  std::ofstream out = open_out(path);
  out << kMatrixMagic << '\n'
      << "dtype=float64\n"
      << "name=" << m.name << '\n'
      << "rows=" << m.rows << '\n'
      << "cols=" << m.cols << '\n'
      << "row_axis=" << m.row_axis << '\n'
      << "row_min=" << fmt(m.row_min) << '\n'
      << "row_step=" << fmt(m.row_step) << '\n'
      << "col_axis=" << m.col_axis << '\n'
      << "col_min=" << fmt(m.col_min) << '\n'
      << "col_step=" << fmt(m.col_step) << '\n'
      << kEndHeader << '\n';
  std::vector<double> buf = m.values;
  for (auto& v : buf) to_little(v);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!out) throw IoError("write failed for " + path);
}

MatrixFile load_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const Header h = read_header(in, path, kMatrixMagic);
  if (field(h, "dtype", path) != "float64")
    throw DtypeMismatchError(path + ": matrix dtype must be float64, got " + field(h, "dtype", path));
  MatrixFile m;
  m.name = field(h, "name", path);
  m.rows = count(h, "rows", path);
  m.cols = count(h, "cols", path);
  m.row_axis = field(h, "row_axis", path);
  m.col_axis = field(h, "col_axis", path);
  m.row_min = number(h, "row_min", path);
  m.row_step = number(h, "row_step", path);
  m.col_min = number(h, "col_min", path);
  m.col_step = number(h, "col_step", path);
  check_payload(in, path, static_cast<std::uintmax_t>(m.rows) * m.cols * sizeof(double));
  m.values.resize(m.rows * m.cols);
  in.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(m.values.size() * sizeof(double)));
  for (auto& v : m.values) to_little(v);
  if (!in) throw IoError("read failed for " + path);
  return m;
}

}  // namespace wrfrft
