// Dense-matrix persistence in two interchangeable formats, both bit-exact
// round-trip:
//  - CSV: first line "rows,cols", then one comma-separated line per matrix
//    row, values formatted shortest-round-trip.
//  - Binary container: magic "MMX1", little-endian u64 rows, little-endian
//    u64 cols, then rows*cols IEEE-754 doubles row-major (little-endian).
// Writes dispatch on file extension (".csv" vs anything else -> binary);
// reads sniff the magic so either format loads regardless of name.
#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mmx/errors.hpp"
#include "mmx/linalg.hpp"
#include "mmx/trace.hpp"

namespace mmx {

namespace detail {

inline void append_le_u64(std::string& out, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

inline std::uint64_t read_le_u64(const unsigned char* p) {
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) {
    value |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return value;
}

inline void append_le_f64(std::string& out, double value) {
  append_le_u64(out, std::bit_cast<std::uint64_t>(value));
}

inline double read_le_f64(const unsigned char* p) {
  return std::bit_cast<double>(read_le_u64(p));
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading file: " + path);
  return buffer.str();
}

inline void write_file_bytes(const std::string& path,
                             const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing file: " + path);
}

inline double parse_double_field(const std::string& field,
                                 const std::string& path) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw IoError("invalid numeric field '" + field + "' in " + path);
  }
  return value;
}

}  // namespace detail

inline std::string render_matrix_binary(const Matrix& matrix) {
  std::string bytes;
  bytes.reserve(20 + static_cast<std::size_t>(matrix.size()) * 8);
  bytes += "MMX1";
  detail::append_le_u64(bytes, static_cast<std::uint64_t>(matrix.rows()));
  detail::append_le_u64(bytes, static_cast<std::uint64_t>(matrix.cols()));
  for (Index i = 0; i < matrix.rows(); ++i) {
    for (Index j = 0; j < matrix.cols(); ++j) {
      detail::append_le_f64(bytes, matrix(i, j));
    }
  }
  return bytes;
}

inline Matrix parse_matrix_binary(const std::string& bytes,
                                  const std::string& path) {
  if (bytes.size() < 20 || bytes.compare(0, 4, "MMX1") != 0) {
    throw IoError("not a valid matrix container (bad magic): " + path);
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  std::uint64_t rows = detail::read_le_u64(p + 4);
  std::uint64_t cols = detail::read_le_u64(p + 12);
  std::uint64_t count = rows * cols;
  if (rows != 0 && count / rows != cols) {
    throw IoError("matrix dimensions overflow in " + path);
  }
  if (bytes.size() != 20 + count * 8) {
    throw IoError("matrix container payload size mismatch in " + path);
  }
  Matrix matrix(static_cast<Index>(rows), static_cast<Index>(cols));
  std::size_t offset = 20;
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      matrix(static_cast<Index>(i), static_cast<Index>(j)) =
          detail::read_le_f64(p + offset);
      offset += 8;
    }
  }
  return matrix;
}

inline std::string render_matrix_csv(const Matrix& matrix) {
  std::string text = detail::format_long(static_cast<long>(matrix.rows()));
  text += ',';
  text += detail::format_long(static_cast<long>(matrix.cols()));
  text += '\n';
  for (Index i = 0; i < matrix.rows(); ++i) {
    for (Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) text += ',';
      text += detail::format_double(matrix(i, j));
    }
    text += '\n';
  }
  return text;
}

inline Matrix parse_matrix_csv(const std::string& text,
                               const std::string& path) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError("empty matrix file: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto comma = line.find(',');
  if (comma == std::string::npos) {
    throw IoError("matrix header must be 'rows,cols' in " + path);
  }
  long rows = 0;
  long cols = 0;
  try {
    rows = std::stol(line.substr(0, comma));
    cols = std::stol(line.substr(comma + 1));
  } catch (const std::exception&) {
    throw IoError("matrix header must be 'rows,cols' in " + path);
  }
  if (rows < 0 || cols < 0) {
    throw IoError("matrix dimensions must be nonnegative in " + path);
  }
  Matrix matrix(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw IoError("matrix file truncated at row " + std::to_string(i) +
                    " in " + path);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = 0;
    for (long j = 0; j < cols; ++j) {
      std::size_t stop = line.find(',', start);
      std::string field = (stop == std::string::npos)
                              ? line.substr(start)
                              : line.substr(start, stop - start);
      if (j + 1 < cols && stop == std::string::npos) {
        throw IoError("matrix row " + std::to_string(i) +
                      " has too few columns in " + path);
      }
      matrix(i, j) = detail::parse_double_field(field, path);
      start = (stop == std::string::npos) ? line.size() : stop + 1;
    }
    if (start < line.size()) {
      throw IoError("matrix row " + std::to_string(i) +
                    " has too many columns in " + path);
    }
  }
  return matrix;
}

// Extension dispatch: ".csv" writes text, anything else the binary container.
inline void write_matrix(const std::string& path, const Matrix& matrix) {
  if (detail::has_suffix(path, ".csv")) {
    detail::write_file_bytes(path, render_matrix_csv(matrix));
  } else {
    detail::write_file_bytes(path, render_matrix_binary(matrix));
  }
}

// Reads either format, recognized by the leading magic bytes. Anything that
// starts with "MMX" is treated as a (possibly malformed) binary container so
// that a wrong version byte reports a magic error instead of a CSV one.
inline Matrix read_matrix(const std::string& path) {
  std::string bytes = detail::read_file_bytes(path);
  if (bytes.size() >= 3 && bytes.compare(0, 3, "MMX") == 0) {
    return parse_matrix_binary(bytes, path);
  }
  return parse_matrix_csv(bytes, path);
}

}  // namespace mmx
