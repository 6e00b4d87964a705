// Trace serialization: writes solver trace rows as RFC-4180 CSV with
// shortest-round-trip floating-point formatting, so a rerun with the same
// configuration produces a byte-identical file.
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "mmx/errors.hpp"
#include "mmx/solver.hpp"

namespace mmx {

namespace detail {

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  if (result.ec != std::errc()) {
    throw IoError("failed to format floating-point value");
  }
  return std::string(buf, result.ptr);
}

inline std::string format_long(long value) {
  char buf[32];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  if (result.ec != std::errc()) {
    throw IoError("failed to format integer value");
  }
  return std::string(buf, result.ptr);
}

}  // namespace detail

// Renders rows to CSV text. Optional columns (duality_gap, gap_y_cert) are
// included exactly when present in the rows; presence must be uniform.
inline std::string render_trace_csv(const std::vector<TraceRow>& rows) {
  bool with_duality = !rows.empty() && rows.front().duality_gap.has_value();
  bool with_cert = !rows.empty() && rows.front().gap_y_cert.has_value();
  for (const TraceRow& row : rows) {
    if (row.duality_gap.has_value() != with_duality ||
        row.gap_y_cert.has_value() != with_cert) {
      throw IoError("trace rows disagree on optional columns");
    }
  }
  std::string text =
      "iter,wall_ms,tau,beta,gamma,objective,gap_x,gap_y,avg_gap_x,avg_gap_y";
  if (with_duality) text += ",duality_gap";
  if (with_cert) text += ",gap_y_cert";
  text += '\n';
  for (const TraceRow& row : rows) {
    text += detail::format_long(row.iter);
    text += ',';
    text += detail::format_double(row.wall_ms);
    text += ',';
    text += detail::format_double(row.tau);
    text += ',';
    text += detail::format_double(row.beta);
    text += ',';
    text += detail::format_double(row.gamma);
    text += ',';
    text += detail::format_double(row.objective);
    text += ',';
    text += detail::format_double(row.gap_x);
    text += ',';
    text += detail::format_double(row.gap_y);
    text += ',';
    text += detail::format_double(row.avg_gap_x);
    text += ',';
    text += detail::format_double(row.avg_gap_y);
    if (with_duality) {
      text += ',';
      text += detail::format_double(*row.duality_gap);
    }
    if (with_cert) {
      text += ',';
      text += detail::format_double(*row.gap_y_cert);
    }
    text += '\n';
  }
  return text;
}

inline void write_trace_csv(const std::string& path,
                            const std::vector<TraceRow>& rows) {
  std::string text = render_trace_csv(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open trace file for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing trace file: " + path);
}

}  // namespace mmx
