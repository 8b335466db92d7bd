#pragma once

// Plain CSV/key=value writers. Numbers are written in shortest round-trip
// form, so files read back exactly and are byte-identical across runs.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "flatctl/errors.hpp"

namespace flatctl {

inline std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    row_strings(header);
  }

  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((write_cell(cells, first)), ...);
    out_ << '\n';
  }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  template <class T>
  void write_cell(const T& v, bool& first) {
    if (!first) out_ << ',';
    first = false;
    if constexpr (std::is_arithmetic_v<T>) {
      out_ << format_number(static_cast<double>(v));
    } else {
      out_ << v;
    }
  }

  std::ofstream out_;
};

/// Ordered key=value lines.
using Summary = std::vector<std::pair<std::string, std::string>>;

inline void write_summary(const std::filesystem::path& path, const Summary& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& [k, v] : s) out << k << '=' << v << '\n';
}

}  // namespace flatctl
