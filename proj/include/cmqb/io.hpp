#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmqb/density.hpp"

namespace cmqb {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// CSV with a units comment line, a header row, and %.12g data cells.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& columns) {
    os_ << "# units: a.u.\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      os_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    n_cols_ = columns.size();
  }

  void row(const std::vector<double>& values) {
    if (values.size() != n_cols_)
      throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
      os_ << fmt(values[i]) << (i + 1 < values.size() ? "," : "\n");
  }

  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  std::size_t n_cols_ = 0;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_file: cannot open " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write_file: write failed " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_file: cannot open " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// FNV-1a 64-bit content hash, hex-encoded; used to key cached artifacts.
inline std::string content_hash(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// density_*.csv layout: r (empty column for nuclear-only), R, rho.
inline std::string density_csv(const DensityGrid& d) {
  if (!d.is_joint()) {
    CsvWriter w({"R", "rho"});
    for (int m = 0; m < d.R_points.size(); ++m)
      w.row({d.R_points(m), d.values(0, m)});
    return w.str();
  }
  CsvWriter w({"r", "R", "rho"});
  for (int m = 0; m < d.R_points.size(); ++m)
    for (int i = 0; i < d.r_points.size(); ++i)
      w.row({d.r_points(i), d.R_points(m), d.values(i, m)});
  return w.str();
}

}  // namespace cmqb
