#include "spinfridge/runner/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "spinfridge/runner/manifest.hpp"

namespace spinfridge::runner {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string hex64(std::uint64_t x) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(x));
  return hex;
}

std::string provenance_header(std::uint64_t manifest_hash, std::uint64_t seed) {
  return std::string("# spinfridge ") + kToolVersion + " manifest_fnv1a64=" + hex64(manifest_hash) +
         " seed=" + std::to_string(seed);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& header, std::vector<std::string> columns)
    : path_(path), width_(columns.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << header << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != width_) throw std::logic_error("csv row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_number(v);
          } else if constexpr (std::is_same_v<T, long long>) {
            out_ << v;
          } else {
            out_ << v;
          }
        },
        cells[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw std::runtime_error("error writing " + path_.string());
}

}  // namespace spinfridge::runner
