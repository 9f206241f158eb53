#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace spinfridge::runner {

using Cell = std::variant<double, long long, std::string>;

/// "%.12g"; infinities as inf / -inf.
std::string format_number(double x);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t x);

/// "# spinfridge <version> manifest_fnv1a64=<hex> seed=<n>"
std::string provenance_header(std::uint64_t manifest_hash, std::uint64_t seed);

/// Single writer of one CSV file. Rows are written in call order.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header, std::vector<std::string> columns);

  void row(const std::vector<Cell>& cells);
  void close();
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t width_;
  std::ofstream out_;
};

}  // namespace spinfridge::runner
