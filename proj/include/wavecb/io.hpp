#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wavecb/grid.hpp"

namespace wavecb {

/// Flat binary field dump: fixed little-endian header + n^3 doubles.
/// Used for reproducibility audits and measurement replay.
struct FieldFileMeta {
  std::uint32_t kind = 0;  // 0 medium, 1 pressure, 2.. velocity, 10 other
  std::uint32_t n = 0;
  double box = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t spec_hash = 0;
};

void write_field_binary(const std::string& path, const Grid3D& grid,
                        std::span<const double> values,
                        const FieldFileMeta& meta);

struct LoadedField {
  Grid3D grid;
  FieldFileMeta meta;
  std::vector<double> values;
};

LoadedField read_field_binary(const std::string& path);

/// RFC-4180 CSV writer with deterministic %.17g number formatting.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);

 private:
  void* f_ = nullptr;
};

std::string format_g17(double v);

}  // namespace wavecb
