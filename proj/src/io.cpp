#include "wavecb/io.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace wavecb {

namespace {
constexpr char kMagic[4] = {'W', 'C', 'B', '1'};
}

void write_field_binary(const std::string& path, const Grid3D& grid,
                        std::span<const double> values,
                        const FieldFileMeta& meta_in) {
  if (values.size() != grid.size())
    throw std::invalid_argument("write_field_binary: size mismatch");
  FieldFileMeta meta = meta_in;
  meta.n = static_cast<std::uint32_t>(grid.n);
  meta.box = grid.box;
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  std::fwrite(kMagic, 1, 4, f);
  const std::uint32_t version = 1;
  std::fwrite(&version, sizeof version, 1, f);
  std::fwrite(&meta.kind, sizeof meta.kind, 1, f);
  std::fwrite(&meta.n, sizeof meta.n, 1, f);
  std::fwrite(&meta.box, sizeof meta.box, 1, f);
  std::fwrite(&meta.seed, sizeof meta.seed, 1, f);
  std::fwrite(&meta.spec_hash, sizeof meta.spec_hash, 1, f);
  const std::size_t nw =
      std::fwrite(values.data(), sizeof(double), values.size(), f);
  std::fclose(f);
  if (nw != values.size())
    throw std::runtime_error("short write: " + path);
}

LoadedField read_field_binary(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  char magic[4];
  std::uint32_t version = 0;
  LoadedField out;
  bool ok = std::fread(magic, 1, 4, f) == 4 &&
            std::memcmp(magic, kMagic, 4) == 0 &&
            std::fread(&version, sizeof version, 1, f) == 1 && version == 1 &&
            std::fread(&out.meta.kind, sizeof out.meta.kind, 1, f) == 1 &&
            std::fread(&out.meta.n, sizeof out.meta.n, 1, f) == 1 &&
            std::fread(&out.meta.box, sizeof out.meta.box, 1, f) == 1 &&
            std::fread(&out.meta.seed, sizeof out.meta.seed, 1, f) == 1 &&
            std::fread(&out.meta.spec_hash, sizeof out.meta.spec_hash, 1, f) ==
                1;
  if (!ok) {
    std::fclose(f);
    throw std::runtime_error("bad field file header: " + path);
  }
  out.grid = Grid3D(static_cast<int>(out.meta.n), out.meta.box);
  out.values.resize(out.grid.size());
  const std::size_t nr =
      std::fread(out.values.data(), sizeof(double), out.values.size(), f);
  std::fclose(f);
  if (nr != out.values.size())
    throw std::runtime_error("truncated field file: " + path);
  return out;
}

CsvWriter::CsvWriter(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f_ = f;
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(static_cast<std::FILE*>(f_));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  std::FILE* f = static_cast<std::FILE*>(f_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string& c = cells[i];
    const bool quote = c.find_first_of(",\"\r\n") != std::string::npos;
    if (quote) {
      std::fputc('"', f);
      for (char ch : c) {
        if (ch == '"') std::fputc('"', f);
        std::fputc(ch, f);
      }
      std::fputc('"', f);
    } else {
      std::fwrite(c.data(), 1, c.size(), f);
    }
    if (i + 1 < cells.size()) std::fputc(',', f);
  }
  std::fwrite("\r\n", 1, 2, f);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvWriter::num(double v) { return format_g17(v); }

}  // namespace wavecb
