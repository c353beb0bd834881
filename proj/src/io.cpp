#include "wavesrc/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace wavesrc::io {

namespace {

constexpr char kMagic[8] = {'W', 'S', 'R', 'C', 'F', 'L', 'D', '1'};

struct Header {
  char magic[8];
  std::uint32_t d;
  std::uint32_t n;
  double length;
  std::uint32_t ncomp;
  std::uint32_t reserved;
  double order_m;
  double delta;
  std::uint64_t seed;
  std::uint64_t count;
};
static_assert(sizeof(Header) == 64);

} // namespace

void save_field(const std::string& path, const gmig::FieldRealization& field) {
  const std::size_t count = field.grid.node_count() * field.ncomp;
  if (field.values.size() != count)
    throw ConfigError("save_field: value count does not match grid/ncomp");

  Header hdr{};
  std::memcpy(hdr.magic, kMagic, 8);
  hdr.d = static_cast<std::uint32_t>(field.grid.d);
  hdr.n = static_cast<std::uint32_t>(field.grid.n);
  hdr.length = field.grid.length;
  hdr.ncomp = static_cast<std::uint32_t>(field.ncomp);
  hdr.order_m = field.order_m;
  hdr.delta = field.delta;
  hdr.seed = field.seed;
  hdr.count = count;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NumericalError("save_field: cannot open " + path);
  out.write(reinterpret_cast<const char*>(&hdr), sizeof(hdr));
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(count * sizeof(cdouble)));
  if (!out) throw NumericalError("save_field: write failed for " + path);
}

gmig::FieldRealization load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NumericalError("load_field: cannot open " + path);

  Header hdr{};
  in.read(reinterpret_cast<char*>(&hdr), sizeof(hdr));
  if (!in || std::memcmp(hdr.magic, kMagic, 8) != 0)
    throw NumericalError("load_field: not a field container: " + path);

  gmig::FieldRealization field;
  field.grid = Grid(static_cast<int>(hdr.d), static_cast<int>(hdr.n), hdr.length);
  field.ncomp = static_cast<int>(hdr.ncomp);
  field.order_m = hdr.order_m;
  field.delta = hdr.delta;
  field.seed = hdr.seed;
  if (field.ncomp < 1 || field.ncomp > 3 ||
      hdr.count != field.grid.node_count() * hdr.ncomp)
    throw NumericalError("load_field: inconsistent header in " + path);

  field.values.resize(hdr.count);
  in.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(hdr.count * sizeof(cdouble)));
  if (!in) throw NumericalError("load_field: truncated payload in " + path);
  return field;
}

void export_field_csv(const std::string& path, const gmig::FieldRealization& field) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw NumericalError("export_field_csv: cannot open " + path);

  const int d = field.grid.d;
  std::fputs(d == 2 ? "x0,x1" : "x0,x1,x2", out);
  for (int c = 0; c < field.ncomp; ++c) std::fprintf(out, ",re_%d,im_%d", c, c);
  std::fputc('\n', out);

  const std::size_t nn = field.grid.node_count();
  for (std::size_t i = 0; i < nn; ++i) {
    const Point p = field.grid.node(i);
    std::fprintf(out, "%.17g,%.17g", p[0], p[1]);
    if (d == 3) std::fprintf(out, ",%.17g", p[2]);
    for (int c = 0; c < field.ncomp; ++c) {
      const cdouble v = field.values[i * field.ncomp + c];
      std::fprintf(out, ",%.17g,%.17g", v.real(), v.imag());
    }
    std::fputc('\n', out);
  }
  if (std::fclose(out) != 0)
    throw NumericalError("export_field_csv: write failed for " + path);
}

} // namespace wavesrc::io
