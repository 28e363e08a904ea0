#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "zkb/error.hpp"
#include "zkb/field.hpp"

namespace zkb {

namespace {

static_assert(std::endian::native == std::endian::little, "field dump assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error("truncated field dump");
  return v;
}

}  // namespace

void write_field(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  const Grid& g = f.grid();
  os.write("ZKB1", 4);
  put<std::int64_t>(os, g.Nx());
  put<std::int64_t>(os, g.Ny());
  put<double>(os, g.Lx());
  put<double>(os, g.Ly());
  os.write(reinterpret_cast<const char*>(f.data()), std::streamsize(g.size() * sizeof(double)));
  if (!os) throw Error("write failed: " + path);
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ZKB1", 4) != 0) throw Error(path + ": not a ZKB1 field dump");
  const auto nx = get<std::int64_t>(is);
  const auto ny = get<std::int64_t>(is);
  const auto Lx = get<double>(is);
  const auto Ly = get<double>(is);
  Grid g(Lx, Ly, int(nx), int(ny));
  Field f(g);
  is.read(reinterpret_cast<char*>(f.data()), std::streamsize(g.size() * sizeof(double)));
  if (!is) throw Error("truncated field dump: " + path);
  return f;
}

void write_field_csv(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  os << "x,y,value\n" << std::setprecision(17);
  for (int i = 0; i < g.Nx(); ++i)
    for (int j = 0; j < g.Ny(); ++j) os << g.x(i) << ',' << g.y(j) << ',' << f(i, j) << '\n';
}

}  // namespace zkb
