#include "gb2d/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace gb2d {

static_assert(std::endian::native == std::endian::little,
              "state container is little-endian; byte swapping is not implemented");

namespace {

constexpr char kMagic[8] = {'G', 'B', '2', 'D', 'S', 'T', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_raw(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void save_state(const DensityState& state, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("save_state: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  write_raw(os, kVersion);
  write_raw(os, std::uint32_t{0});
  write_raw(os, static_cast<std::uint64_t>(state.grid().n1()));
  write_raw(os, static_cast<std::uint64_t>(state.grid().n2()));
  write_raw(os, state.slope_L);
  write_raw(os, state.epsilon);
  write_raw(os, state.time);
  const auto& p = state.rho_plus_per.values();
  const auto& m = state.rho_minus_per.values();
  os.write(reinterpret_cast<const char*>(p.data()), p.size() * sizeof(double));
  os.write(reinterpret_cast<const char*>(m.data()), m.size() * sizeof(double));
  if (!os) throw std::runtime_error("save_state: write failed for " + path);

  nlohmann::json meta{{"format", "gb2d-state"},
                      {"version", kVersion},
                      {"n1", state.grid().n1()},
                      {"n2", state.grid().n2()},
                      {"slope_L", state.slope_L},
                      {"epsilon", state.epsilon},
                      {"time", state.time}};
  std::ofstream js(path + ".json", std::ios::trunc);
  js << meta.dump(2) << "\n";
}

DensityState load_state(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_state: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_state: bad magic in " + path);
  std::uint32_t version = 0, reserved = 0;
  read_raw(is, version);
  read_raw(is, reserved);
  if (version != kVersion)
    throw std::runtime_error("load_state: unsupported version " + std::to_string(version));
  std::uint64_t n1 = 0, n2 = 0;
  read_raw(is, n1);
  read_raw(is, n2);
  double slope_L = 0, epsilon = 0, time = 0;
  read_raw(is, slope_L);
  read_raw(is, epsilon);
  read_raw(is, time);
  TorusGrid grid(static_cast<int>(n1), static_cast<int>(n2));
  std::vector<double> p(grid.size()), m(grid.size());
  is.read(reinterpret_cast<char*>(p.data()), p.size() * sizeof(double));
  is.read(reinterpret_cast<char*>(m.data()), m.size() * sizeof(double));
  if (!is) throw std::runtime_error("load_state: truncated file " + path);
  return DensityState(RealField(grid, std::move(p)), RealField(grid, std::move(m)), slope_L,
                      epsilon, time);
}

}  // namespace gb2d
