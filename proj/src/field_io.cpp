#include "dzm/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include "json.hpp"

namespace dzm {

namespace {

template <class T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  std::reverse(b, b + sizeof(T));
  std::memcpy(&v, b, sizeof(T));
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_le(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::string& path) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError(path + ": truncated DZM1 file");
  return to_le(v);
}

}  // namespace

void write_dzm1(const std::string& path, const Grid& grid, int ncomp, const cplx* data) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os.write("DZM1", 4);
  const auto n = static_cast<std::uint32_t>(grid.n());
  put(os, n);
  put(os, n);
  put(os, n);
  put(os, grid.half_width());
  put(os, static_cast<std::uint32_t>(ncomp));
  const std::size_t count = grid.size() * ncomp;
  for (std::size_t i = 0; i < count; ++i) {
    put(os, data[i].real());
    put(os, data[i].imag());
  }
  if (!os) throw IoError("write failed: " + path);
}

FieldFile read_dzm1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "DZM1", 4) != 0) throw IoError(path + ": bad magic, not a DZM1 file");
  const auto nx = get<std::uint32_t>(is, path);
  const auto ny = get<std::uint32_t>(is, path);
  const auto nz = get<std::uint32_t>(is, path);
  const auto L = get<double>(is, path);
  const auto ncomp = get<std::uint32_t>(is, path);
  if (nx != ny || ny != nz) throw IoError(path + ": only cubic grids are supported");
  if (ncomp != 1 && ncomp != 4 && ncomp != 16) throw IoError(path + ": ncomp must be 1, 4 or 16");
  FieldFile ff{Grid(static_cast<int>(nx), L), static_cast<int>(ncomp), {}};
  const std::size_t count = ff.grid.size() * ncomp;
  ff.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double re = get<double>(is, path);
    const double im = get<double>(is, path);
    ff.data[i] = {re, im};
  }
  return ff;
}

void write_field(const std::string& path, const SpinorField& f) {
  write_dzm1(path, f.grid, 4, reinterpret_cast<const cplx*>(f.values.data()));
}

void write_field(const std::string& path, const ScalarField& u) { write_dzm1(path, u.grid, 1, u.values.data()); }

void write_field(const std::string& path, const MatrixPotential& q) {
  static_assert(sizeof(Matrix4) == 16 * sizeof(cplx));
  write_dzm1(path, q.grid, 16, reinterpret_cast<const cplx*>(q.values.data()));
}

SpinorField read_spinor_field(const std::string& path) {
  FieldFile ff = read_dzm1(path);
  if (ff.ncomp != 4) throw IoError(path + ": expected a 4-component field");
  SpinorField f(ff.grid);
  std::memcpy(static_cast<void*>(f.values.data()), ff.data.data(), ff.data.size() * sizeof(cplx));
  return f;
}

ScalarField read_scalar_field(const std::string& path) {
  FieldFile ff = read_dzm1(path);
  if (ff.ncomp != 1) throw IoError(path + ": expected a scalar field");
  return ScalarField(ff.grid, std::move(ff.data));
}

MatrixPotential read_matrix_potential(const std::string& path, double rho, double c_q) {
  FieldFile ff = read_dzm1(path);
  if (ff.ncomp != 16) throw IoError(path + ": expected a 16-component matrix field");
  MatrixPotential q(ff.grid);
  std::memcpy(static_cast<void*>(q.values.data()), ff.data.data(), ff.data.size() * sizeof(cplx));
  q.rho = rho;
  q.c_q = c_q;
  return q;
}

std::string meta_path(const std::string& field_path) {
  std::filesystem::path p(field_path);
  p.replace_extension();
  return p.string() + ".meta.json";
}

void write_meta(const std::string& field_path, const FieldMeta& meta) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["rho"] = meta.rho ? nlohmann::ordered_json(*meta.rho) : nlohmann::ordered_json(nullptr);
  j["C"] = meta.c ? nlohmann::ordered_json(*meta.c) : nlohmann::ordered_json(nullptr);
  j["fixture"] = meta.fixture ? nlohmann::ordered_json(*meta.fixture) : nlohmann::ordered_json(nullptr);
  const std::string path = meta_path(field_path);
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
}

std::optional<FieldMeta> read_meta(const std::string& field_path) {
  const std::string path = meta_path(field_path);
  std::ifstream is(path);
  if (!is) return std::nullopt;
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  FieldMeta m;
  if (j.contains("rho") && j["rho"].is_number()) m.rho = j["rho"].get<double>();
  if (j.contains("C") && j["C"].is_number()) m.c = j["C"].get<double>();
  if (j.contains("fixture") && j["fixture"].is_string()) m.fixture = j["fixture"].get<std::string>();
  return m;
}

}  // namespace dzm
