#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dzm/field.hpp"

namespace dzm {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sidecar metadata written next to a field file as <name>.meta.json.
struct FieldMeta {
  std::optional<double> rho;
  std::optional<double> c;
  std::optional<std::string> fixture;
};

/// Raw contents of a DZM1 file.
struct FieldFile {
  Grid grid{8, 1.0};
  int ncomp = 0;
  std::vector<cplx> data;  // component-fastest within a point
};

void write_dzm1(const std::string& path, const Grid& grid, int ncomp, const cplx* data);
FieldFile read_dzm1(const std::string& path);

void write_field(const std::string& path, const SpinorField& f);
void write_field(const std::string& path, const ScalarField& u);
void write_field(const std::string& path, const MatrixPotential& q);

SpinorField read_spinor_field(const std::string& path);
ScalarField read_scalar_field(const std::string& path);
MatrixPotential read_matrix_potential(const std::string& path, double rho, double c_q);

std::string meta_path(const std::string& field_path);
void write_meta(const std::string& field_path, const FieldMeta& meta);
std::optional<FieldMeta> read_meta(const std::string& field_path);

}  // namespace dzm
