#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dzm::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitGate = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

using Json = nlohmann::ordered_json;

struct VerifyOptions {
  std::string fixture = "loss-yau";
  std::string field;      // DZM1 spinor field instead of a fixture
  std::string potential;  // DZM1 matrix potential paired with `field`
  int grid = 64;
  double box = 16.0;
  std::vector<double> w{0.0, 0.0, 1.0};
  std::string embedding = "both";
  std::string ladder;  // "L:n,L:n,..."; empty = (L/2, n/2), (3L/4, 3n/4), (L, n)
  double residual_factor = 2.0;
  double exponent_target = -2.0;
  double exponent_tol = 0.15;
  double sup_drift = 0.05;
  std::string out;
  std::string export_dir;
};

struct LapScanOptions {
  double lambda = 1.0;
  double s = 1.5;
  double sprime = 1.5;
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
  std::string rim = "plus";
  std::string scheme = "gl";
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240917;
  double delta = 1e-3;
  double radius = 1e6;
  std::string out;
};

struct EkkuOptions {
  std::vector<double> gamma{2.0, 3.0, 4.0};
  std::string points = "1,2,5,10,20,50";  // |x| values or "origin"
  double delta = 1e-3;
  double radius = 1e6;
  std::string out;
};

struct BsOptionsCli {
  std::string fixture = "loss-yau";
  std::string potential;
  int grid = 64;
  double box = 16.0;
  std::vector<double> w{0.0, 0.0, 1.0};
  int k = 3;
  int budget = 500;
  double tol = 1e-8;
  std::uint64_t seed = 7;
  std::string out;
};

struct BootstrapOptions {
  double rho = 2.0;
  std::string out;
};

struct KernelEvalOptions {
  std::string kind = "r0";
  std::vector<double> z{0.0, 1.0};  // re, im (interior) or lambda on a rim
  std::string rim = "interior";
  std::vector<double> x{0.0, 0.0, 0.0};
  std::vector<double> y{1.0, 0.0, 0.0};
  std::string out;
};

// Each builds the full report/table and returns its exit code; `text` receives
// the serialized output (JSON or CSV) exactly as written to disk.
int verify_zero_mode(const VerifyOptions& o, std::string& text);
int lap_scan(const LapScanOptions& o, std::string& text);
int ekku_table(const EkkuOptions& o, std::string& text);
int bs_spectrum(const BsOptionsCli& o, std::string& text);
int bootstrap(const BootstrapOptions& o, std::string& text);
int kernel_eval(const KernelEvalOptions& o, std::string& text);

/// Full command-line entry point (parsing, config file, exit-code mapping).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dzm::cli
