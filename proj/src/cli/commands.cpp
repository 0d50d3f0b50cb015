#include "dzm/cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dzm/field_io.hpp"
#include "dzm/kernels.hpp"
#include "dzm/norms.hpp"
#include "dzm/version.hpp"
#include "dzm/zeromode.hpp"

namespace dzm::cli {

namespace {

namespace fs = std::filesystem;

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) throw IoError("output directory does not exist: " + parent.string());
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

std::string num(double v, const char* fmt = "%.12e") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

Json header(const char* command) {
  Json j;
  j["tool"] = "dzm";
  j["version"] = version();
  j["command"] = command;
  return j;
}

Json grid_json(const Grid& g) { return Json{{"n", g.n()}, {"L", g.half_width()}, {"h", g.spacing()}}; }

Vec3 to_vec3(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw ConstraintError(std::string(what) + " needs exactly three components");
  return {v[0], v[1], v[2]};
}

Embedding parse_embedding(const std::string& s) {
  if (s == "both") return Embedding::both;
  if (s == "lower") return Embedding::lower;
  throw ConstraintError("embedding must be 'both' or 'lower'");
}

struct Level {
  double L;
  int n;
};

std::vector<Level> parse_ladder(const VerifyOptions& o) {
  std::vector<Level> out;
  if (o.ladder.empty()) {
    if (o.grid % 4 != 0) throw ConstraintError("default ladder needs n divisible by 4 (n/2 and 3n/4 even)");
    out = {{0.5 * o.box, o.grid / 2}, {0.75 * o.box, 3 * o.grid / 4}, {o.box, o.grid}};
  } else {
    std::stringstream ss(o.ladder);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConstraintError("ladder entries look like L:n");
      try {
        out.push_back({std::stod(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
      } catch (const std::logic_error&) {
        throw ConstraintError("cannot parse ladder entry '" + item + "'");
      }
    }
  }
  for (const auto& l : out) Grid(l.n, l.L);
  return out;
}

Json decay_json(const DecayFit& d) {
  return Json{{"exponent", d.exponent}, {"intercept", d.intercept}, {"r_min", d.r_min},
              {"r_max", d.r_max},       {"rms", d.residual},       {"bins", d.bins}};
}

Json gate(double value, double threshold, bool pass) {
  return Json{{"value", value}, {"threshold", threshold}, {"pass", pass}};
}

double closed_form_error(const ZeroModeFixture& fx, const Vec3& w) {
  double e = 0.0;
  const Grid& g = fx.f.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.point(i);
    const double r2 = dot(x, x);
    e = std::max(e, std::abs(loss_yau_psi(x, w).norm_sq() - 1.0 / ((1.0 + r2) * (1.0 + r2))));
  }
  return e;
}

}  // namespace

int verify_zero_mode(const VerifyOptions& o, std::string& text) {
  check_output_path(o.out);
  if (!o.export_dir.empty() && !fs::is_directory(o.export_dir))
    throw IoError("export directory does not exist: " + o.export_dir);
  Grid(o.grid, o.box);

  Json rep = header("verify-zero-mode");
  Json cfg;
  cfg["fixture"] = o.field.empty() ? Json(o.fixture) : Json(nullptr);
  cfg["field"] = o.field;
  cfg["potential"] = o.potential;
  cfg["grid"] = o.grid;
  cfg["box"] = o.box;
  cfg["w"] = o.w;
  cfg["embedding"] = o.embedding;
  cfg["ladder"] = o.ladder;
  rep["config"] = cfg;
  rep["tolerances"] = Json{{"residual_factor", o.residual_factor},
                           {"exponent_target", o.exponent_target},
                           {"exponent_tol", o.exponent_tol},
                           {"sup_drift", o.sup_drift}};
  rep["seeds"] = Json::array();

  std::vector<ZeroModeFixture> fixtures;
  Vec3 w{};
  if (o.field.empty()) {
    if (o.fixture != "loss-yau") throw ConstraintError("unknown fixture '" + o.fixture + "'");
    w = to_vec3(o.w, "w");
    const Embedding e = parse_embedding(o.embedding);
    for (const auto& l : parse_ladder(o)) fixtures.push_back(loss_yau_fixture(Grid(l.n, l.L), w, e));
  } else {
    if (o.potential.empty()) throw ConstraintError("--field needs a matching --potential");
    const auto qmeta = read_meta(o.potential).value_or(FieldMeta{});
    const auto fmeta = read_meta(o.field).value_or(FieldMeta{});
    SpinorField f = read_spinor_field(o.field);
    MatrixPotential q = read_matrix_potential(o.potential, qmeta.rho.value_or(0.0), qmeta.c.value_or(0.0));
    require_same_grid(f.grid, q.grid, "verify-zero-mode");
    fixtures.push_back({std::move(f), std::move(q), qmeta.rho.value_or(0.0), qmeta.c.value_or(0.0),
                        fmeta.c.value_or(0.0), fmeta.fixture.value_or("file")});
  }

  Json levels = Json::array();
  std::vector<std::string> notes;
  std::vector<double> res, def, sup;
  DecayFit last_fit;
  for (const auto& fx : fixtures) {
    const Grid& g = fx.f.grid;
    const double L = g.half_width();
    Json lv;
    lv["grid"] = grid_json(g);
    res.push_back(residual(fx));
    def.push_back(fixed_point_defect(fx));
    sup.push_back(weighted_sup(fx.f));
    lv["residual"] = res.back();
    lv["fixed_point_defect"] = def.back();
    try {
      last_fit = decay_fit(fx.f, L / 3.0, L / 2.0);
      lv["decay"] = decay_json(last_fit);
    } catch (const ConstraintError& e) {
      if (&fx == &fixtures.back()) throw;
      lv["decay"] = nullptr;
      notes.push_back("level n=" + std::to_string(g.n()) + ": no decay fit (" + e.what() + ")");
    }
    lv["sup_weighted"] = sup.back();
    lv["l2_norm"] = l2_norm(fx.f);
    lv["h1_norm"] = sobolev_h1_norm(fx.f);
    const double dc = mean(fx.f).norm() * std::pow(2.0 * L, 1.5) / l2_norm(fx.f);
    lv["dc_fraction"] = dc;
    if (dc > 0.5) notes.push_back("level n=" + std::to_string(g.n()) + ": field is mostly constant; H0 annihilates it but it is not square integrable on R^3");
    levels.push_back(lv);
  }
  rep["grid"] = grid_json(fixtures.back().f.grid);
  rep["exponent"] = last_fit.exponent;
  rep["levels"] = levels;

  Json gates;
  bool pass = true;
  if (res.size() >= 2) {
    const double factor = res.front() / res.back();
    gates["residual_factor"] = gate(factor, o.residual_factor, factor >= o.residual_factor);
    pass = pass && factor >= o.residual_factor;
    bool dec = true;
    for (std::size_t i = 1; i < def.size(); ++i) dec = dec && def[i] < def[i - 1];
    gates["defect_decreasing"] = Json{{"pass", dec}};
    pass = pass && dec;
    const auto [mn, mx] = std::minmax_element(sup.begin(), sup.end());
    const double drift = (*mx - *mn) / *mn;
    gates["sup_drift"] = gate(drift, o.sup_drift, drift < o.sup_drift);
    pass = pass && drift < o.sup_drift;
  }
  const double dev = std::abs(last_fit.exponent - o.exponent_target);
  gates["decay_exponent"] = gate(last_fit.exponent, o.exponent_tol, dev <= o.exponent_tol);
  pass = pass && dev <= o.exponent_tol;
  if (o.field.empty()) {
    const double ce = closed_form_error(fixtures.back(), w);
    gates["closed_form"] = gate(ce, 1e-12, ce < 1e-12);
    pass = pass && ce < 1e-12;
  }
  rep["gates"] = gates;
  rep["notes"] = notes;
  rep["pass"] = pass;

  if (!o.export_dir.empty()) {
    const auto& fx = fixtures.back();
    const std::string base = (fs::path(o.export_dir) / fx.tag).string();
    write_field(base + "_f.dzm1", fx.f);
    write_meta(base + "_f.dzm1", FieldMeta{fx.rho, fx.c_f, fx.tag});
    write_field(base + "_q.dzm1", fx.q);
    write_meta(base + "_q.dzm1", FieldMeta{fx.rho, fx.c_q, fx.tag});
  }

  text = rep.dump(2) + "\n";
  write_text(o.out, text);
  return pass ? kExitPass : kExitGate;
}

int lap_scan(const LapScanOptions& o, std::string& text) {
  check_output_path(o.out);
  if (o.rim != "plus" && o.rim != "minus") throw ConstraintError("rim must be 'plus' or 'minus'");
  if (!(o.lambda >= 0.0)) throw ConstraintError("lambda must be >= 0");
  for (double e : o.eps)
    if (!(e > 0.0)) throw ConstraintError("eps values must be positive");
  QuadratureSpec q;
  if (o.scheme == "gl") {
    q.scheme = QuadratureSpec::Scheme::gauss_legendre;
  } else if (o.scheme == "mc") {
    q.scheme = QuadratureSpec::Scheme::monte_carlo;
  } else {
    throw ConstraintError("scheme must be 'gl' or 'mc'");
  }
  q.samples = o.samples;
  q.seed = o.seed;
  q.delta = o.delta;
  q.radius = o.radius;
  q.tolerance = 1e-3;
  KernelSpec{KernelKind::k_weighted, SheetPoint::plus(o.lambda), o.s, o.sprime}.validate();

  const bool plus = o.rim == "plus";
  const SheetPoint ref = plus ? SheetPoint::plus(o.lambda) : SheetPoint::minus(o.lambda);
  const Estimate kref = hs_norm_k(ref, o.s, o.sprime, q);

  std::ostringstream os;
  os << "# dzm " << version() << " lap-scan scheme=" << o.scheme << " delta=" << num(o.delta, "%g")
     << " radius=" << num(o.radius, "%g") << " samples=" << o.samples << " seed=" << o.seed << "\n";
  os << "# reference hs_norm=" << num(kref.value) << " hs_err=" << num(kref.error) << "\n";
  os << "lambda,eps,rim,s,sprime,hs_norm,hs_err\n";
  auto row = [&](double eps, const char* rim, const Estimate& e) {
    os << num(o.lambda, "%.15g") << ',' << num(eps, "%.15g") << ',' << rim << ',' << num(o.s, "%.15g") << ','
       << num(o.sprime, "%.15g") << ',' << num(e.value) << ',' << num(e.error) << '\n';
  };
  bool pass = true;
  if (o.lambda == 0.0) {
    const Estimate same = hs_norm_k_diff(SheetPoint::plus(0.0), SheetPoint::minus(0.0), o.s, o.sprime, q);
    row(0.0, "plus-minus", same);
    pass = pass && same.value == 0.0;
  }
  std::vector<Estimate> vals;
  for (double e : o.eps) {
    const SheetPoint z = SheetPoint::interior({o.lambda, plus ? e : -e});
    vals.push_back(hs_norm_k_diff(z, ref, o.s, o.sprime, q));
    row(e, o.rim.c_str(), vals.back());
  }
  for (std::size_t i = 1; i < vals.size(); ++i)
    pass = pass && vals[i].value + vals[i].error < vals[i - 1].value - vals[i - 1].error;
  text = os.str();
  write_text(o.out, text);
  return pass ? kExitPass : kExitGate;
}

int ekku_table(const EkkuOptions& o, std::string& text) {
  check_output_path(o.out);
  std::vector<double> pts;
  if (o.points == "origin") {
    pts = {0.0};
  } else {
    std::stringstream ss(o.points);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "origin") {
        pts.push_back(0.0);
        continue;
      }
      try {
        pts.push_back(std::stod(item));
      } catch (const std::logic_error&) {
        throw ConstraintError("cannot parse point '" + item + "'");
      }
    }
  }
  QuadratureSpec q;
  q.delta = o.delta;
  q.radius = o.radius;
  std::ostringstream os;
  os << "# dzm " << version() << " ekku-table delta=" << num(o.delta, "%g") << " radius=" << num(o.radius, "%g")
     << "\n";
  os << "gamma,x_norm,J,J_scaled,branch\n";
  for (double g : o.gamma) {
    for (double x : pts) {
      const Estimate j = ekku_integral(g, {x, 0.0, 0.0}, q);
      os << num(g, "%.15g") << ',' << num(x, "%.15g") << ',' << num(j.value) << ','
         << num(j.value / ekku_profile(g, x)) << ',' << to_string(ekku_branch(g)) << '\n';
    }
  }
  text = os.str();
  write_text(o.out, text);
  return kExitPass;
}

int bs_spectrum(const BsOptionsCli& o, std::string& text) {
  check_output_path(o.out);
  Json rep = header("bs-spectrum");
  Json cfg;
  cfg["fixture"] = o.potential.empty() ? Json(o.fixture) : Json(nullptr);
  cfg["potential"] = o.potential;
  cfg["grid"] = o.grid;
  cfg["box"] = o.box;
  cfg["w"] = o.w;
  cfg["k"] = o.k;
  cfg["budget"] = o.budget;
  rep["config"] = cfg;
  rep["tolerances"] = Json{{"ritz_residual", o.tol}};
  rep["seeds"] = Json::array({o.seed});

  std::optional<ZeroModeFixture> fx;
  std::optional<MatrixPotential> qfile;
  if (o.potential.empty()) {
    if (o.fixture != "loss-yau") throw ConstraintError("unknown fixture '" + o.fixture + "'");
    fx = loss_yau_fixture(Grid(o.grid, o.box), to_vec3(o.w, "w"));
  } else {
    const auto meta = read_meta(o.potential).value_or(FieldMeta{});
    qfile = read_matrix_potential(o.potential, meta.rho.value_or(0.0), meta.c.value_or(0.0));
  }
  const MatrixPotential& q = fx ? fx->q : *qfile;
  rep["grid"] = grid_json(q.grid);

  BsOptions bo;
  bo.budget = o.budget;
  bo.tolerance = o.tol;
  bo.seed = o.seed;
  const BsResult r = bs_solver(q, o.k, bo);
  Json eig = Json::array();
  for (const auto& p : r.pairs)
    eig.push_back(Json{{"re", p.mu.real()},
                       {"im", p.mu.imag()},
                       {"coupling", p.coupling.real()},
                       {"coupling_im", p.coupling.imag()},
                       {"defect", p.defect},
                       {"residual", p.residual}});
  rep["eigenvalues"] = eig;
  Json nearest = nullptr;
  for (std::size_t i = 0; i < r.pairs.size(); ++i)
    if (nearest.is_null() || std::abs(r.pairs[i].mu + 1.0) < std::abs(r.pairs[nearest.get<std::size_t>()].mu + 1.0))
      nearest = i;
  rep["nearest_to_minus_one"] = nearest;
  rep["matvecs"] = r.matvecs;
  rep["converged"] = r.converged;
  if (fx) {
    std::vector<const SpinorField*> cluster;
    for (const auto& p : r.pairs)
      if (std::abs(p.mu + 1.0) < 1e-2) cluster.push_back(&p.field);
    rep["fixture_cosine"] = cluster.empty() ? Json(nullptr) : Json(subspace_cosine(mean_free(fx->f), cluster));
  }
  text = rep.dump(2) + "\n";
  write_text(o.out, text);
  return r.converged ? kExitPass : kExitGate;
}

int bootstrap(const BootstrapOptions& o, std::string& text) {
  check_output_path(o.out);
  const BootstrapTrace t = bootstrap_trace(o.rho);
  Json rep = header("bootstrap");
  rep["config"] = Json{{"rho", o.rho}};
  rep["tolerances"] = Json{{"log_branch_rel", 1e-12}};
  rep["seeds"] = Json::array();
  rep["grid"] = nullptr;
  rep["rho"] = t.rho;
  rep["n_star"] = t.n_star;
  Json steps = Json::array();
  for (const auto& s : t.steps) steps.push_back(Json::array({s.k, s.exponent, to_string(s.branch)}));
  rep["trace"] = steps;
  text = rep.dump(2) + "\n";
  write_text(o.out, text);
  return kExitPass;
}

int kernel_eval(const KernelEvalOptions& o, std::string& text) {
  check_output_path(o.out);
  const Rim rim = rim_from_string(o.rim);
  SheetPoint z;
  if (rim == Rim::interior) {
    if (o.z.size() != 2) throw ConstraintError("interior z needs re,im");
    z = SheetPoint::interior({o.z[0], o.z[1]});
  } else {
    if (o.z.empty()) throw ConstraintError("rim points need lambda");
    z = rim == Rim::plus ? SheetPoint::plus(o.z[0]) : SheetPoint::minus(o.z[0]);
  }
  const Vec3 x = to_vec3(o.x, "x"), y = to_vec3(o.y, "y");
  Matrix4 m;
  if (o.kind == "gamma0") {
    m(0, 0) = gamma0_kernel(z, x, y);
  } else if (o.kind == "r0") {
    KernelSpec{KernelKind::r0, z}.validate();
    m = r0_kernel(z, x, y);
  } else if (o.kind == "a") {
    m = a_kernel(x, y);
  } else {
    throw ConstraintError("kind must be gamma0, r0 or a");
  }
  std::ostringstream os;
  os << "# dzm " << version() << " kernel-eval kind=" << o.kind << " rim=" << to_string(rim) << " z="
     << num(z.z.real(), "%.15g") << (z.z.imag() < 0 ? "" : "+") << num(z.z.imag(), "%.15g") << "i"
     << " x=" << num(x[0], "%.15g") << ',' << num(x[1], "%.15g") << ',' << num(x[2], "%.15g")
     << " y=" << num(y[0], "%.15g") << ',' << num(y[1], "%.15g") << ',' << num(y[2], "%.15g") << "\n";
  os << "row,col,re,im\n";
  const int dim = o.kind == "gamma0" ? 1 : 4;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      os << r << ',' << c << ',' << num(m(r, c).real()) << ',' << num(m(r, c).imag()) << '\n';
  text = os.str();
  write_text(o.out, text);
  return kExitPass;
}

namespace {

// JSON config: top-level scalars belong to the active subcommand; nested objects
// keyed by subcommand name are also accepted.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string section) : section_(std::move(section)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& is) const override {
    nlohmann::json j;
    try {
      is >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    std::vector<std::string> parents;
    if (!section_.empty()) parents.push_back(section_);
    collect(j, parents, items, true);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("unsupported config value " + v.dump());
  }

  void collect(const nlohmann::json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items,
               bool top) const {
    for (const auto& [key, v] : j.items()) {
      if (v.is_object()) {
        // {"lap-scan": {...}} at top level names a subcommand explicitly
        std::vector<std::string> p = top ? std::vector<std::string>{} : parents;
        p.push_back(key);
        if (top && key != section_) continue;
        collect(v, p, items, false);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      if (v.is_array()) {
        for (const auto& e : v) item.inputs.push_back(scalar(e));
      } else {
        item.inputs.push_back(scalar(v));
      }
      items.push_back(std::move(item));
    }
  }

  std::string section_;
};

template <class T>
void vector_option(CLI::App* app, const std::string& name, std::vector<T>& target, const std::string& help) {
  app->add_option(name, target, help)->delimiter(',')->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudospectral lab for the massless Dirac operator"};
  app.name("dzm");
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  const std::vector<std::string> names{"verify-zero-mode", "lap-scan", "ekku-table", "bs-spectrum", "bootstrap",
                                       "kernel-eval"};
  std::string active;
  for (int i = 1; i < argc && active.empty(); ++i)
    if (std::find(names.begin(), names.end(), argv[i]) != names.end()) active = argv[i];
  app.config_formatter(std::make_shared<JsonConfig>(active));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "JSON file supplying any flag; command-line flags win");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify-zero-mode", "Residual, fixed-point and decay gates over a refinement ladder");
  verify->add_option("--fixture", vo.fixture, "Fixture name (loss-yau)")->capture_default_str();
  verify->add_option("--field", vo.field, "DZM1 spinor field instead of a fixture");
  verify->add_option("--potential", vo.potential, "DZM1 matrix potential for --field");
  verify->add_option("--grid", vo.grid, "Points per axis at the finest level")->capture_default_str();
  verify->add_option("--box", vo.box, "Half-width L at the finest level")->capture_default_str();
  vector_option(verify, "--w", vo.w, "Spin axis (unit vector)");
  verify->add_option("--embedding", vo.embedding, "both: (psi, psi), lower: (0, psi)")->capture_default_str();
  verify->add_option("--ladder", vo.ladder, "Refinement ladder L:n,L:n,...");
  verify->add_option("--residual-factor", vo.residual_factor)->capture_default_str();
  verify->add_option("--exponent-tol", vo.exponent_tol)->capture_default_str();
  verify->add_option("--sup-drift", vo.sup_drift)->capture_default_str();
  verify->add_option("--out", vo.out, "Report path (JSON)");
  verify->add_option("--export", vo.export_dir, "Directory for DZM1 fixture export");

  LapScanOptions lo;
  auto* lap = app.add_subcommand("lap-scan", "HS distance of K(lambda +- i eps) to its boundary value");
  lap->add_option("--lambda", lo.lambda)->capture_default_str();
  lap->add_option("--s", lo.s)->capture_default_str();
  lap->add_option("--sprime", lo.sprime)->capture_default_str();
  vector_option(lap, "--eps", lo.eps, "Comma-separated eps ladder");
  lap->add_option("--rim", lo.rim, "plus or minus")->capture_default_str();
  lap->add_option("--scheme", lo.scheme, "gl (Gauss-Legendre) or mc (Monte Carlo)")->capture_default_str();
  lap->add_option("--samples", lo.samples)->capture_default_str();
  lap->add_option("--seed", lo.seed)->capture_default_str();
  lap->add_option("--delta", lo.delta, "Excluded diagonal radius")->capture_default_str();
  lap->add_option("--radius", lo.radius, "Truncation radius")->capture_default_str();
  lap->add_option("--out", lo.out, "CSV path");

  EkkuOptions eo;
  auto* ekku = app.add_subcommand("ekku-table", "Weight integrals J_gamma(x)");
  vector_option(ekku, "--gamma", eo.gamma, "Comma-separated gamma values");
  ekku->add_option("--points", eo.points, "|x| values or 'origin'")->capture_default_str();
  ekku->add_option("--delta", eo.delta)->capture_default_str();
  ekku->add_option("--radius", eo.radius)->capture_default_str();
  ekku->add_option("--out", eo.out, "CSV path");

  BsOptionsCli bo;
  auto* bs = app.add_subcommand("bs-spectrum", "Leading eigenvalues of f -> A(Q f)");
  bs->add_option("--fixture", bo.fixture)->capture_default_str();
  bs->add_option("--potential", bo.potential, "DZM1 matrix potential instead of a fixture");
  bs->add_option("--grid", bo.grid)->capture_default_str();
  bs->add_option("--box", bo.box)->capture_default_str();
  vector_option(bs, "--w", bo.w, "Spin axis (unit vector)");
  bs->add_option("--k", bo.k)->capture_default_str();
  bs->add_option("--budget", bo.budget, "Operator applications")->capture_default_str();
  bs->add_option("--tol", bo.tol, "Relative Ritz residual")->capture_default_str();
  bs->add_option("--seed", bo.seed)->capture_default_str();
  bs->add_option("--out", bo.out, "Report path (JSON)");

  BootstrapOptions to;
  auto* boot = app.add_subcommand("bootstrap", "Decay-exponent bootstrap trace");
  boot->add_option("--rho", to.rho)->capture_default_str();
  boot->add_option("--out", to.out, "Report path (JSON)");

  KernelEvalOptions ko;
  auto* kev = app.add_subcommand("kernel-eval", "Evaluate a closed-form kernel at one point pair");
  kev->add_option("--kind", ko.kind, "gamma0, r0 or a")->capture_default_str();
  vector_option(kev, "--z", ko.z, "re,im (interior) or lambda (rims)");
  kev->add_option("--rim", ko.rim, "interior, plus or minus")->capture_default_str();
  vector_option(kev, "--x", ko.x, "First point");
  vector_option(kev, "--y", ko.y, "Second point");
  kev->add_option("--out", ko.out, "CSV path");

  // --config may appear after the subcommand; hoist it to the top level
  std::vector<std::string> args;
  std::vector<std::string> hoisted;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      hoisted = {a, argv[++i]};
    } else if (a.rfind("--config=", 0) == 0) {
      hoisted = {a};
    } else {
      args.push_back(a);
    }
  }
  args.insert(args.begin(), hoisted.begin(), hoisted.end());
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::FileError& e) {
    err << "dzm: " << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    err << "dzm: " << e.what() << '\n';
    return kExitUsage;
  }

  std::string text, dest;
  int code = kExitPass;
  try {
    if (*verify) {
      code = verify_zero_mode(vo, text);
      dest = vo.out;
    } else if (*lap) {
      code = lap_scan(lo, text);
      dest = lo.out;
    } else if (*ekku) {
      code = ekku_table(eo, text);
      dest = eo.out;
    } else if (*bs) {
      code = bs_spectrum(bo, text);
      dest = bo.out;
    } else if (*boot) {
      code = bootstrap(to, text);
      dest = to.out;
    } else if (*kev) {
      code = kernel_eval(ko, text);
      dest = ko.out;
    }
  } catch (const ConstraintError& e) {
    err << "dzm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "dzm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "dzm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "dzm: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConvergenceError& e) {
    err << "dzm: " << e.what() << '\n';
    return kExitGate;
  }
  if (dest.empty()) {
    out << text;
  } else {
    out << "wrote " << dest << (code == kExitPass ? " (pass)" : " (gate failure)") << '\n';
  }
  return code;
}

}  // namespace dzm::cli
