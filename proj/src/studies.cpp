#include "weakmeas/studies.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "weakmeas/errors.hpp"
#include "weakmeas/pointer.hpp"

namespace wm {

namespace {

using ojson = nlohmann::ordered_json;

CheckResult near(std::string name, double observed, double expected, double tol) {
  return {std::move(name), observed, expected, tol, std::abs(observed - expected) <= tol};
}

ojson complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ojson checks_json(const std::vector<CheckResult>& checks) {
  ojson a = ojson::array();
  for (const auto& c : checks)
    a.push_back({{"name", c.name},
                 {"observed", c.observed},
                 {"expected", c.expected},
                 {"tolerance", c.tolerance},
                 {"passed", c.passed}});
  return a;
}

// Widths may be infinite; JSON has no infinity, so full windows are named.
ojson width_json(double w) { return std::isfinite(w) ? ojson(w) : ojson("full"); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

StateVector qubit(Complex c0, Complex c1) {
  Vector v(2);
  v << c0, c1;
  return StateVector::normalized(v);
}

}  // namespace

std::size_t failure_count(const std::vector<CheckResult>& checks) {
  std::size_t n = 0;
  for (const auto& c : checks)
    if (!c.passed) ++n;
  return n;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

CVStudy run_cv_study(const CVStudyConfig& config) {
  if (config.widths.empty()) throw Error(ErrorKind::config, "widths: at least one width is required");
  for (std::size_t i = 0; i < config.widths.size(); ++i)
    if (!(config.widths[i] > 0.0))
      throw Error(ErrorKind::config, "widths[" + std::to_string(i) + "]: must be > 0");
  CVStudy s;
  s.config = config;
  const CVGrid grid = CVGrid::build(config.grid_points, config.x_min, config.x_max, config.hbar);
  const Vector psi = make_cv_state(grid, config.state);
  s.x_post = grid.x_samples()[grid.n_points() / 2];
  s.p_post = 0.0;
  s.table = cv_product_study(grid, psi, config.widths, config.widths, s.x_post, s.p_post);

  for (double w : config.widths) {
    for (GridDomain d : {GridDomain::position, GridDomain::momentum}) {
      const WindowProjector win(grid, d, grid.center(d), w);
      const Matrix own = win.matrix();
      const Matrix pos = win.position_basis_matrix();
      s.idempotence_defect = std::max(s.idempotence_defect, (own * own - own).cwiseAbs().maxCoeff());
      s.position_basis_defect = std::max(s.position_basis_defect, (pos * pos - pos).cwiseAbs().maxCoeff());
    }
  }
  s.checks.push_back({"window.idempotence", s.idempotence_defect, 0.0, 0.0, s.idempotence_defect == 0.0});
  for (const auto& row : s.table.rows)
    if (row.both_full) s.checks.push_back(near("full_window.product", row.deviation, 0.0, 1e-8));

  std::vector<Eigen::Index> sizes;
  for (Eigen::Index n : {config.grid_points / 4, config.grid_points / 2, config.grid_points})
    if (n >= 16) sizes.push_back(n);
  const double lo = 0.0, hi = 2.5;
  s.refinement = cv_refinement_study(sizes, config.x_min, config.x_max, config.hbar, CVStateKind::gaussian,
                                     0.5 * (lo + hi), hi - lo);
  // Unit Gaussian, psi ~ exp(-x^2/4): the window integral is an erf difference.
  const double c = grid.center(GridDomain::position);
  s.refinement_exact = 0.5 * (std::erf((hi - c) / 2.0) - std::erf((lo - c) / 2.0));
  for (const auto& step : s.refinement) s.refinement_errors.push_back(std::abs(step.value - s.refinement_exact));
  bool monotone = true;
  for (std::size_t i = 1; i < s.refinement_errors.size(); ++i)
    monotone = monotone && s.refinement_errors[i] < s.refinement_errors[i - 1];
  if (s.refinement_errors.size() >= 2)
    s.checks.push_back({"refinement.monotone", monotone ? 1.0 : 0.0, 1.0, 0.0, monotone});
  return s;
}

PointerFixture pointer_fixture_from_string(std::string_view s) {
  if (s == "anomalous") return PointerFixture::anomalous;
  if (s == "complex") return PointerFixture::complex_value;
  if (s == "expectation") return PointerFixture::expectation;
  throw Error(ErrorKind::config, "fixture: unknown pointer fixture '" + std::string(s) + "'");
}

std::string_view to_string(PointerFixture f) {
  switch (f) {
    case PointerFixture::anomalous: return "anomalous";
    case PointerFixture::complex_value: return "complex";
    case PointerFixture::expectation: return "expectation";
  }
  return "?";
}

PointerStudy run_pointer_study(PointerFixture fixture, const std::vector<double>& g_ladder,
                               Eigen::Index meter_points, double hbar) {
  if (g_ladder.empty()) throw Error(ErrorKind::config, "g_ladder: at least one coupling is required");
  for (std::size_t i = 0; i < g_ladder.size(); ++i)
    if (!(g_ladder[i] > 0.0) || !std::isfinite(g_ladder[i]))
      throw Error(ErrorKind::config, "g_ladder[" + std::to_string(i) + "]: must be > 0");

  const double t = std::numbers::pi / 8.0;
  const StateVector minus = qubit(1.0, -1.0);
  StateVector pre = qubit(std::cos(t), std::sin(t));
  StateVector post = minus;
  double kick = 0.0;
  if (fixture == PointerFixture::complex_value) {
    pre = qubit(std::cos(t), std::polar(std::sin(t), std::numbers::pi / 3.0));
    kick = 1.0;
  } else if (fixture == PointerFixture::expectation) {
    post = pre;
  }
  const PPSEnsemble ens(pre, post);
  const Observable a(pauli_z());
  const CVGrid grid = CVGrid::build(meter_points, -10.0, 10.0, hbar);
  const MeterSpec meter =
      MeterSpec::on_grid(grid, gaussian_wavefunction(grid, grid.center(GridDomain::position), 1.0, kick));

  PointerStudy s;
  s.fixture = fixture;
  s.meter_points = meter_points;
  s.weak_value = weak_value(ens, a).value;
  std::vector<double> gs, prob_err, ptr_err, est_err;
  double worst_norm = 0.0;
  for (double g : g_ladder) {
    const JointState joint = evolve_joint(ens.pre(), meter, a, g);
    const PostselectionResult r = postselect(joint, ens, s.weak_value, g, meter);
    PointerStudyRow row;
    row.g = g;
    row.norm = joint.amplitudes.norm();
    row.probability = r.probability;
    row.first_order_probability = r.first_order_probability;
    row.probability_error = std::abs(r.probability - r.first_order_probability);
    row.pointer_error =
        (r.pointer_unnormalized - ens.overlap() * first_order_pointer(meter, s.weak_value, g)).norm();
    row.estimate = estimate_weak_value(meter, r.pointer_unnormalized, g);
    row.estimate_error = std::abs(row.estimate - s.weak_value);
    worst_norm = std::max(worst_norm, std::abs(row.norm - 1.0));
    gs.push_back(g);
    prob_err.push_back(row.probability_error);
    ptr_err.push_back(row.pointer_error);
    est_err.push_back(row.estimate_error);
    s.rows.push_back(row);
  }
  s.probability_slope = log_log_slope(gs, prob_err);
  s.pointer_slope = log_log_slope(gs, ptr_err);
  s.estimate_slope = log_log_slope(gs, est_err);

  s.checks.push_back(near("unitarity", worst_norm, 0.0, 1e-12));
  if (gs.size() >= 2) {
    s.checks.push_back(near("pointer_error.slope", s.pointer_slope, 2.0, 0.2));
    s.checks.push_back(near("probability_error.slope", s.probability_slope, 2.0, 0.2));
  }
  if (fixture == PointerFixture::anomalous) {
    for (const auto& row : s.rows)
      if (row.g == 1e-3)
        s.checks.push_back(near("anomalous_estimate.g=1e-3", row.estimate.real(), 1.0 + std::numbers::sqrt2, 0.03));
  }
  return s;
}

nlohmann::ordered_json to_json(const CVStudy& s) {
  ojson j;
  j["schema"] = "weakmeas-cv-study/1";
  j["library_version"] = kLibraryVersion;
  j["config"] = {{"grid_points", s.config.grid_points},
                 {"x_min", s.config.x_min},
                 {"x_max", s.config.x_max},
                 {"hbar", s.config.hbar},
                 {"state", std::string(to_string(s.config.state))}};
  ojson widths = ojson::array();
  for (double w : s.config.widths) widths.push_back(width_json(w));
  j["config"]["widths"] = std::move(widths);
  j["x_post"] = s.x_post;
  j["p_post"] = s.p_post;
  ojson rows = ojson::array();
  for (const auto& r : s.table.rows)
    rows.push_back({{"x_width", width_json(r.x_width)},
                    {"p_width", width_json(r.p_width)},
                    {"wv_x", complex_json(r.wv_x)},
                    {"wv_p", complex_json(r.wv_p)},
                    {"product", complex_json(r.product)},
                    {"deviation", r.deviation},
                    {"both_full", r.both_full}});
  j["rows"] = std::move(rows);
  j["notes"] = s.table.notes;
  j["idempotence_defect"] = s.idempotence_defect;
  j["position_basis_defect"] = s.position_basis_defect;
  ojson steps = ojson::array();
  for (std::size_t i = 0; i < s.refinement.size(); ++i)
    steps.push_back({{"grid_points", s.refinement[i].n_points},
                     {"value", complex_json(s.refinement[i].value)},
                     {"error", s.refinement_errors[i]}});
  j["refinement"] = {{"window", {0.0, 2.5}}, {"exact", s.refinement_exact}, {"steps", std::move(steps)}};
  j["checks"] = checks_json(s.checks);
  j["failure_count"] = failure_count(s.checks);
  return j;
}

nlohmann::ordered_json to_json(const PointerStudy& s) {
  ojson j;
  j["schema"] = "weakmeas-pointer-study/1";
  j["library_version"] = kLibraryVersion;
  j["fixture"] = std::string(to_string(s.fixture));
  j["meter_points"] = s.meter_points;
  j["weak_value"] = complex_json(s.weak_value);
  ojson rows = ojson::array();
  for (const auto& r : s.rows)
    rows.push_back({{"g", r.g},
                    {"norm", r.norm},
                    {"probability", r.probability},
                    {"first_order_probability", r.first_order_probability},
                    {"probability_error", r.probability_error},
                    {"pointer_error", r.pointer_error},
                    {"estimate", complex_json(r.estimate)},
                    {"estimate_error", r.estimate_error}});
  j["rows"] = std::move(rows);
  j["slopes"] = {{"probability_error", s.probability_slope},
                 {"pointer_error", s.pointer_slope},
                 {"estimate_error", s.estimate_slope}};
  j["checks"] = checks_json(s.checks);
  j["failure_count"] = failure_count(s.checks);
  return j;
}

std::string render_csv(const CVStudy& s) {
  std::ostringstream os;
  os << "x_width,p_width,wv_x_re,wv_x_im,wv_p_re,wv_p_im,product_re,product_im,deviation,both_full\n";
  for (const auto& r : s.table.rows)
    os << fmt(r.x_width) << ',' << fmt(r.p_width) << ',' << fmt(r.wv_x.real()) << ',' << fmt(r.wv_x.imag()) << ','
       << fmt(r.wv_p.real()) << ',' << fmt(r.wv_p.imag()) << ',' << fmt(r.product.real()) << ','
       << fmt(r.product.imag()) << ',' << fmt(r.deviation) << ',' << (r.both_full ? "true" : "false") << '\n';
  return os.str();
}

std::string render_csv(const PointerStudy& s) {
  std::ostringstream os;
  os << "g,norm,probability,first_order_probability,probability_error,pointer_error,estimate_re,estimate_im,"
        "estimate_error\n";
  for (const auto& r : s.rows)
    os << fmt(r.g) << ',' << fmt(r.norm) << ',' << fmt(r.probability) << ',' << fmt(r.first_order_probability)
       << ',' << fmt(r.probability_error) << ',' << fmt(r.pointer_error) << ',' << fmt(r.estimate.real()) << ','
       << fmt(r.estimate.imag()) << ',' << fmt(r.estimate_error) << '\n';
  return os.str();
}

}  // namespace wm
