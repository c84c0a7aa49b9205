#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "weakmeas/complementarity.hpp"
#include "weakmeas/harness.hpp"

namespace wm {

/// Window weak values and their products on one grid, plus a refinement
/// series for a position window whose exact value is known in closed form.
struct CVStudyConfig {
  Eigen::Index grid_points = 512;
  double x_min = -10.0;
  double x_max = 10.0;
  double hbar = 1.0;
  std::vector<double> widths{1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()};
  CVStateKind state = CVStateKind::gaussian;
};

struct CVStudy {
  CVStudyConfig config;
  double x_post = 0.0;
  double p_post = 0.0;
  CVProductTable table;
  double idempotence_defect = 0.0;     // in each window's own basis; exactly 0
  double position_basis_defect = 0.0;  // after F^dagger D F, roundoff only
  // Gaussian window [0, 2.5) post-selected at p = 0 on grids of n/4, n/2, n points.
  std::vector<RefinementStep> refinement;
  double refinement_exact = 0.0;
  std::vector<double> refinement_errors;
  std::vector<CheckResult> checks;
};

CVStudy run_cv_study(const CVStudyConfig& config);

enum class PointerFixture { anomalous, complex_value, expectation };
PointerFixture pointer_fixture_from_string(std::string_view s);
std::string_view to_string(PointerFixture f);

struct PointerStudyRow {
  double g = 0.0;
  double probability = 0.0;
  double first_order_probability = 0.0;
  double probability_error = 0.0;  // |probability - first_order_probability|
  double pointer_error = 0.0;      // |exact pointer - <phi|psi> first-order pointer|
  double norm = 0.0;               // of the joint state after evolution
  Complex estimate;
  double estimate_error = 0.0;
};

struct PointerStudy {
  PointerFixture fixture = PointerFixture::anomalous;
  Eigen::Index meter_points = 256;
  Complex weak_value;
  std::vector<PointerStudyRow> rows;
  // Least-squares slopes of log(error) against log(g); NaN when undefined.
  double probability_slope = 0.0;
  double pointer_slope = 0.0;
  double estimate_slope = 0.0;
  std::vector<CheckResult> checks;
};

/// Exact pointer simulation across a coupling ladder. The meter is a unit
/// Gaussian on a [-10, 10) grid; the complex-value fixture gives it a unit
/// momentum kick so that the first-order probability correction is visible.
PointerStudy run_pointer_study(PointerFixture fixture, const std::vector<double>& g_ladder,
                               Eigen::Index meter_points = 256, double hbar = 1.0);

/// Slope of log|y| against log x by least squares over the finite, nonzero points.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::ordered_json to_json(const CVStudy& s);
nlohmann::ordered_json to_json(const PointerStudy& s);
std::string render_csv(const CVStudy& s);
std::string render_csv(const PointerStudy& s);

std::size_t failure_count(const std::vector<CheckResult>& checks);

}  // namespace wm
