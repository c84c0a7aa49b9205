#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakmeas/random.hpp"
#include "weakmeas/relation_report.hpp"
#include "weakmeas/tolerances.hpp"

namespace wm {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class ReportFormat { json, csv };

struct SweepConfig {
  std::vector<RelationId> relations{RelationId::ur1, RelationId::ur2, RelationId::complementarity};
  std::vector<int> dims{2, 3, 4, 5, 6, 7, 8};
  int trials = 1000;  // per dimension
  Seed seed{20140826};
  Tolerances tolerances{};
  double hbar = 1.0;
  PsibarMode psibar_mode = PsibarMode::random;
  Eigen::Index cv_grid_points = 256;
  double cv_x_min = -10.0;
  double cv_x_max = 10.0;
  std::vector<double> g_ladder{1e-2, 1e-3, 1e-4};
  ReportFormat format = ReportFormat::json;
  std::string out;    // empty: standard output
  unsigned workers = 0;  // 0: hardware concurrency

  /// Throws a config error naming the offending field.
  void validate() const;
};

nlohmann::ordered_json to_json(const SweepConfig& c);
/// Overlays the fields present in `j` onto `base`; unknown keys are errors.
SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig base = {});

struct ReportRow {
  int dim = 0;
  int trial = 0;
  std::uint64_t sub_seed = 0;
  RelationReport report;
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// A named fixture comparison.
struct CheckResult {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct Aggregates {
  std::size_t report_count = 0;
  std::size_t check_count = 0;
  std::size_t failure_count = 0;
  double min_slack = 0.0;
  double max_imag_residue = 0.0;
  double tightness_rate = 0.0;
  std::size_t rejections = 0;
  friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct ReportSet {
  nlohmann::ordered_json config;
  std::vector<ReportRow> rows;
  std::vector<CheckResult> checks;
  Aggregates aggregates;
  double tolerance = kDefaultTolerances.relation;
  std::string library_version = kLibraryVersion;
  double wall_clock_seconds = 0.0;
  std::string timestamp;

  friend bool operator==(const ReportSet&, const ReportSet&) = default;
};

/// Failures are rows whose slack falls below -tolerance * max(1, |lhs|)
/// plus failed checks.
Aggregates compute_aggregates(const std::vector<ReportRow>& rows, const std::vector<CheckResult>& checks,
                              double tolerance, std::size_t rejections);

/// Inputs of one sweep trial, regenerated from (master seed, dim, trial).
struct TrialInputs {
  Seed sub_seed;
  StateVector pre;
  StateVector post;
  Matrix a;
  Matrix b;
  Seed psibar_seed;
  StateVector proj_a;  // complementarity basis vectors
  StateVector proj_b;
  std::size_t rejections = 0;
};

TrialInputs generate_trial(Seed master, int dim, int trial, const Tolerances& tol = kDefaultTolerances);

ReportSet run_sweep(const SweepConfig& config);

ReportSet run_fixtures();

void emit_report(const ReportSet& set, ReportFormat format, const std::string& path);
std::string render_json(const ReportSet& set);
std::string render_csv(const ReportSet& set);
ReportSet parse_report_json(const std::string& text);

/// Serializes JSON with every floating-point value written to 17
/// significant digits.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

std::string now_timestamp();

}  // namespace wm
