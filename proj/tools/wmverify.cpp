// wmverify: randomized sweeps, fixture suites and numerical studies for the
// weakmeas library. Exit status: 0 when every check passes, 1 when some
// relation or check fails, 2 on configuration, input or runtime errors.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "weakmeas/errors.hpp"
#include "weakmeas/harness.hpp"
#include "weakmeas/studies.hpp"

namespace {

constexpr int kExitFailures = 1;
constexpr int kExitError = 2;

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_number(const std::string& s, const std::string& field) {
  if (s == "inf" || s == "full") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw wm::Error(wm::ErrorKind::config, field + ": cannot parse '" + s + "' as a number");
}

// "2-8" or "2,3,5"; both forms may be mixed.
std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  for (const auto& item : split(s)) {
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        dims.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("empty range");
        for (int d = lo; d <= hi; ++d) dims.push_back(d);
      }
    } catch (const std::exception&) {
      throw wm::Error(wm::ErrorKind::config, "dims: cannot parse '" + item + "'");
    }
  }
  return dims;
}

wm::ReportFormat parse_format(const std::string& s) {
  if (s == "json") return wm::ReportFormat::json;
  if (s == "csv") return wm::ReportFormat::csv;
  throw wm::Error(wm::ErrorKind::config, "format: expected 'json' or 'csv'");
}

nlohmann::json read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw wm::Error(wm::ErrorKind::io, "cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw wm::Error(wm::ErrorKind::config, path + ": " + e.what());
  }
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw wm::Error(wm::ErrorKind::io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f.flush()) throw wm::Error(wm::ErrorKind::io, "write to '" + path + "' failed");
}

void summarize(const std::string& what, std::size_t rows, std::size_t checks, std::size_t failures) {
  std::cerr << what << ": " << rows << " reports, " << checks << " checks, " << failures << " failures\n";
}

struct SweepFlags {
  std::string config_path, relations, dims, psibar, format, out;
  int trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0, hbar = 0.0;
  unsigned workers = 0;
};

struct StudyFlags {
  std::string format = "json", out, widths, state = "gaussian", g_ladder, fixture = "anomalous";
  Eigen::Index grid_points = 512, meter_points = 256;
  double hbar = 1.0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of weak values and weak-measurement uncertainty relations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wm::kLibraryVersion));

  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "Seeded random sweep over dimensions and relations");
  sweep->add_option("--config", sf.config_path, "JSON config file; flags override its values");
  auto* o_rel = sweep->add_option("--relations", sf.relations,
                                  "Comma list of ur1, ur2, mp1, mp2, robertson, complementarity");
  auto* o_dims = sweep->add_option("--dims", sf.dims, "Dimensions, e.g. 2-8 or 2,4,8");
  auto* o_trials = sweep->add_option("--trials", sf.trials, "Trials per dimension");
  auto* o_seed = sweep->add_option("--seed", sf.seed, "Master seed");
  auto* o_tol = sweep->add_option("--tolerance", sf.tolerance, "Relation tolerance (relative to max(1,|lhs|))");
  auto* o_hbar = sweep->add_option("--hbar", sf.hbar, "Reduced Planck constant");
  auto* o_psibar = sweep->add_option("--psibar", sf.psibar, "Orthogonal state choice: random or optimal");
  auto* o_format = sweep->add_option("--format", sf.format, "json or csv");
  auto* o_out = sweep->add_option("--out", sf.out, "Output path (default: standard output)");
  auto* o_workers = sweep->add_option("--workers", sf.workers, "Worker threads (0: hardware concurrency)");

  std::string fx_format = "json", fx_out;
  auto* fixtures = app.add_subcommand("fixtures", "Run the named fixture suite");
  fixtures->add_option("--format", fx_format, "json or csv");
  fixtures->add_option("--out", fx_out, "Output path (default: standard output)");

  StudyFlags st;
  auto* cv = app.add_subcommand("cv-study", "Window weak values and products on a position/momentum grid");
  cv->add_option("--grid-points", st.grid_points, "Grid size (power of two >= 16)");
  cv->add_option("--widths", st.widths, "Comma list of window widths; 'inf' selects the full grid");
  cv->add_option("--state", st.state, "gaussian, boosted or two-peak");
  cv->add_option("--hbar", st.hbar, "Reduced Planck constant");
  cv->add_option("--format", st.format, "json or csv");
  cv->add_option("--out", st.out, "Output path (default: standard output)");

  auto* ptr = app.add_subcommand("pointer", "Exact pointer simulation over a coupling ladder");
  ptr->add_option("--g-ladder", st.g_ladder, "Comma list of couplings (default 1e-2,1e-3,1e-4)");
  ptr->add_option("--meter-points", st.meter_points, "Meter grid size (power of two >= 16)");
  ptr->add_option("--fixture", st.fixture, "anomalous, complex or expectation");
  ptr->add_option("--hbar", st.hbar, "Reduced Planck constant");
  ptr->add_option("--format", st.format, "json or csv");
  ptr->add_option("--out", st.out, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*sweep) {
      wm::SweepConfig config;
      if (!sf.config_path.empty()) config = wm::sweep_config_from_json(read_config(sf.config_path), config);
      if (o_rel->count()) {
        config.relations.clear();
        for (const auto& r : split(sf.relations)) config.relations.push_back(wm::relation_from_string(r));
      }
      if (o_dims->count()) config.dims = parse_dims(sf.dims);
      if (o_trials->count()) config.trials = sf.trials;
      if (o_seed->count()) config.seed = wm::Seed{sf.seed};
      if (o_tol->count()) config.tolerances.relation = sf.tolerance;
      if (o_hbar->count()) config.hbar = sf.hbar;
      if (o_psibar->count()) config.psibar_mode = wm::psibar_mode_from_string(sf.psibar);
      if (o_format->count()) config.format = parse_format(sf.format);
      if (o_out->count()) config.out = sf.out;
      if (o_workers->count()) config.workers = sf.workers;
      const wm::ReportSet set = wm::run_sweep(config);
      wm::emit_report(set, config.format, config.out);
      summarize("sweep", set.aggregates.report_count, set.aggregates.check_count, set.aggregates.failure_count);
      return set.aggregates.failure_count == 0 ? 0 : kExitFailures;
    }
    if (*fixtures) {
      const wm::ReportSet set = wm::run_fixtures();
      wm::emit_report(set, parse_format(fx_format), fx_out);
      summarize("fixtures", set.aggregates.report_count, set.aggregates.check_count, set.aggregates.failure_count);
      return set.aggregates.failure_count == 0 ? 0 : kExitFailures;
    }
    const wm::ReportFormat format = parse_format(st.format);
    if (*cv) {
      wm::CVStudyConfig config;
      config.grid_points = st.grid_points;
      config.hbar = st.hbar;
      config.state = wm::cv_state_from_string(st.state);
      if (!st.widths.empty()) {
        config.widths.clear();
        for (const auto& w : split(st.widths)) config.widths.push_back(parse_number(w, "widths"));
      }
      const wm::CVStudy s = wm::run_cv_study(config);
      write_text(format == wm::ReportFormat::json ? wm::dump_json(wm::to_json(s)) + "\n" : wm::render_csv(s),
                 st.out);
      const std::size_t failures = wm::failure_count(s.checks);
      summarize("cv-study", s.table.rows.size(), s.checks.size(), failures);
      return failures == 0 ? 0 : kExitFailures;
    }
    if (*ptr) {
      std::vector<double> ladder{1e-2, 1e-3, 1e-4};
      if (!st.g_ladder.empty()) {
        ladder.clear();
        for (const auto& g : split(st.g_ladder)) ladder.push_back(parse_number(g, "g_ladder"));
      }
      const wm::PointerStudy s =
          wm::run_pointer_study(wm::pointer_fixture_from_string(st.fixture), ladder, st.meter_points, st.hbar);
      write_text(format == wm::ReportFormat::json ? wm::dump_json(wm::to_json(s)) + "\n" : wm::render_csv(s),
                 st.out);
      const std::size_t failures = wm::failure_count(s.checks);
      summarize("pointer", s.rows.size(), s.checks.size(), failures);
      return failures == 0 ? 0 : kExitFailures;
    }
  } catch (const std::exception& e) {
    std::cerr << "wmverify: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
