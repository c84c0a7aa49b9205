// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.
// Usage: acceptance <path-to-wmverify>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "weakmeas/complementarity.hpp"
#include "weakmeas/fock.hpp"
#include "weakmeas/harness.hpp"
#include "weakmeas/pointer.hpp"
#include "weakmeas/studies.hpp"
#include "weakmeas/uncertainty.hpp"

using namespace wm;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<int> kDims{2, 3, 4, 5, 6, 7, 8};
constexpr int kTrials = 1000;
const Seed kSeed{20140826};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

template <typename F>
void for_each_trial(F&& f) {
  for (int dim : kDims)
    for (int t = 0; t < kTrials; ++t) f(dim, t, generate_trial(kSeed, dim, t));
}

SweepConfig sweep_of(RelationId id, PsibarMode mode) {
  SweepConfig c;
  c.relations = {id};
  c.psibar_mode = mode;
  c.seed = kSeed;
  return c;
}

Outcome weak_values() {
  const auto start = Clock::now();
  double worst_value = 0.0, worst_action = 0.0;
  for_each_trial([&](int, int, const TrialInputs& in) {
    const PPSEnsemble e(in.pre, in.post);
    const Observable a(in.a);
    const WeakOperator w = weak_operator(e, a);
    const oracle::V& psi = in.pre.vec();
    const oracle::V& phi = in.post.vec();
    const Complex ref = oracle::bra_ket(phi, in.a, psi) / oracle::bra_ket(phi, psi);
    const Complex mean = oracle::bra_ket(psi, w.matrix, psi);
    worst_value = std::max(worst_value, std::abs(mean - ref) / std::max(1.0, std::abs(ref)));
    const WeakOperatorResiduals r = weak_operator_residuals(w);
    worst_action = std::max({worst_action, r.pre_action, r.post_action});
  });
  const double elapsed = seconds_since(start);
  return {worst_value <= 1e-12 && worst_action <= 1e-10 && elapsed < 5.0,
          "max relative weak-value error " + fmt(worst_value) + ", max action residual " + fmt(worst_action) +
              ", " + fmt(elapsed) + " s"};
}

Outcome first_relation() {
  const ReportSet random = run_sweep(sweep_of(RelationId::ur1, PsibarMode::random));
  const ReportSet optimal = run_sweep(sweep_of(RelationId::ur1, PsibarMode::optimal));
  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto* set : {&random, &optimal})
    for (const auto& row : set->rows) min_slack = std::min(min_slack, row.report.slack);
  double worst_abs = 0.0, worst_scaled = 0.0;
  std::size_t over = 0;
  for (const auto& row : optimal.rows) {
    const double s = std::abs(row.report.slack);
    worst_abs = std::max(worst_abs, s);
    worst_scaled = std::max(worst_scaled, s / relation_scale(row.report.lhs));
    if (s > 1e-9) ++over;
  }
  double worst_parallelogram = 0.0;
  for_each_trial([&](int, int, const TrialInputs& in) {
    worst_parallelogram = std::max(
        worst_parallelogram, parallelogram_identity_check(PPSEnsemble(in.pre, in.post), Observable(in.a), Observable(in.b)));
  });
  return {min_slack >= -1e-9 && worst_abs <= 1e-9 && worst_parallelogram <= 1e-10,
          std::to_string(random.rows.size() + optimal.rows.size()) + " reports, min slack " + fmt(min_slack) +
              ", optimal |slack| max " + fmt(worst_abs) + " (" + std::to_string(over) + " above 1e-9; " +
              fmt(worst_scaled) + " relative to max(1,lhs)), parallelogram residual " + fmt(worst_parallelogram)};
}

Outcome second_relation() {
  const ReportSet random = run_sweep(sweep_of(RelationId::ur2, PsibarMode::random));
  const ReportSet optimal = run_sweep(sweep_of(RelationId::ur2, PsibarMode::optimal));
  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto* set : {&random, &optimal})
    for (const auto& row : set->rows) min_slack = std::min(min_slack, row.report.slack);
  double worst = 0.0, worst_scaled = 0.0;
  std::size_t i = 0;
  for_each_trial([&](int, int, const TrialInputs& in) {
    const RelationReport& r = optimal.rows[i++].report;
    const long double half = 0.5L * oracle::weak_sum_variance_extended(in.pre.vec(), in.post.vec(), in.a, in.b);
    const double d = static_cast<double>(std::abs(r.rhs_total - half));
    worst = std::max(worst, d);
    worst_scaled = std::max(worst_scaled, d / relation_scale(r.lhs));
  });
  return {min_slack >= -1e-9 && worst <= 1e-10,
          std::to_string(random.rows.size() + optimal.rows.size()) + " reports, min slack " + fmt(min_slack) +
              ", optimal rhs vs half the variance of the sum " + fmt(worst) + " (" + fmt(worst_scaled) +
              " relative to max(1,lhs))"};
}

Outcome reductions() {
  double worst = 0.0;
  for_each_trial([&](int, int, const TrialInputs& in) {
    const PPSEnsemble same(in.pre, in.pre);
    const Observable a(in.a), b(in.b);
    const PsibarChoice c = RandomPsibar{in.psibar_seed};
    const auto compare = [&](const RelationReport& w, const RelationReport& h) {
      if (w.rhs_terms.size() != h.rhs_terms.size()) {
        worst = std::numeric_limits<double>::infinity();
        return;
      }
      worst = std::max({worst, std::abs(w.lhs - h.lhs), std::abs(w.rhs_total - h.rhs_total)});
      for (std::size_t k = 0; k < w.rhs_terms.size(); ++k) {
        if (w.rhs_terms[k].name != h.rhs_terms[k].name) worst = std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(w.rhs_terms[k].value - h.rhs_terms[k].value));
      }
    };
    for (Sign s : {Sign::plus, Sign::minus})
      compare(ur1_check(same, a, b, c, kDefaultTolerances, s), mp1_check(in.pre, a, b, c, kDefaultTolerances, s));
    compare(ur2_check(same, a, b, c), mp2_check(in.pre, a, b, c));
  });
  const TruncatedFockPair f = TruncatedFockPair::build(40, 1.0);
  const StateVector g = f.number_state(0);
  const RelationReport fock = conjugate_pair_check(f, PPSEnsemble(g, g), OptimalPsibar{});
  const bool fock_ok = std::abs(fock.lhs - 1.0) <= 1e-8 && std::abs(fock.slack) <= 1e-8;
  return {worst <= 1e-12 && fock_ok, "max term difference " + fmt(worst) + ", Fock ground lhs - hbar " +
                                         fmt(fock.lhs - 1.0) + ", slack " + fmt(fock.slack)};
}

Outcome nontriviality() {
  Rng rng(kSeed);
  int hits = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Observable a(rng.hermitian(2, 1.0)), b(rng.hermitian(2, 1.0));
    const StateVector psi(a.spectrum().eigenvectors.col(t % 2));
    const RelationReport rob = robertson_check(psi, a, b);
    const RelationReport ur1 = ur1_check(PPSEnsemble(psi, psi), a, b, RandomPsibar{derive_seed(kSeed, 5, static_cast<std::uint64_t>(t))});
    if (std::abs(rob.rhs_total) <= 1e-12 && ur1.rhs_total > 1e-6) ++hits;
  }
  const double rate = static_cast<double>(hits) / kTrials;
  return {hits >= 1 && rate >= 0.05,
          std::to_string(hits) + "/" + std::to_string(kTrials) + " eigenstate trials (" + fmt(100.0 * rate) +
              "%) with a vanishing commutator bound and a positive weak-value bound"};
}

Outcome complementarity() {
  Rng rng(Seed{kSeed.value + 6});
  double worst = 0.0, worst_imag = 0.0, worst_spread = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const int dim = 2 + pair % 7;
    const StateVector a = rng.haar_state(dim), b = rng.haar_state(dim);
    const double expected = std::norm(oracle::bra_ket(a.vec(), b.vec()));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int t = 0; t < 100; ++t) {
      const ProjectorWeakValuePair p = projector_weak_value_pair(rng.haar_state(dim), a, b);
      worst = std::max(worst, std::abs(p.product.real() - expected));
      worst_imag = std::max(worst_imag, std::abs(p.product.imag()));
      lo = std::min(lo, p.product.real());
      hi = std::max(hi, p.product.real());
    }
    worst_spread = std::max(worst_spread, hi - lo);
  }
  const double t = std::numbers::pi / 8.0;
  const ProjectorWeakValuePair anomaly = projector_weak_value_pair(
      StateVector(oracle::ket(std::cos(t), -std::sin(t))), StateVector::basis(2, 0), StateVector(oracle::ket(1, 1)));
  const bool anomaly_ok = std::abs(anomaly.wv_a) > 1.0 && anomaly.product.real() <= 1.0;
  return {worst <= 1e-10 && worst_imag <= 1e-10 && worst_spread <= 1e-10 && anomaly_ok,
          "product error " + fmt(worst) + ", imaginary part " + fmt(worst_imag) + ", spread over pre-selections " +
              fmt(worst_spread) + ", anomalous |wv_a| " + fmt(std::abs(anomaly.wv_a)) + " with product " +
              fmt(anomaly.product.real())};
}

Outcome anomalous_decomposition_check() {
  double worst_rec = 0.0, worst_spread = 0.0;
  for_each_trial([&](int, int, const TrialInputs& in) {
    const AnomalousDecomposition d = anomalous_decomposition(in.pre, in.proj_a, in.proj_b);
    const Complex wv = projector_weak_value_pair(in.pre, in.proj_a, in.proj_b).wv_a;
    const double pa = std::norm(oracle::bra_ket(in.proj_a.vec(), in.pre.vec()));
    worst_rec = std::max(worst_rec, std::abs(d.mean + d.anomalous - wv));
    worst_spread = std::max(worst_spread, std::abs(d.spread * d.spread - pa * (1.0 - pa)));
  });
  return {worst_rec <= 1e-10 && worst_spread <= 1e-12,
          "reconstruction " + fmt(worst_rec) + ", spread squared " + fmt(worst_spread)};
}

Outcome continuous_variables() {
  const CVStudy s = run_cv_study(CVStudyConfig{});
  double worst_full = 0.0, worst_product = 0.0;
  for (const auto& r : s.table.rows) {
    if (!r.both_full) continue;
    worst_full = std::max({worst_full, std::abs(r.wv_x - 1.0), std::abs(r.wv_p - 1.0)});
    worst_product = std::max(worst_product, r.deviation);
  }
  const CVGrid grid = CVGrid::build(512, -10.0, 10.0);
  const Complex half = cv_weak_value(grid, make_cv_state(grid, CVStateKind::gaussian),
                                     WindowProjector(grid, GridDomain::position, 5.0, 10.0), {GridDomain::momentum, 0.0});
  const auto& e = s.refinement_errors;
  const bool monotone = e.size() == 3 && e[1] < e[0] && e[2] < e[1];
  std::string errs;
  for (double v : e) errs += (errs.empty() ? "" : " > ") + fmt(v);
  return {s.idempotence_defect == 0.0 && worst_full <= 1e-8 && worst_product <= 1e-8 &&
              std::abs(half - 0.5) <= 1e-6 && monotone,
          "idempotence defect " + fmt(s.idempotence_defect) + ", full-window error " + fmt(worst_full) +
              ", product error " + fmt(worst_product) + ", half line " + fmt(std::abs(half - 0.5)) +
              ", refinement errors " + errs};
}

Outcome pointer() {
  // Qubit system coupled to a qubit meter against the dense exponential.
  Rng rng(Seed{kSeed.value + 9});
  double worst_joint = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Observable a(rng.hermitian(2, 1.0));
    const MeterSpec m = MeterSpec::finite(Observable(rng.hermitian(2, 1.0)), rng.haar_state(2));
    const StateVector psi = rng.haar_state(2);
    const double g = 0.05 * (t + 1);
    const JointState j = evolve_joint(psi, m, a, g);
    const oracle::V ref =
        oracle::expm(-oracle::I * g * oracle::kron(a.matrix(), m.coupling.matrix())) *
        oracle::kron(psi.vec(), m.initial.vec());
    worst_joint = std::max(worst_joint, (j.amplitudes - ref).norm());
  }
  const std::vector<double> ladder{1e-2, 1e-3, 1e-4};
  const PointerStudy anomalous = run_pointer_study(PointerFixture::anomalous, ladder);
  const PointerStudy complex = run_pointer_study(PointerFixture::complex_value, ladder);
  const auto near2 = [](double s) { return std::abs(s - 2.0) <= 0.2; };
  const bool slopes = near2(anomalous.pointer_slope) && near2(anomalous.probability_slope) &&
                      near2(complex.pointer_slope) && near2(complex.probability_slope);
  Complex estimate;
  for (const auto& r : anomalous.rows)
    if (r.g == 1e-3) estimate = r.estimate;
  const double est_error = std::abs(estimate - (1.0 + std::numbers::sqrt2));
  return {worst_joint <= 1e-12 && slopes && est_error <= 0.03,
          "joint error " + fmt(worst_joint) + ", pointer/probability slopes " + fmt(anomalous.pointer_slope) + "/" +
              fmt(anomalous.probability_slope) + " (real weak value), " + fmt(complex.pointer_slope) + "/" +
              fmt(complex.probability_slope) + " (complex weak value), estimate " + fmt(estimate.real()) +
              " error " + fmt(est_error)};
}

std::string strip_clock(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos && line.find("\"wall_clock_seconds\"") == std::string::npos)
      out += line + '\n';
  return out;
}

Outcome harness(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path given"};
  const auto path = std::filesystem::temp_directory_path() / "weakmeas_acceptance_sweep.json";
  const std::string cmd = "\"" + cli + "\" sweep --out \"" + path.string() + "\" 2>/dev/null";
  std::string runs[2];
  double slowest = 0.0;
  int codes[2] = {-1, -1};
  for (int i = 0; i < 2; ++i) {
    const auto start = Clock::now();
    const int status = std::system(cmd.c_str());
    slowest = std::max(slowest, seconds_since(start));
    codes[i] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    runs[i] = strip_clock(ss.str());
  }
  std::filesystem::remove(path);
  const bool identical = !runs[0].empty() && runs[0] == runs[1];
  return {identical && codes[0] == 0 && codes[1] == 0 && slowest < 60.0,
          std::string(identical ? "byte-identical" : "differing") + " reports (" +
              std::to_string(runs[0].size()) + " bytes), exit codes " + std::to_string(codes[0]) + "/" +
              std::to_string(codes[1]) + ", slowest run " + fmt(slowest) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"weak-value correctness", weak_values},
      {"first relation", first_relation},
      {"second relation", second_relation},
      {"equal-selection reductions", reductions},
      {"nontriviality on eigenstates", nontriviality},
      {"complementarity", complementarity},
      {"anomalous decomposition", anomalous_decomposition_check},
      {"continuous variables", continuous_variables},
      {"pointer simulation", pointer},
      {"harness determinism", [&] { return harness(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::cout << (o.passed ? "PASS " : "FAIL ") << i + 1 << ' ' << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << criteria.size() - failed << '/' << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
