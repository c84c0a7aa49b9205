#include "weakmeas/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <thread>

#include "weakmeas/complementarity.hpp"
#include "weakmeas/errors.hpp"
#include "weakmeas/uncertainty.hpp"

namespace wm {

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::config, field + ": " + what);
}

template <typename T>
T get_field(const nlohmann::json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_error(path, e.what());
  }
}

constexpr std::uint64_t kPsibarStream = 0x7073696261720001ULL;

}  // namespace

void SweepConfig::validate() const {
  if (relations.empty()) config_error("relations", "at least one relation is required");
  for (auto r : relations)
    if (r == RelationId::conjugate_pair)
      config_error("relations", "conjugate_pair is exercised by the fixture suite, not by random sweeps");
  if (dims.empty()) config_error("dims", "at least one dimension is required");
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (dims[i] < 2 || dims[i] > 512)
      config_error("dims[" + std::to_string(i) + "]", "dimensions must lie in [2, 512]");
  if (trials < 1) config_error("trials", "must be >= 1");
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(tolerances.construction)) config_error("tolerances.construction", "must be > 0");
  if (!positive(tolerances.spectral)) config_error("tolerances.spectral", "must be > 0");
  if (!(tolerances.relation >= 0.0) || !std::isfinite(tolerances.relation))
    config_error("tolerances.relation", "must be >= 0");
  if (!positive(tolerances.degeneracy)) config_error("tolerances.degeneracy", "must be > 0");
  if (!positive(tolerances.overlap)) config_error("tolerances.overlap", "must be > 0");
  if (!positive(tolerances.reality)) config_error("tolerances.reality", "must be > 0");
  if (!positive(hbar)) config_error("hbar", "must be > 0");
  if (psibar_mode == PsibarMode::supplied || psibar_mode == PsibarMode::none)
    config_error("psibar", "sweeps support 'random' or 'optimal'");
  if (cv_grid_points < 16 || (cv_grid_points & (cv_grid_points - 1)) != 0)
    config_error("cv.grid_points", "must be a power of two >= 16");
  if (!(cv_x_max > cv_x_min)) config_error("cv.x_max", "must exceed cv.x_min");
  for (std::size_t i = 0; i < g_ladder.size(); ++i)
    if (!positive(g_ladder[i])) config_error("g_ladder[" + std::to_string(i) + "]", "must be > 0");
}

nlohmann::ordered_json to_json(const SweepConfig& c) {
  nlohmann::ordered_json j;
  auto& rel = j["relations"] = nlohmann::ordered_json::array();
  for (auto r : c.relations) rel.push_back(std::string(to_string(r)));
  j["dims"] = c.dims;
  j["trials"] = c.trials;
  j["seed"] = c.seed.value;
  j["tolerances"] = {{"construction", c.tolerances.construction}, {"spectral", c.tolerances.spectral},
                     {"relation", c.tolerances.relation},         {"degeneracy", c.tolerances.degeneracy},
                     {"overlap", c.tolerances.overlap},           {"reality", c.tolerances.reality}};
  j["hbar"] = c.hbar;
  j["psibar"] = std::string(to_string(c.psibar_mode));
  j["cv"] = {{"grid_points", c.cv_grid_points}, {"x_min", c.cv_x_min}, {"x_max", c.cv_x_max}};
  j["g_ladder"] = c.g_ladder;
  j["format"] = c.format == ReportFormat::json ? "json" : "csv";
  j["out"] = c.out;
  j["workers"] = c.workers;
  return j;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig c) {
  if (!j.is_object()) config_error("<root>", "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "relations") {
      c.relations.clear();
      for (std::size_t i = 0; i < value.size(); ++i)
        c.relations.push_back(relation_from_string(get_field<std::string>(value[i], "relations")));
    } else if (key == "dims") {
      c.dims = get_field<std::vector<int>>(value, key);
    } else if (key == "trials") {
      c.trials = get_field<int>(value, key);
    } else if (key == "seed") {
      c.seed = Seed{get_field<std::uint64_t>(value, key)};
    } else if (key == "tolerance") {
      c.tolerances.relation = get_field<double>(value, key);
    } else if (key == "tolerances") {
      for (const auto& [tk, tv] : value.items()) {
        const std::string path = "tolerances." + tk;
        const double v = get_field<double>(tv, path);
        if (tk == "construction") c.tolerances.construction = v;
        else if (tk == "spectral") c.tolerances.spectral = v;
        else if (tk == "relation") c.tolerances.relation = v;
        else if (tk == "degeneracy") c.tolerances.degeneracy = v;
        else if (tk == "overlap") c.tolerances.overlap = v;
        else if (tk == "reality") c.tolerances.reality = v;
        else config_error(path, "unknown tolerance");
      }
    } else if (key == "hbar") {
      c.hbar = get_field<double>(value, key);
    } else if (key == "psibar") {
      c.psibar_mode = psibar_mode_from_string(get_field<std::string>(value, key));
    } else if (key == "cv") {
      for (const auto& [ck, cv] : value.items()) {
        const std::string path = "cv." + ck;
        if (ck == "grid_points") c.cv_grid_points = get_field<Eigen::Index>(cv, path);
        else if (ck == "x_min") c.cv_x_min = get_field<double>(cv, path);
        else if (ck == "x_max") c.cv_x_max = get_field<double>(cv, path);
        else config_error(path, "unknown key");
      }
    } else if (key == "g_ladder") {
      c.g_ladder = get_field<std::vector<double>>(value, key);
    } else if (key == "format") {
      const auto f = get_field<std::string>(value, key);
      if (f == "json") c.format = ReportFormat::json;
      else if (f == "csv") c.format = ReportFormat::csv;
      else config_error(key, "expected 'json' or 'csv'");
    } else if (key == "out") {
      c.out = get_field<std::string>(value, key);
    } else if (key == "workers") {
      c.workers = get_field<unsigned>(value, key);
    } else {
      config_error(key, "unknown configuration key");
    }
  }
  return c;
}

Aggregates compute_aggregates(const std::vector<ReportRow>& rows, const std::vector<CheckResult>& checks,
                              double tolerance, std::size_t rejections) {
  Aggregates a;
  a.report_count = rows.size();
  a.check_count = checks.size();
  a.rejections = rejections;
  a.min_slack = rows.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  std::size_t tight = 0;
  for (const auto& row : rows) {
    const auto& r = row.report;
    a.min_slack = std::min(a.min_slack, r.slack);
    a.max_imag_residue = std::max(a.max_imag_residue, r.imag_residue);
    if (!r.verified(tolerance)) ++a.failure_count;
    if (r.tight) ++tight;
  }
  for (const auto& c : checks)
    if (!c.passed) ++a.failure_count;
  a.tightness_rate = rows.empty() ? 0.0 : static_cast<double>(tight) / static_cast<double>(rows.size());
  return a;
}

TrialInputs generate_trial(Seed master, int dim, int trial, const Tolerances& tol) {
  const Seed sub = derive_seed(master, static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(trial));
  Rng rng(sub);
  std::size_t rejections = 0;
  StateVector pre = rng.haar_state(dim);
  StateVector post = rng.haar_state(dim);
  while (!(std::norm(braket(post.vec(), pre.vec())) > tol.overlap)) {
    ++rejections;
    post = rng.haar_state(dim);
  }
  Matrix a = rng.hermitian(dim, 1.0);
  Matrix b = rng.hermitian(dim, 1.0);
  StateVector pa = rng.haar_state(dim);
  StateVector pb = rng.haar_state(dim);
  while (!(std::abs(braket(pa.vec(), pre.vec())) > tol.overlap) ||
         !(std::abs(braket(pb.vec(), pre.vec())) > tol.overlap)) {
    ++rejections;
    pa = rng.haar_state(dim);
    pb = rng.haar_state(dim);
  }
  const Seed psibar_seed = derive_seed(sub, kPsibarStream, 0);
  return TrialInputs{sub, std::move(pre), std::move(post), std::move(a), std::move(b), psibar_seed,
                     std::move(pa), std::move(pb), rejections};
}

namespace {

struct TrialOutcome {
  std::vector<ReportRow> rows;
  std::size_t rejections = 0;
};

TrialOutcome run_trial(const SweepConfig& config, int dim, int trial) {
  const Tolerances& tol = config.tolerances;
  TrialInputs in = generate_trial(config.seed, dim, trial, tol);
  const PPSEnsemble ens(in.pre, in.post, tol);
  const Observable a(in.a, tol);
  const Observable b(in.b, tol);
  PsibarChoice choice = OptimalPsibar{};
  if (config.psibar_mode == PsibarMode::random) choice = RandomPsibar{in.psibar_seed};

  TrialOutcome out;
  out.rejections = in.rejections;
  for (auto id : config.relations) {
    RelationReport r;
    switch (id) {
      case RelationId::ur1: r = ur1_check(ens, a, b, choice, tol); break;
      case RelationId::ur2: r = ur2_check(ens, a, b, choice, tol); break;
      case RelationId::mp1: r = mp1_check(in.pre, a, b, choice, tol); break;
      case RelationId::mp2: r = mp2_check(in.pre, a, b, choice, tol); break;
      case RelationId::robertson: r = robertson_check(in.pre, a, b, tol); break;
      case RelationId::complementarity: r = complementarity_check(in.pre, in.proj_a, in.proj_b, tol); break;
      case RelationId::conjugate_pair: throw Error(ErrorKind::config, "conjugate_pair is not sweepable");
    }
    out.rows.push_back({dim, trial, in.sub_seed.value, std::move(r)});
  }
  return out;
}

}  // namespace

ReportSet run_sweep(const SweepConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  struct Task {
    int dim;
    int trial;
  };
  std::vector<Task> tasks;
  tasks.reserve(config.dims.size() * static_cast<std::size_t>(config.trials));
  for (int d : config.dims)
    for (int t = 0; t < config.trials; ++t) tasks.push_back({d, t});

  std::vector<TrialOutcome> outcomes(tasks.size());
  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks.size()));

  // Strided task assignment; results land at their task index so the output
  // order never depends on scheduling.
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < tasks.size(); i += workers)
        outcomes[i] = run_trial(config, tasks[i].dim, tasks[i].trial);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ReportSet set;
  set.config = to_json(config);
  set.tolerance = config.tolerances.relation;
  std::size_t rejections = 0;
  for (auto& o : outcomes) {
    rejections += o.rejections;
    for (auto& r : o.rows) set.rows.push_back(std::move(r));
  }
  set.aggregates = compute_aggregates(set.rows, set.checks, set.tolerance, rejections);
  set.timestamp = now_timestamp();
  set.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return set;
}

std::string now_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace wm
