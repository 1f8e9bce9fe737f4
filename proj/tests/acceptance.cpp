// Acceptance harness: one PASS/FAIL line per criterion, followed by
// indented diagnostics. Exit status is 0 when every failing criterion is
// listed in --expect-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "error.hpp"
#include "statistics.hpp"
#include "suites.hpp"

using namespace periods;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> notes;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GroupRep default_rep() { return schottky_sl2(4.0, std::numbers::pi / 4); }

std::vector<Functional> two_functionals(int d) { return {Functional::length(d), Functional::chi(d, 1)}; }

CollectOptions collect_opts(int max_len, int workers, double r = 1.2) {
  CollectOptions o;
  o.max_len = max_len;
  o.workers = workers;
  o.r = r;
  o.eps = 0.05;
  o.limits.class_budget = 10'000'000;
  return o;
}

// Criteria 1 and 2 share one pass over the suites.
struct IdentityRun {
  std::vector<std::pair<std::string, SuiteResult>> suites;
  SuiteResult weyl;
  double seconds = 0.0;
};

const IdentityRun& identity_run(std::uint64_t seed) {
  static std::optional<IdentityRun> run;
  if (run) return *run;
  run.emplace();
  run->weyl.name = "weyl_determinant";
  run->weyl.tolerance = kIdentityTolerance;
  const auto t0 = std::chrono::steady_clock::now();
  for (int d : {2, 3, 4}) {
    const std::string scope = "d=" + std::to_string(d);
    run->suites.emplace_back(scope, cocycle_suite(d, 1000, seed, &run->weyl));
    run->suites.emplace_back(scope, gromov_cocycle_suite(d, 1000, seed, &run->weyl));
    run->suites.emplace_back(scope, period_identity_suite(d, 1000, seed, &run->weyl));
  }
  for (auto& s : class_suites(default_rep(), 10, seed, &run->weyl)) run->suites.emplace_back("classes<=10", s);
  run->seconds = seconds_since(t0);
  return *run;
}

Outcome criterion_identities(std::uint64_t seed) {
  const auto& run = identity_run(seed);
  Outcome out;
  double worst = 0.0;
  bool all = true;
  for (const auto& [scope, s] : run.suites) {
    worst = std::max(worst, s.max_residual);
    all = all && s.max_residual < 1e-8;
    out.notes.push_back(fmt("%-12s %-26s n=%-6zu max=%.3g", scope.c_str(), s.name.c_str(), s.instances,
                            s.max_residual));
  }
  out.pass = all && run.seconds < 60.0;
  out.summary = fmt("max residual %.3g (< 1e-8) over %zu suites, %.1f s (< 60 s)", worst, run.suites.size(),
                    run.seconds);
  return out;
}

Outcome criterion_weyl(std::uint64_t seed) {
  const auto& run = identity_run(seed);
  Outcome out;
  out.pass = run.weyl.max_residual < 1e-8 && run.weyl.instances > 0;
  out.summary = fmt("max violation %.3g (< 1e-8) over %zu spectral records", run.weyl.max_residual,
                    run.weyl.instances);
  if (!out.pass) out.notes.push_back("worst: " + run.weyl.worst.label);
  return out;
}

Outcome criterion_power_limit(std::uint64_t seed) {
  const auto p = power_limit_suite(100, seed, 16, 32);
  Outcome out;
  out.pass = p.max_defect_high < 1e-5 && p.improved >= 95;
  out.summary = fmt("max defect at n=32 %.3g (< 1e-5), improved over n=16 in %zu/%zu (>= 95)", p.max_defect_high,
                    p.improved, p.elements);
  return out;
}

// Criteria 4 and 5 share the max_len 13 dataset.
const Dataset& schottky13(int workers) {
  static std::optional<Dataset> data;
  static double seconds = 0.0;
  if (!data) {
    const auto t0 = std::chrono::steady_clock::now();
    data = collect(default_rep(), two_functionals(2), collect_opts(13, workers));
    seconds = seconds_since(t0);
    std::printf("  (collected %zu classes up to length 13 with %d workers in %.1f s)\n", data->records.size(),
                workers, seconds);
  }
  return *data;
}

Outcome criterion_normalization(int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset& data = schottky13(workers);
  const auto grid = default_t_grid(data, 0);
  const GrowthFit fit = count_and_fit(data, 0, grid);
  const double secs = seconds_since(t0);
  Outcome out;
  const std::size_t n = fit.normalization.size();
  bool in_range = true;
  bool approaching = true;
  std::string tail;
  for (std::size_t i = n - 3; i < n; ++i) {
    const double v = fit.normalization[i];
    in_range = in_range && v >= 0.5 && v <= 2.0;
    if (i > n - 3) approaching = approaching && std::abs(v - 1.0) < std::abs(fit.normalization[i - 1] - 1.0);
    tail += fmt("%s%.4f", tail.empty() ? "" : ", ", v);
  }
  out.pass = fit.h_hat > 0.0 && in_range && approaching && secs <= 300.0 && data.records.size() <= 10'000'000;
  out.summary = fmt("h=%.4f, last three h t exp(-h t) N(t) = [%s], %s distance to 1, %.1f s", fit.h_hat,
                    tail.c_str(), approaching ? "decreasing" : "NOT decreasing", secs);
  for (std::size_t i = 0; i < n; ++i) {
    out.notes.push_back(fmt("t=%.4f N=%llu norm=%.4f", fit.t_grid[i], static_cast<unsigned long long>(fit.counts[i]),
                            fit.normalization[i]));
  }
  return out;
}

Outcome criterion_proximal(int workers) {
  const Dataset& data = schottky13(workers);
  const auto grid = default_t_grid(data, 0);
  const GrowthFit fit = count_and_fit(data, 0, grid);
  const auto pf = proximal_fraction(data, 0, grid, fit.h_hat);
  Outcome out;
  const auto& last = pf.points.back();
  out.pass = last.fraction > 0.99;
  out.summary = fmt("(r, eps) = (1.2, 0.05): proximal fraction at final t=%.3f is %.4f (%llu/%llu, need > 0.99)",
                    last.t, last.fraction, static_cast<unsigned long long>(last.proximal),
                    static_cast<unsigned long long>(last.total));
  // Which classes miss, and how far r would have to move.
  double worst_r = 1.0;
  std::map<std::string, int> clauses;
  for (const auto& rec : data.records) {
    if (rec.jordan_period[0] > last.t || rec.cert.is_proximal) continue;
    worst_r = std::max(worst_r, rec.cert.r_value);
    ++clauses[proximality_clause_name(rec.cert.failing_clause)];
  }
  for (const auto& [clause, count] : clauses) out.notes.push_back(fmt("failing clause %s: %d classes", clause.c_str(), count));
  out.notes.push_back(fmt("largest r_value among failing classes: %.4f", worst_r));
  const Dataset wider = collect(default_rep(), two_functionals(2), collect_opts(13, workers, 1.3));
  const auto pf13 = proximal_fraction(wider, 0, grid, fit.h_hat);
  out.notes.push_back(fmt("with r=1.3 the final fraction is %.4f", pf13.points.back().fraction));
  return out;
}

std::string clt_line(const CltReport& c) {
  std::string ks;
  for (const auto& p : c.points) ks += fmt("%s%.4f", ks.empty() ? "" : ", ", p.ks);
  return fmt("%s: L=%.4f sigma=%.4f KS over grid [%s]", observable_name(c.observable), c.L_hat, c.sigma_hat,
             ks.c_str());
}

// Generic Zariski-dense pair in SL(3,R); the criterion's sym^2 image is not.
GroupRep generic_sl3() {
  auto plane = [](int i, int j, double a) {
    Mat m = Mat::Identity(3, 3);
    m(i, i) = std::cos(a);
    m(i, j) = -std::sin(a);
    m(j, i) = std::sin(a);
    m(j, j) = std::cos(a);
    return m;
  };
  const Mat r = plane(0, 1, 0.7) * plane(1, 2, 0.9) * plane(0, 2, 1.1);
  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 5.0;
  d(1, 1) = 0.8;
  d(2, 2) = 0.25;
  const Mat di = Eigen::MatrixXd(d).inverse();
  return GroupRep(2, {d, r * d * r.transpose()}, {di, r * di * r.transpose()}, "generic_sl3");
}

Outcome criterion_clt(int workers) {
  Outcome out;
  const GroupRep rep = sym_power(default_rep(), 2);
  const Dataset data = collect(rep, two_functionals(3), collect_opts(12, workers));
  const auto grid = default_t_grid(data, 0);
  const GrowthFit fit = count_and_fit(data, 0, grid);
  out.notes.push_back(fmt("sym^2 dataset: %zu classes, h=%.4f", data.records.size(), fit.h_hat));
  try {
    const CltReport a = clt_report(data, 0, 1, Observable::jordan, grid, fit.h_hat);
    const CltReport b = clt_report(data, 0, 1, Observable::cartan, grid, fit.h_hat);
    const auto& last = a.points.back();
    const std::size_t n = a.points.size();
    bool settling = true;
    for (std::size_t i = n - 2; i < n; ++i) settling = settling && a.points[i].ks <= a.points[i - 1].ks + 0.03;
    const double m1 = last.intervals[0].empirical;
    const double m2 = last.intervals[1].empirical;
    out.pass = last.ks < 0.15 && settling && std::abs(m1 - 0.6827) <= 0.1 && std::abs(m2 - 0.9545) <= 0.1 &&
               std::abs(b.points.back().ks - last.ks) <= 0.03;
    out.summary = fmt("KS %.4f (< 0.15), mass(-1,1) %.4f, mass(-2,2) %.4f, cartan KS %.4f", last.ks, m1, m2,
                      b.points.back().ks);
    out.notes.push_back(clt_line(a));
    out.notes.push_back(clt_line(b));
  } catch (const periods::Error& e) {
    out.pass = false;
    out.summary = std::string(error_code_name(e.code())) + ": " + e.what();
  }
  // chi_1 and lambda_1 - lambda_3 are proportional on the sym^2 image, so
  // the observable carries no fluctuation; a generic pair shows the harness
  // itself at this scale.
  const Dataset generic = collect(generic_sl3(), two_functionals(3), collect_opts(12, workers));
  const auto ggrid = default_t_grid(generic, 0);
  const GrowthFit gfit = count_and_fit(generic, 0, ggrid);
  try {
    const CltReport g = clt_report(generic, 0, 1, Observable::jordan, ggrid, gfit.h_hat);
    out.notes.push_back("generic SL(3) pair, max_len 12: " + clt_line(g));
  } catch (const periods::Error& e) {
    out.notes.push_back(std::string("generic SL(3) pair: ") + e.what());
  }
  return out;
}

Outcome criterion_synthetic(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  const Dataset data = synthetic_dataset(spec);
  const auto order = data.functional_index("order");
  const auto obs = data.functional_index("obs");
  const auto grid = default_t_grid(data, order);
  const GrowthFit fit = count_and_fit(data, order, grid);
  const CltReport c = clt_report(data, order, obs, Observable::jordan, grid, fit.h_hat);
  const double ks = c.points.back().ks;
  Outcome out;
  out.pass = std::abs(c.L_hat - spec.L) <= 0.1 * spec.L && std::abs(c.sigma_hat - spec.sigma) <= 0.1 * spec.sigma &&
             std::abs(fit.h_hat - spec.h) <= 0.05 * spec.h && ks < 0.05;
  out.summary = fmt("h=%.4f (planted %.1f, 5%%), L=%.4f (planted %.1f, 10%%), sigma=%.4f (planted %.2f, 10%%), KS %.4f "
                    "(< 0.05)",
                    fit.h_hat, spec.h, c.L_hat, spec.L, c.sigma_hat, spec.sigma, ks);
  return out;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = read_file(entry.path());
  }
  return files;
}

Outcome criterion_determinism(std::uint64_t seed, const fs::path& scratch) {
  auto run_all = [&](int workers, const fs::path& out_dir) {
    fs::remove_all(out_dir);
    RunConfig c;
    c.seed = seed;
    c.workers = workers;
    c.out = out_dir.string();
    for (const char* cmd : {"enumerate", "spectra", "verify", "clt"}) {
      try {
        run_command(c, cmd);
      } catch (const periods::Error&) {
        // Failure reports are outputs too; they are compared below.
      }
    }
    return snapshot(out_dir);
  };
  const auto one = run_all(1, scratch / "workers1");
  const auto four = run_all(4, scratch / "workers4");
  Outcome out;
  std::vector<std::string> differing;
  for (const auto& [name, bytes] : one) {
    const auto it = four.find(name);
    if (it == four.end() || it->second != bytes) differing.push_back(name);
  }
  for (const auto& [name, bytes] : four) {
    if (!one.count(name)) differing.push_back(name);
  }
  out.pass = differing.empty() && !one.empty();
  std::string names;
  for (const auto& [name, bytes] : one) names += (names.empty() ? "" : ", ") + name;
  out.summary = fmt("%zu files from enumerate/spectra/verify/clt, workers 1 vs 4: %s", one.size(),
                    differing.empty() ? "byte-identical" : "DIFFER");
  out.notes.push_back(names);
  for (const auto& d : differing) out.notes.push_back("differs: " + d);
  return out;
}

std::set<int> parse_list(const std::string& text) {
  std::set<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string expect_fail;
  std::string only;
  int workers = 8;
  std::uint64_t seed = 1;
  std::string scratch = (fs::temp_directory_path() / "periods_acceptance").string();
  app.add_option("--expect-fail", expect_fail, "comma-separated criteria whose failure is known");
  app.add_option("--only", only, "comma-separated criteria to run");
  app.add_option("--workers", workers, "worker threads for dataset collection");
  app.add_option("--seed", seed, "seed for random suites and the synthetic dataset");
  app.add_option("--scratch", scratch, "directory for determinism outputs");
  CLI11_PARSE(app, argc, argv);

  const std::set<int> expected = parse_list(expect_fail);
  const std::set<int> selected = parse_list(only);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"identity suites", [&] { return criterion_identities(seed); }},
      {"weyl / determinant", [&] { return criterion_weyl(seed); }},
      {"power limit", [&] { return criterion_power_limit(seed); }},
      {"prime-orbit normalization", [&] { return criterion_normalization(workers); }},
      {"proximal fraction", [&] { return criterion_proximal(workers); }},
      {"clt harness", [&] { return criterion_clt(workers); }},
      {"synthetic oracle", [&] { return criterion_synthetic(seed); }},
      {"determinism", [&] { return criterion_determinism(seed, scratch); }},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    const bool known = expected.count(id) > 0;
    std::printf("%s criterion %d (%s): %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.summary.c_str(), !o.pass && known ? " [expected]" : "");
    for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
    std::fflush(stdout);
    if (!o.pass && !known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
