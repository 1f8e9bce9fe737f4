#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "error.hpp"
#include "suites.hpp"

namespace periods {

namespace {

constexpr double kPowerLimitTolerance = 1e-5;
constexpr double kPowerLimitImprovedShare = 0.95;
constexpr double kHistogramWidth = 0.25;
constexpr double kHistogramEdge = 4.0;

std::filesystem::path out_dir(const RunConfig& c) { return std::filesystem::path(c.out); }

Json matrix_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(real_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json suite_json(const SuiteResult& s, const std::string& scope) {
  Json mats = Json::object();
  for (const auto& [name, m] : s.worst.matrices) mats[name] = matrix_json(m);
  return {{"name", s.name},
          {"scope", scope},
          {"tolerance", s.tolerance},
          {"instances", s.instances},
          {"max_residual", real_json(s.max_residual)},
          {"passed", s.passed()},
          {"worst", {{"label", s.worst.label}, {"level", s.worst.level}, {"matrices", mats}, {"words", s.worst.words}}}};
}

Json growth_json(const GrowthFit& g) {
  Json points = Json::array();
  for (std::size_t i = 0; i < g.t_grid.size(); ++i) {
    points.push_back({{"t", g.t_grid[i]}, {"count", g.counts[i]}, {"normalization", real_json(g.normalization[i])}});
  }
  return {{"mode", class_mode_name(g.mode)},
          {"h_hat", g.h_hat},
          {"h_stderr", real_json(g.h_stderr)},
          {"window", {{"t_lo", g.t_lo}, {"t_hi", g.t_hi}, {"points", g.window_points}}},
          {"points", points}};
}

Json clt_json(const CltReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    Json intervals = Json::array();
    for (const auto& m : p.intervals) {
      intervals.push_back(
          {{"a", real_json(m.a)}, {"b", real_json(m.b)}, {"empirical", m.empirical}, {"gaussian", m.gaussian}});
    }
    points.push_back({{"t", p.t},
                      {"count", p.count},
                      {"obs_mean", p.obs_mean},
                      {"obs_variance", p.obs_variance},
                      {"z_mean", p.z_mean},
                      {"z_variance", p.z_variance},
                      {"ks", p.ks},
                      {"normalization", real_json(p.normalization)},
                      {"intervals", intervals}});
  }
  return {{"order", r.order_name},
          {"observe", r.obs_name},
          {"observable", observable_name(r.observable)},
          {"self_conditioned", r.self_conditioned},
          {"h_hat", r.h_hat},
          {"L_hat", r.L_hat},
          {"sigma_hat", r.sigma_hat},
          {"mean_fit_rmse", r.mean_fit_rmse},
          {"variance_fit_rmse", r.variance_fit_rmse},
          {"order_obs_correlation", r.order_obs_correlation},
          {"points", points}};
}

Json error_json(const Error& e) { return {{"error", error_code_name(e.code())}, {"message", e.what()}}; }

// Runs `f`, storing either its JSON or the error; returns the error code.
template <typename F>
std::optional<ErrorCode> capture(Json& slot, F&& f) {
  try {
    slot = f();
    return std::nullopt;
  } catch (const Error& e) {
    slot = error_json(e);
    return e.code();
  }
}

Json defects_json(const std::vector<DefectSummary>& ds) {
  Json out = Json::array();
  for (const auto& d : ds) {
    out.push_back({{"t", d.t}, {"count", d.count}, {"max", d.max}, {"q50", d.q50}, {"q90", d.q90}, {"q99", d.q99}});
  }
  return out;
}

std::string histogram_csv(const std::vector<double>& samples, const std::string& hash) {
  std::string out = csv_header_comment(hash, "none");
  out += "bin_lo,bin_hi,count,fraction,gaussian_mass\n";
  const auto n = static_cast<double>(samples.size());
  const int bins = static_cast<int>(std::lround(2 * kHistogramEdge / kHistogramWidth));
  auto row = [&](double lo, double hi) {
    const auto count = std::count_if(samples.begin(), samples.end(), [&](double z) { return z >= lo && z < hi; });
    out += format_real(lo) + "," + format_real(hi) + "," + std::to_string(count) + "," +
           format_real(n > 0 ? static_cast<double>(count) / n : 0.0) + "," +
           format_real(gaussian_cdf_interval(lo, hi)) + "\n";
  };
  row(-INFINITY, -kHistogramEdge);
  for (int i = 0; i < bins; ++i) row(-kHistogramEdge + i * kHistogramWidth, -kHistogramEdge + (i + 1) * kHistogramWidth);
  row(kHistogramEdge, INFINITY);
  return out;
}

void write_dataset(const RunConfig& c, const Dataset& data, const std::string& letter_order) {
  const std::string hash = config_hash(c);
  write_file_atomic(out_dir(c) / "dataset.csv", dataset_csv(data, hash, letter_order));
  write_file_atomic(out_dir(c) / "dataset.meta.json",
                    dump_json(dataset_meta(data, hash, dataset_hash(c), canonical_text(c), letter_order)));
}

std::string dataset_letter_order(const Dataset& data) {
  return data.rank > 0 ? Alphabet(data.rank).letter_order() : "none";
}

}  // namespace

Json cmd_enumerate(const RunConfig& c) {
  if (c.family == "synthetic") fail(ErrorCode::invalid_config, "enumerate needs a matrix representation family");
  const GroupRep rep = build_representation(c);
  const auto classes = enumerate_classes(rep.alphabet(), c.max_len, c.mode, c.limits);
  const auto path = out_dir(c) / "classes.csv";
  write_file_atomic(path, classes_csv(classes, rep.alphabet(), config_hash(c)));
  return {{"command", "enumerate"}, {"classes", classes.size()}, {"path", path.string()}};
}

Dataset obtain_dataset(const RunConfig& c, bool* reused) {
  if (reused != nullptr) *reused = false;
  if (c.family == "synthetic") {
    SyntheticSpec spec = c.synthetic;
    spec.seed = c.seed;
    return synthetic_dataset(spec);
  }
  const GroupRep rep = build_representation(c);
  if (auto data = read_dataset(out_dir(c), dataset_hash(c))) {
    if (reused != nullptr) *reused = true;
    return std::move(*data);
  }
  Dataset data = collect(rep, build_functionals(c, rep.dim()), collect_options(c));
  write_dataset(c, data, rep.alphabet().letter_order());
  return data;
}

Json cmd_spectra(const RunConfig& c) {
  Dataset data;
  if (c.family == "synthetic") {
    data = obtain_dataset(c);
    write_dataset(c, data, dataset_letter_order(data));
  } else {
    const GroupRep rep = build_representation(c);
    data = collect(rep, build_functionals(c, rep.dim()), collect_options(c));
    write_dataset(c, data, rep.alphabet().letter_order());
  }
  return {{"command", "spectra"},
          {"records", data.records.size()},
          {"exceptional", data.exceptional_count()},
          {"path", (out_dir(c) / "dataset.csv").string()}};
}

Json cmd_verify(const RunConfig& c) {
  if (c.family == "synthetic") fail(ErrorCode::invalid_config, "verify needs a matrix representation family");
  // Validation of the representation happens here, before any suite runs.
  const GroupRep rep = build_representation(c);

  SuiteResult weyl;
  weyl.name = "weyl_determinant";
  weyl.tolerance = kIdentityTolerance;
  Json suites = Json::array();
  std::vector<SuiteResult> all;
  auto add = [&](const SuiteResult& s, const std::string& scope) {
    suites.push_back(suite_json(s, scope));
    all.push_back(s);
  };
  for (int d : c.verify_dims) {
    const std::string scope = "random d=" + std::to_string(d);
    add(cocycle_suite(d, c.verify_instances, c.seed, &weyl), scope);
    add(gromov_cocycle_suite(d, c.verify_instances, c.seed, &weyl), scope);
    add(period_identity_suite(d, c.verify_instances, c.seed, &weyl), scope);
  }
  std::vector<const GroupRep*> reps = {&rep};
  std::optional<GroupRep> lifted;
  if (rep.dim() == 2) {
    lifted = sym_power(rep, 2);
    reps.push_back(&*lifted);
  }
  for (const GroupRep* r : reps) {
    for (const auto& s : class_suites(*r, c.verify_max_len, c.seed, &weyl)) {
      add(s, "classes " + r->label() + " max_len=" + std::to_string(c.verify_max_len));
    }
  }
  add(weyl, "every spectral record above");

  const auto power = power_limit_suite(c.power_elements, c.seed);
  const bool power_ok =
      power.max_defect_high < kPowerLimitTolerance &&
      static_cast<double>(power.improved) >= kPowerLimitImprovedShare * static_cast<double>(power.elements);

  bool passed = power_ok;
  const SuiteResult* first_failure = nullptr;
  for (const auto& s : all) {
    if (!s.passed() && first_failure == nullptr) first_failure = &s;
    passed = passed && s.passed();
  }

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["config_hash"] = config_hash(c);
  report["representation"] = rep.label();
  report["seed"] = c.seed;
  report["suites"] = suites;
  report["power_limit"] = {{"elements", power.elements},
                           {"n_low", power.n_low},
                           {"n_high", power.n_high},
                           {"tolerance", kPowerLimitTolerance},
                           {"max_defect_high", power.max_defect_high},
                           {"improved", power.improved},
                           {"passed", power_ok}};
  report["passed"] = passed;
  const auto path = out_dir(c) / "verify.json";
  write_file_atomic(path, dump_json(report));

  if (first_failure != nullptr) {
    fail(ErrorCode::suite_failure, "suite " + first_failure->name + " exceeded tolerance " +
                                       format_real(first_failure->tolerance) + ": max residual " +
                                       format_real(first_failure->max_residual) + " at " +
                                       first_failure->worst.label + " (replay data in " + path.string() + ")");
  }
  if (!power_ok) {
    fail(ErrorCode::suite_failure, "power-limit suite failed: max defect " + format_real(power.max_defect_high) +
                                       ", improved " + std::to_string(power.improved) + "/" +
                                       std::to_string(power.elements) + " (see " + path.string() + ")");
  }
  return {{"command", "verify"}, {"suites", all.size() + 1}, {"passed", true}, {"path", path.string()}};
}

Json cmd_clt(const RunConfig& c) {
  if (!c.grid_values.empty()) validate_t_grid(c.grid_values);
  if (c.grid_values.empty() && c.grid_points < 3) fail(ErrorCode::invalid_config, "the t-grid needs at least 3 points");
  bool reused = false;
  const Dataset data = obtain_dataset(c, &reused);
  const auto [order_name, observe_name] = clt_functionals(c);
  const std::size_t order = data.functional_index(order_name);
  const std::size_t obs = data.functional_index(observe_name);
  const std::vector<double> grid =
      c.grid_values.empty() ? default_t_grid(data, order, c.grid_points, c.grid_lo_fraction, c.min_classes)
                            : c.grid_values;

  const GrowthFit growth = count_and_fit(data, order, grid);
  Json growth_block;
  growth_block[class_mode_name(data.mode)] = growth_json(growth);
  if (data.mode == ClassMode::all) {
    Json prim;
    capture(prim, [&] { return growth_json(count_and_fit(primitive_subset(data), order, grid)); });
    growth_block["primitive"] = prim;
  }

  const auto prox = proximal_fraction(data, order, grid, growth.h_hat);
  Json prox_points = Json::array();
  for (const auto& p : prox.points) {
    prox_points.push_back({{"t", p.t},
                           {"total", p.total},
                           {"proximal", p.proximal},
                           {"fraction", p.fraction},
                           {"weighted", real_json(p.weighted)}});
  }
  Json prox_json = {{"r", prox.r}, {"eps", prox.eps}, {"min_r_value", real_json(prox.min_r_value)},
                    {"points", prox_points}};
  if (prox.warning) prox_json["warning"] = *prox.warning;

  Json clt_jordan;
  Json clt_cartan;
  Json self_conditioned;
  std::vector<double> samples;
  const auto jordan_error = capture(clt_jordan, [&] {
    auto r = clt_report(data, order, obs, Observable::jordan, grid, growth.h_hat, c.min_classes);
    samples = r.final_samples;
    return clt_json(r);
  });
  capture(clt_cartan, [&] {
    return clt_json(clt_report(data, order, obs, Observable::cartan, grid, growth.h_hat, c.min_classes));
  });
  capture(self_conditioned, [&] {
    return clt_json(clt_report(data, order, order, Observable::jordan, grid, growth.h_hat, c.min_classes));
  });

  const std::string hash = config_hash(c);
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["config_hash"] = hash;
  report["dataset_hash"] = dataset_hash(c);
  report["representation"] = data.rep_label;
  report["mode"] = class_mode_name(data.mode);
  report["records"] = data.records.size();
  report["exceptional"] = data.exceptional_count();
  report["order"] = order_name;
  report["observe"] = observe_name;
  report["t_grid"] = grid;
  report["growth"] = growth_block;
  report["proximal_fraction"] = prox_json;
  report["benoist"] = {{order_name, defects_json(benoist_report(data, order, order, grid))},
                       {observe_name, defects_json(benoist_report(data, order, obs, grid))}};
  report["clt_jordan"] = clt_jordan;
  report["clt_cartan"] = clt_cartan;
  report["self_conditioned"] = self_conditioned;
  const auto path = out_dir(c) / "clt_report.json";
  write_file_atomic(path, dump_json(report));
  write_file_atomic(out_dir(c) / "clt_histogram.csv", histogram_csv(samples, hash));

  if (jordan_error) {
    fail(*jordan_error, "two-functional CLT report failed: " + clt_jordan["message"].get<std::string>() + " (see " +
                       path.string() + ")");
  }
  return {{"command", "clt"},
          {"records", data.records.size()},
          {"dataset_reused", reused},
          {"h_hat", growth.h_hat},
          {"final_ks", clt_jordan["points"].back()["ks"]},
          {"path", path.string()}};
}

Json run_command(const RunConfig& config, std::string_view name) {
  if (name == "enumerate") return cmd_enumerate(config);
  if (name == "spectra") return cmd_spectra(config);
  if (name == "verify") return cmd_verify(config);
  if (name == "clt") return cmd_clt(config);
  fail(ErrorCode::invalid_config, "unknown command '" + std::string(name) + "'");
}

}  // namespace periods
