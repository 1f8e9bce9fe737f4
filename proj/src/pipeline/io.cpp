#include "io.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "error.hpp"

namespace periods {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void corrupt(const std::filesystem::path& path, std::size_t line, const std::string& why) {
  fail(ErrorCode::io, path.string() + ":" + std::to_string(line) + ": " + why);
}

double parse_real(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) corrupt(path, line, "bad number '" + s + "'");
  return x;
}

std::uint64_t parse_uint(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  const auto x = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) corrupt(path, line, "bad integer '" + s + "'");
  return x;
}

ProximalityMethod parse_method(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  for (auto m : {ProximalityMethod::eigen_gap, ProximalityMethod::sampled_contraction}) {
    if (s == proximality_method_name(m)) return m;
  }
  corrupt(path, line, "unknown method '" + s + "'");
}

ProximalityClause parse_clause(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  for (auto c : {ProximalityClause::none, ProximalityClause::gap, ProximalityClause::transversality,
                 ProximalityClause::contraction}) {
    if (s == proximality_clause_name(c)) return c;
  }
  corrupt(path, line, "unknown clause '" + s + "'");
}

const char* flag(bool b) { return b ? "1" : "0"; }

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorCode::io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) fail(ErrorCode::io, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::io, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::io, "file not found: " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_header_comment(const std::string& config_hash, const std::string& letter_order) {
  return "# schema_version=" + std::to_string(kSchemaVersion) + " config_hash=" + config_hash +
         " letter_order=" + letter_order + "\n";
}

std::string classes_csv(const std::vector<CyclicWord>& classes, const Alphabet& alphabet,
                        const std::string& config_hash) {
  std::string out = csv_header_comment(config_hash, alphabet.letter_order());
  out += "class_id,length,word,primitive\n";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    out += std::to_string(i) + "," + std::to_string(c.size()) + "," + alphabet.format(c.letters()) + "," +
           flag(c.is_primitive()) + "\n";
  }
  return out;
}

std::string dataset_csv(const Dataset& data, const std::string& config_hash, const std::string& letter_order) {
  std::string out = csv_header_comment(config_hash, letter_order);
  out += "class_id,length,proximal,prox_gap";
  for (const char* prefix : {"jordan_period_", "cartan_value_", "class_gromov_"}) {
    for (const auto& f : data.functionals) out += std::string(",") + prefix + f.name();
  }
  out += ",word,primitive,r_value,eps_estimate,rp_proximal,contraction_ok,method,failing_clause,cert_rotation\n";
  for (const auto& rec : data.records) {
    out += std::to_string(rec.class_id) + "," + std::to_string(rec.length) + "," + flag(rec.proximal) + "," +
           format_real(rec.prox_gap);
    for (double v : rec.jordan_period) out += "," + format_real(v);
    for (double v : rec.cartan_value) out += "," + format_real(v);
    for (const auto& v : rec.class_gromov) out += "," + (v ? format_real(*v) : std::string());
    out += "," + rec.word + "," + flag(rec.primitive) + "," + format_real(rec.cert.r_value) + "," +
           format_real(rec.cert.eps_estimate) + "," + flag(rec.cert.is_proximal) + "," +
           flag(rec.cert.contraction_ok) + "," + proximality_method_name(rec.cert.method) + "," +
           proximality_clause_name(rec.cert.failing_clause) + "," + std::to_string(rec.cert_rotation) + "\n";
  }
  return out;
}

Json dataset_meta(const Dataset& data, const std::string& config_hash, const std::string& dataset_hash,
                  const std::string& canonical_config, const std::string& letter_order) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = config_hash;
  j["dataset_hash"] = dataset_hash;
  j["tool_version"] = kToolVersion;
  j["library_versions"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"boost", BOOST_LIB_VERSION},
  };
  j["letter_order"] = letter_order;
  j["representation"] = data.rep_label;
  j["rank"] = data.rank;
  j["dim"] = data.dim;
  j["max_len"] = data.max_len;
  j["mode"] = class_mode_name(data.mode);
  j["records"] = data.records.size();
  j["exceptional"] = data.exceptional_count();
  j["r"] = data.r;
  j["eps"] = data.eps;
  j["gap_tolerance"] = data.gap_tol;
  Json fs = Json::array();
  for (const auto& f : data.functionals) fs.push_back({{"name", f.name()}, {"coeffs", f.coeffs()}});
  j["functionals"] = fs;
  Json echo = Json::array();
  std::istringstream lines(canonical_config);
  for (std::string line; std::getline(lines, line);) echo.push_back(line);
  j["config"] = echo;
  return j;
}

std::optional<Dataset> read_dataset(const std::filesystem::path& dir, const std::string& dataset_hash) {
  const auto meta_path = dir / "dataset.meta.json";
  const auto csv_path = dir / "dataset.csv";
  if (!std::filesystem::exists(meta_path) || !std::filesystem::exists(csv_path)) return std::nullopt;
  Json meta;
  try {
    meta = Json::parse(read_file(meta_path));
  } catch (const Json::exception& e) {
    fail(ErrorCode::io, meta_path.string() + ": " + e.what());
  }
  if (meta.value("dataset_hash", std::string()) != dataset_hash ||
      meta.value("schema_version", 0) != kSchemaVersion) {
    return std::nullopt;
  }
  Dataset data;
  try {
    data.rep_label = meta.at("representation").get<std::string>();
    data.rank = meta.at("rank").get<int>();
    data.dim = meta.at("dim").get<int>();
    data.max_len = meta.at("max_len").get<int>();
    data.mode = parse_class_mode(meta.at("mode").get<std::string>());
    data.r = meta.at("r").get<double>();
    data.eps = meta.at("eps").get<double>();
    data.gap_tol = meta.at("gap_tolerance").get<double>();
    for (const auto& f : meta.at("functionals")) {
      data.functionals.emplace_back(f.at("coeffs").get<std::vector<double>>(), f.at("name").get<std::string>());
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::io, meta_path.string() + ": " + e.what());
  }

  const std::size_t nf = data.functionals.size();
  const std::size_t columns = 4 + 3 * nf + 9;
  std::istringstream is(read_file(csv_path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#' || line.rfind("class_id,", 0) == 0) continue;
    const auto f = split(line, ',');
    if (f.size() != columns) corrupt(csv_path, lineno, "expected " + std::to_string(columns) + " fields");
    PeriodRecord rec;
    rec.class_id = parse_uint(f[0], csv_path, lineno);
    rec.length = static_cast<int>(parse_uint(f[1], csv_path, lineno));
    rec.proximal = f[2] == "1";
    rec.prox_gap = parse_real(f[3], csv_path, lineno);
    std::size_t c = 4;
    for (std::size_t i = 0; i < nf; ++i) rec.jordan_period.push_back(parse_real(f[c++], csv_path, lineno));
    for (std::size_t i = 0; i < nf; ++i) rec.cartan_value.push_back(parse_real(f[c++], csv_path, lineno));
    for (std::size_t i = 0; i < nf; ++i, ++c) {
      rec.class_gromov.push_back(f[c].empty() ? std::nullopt
                                              : std::optional<double>(parse_real(f[c], csv_path, lineno)));
    }
    rec.word = f[c++];
    rec.primitive = f[c++] == "1";
    rec.cert.r_value = parse_real(f[c++], csv_path, lineno);
    rec.cert.eps_estimate = parse_real(f[c++], csv_path, lineno);
    rec.cert.is_proximal = f[c++] == "1";
    rec.cert.contraction_ok = f[c++] == "1";
    rec.cert.method = parse_method(f[c++], csv_path, lineno);
    rec.cert.failing_clause = parse_clause(f[c++], csv_path, lineno);
    rec.cert_rotation = static_cast<int>(parse_uint(f[c++], csv_path, lineno));
    data.records.push_back(std::move(rec));
  }
  if (data.records.size() != meta.value("records", std::size_t{0})) {
    fail(ErrorCode::io, csv_path.string() + ": record count differs from " + meta_path.string());
  }
  return data;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json real_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace periods
