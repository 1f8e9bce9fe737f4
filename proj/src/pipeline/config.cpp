#include "config.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace periods {

const char* const kToolVersion = "1.0.0";

namespace {

[[noreturn]] void bad_value(const std::string& section, const std::string& key, const std::string& value,
                            const std::string& why) {
  fail(ErrorCode::invalid_config, "[" + section + "] " + key + " = '" + value + "': " + why);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& section, const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(out)) {
    bad_value(section, key, value, "expected a finite number");
  }
  return out;
}

template <typename Int>
Int parse_int(const std::string& section, const std::string& key, const std::string& value, Int lo) {
  const std::string t = trim(value);
  Int out{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size()) bad_value(section, key, value, "expected an integer");
  if (out < lo) bad_value(section, key, value, "must be at least " + std::to_string(lo));
  return out;
}

// "0.785", "pi/4", "3*pi/4", "pi", "-pi/3".
double parse_angle(const std::string& section, const std::string& key, const std::string& value) {
  std::string t;
  for (char c : value) {
    if (c != ' ' && c != '\t') t.push_back(c);
  }
  const auto pi_at = t.find("pi");
  if (pi_at == std::string::npos) return parse_double(section, key, value);
  double factor = 1.0;
  std::string head = t.substr(0, pi_at);
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty()) {
    if (head.back() != '*') bad_value(section, key, value, "expected [c*]pi[/n]");
    factor = parse_double(section, key, head.substr(0, head.size() - 1));
  }
  const std::string tail = t.substr(pi_at + 2);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') bad_value(section, key, value, "expected [c*]pi[/n]");
    divisor = parse_double(section, key, tail.substr(1));
    if (divisor == 0.0) bad_value(section, key, value, "division by zero");
  }
  return factor * std::numbers::pi / divisor;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::io, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

struct Lines {
  std::ostringstream os;
  void add(const char* key, const std::string& value) { os << key << " = " << value << '\n'; }
  void add(const char* key, double value) { add(key, fmt(value)); }
  void add(const char* key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add(const char* key, int value) { add(key, std::to_string(value)); }
};

void representation_lines(const RunConfig& c, Lines& out) {
  out.add("representation.family", c.family);
  if (c.family == "synthetic") {
    out.add("synthetic.h", c.synthetic.h);
    out.add("synthetic.L", c.synthetic.L);
    out.add("synthetic.sigma", c.synthetic.sigma);
    out.add("synthetic.classes", static_cast<std::uint64_t>(c.synthetic.classes));
    out.add("synthetic.seed", c.seed);
    return;
  }
  if (c.family == "file") {
    out.add("representation.path", (c.base_dir / c.path).lexically_normal().string());
  } else {
    out.add("representation.multiplier", c.multiplier);
    out.add("representation.angle", c.angle);
  }
  out.add("representation.sym_power", c.sym_power);
  out.add("enumeration.max_len", c.max_len);
  out.add("enumeration.mode", class_mode_name(c.mode));
  for (const auto& [name, spec] : c.functionals) out.add(("functionals." + name).c_str(), spec);
  out.add("proximality.r", c.r);
  out.add("proximality.eps", c.eps);
  out.add("proximality.samples", c.contraction_samples);
  out.add("proximality.gap_tolerance", c.gap_tolerance);
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& section, const std::string& key, const std::string& value) {
  const auto unknown = [&] { fail(ErrorCode::invalid_config, "unknown config key [" + section + "] " + key); };
  const auto d = [&] { return parse_double(section, key, value); };
  const auto positive = [&] {
    const double x = d();
    if (!(x > 0.0)) bad_value(section, key, value, "must be positive");
    return x;
  };

  if (section == "representation") {
    if (key == "family") {
      const std::string f = trim(value);
      if (f != "schottky_sl2" && f != "file" && f != "synthetic") {
        bad_value(section, key, value, "expected schottky_sl2, file or synthetic");
      }
      c.family = f;
    } else if (key == "multiplier") {
      c.multiplier = d();
    } else if (key == "angle") {
      c.angle = parse_angle(section, key, value);
    } else if (key == "sym_power") {
      c.sym_power = parse_int<int>(section, key, value, 1);
    } else if (key == "path") {
      c.path = trim(value);
    } else {
      unknown();
    }
  } else if (section == "synthetic") {
    if (key == "h") {
      c.synthetic.h = positive();
    } else if (key == "L") {
      c.synthetic.L = d();
    } else if (key == "sigma") {
      c.synthetic.sigma = positive();
    } else if (key == "classes") {
      c.synthetic.classes = parse_int<std::size_t>(section, key, value, 1);
    } else {
      unknown();
    }
  } else if (section == "enumeration") {
    if (key == "max_len") {
      c.max_len = parse_int<int>(section, key, value, 1);
    } else if (key == "mode") {
      try {
        c.mode = parse_class_mode(trim(value));
      } catch (const Error&) {
        bad_value(section, key, value, "expected all or primitive");
      }
    } else if (key == "max_len_limit") {
      c.limits.max_len = parse_int<int>(section, key, value, 1);
    } else if (key == "class_budget") {
      c.limits.class_budget = parse_int<std::uint64_t>(section, key, value, 1);
    } else {
      unknown();
    }
  } else if (section == "functionals") {
    if (!c.functionals_set) c.functionals.clear();
    c.functionals_set = true;
    for (const auto& [name, spec] : c.functionals) {
      if (name == key) fail(ErrorCode::invalid_config, "duplicate functional [functionals] " + key);
    }
    c.functionals.emplace_back(key, trim(value));
  } else if (section == "clt") {
    if (key == "order") {
      c.order = trim(value);
    } else if (key == "observe") {
      c.observe = trim(value);
    } else if (key == "min_classes") {
      c.min_classes = parse_int<std::size_t>(section, key, value, 1);
    } else {
      unknown();
    }
  } else if (section == "grid") {
    if (key == "points") {
      c.grid_points = parse_int<int>(section, key, value, 1);
    } else if (key == "lo_fraction") {
      c.grid_lo_fraction = d();
      if (!(c.grid_lo_fraction > 0.0 && c.grid_lo_fraction < 1.0)) bad_value(section, key, value, "must be in (0, 1)");
    } else if (key == "values") {
      c.grid_values.clear();
      for (const auto& item : split_list(value)) c.grid_values.push_back(parse_double(section, key, item));
    } else {
      unknown();
    }
  } else if (section == "proximality") {
    if (key == "r") {
      c.r = positive();
    } else if (key == "eps") {
      c.eps = positive();
    } else if (key == "samples") {
      c.contraction_samples = parse_int<int>(section, key, value, 1);
    } else if (key == "gap_tolerance") {
      c.gap_tolerance = positive();
    } else {
      unknown();
    }
  } else if (section == "verify") {
    if (key == "instances") {
      c.verify_instances = parse_int<std::size_t>(section, key, value, 1);
    } else if (key == "dims") {
      c.verify_dims.clear();
      for (const auto& item : split_list(value)) {
        const int dim = parse_int<int>(section, key, item, 2);
        if (dim > 8) bad_value(section, key, value, "dimensions above 8 are not supported");
        c.verify_dims.push_back(dim);
      }
    } else if (key == "max_len") {
      c.verify_max_len = parse_int<int>(section, key, value, 1);
    } else if (key == "power_elements") {
      c.power_elements = parse_int<std::size_t>(section, key, value, 1);
    } else {
      unknown();
    }
  } else if (section == "run") {
    if (key == "seed") {
      c.seed = parse_int<std::uint64_t>(section, key, value, 0);
    } else if (key == "workers") {
      c.workers = parse_int<int>(section, key, value, 1);
    } else if (key == "out") {
      c.out = trim(value);
    } else {
      unknown();
    }
  } else {
    fail(ErrorCode::invalid_config, "unknown config section [" + section + "] (key " + key + ")");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::io, "config file not found: " + path.string());
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::invalid_config, "cannot parse " + path.string() + ": " + e.message() + " (line " +
                                        std::to_string(e.line()) + ")");
  }
  RunConfig config;
  config.base_dir = path.parent_path();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      fail(ErrorCode::invalid_config, "key '" + section + "' in " + path.string() + " is outside any section");
    }
    for (const auto& [key, node] : body) apply_setting(config, section, key, node.data());
  }
  return config;
}

std::string canonical_text(const RunConfig& c) {
  Lines out;
  out.add("schema_version", kSchemaVersion);
  representation_lines(c, out);
  out.add("enumeration.max_len_limit", c.limits.max_len);
  out.add("enumeration.class_budget", c.limits.class_budget);
  const auto [order, observe] = clt_functionals(c);
  out.add("clt.order", order);
  out.add("clt.observe", observe);
  out.add("clt.min_classes", static_cast<std::uint64_t>(c.min_classes));
  out.add("grid.points", c.grid_points);
  out.add("grid.lo_fraction", c.grid_lo_fraction);
  std::string values;
  for (double v : c.grid_values) values += (values.empty() ? "" : ",") + fmt(v);
  out.add("grid.values", values);
  std::string dims;
  for (int v : c.verify_dims) dims += (dims.empty() ? "" : ",") + std::to_string(v);
  out.add("verify.instances", static_cast<std::uint64_t>(c.verify_instances));
  out.add("verify.dims", dims);
  out.add("verify.max_len", c.verify_max_len);
  out.add("verify.power_elements", static_cast<std::uint64_t>(c.power_elements));
  out.add("run.seed", c.seed);
  return out.os.str();
}

std::string config_hash(const RunConfig& config) { return sha256_hex(canonical_text(config)); }

std::string dataset_hash(const RunConfig& config) {
  Lines out;
  out.add("schema_version", kSchemaVersion);
  representation_lines(config, out);
  return sha256_hex(out.os.str());
}

GroupRep build_representation(const RunConfig& c) {
  if (c.family == "synthetic") fail(ErrorCode::invalid_config, "the synthetic family has no matrix representation");
  GroupRep base = c.family == "file" ? load_representation(c.base_dir / c.path) : schottky_sl2(c.multiplier, c.angle);
  if (c.sym_power == 1) return base;
  if (base.dim() != 2) {
    fail(ErrorCode::invalid_config, "sym_power needs a 2-dimensional base representation, got dim " +
                                        std::to_string(base.dim()));
  }
  return sym_power(base, c.sym_power);
}

std::vector<Functional> build_functionals(const RunConfig& c, int dim) {
  if (c.functionals.empty()) fail(ErrorCode::invalid_config, "[functionals] is empty");
  std::vector<Functional> out;
  for (const auto& [name, spec] : c.functionals) {
    try {
      out.push_back(Functional::parse(spec, dim, name));
    } catch (const Error& e) {
      fail(ErrorCode::invalid_config, "[functionals] " + name + ": " + e.what());
    }
  }
  return out;
}

CollectOptions collect_options(const RunConfig& c) {
  CollectOptions o;
  o.max_len = c.max_len;
  o.mode = c.mode;
  o.r = c.r;
  o.eps = c.eps;
  o.contraction_samples = c.contraction_samples;
  o.gap_tol = c.gap_tolerance;
  o.workers = c.workers;
  o.limits = c.limits;
  return o;
}

std::pair<std::string, std::string> clt_functionals(const RunConfig& c) {
  std::vector<std::string> names;
  if (c.family == "synthetic") {
    names = {"order", "obs"};
  } else {
    for (const auto& f : c.functionals) names.push_back(f.first);
  }
  std::string order = c.order;
  std::string observe = c.observe;
  if (order.empty()) order = names.empty() ? "" : names.front();
  if (observe.empty()) observe = names.size() > 1 ? names[1] : order;
  return {order, observe};
}

}  // namespace periods
