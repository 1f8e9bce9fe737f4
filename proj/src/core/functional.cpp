#include "functional.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "error.hpp"

namespace periods {

Functional::Functional(std::vector<double> coeffs, std::string name)
    : coeffs_(std::move(coeffs)), name_(std::move(name)) {
  if (coeffs_.empty()) fail(ErrorCode::invalid_input, "functional '" + name_ + "' has no coefficients");
  if (std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; })) {
    fail(ErrorCode::invalid_input, "functional '" + name_ + "' has all coefficients zero");
  }
  if (!std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); })) {
    fail(ErrorCode::invalid_input, "functional '" + name_ + "' has a non-finite coefficient");
  }
}

Functional Functional::chi(int dim, int k) {
  if (dim < 2 || k < 1 || k >= dim) {
    fail(ErrorCode::invalid_input, "chi_" + std::to_string(k) + " is not a weight component in dimension " +
                                       std::to_string(dim));
  }
  std::vector<double> c(static_cast<std::size_t>(dim - 1), 0.0);
  c[static_cast<std::size_t>(k - 1)] = 1.0;
  return Functional(std::move(c), "chi" + std::to_string(k));
}

Functional Functional::length(int dim) {
  if (dim < 2) fail(ErrorCode::invalid_input, "length functional needs dimension >= 2");
  std::vector<double> c(static_cast<std::size_t>(dim - 1), 0.0);
  c.front() += 1.0;
  c.back() += 1.0;
  return Functional(std::move(c), "length");
}

Functional Functional::parse(std::string_view spec, int dim, std::string name) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  spec = trim(spec);
  auto renamed = [&](Functional f) { return Functional(f.coeffs(), name.empty() ? f.name() : name); };
  if (spec == "length") return renamed(length(dim));
  if (spec.starts_with("chi")) {
    auto rest = spec.substr(3);
    if (rest.starts_with(":")) rest.remove_prefix(1);
    int k = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) {
      fail(ErrorCode::invalid_config, "cannot parse functional '" + std::string(spec) + "'");
    }
    return renamed(chi(dim, k));
  }
  std::vector<double> coeffs;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) fail(ErrorCode::invalid_config, "bad coefficient '" + token + "' in functional");
    coeffs.push_back(v);
    token.clear();
  };
  for (char c : spec) {
    if (c == ',' || c == ' ' || c == '\t') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  if (static_cast<int>(coeffs.size()) != dim - 1) {
    fail(ErrorCode::invalid_config, "functional '" + std::string(spec) + "' needs " + std::to_string(dim - 1) +
                                        " coefficients in dimension " + std::to_string(dim));
  }
  return Functional(std::move(coeffs), name.empty() ? std::string(spec) : name);
}

double Functional::on_weights(std::span<const double> weights) const {
  if (weights.size() < coeffs_.size()) fail(ErrorCode::invalid_input, "too few weight components for functional");
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) acc += coeffs_[i] * weights[i];
  return acc;
}

double Functional::on_projection(std::span<const double> projection) const {
  if (projection.size() != coeffs_.size() + 1) {
    fail(ErrorCode::invalid_input, "projection dimension does not match functional '" + name_ + "'");
  }
  double chi = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    chi += projection[i];
    acc += coeffs_[i] * chi;
  }
  return acc;
}

Functional Functional::opposite() const {
  std::vector<double> c(coeffs_.rbegin(), coeffs_.rend());
  return Functional(std::move(c), name_ + "_opp");
}

bool Functional::is_symmetric() const { return std::equal(coeffs_.begin(), coeffs_.end(), coeffs_.rbegin()); }

}  // namespace periods
