#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace periods {

// Linear functional on Cartan coordinates, written over the weight
// components chi_1..chi_{d-1} (chi_k = l_1 + ... + l_k).
class Functional {
 public:
  Functional(std::vector<double> coeffs, std::string name);

  // chi_k alone.
  static Functional chi(int dim, int k);
  // chi_1 + chi_{d-1}, which equals l_1 - l_d on SL(d,R).
  static Functional length(int dim);
  // "length", "chiK" / "chi:K", or a whitespace/comma separated list of d-1 coefficients.
  static Functional parse(std::string_view spec, int dim, std::string name);

  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(coeffs_.size()) + 1; }
  bool touches(int k) const { return coeffs_[static_cast<std::size_t>(k - 1)] != 0.0; }

  // phi applied to weight components chi_1..chi_{d-1}.
  double on_weights(std::span<const double> weights) const;
  // phi applied to a d-vector of Cartan coordinates (jordan or cartan projection).
  double on_projection(std::span<const double> projection) const;

  // Coefficients reversed: phi composed with the opposition involution.
  Functional opposite() const;
  bool is_symmetric() const;

  friend bool operator==(const Functional&, const Functional&) = default;

 private:
  std::vector<double> coeffs_;
  std::string name_;
};

}  // namespace periods
