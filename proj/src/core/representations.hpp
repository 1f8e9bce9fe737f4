#pragma once

// Linear representations of free groups into SL(d,R)/PGL(d,R).
//
// Products of long words leave double range quickly (a length-40 word at
// multiplier 4 is ~e^55), so group elements are carried as ScaledMatrix:
// a unit matrix with max-abs entry 1 and a separate natural-log scale.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "group_words.hpp"
#include "linalg.hpp"

namespace periods {

class ScaledMatrix {
 public:
  // Normalizes m; throws numeric on non-finite or all-zero input.
  explicit ScaledMatrix(const Mat& m, double log_scale = 0.0);

  static ScaledMatrix identity(int d);

  int dim() const { return static_cast<int>(unit_.rows()); }
  const Mat& unit() const { return unit_; }
  double log_scale() const { return log_scale_; }

  // exp(log_scale) * unit; may overflow for long words.
  Mat dense() const;

  ScaledMatrix operator*(const ScaledMatrix& rhs) const;
  ScaledMatrix power(int n) const;
  ScaledMatrix transpose() const;

 private:
  void renormalize();

  Mat unit_;
  double log_scale_ = 0.0;
};

class GroupRep {
 public:
  static constexpr double kDefaultDetTolerance = 1e-8;

  // gens[i] and inverses[i] belong to generator i+1. Validates unimodularity
  // and gen^-1 * gen = I, with tolerances floored at the rounding error
  // expected for the generator's condition number.
  GroupRep(int rank, std::vector<Mat> gens, std::vector<Mat> inverses, std::string label,
           double det_tolerance = kDefaultDetTolerance);

  int dim() const { return dim_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::string& label() const { return label_; }
  double det_tolerance() const { return det_tolerance_; }

  const Mat& generator(Letter l) const { return by_key_[static_cast<std::size_t>(Alphabet::order_key(l))]; }
  double log_abs_det(Letter l) const { return log_det_[static_cast<std::size_t>(Alphabet::order_key(l))]; }

 private:
  Alphabet alphabet_;
  int dim_ = 0;
  std::vector<Mat> by_key_;
  std::vector<double> log_det_;
  std::string label_;
  double det_tolerance_;
};

ScaledMatrix evaluate(const GroupRep& rep, std::span<const Letter> letters);
inline ScaledMatrix evaluate(const GroupRep& rep, const Word& w) { return evaluate(rep, w.letters()); }

// rho(a) = diag(m, 1/m), rho(b) = R(angle) diag(m, 1/m) R(angle)^-1.
GroupRep schottky_sl2(double multiplier, double angle);

// Action of g on degree-k binary forms, monomial basis x^k, x^(k-1) y, ..., y^k.
Mat sym_power_matrix(const Mat& g, int k);
GroupRep sym_power(const GroupRep& rep2, int k);
constexpr int kMaxSymPower = 12;

ScaledMatrix exterior_power(const ScaledMatrix& m, int k);
GroupRep exterior_rep(const GroupRep& rep, int k);

// JSON representation file: {"label", "dim", "det_tolerance"?,
// "generators": [{"matrix": [row-major], "inverse"?: [row-major]}]}.
GroupRep load_representation(const std::filesystem::path& path);
GroupRep parse_representation(const std::string& text, const std::string& origin);

}  // namespace periods
