#pragma once

// Jordan and Cartan projections, attracting data, proximality certificates
// and Gromov products for matrices in SL(d,R)/PGL(d,R).
//
// All projections are in natural-log units and include the ScaledMatrix
// log scale. Two routes exist:
//  * the direct route works on a single ScaledMatrix and refuses matrices
//    whose condition number exceeds kMaxConditionNumber;
//  * the tower route (spectral_record on a WeightTower) evaluates a word in
//    every exterior power and reads the k-th weight chi_k = l_1 + ... + l_k
//    off the top eigenvalue / singular value of the k-th power, which stays
//    accurate for arbitrarily long words.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "representations.hpp"

namespace periods {

constexpr double kDefaultGapTolerance = 1e-6;
constexpr double kMaxConditionNumber = 1e12;
constexpr int kDefaultContractionSamples = 256;

struct SpectralRecord {
  std::vector<double> jordan;  // descending log-moduli of eigenvalues
  std::vector<double> cartan;  // descending log singular values
  std::optional<Vec> attract_vec;
  std::optional<Vec> attract_covec;
  double prox_gap = 0.0;  // jordan[0] - jordan[1]
  // Gromov product at the fixed points for each level k = 1..d-1; absent
  // when the element is not proximal at that level.
  std::vector<std::optional<double>> gromov;

  // jordan[k-1] - jordan[k], k = 1..d-1.
  double level_gap(int k) const { return jordan[static_cast<std::size_t>(k - 1)] - jordan[static_cast<std::size_t>(k)]; }
};

// Partial sums chi_k(v) = v_1 + ... + v_k, k = 1..size.
std::vector<double> weight_components(std::span<const double> projection);

std::vector<double> jordan_projection(const ScaledMatrix& m);
std::vector<double> cartan_projection(const ScaledMatrix& m);

// Top entries only; well conditioned regardless of the matrix condition number.
double log_spectral_radius(const ScaledMatrix& m);
double log_operator_norm(const ScaledMatrix& m);

struct AttractingData {
  Vec vec;    // unit top right-eigenvector
  Vec covec;  // unit top left-eigenvector
};

// Throws not_proximal when the top gap is <= gap_tol.
AttractingData attracting_data(const ScaledMatrix& m, double gap_tol = kDefaultGapTolerance);

// log(|theta(v)| / (|theta| |v|)) <= 0; throws transversality when theta(v) = 0.
double gromov_pair(const Vec& theta, const Vec& v);

// Gromov product of the wedges of a k-coframe and a k-frame (columns),
// evaluated as log|det(Theta^T F)| - log vol(Theta) - log vol(F).
double gromov_weight(const Mat& coframe, const Mat& frame);

struct FlagFrames {
  Mat frame;    // orthonormal basis of the attracting k-plane (top-k eigenspaces)
  Mat coframe;  // orthonormal basis of the top-k eigenspaces of the transpose
};

// Throws not_proximal unless l_k - l_{k+1} > gap_tol.
FlagFrames attracting_frames(const ScaledMatrix& m, int k, double gap_tol = kDefaultGapTolerance);

enum class ProximalityMethod { eigen_gap, sampled_contraction };
enum class ProximalityClause { none, gap, transversality, contraction };
const char* proximality_method_name(ProximalityMethod m);
const char* proximality_clause_name(ProximalityClause c);

struct ProximalityCert {
  double r_value = 0.0;       // exp|Gromov product at the fixed points|
  double eps_estimate = 0.0;  // worst observed (or bounded) distance of image points to the attracting point
  bool is_proximal = false;
  bool contraction_ok = false;  // clause (iii) alone; evaluated whenever the gap clause holds
  ProximalityMethod method = ProximalityMethod::eigen_gap;
  ProximalityClause failing_clause = ProximalityClause::none;
};

// (r, eps)-proximality: (i) a top eigen-gap, (ii) exp|Gr| <= r at the fixed
// points, (iii) every point at sine-distance >= eps from the repelling
// hyperplane is mapped within eps of the attracting point. failing_clause
// names the first clause that fails.
ProximalityCert proximality_cert(const ScaledMatrix& m, double r, double eps,
                                 int n_samples = kDefaultContractionSamples,
                                 double gap_tol = kDefaultGapTolerance);

// sum_{i<=k} cartan_i - sum_{i<=k} jordan_i + Gromov_k at the fixed points.
double benoist_defect(const ScaledMatrix& m, int k, double gap_tol = kDefaultGapTolerance);

// Direct-route record for one matrix (condition number limited).
SpectralRecord spectral_record(const ScaledMatrix& m, double gap_tol = kDefaultGapTolerance);

// A representation together with its exterior powers 1..d-1.
class WeightTower {
 public:
  explicit WeightTower(GroupRep rep);

  int dim() const { return levels_.front().dim(); }
  const GroupRep& base() const { return levels_.front(); }
  const GroupRep& level(int k) const { return levels_[static_cast<std::size_t>(k - 1)]; }
  double log_abs_det(std::span<const Letter> letters) const;

 private:
  std::vector<GroupRep> levels_;
};

SpectralRecord spectral_record(const WeightTower& tower, std::span<const Letter> letters,
                               double gap_tol = kDefaultGapTolerance);

// Largest relative violation of Weyl majorization / the determinant-sum
// equality (0 when both hold exactly).
double weyl_violation(const SpectralRecord& record);
double determinant_sum_residual(const SpectralRecord& record, double log_abs_det);

}  // namespace periods
