#pragma once

// Dense linear-algebra vocabulary shared by the numeric modules, plus the
// exterior-algebra helpers (k-subsets, minors, wedges).

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace periods {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

std::uint64_t binomial(int n, int k);

// k-subsets of {0..d-1} in lexicographic order; the basis e_I of the k-th
// exterior power is indexed in this order.
std::vector<std::vector<int>> k_subsets(int d, int k);

// Matrix of the induced action on k-vectors: entry (I, J) is the minor of m
// with rows I and columns J.
Mat exterior_matrix(const Mat& m, int k);

// Plücker coordinates of the wedge of the columns of `frame`.
Vec wedge(const Mat& frame);

// Log of the k-dimensional volume spanned by the columns (the norm of their
// wedge), from a QR factorization. -inf for a degenerate frame.
double log_frame_volume(const Mat& frame);

double max_abs(const Mat& m);

}  // namespace periods
