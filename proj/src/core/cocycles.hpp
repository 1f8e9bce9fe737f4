#pragma once

// Weight components of the Busemann-Iwasawa cocycle and the identities it
// satisfies, evaluated on frames and at fixed points of group elements.
//
// Convention: g acts on vectors by v -> g v and on covectors by
// theta -> theta o g^-1. With this convention the Gromov-product cocycle
// relation holds exactly (its residual is algebraically zero).

#include <vector>

#include "functional.hpp"
#include "spectral.hpp"

namespace periods {

// chi_k(sigma(g, x)) = log(|Lambda^k g . omega| / |omega|) for omega the
// wedge of the k columns of `frame`; computed from frame volumes.
double busemann_weight(const ScaledMatrix& g, const Mat& frame);

// Same quantity when g is already lifted to Lambda^k and omega is given in
// Plücker coordinates.
double busemann_weight_kvector(const ScaledMatrix& lifted, const Vec& omega);

// |B(gh, F) - B(g, hF) - B(h, F)|.
double cocycle_identity_residual(const ScaledMatrix& g, const ScaledMatrix& h, const Mat& frame);

// |Gr(theta o g^-1, g v) - Gr(theta, v) + log(|theta o g^-1| / |theta|) + log(|g v| / |v|)|
// at level k = frame.cols(); norms at level k are wedge norms (frame volumes).
double gromov_cocycle_residual(const ScaledMatrix& g, const ScaledMatrix& g_inv, const Mat& coframe,
                               const Mat& frame);
// Inverts g numerically; intended for well-conditioned instances.
double gromov_cocycle_residual(const ScaledMatrix& g, const Mat& coframe, const Mat& frame);

// |B(g, attracting k-frame) - (l_1 + ... + l_k)|, direct route.
double period_identity_residual(const ScaledMatrix& g, int k, double gap_tol = kDefaultGapTolerance);
// Same for the class of `letters` evaluated through the tower; k may equal d.
double period_identity_residual(const WeightTower& tower, std::span<const Letter> letters, int k,
                                double gap_tol = kDefaultGapTolerance);

// Fixed-point flag data of a proximal element at the selected levels.
struct BoundaryPoint {
  std::vector<int> levels;
  std::vector<Mat> frames;    // attracting k-frames (vector side)
  std::vector<Mat> coframes;  // repelling k-coframes (covector side)
};

BoundaryPoint fixed_point_flags(const ScaledMatrix& g, const std::vector<int>& levels,
                                double gap_tol = kDefaultGapTolerance);

// phi applied to the Gromov weights at the fixed points of the class's
// canonical representative. Throws not_proximal when a level phi touches
// has no eigen-gap.
double class_gromov(const WeightTower& tower, const CyclicWord& cls, const Functional& phi,
                    double gap_tol = kDefaultGapTolerance);
double class_gromov(const SpectralRecord& record, const Functional& phi);

}  // namespace periods
