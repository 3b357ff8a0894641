#ifndef BECBELL_ORACLES_HPP
#define BECBELL_ORACLES_HPP

#include <cstdint>

#include "becbell/gaussian_core.hpp"

namespace becbell::oracles {

// Two-mode squeezed vacuum with squeezing parameter r >= 0.
// Diagonal blocks cosh(2r)/2 * I, off-diagonal sinh(2r)/2 * diag(1, -1).
CovarianceMatrix make_tmsv(double r);

// Random physical covariance matrix: a thermal core (per-mode occupation in
// [0, 2]) conjugated by layers of random rotations, squeezers (r < 0.8) and
// nearest-neighbour beam splitters. Fully determined by the seed.
CovarianceMatrix random_physical_cm(int n_modes, std::uint64_t seed);

// Gaussian discord of a two-mode state with a general-dyne measurement on
// measured_mode (1 or 2), evaluated in 50-digit arithmetic with explicit
// cofactor determinants. Shares no numerical kernels with the fast path.
double highprec_discord(const CovarianceMatrix& cm, int measured_mode = 1);

}  // namespace becbell::oracles

#endif
