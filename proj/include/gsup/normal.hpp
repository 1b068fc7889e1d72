#pragma once

#include <cmath>
#include <numbers>

namespace gsup {

/// Standard normal CDF, evaluated through erfc so that the lower tail keeps
/// full relative accuracy.
template <typename Scalar>
Scalar normal_cdf(Scalar x) {
  using std::erfc;
  return Scalar(0.5) * erfc(-x / std::numbers::sqrt2_v<Scalar>);
}

/// Upper tail 1 - Phi(x).
template <typename Scalar>
Scalar normal_sf(Scalar x) {
  using std::erfc;
  return Scalar(0.5) * erfc(x / std::numbers::sqrt2_v<Scalar>);
}

template <typename Scalar>
Scalar normal_pdf(Scalar x) {
  using std::exp;
  return exp(-x * x / Scalar(2)) / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);
}

/// P{lo <= Z <= hi} for a standard normal Z; either end may be infinite.
template <typename Scalar>
Scalar normal_mass(Scalar lo, Scalar hi) {
  if (!(hi > lo)) return Scalar(0);
  // Work in whichever tail keeps the difference well conditioned.
  if (lo > 0) return normal_sf(lo) - normal_sf(hi);
  return normal_cdf(hi) - normal_cdf(lo);
}

/// Lower bound on the Gaussian tail from R(x) >= 1/(1+x):
/// P{Z > H} >= exp(-H^2/2) / (sqrt(2 pi) (H + 1)), valid for H >= 0.
template <typename Scalar>
Scalar mills_tail_lower_bound(Scalar H) {
  using std::exp;
  return exp(-H * H / Scalar(2)) /
         (std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>) * (H + Scalar(1)));
}

}  // namespace gsup
