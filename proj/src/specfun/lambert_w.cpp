#include <cmath>
#include <string>

#include "kqpd/error.hpp"
#include "kqpd/specfun.hpp"

namespace kqpd {
namespace {

constexpr double kInvE = 0.36787944117144232160;
constexpr cplx kI{0.0, 1.0};

cplx asymptotic_seed(cplx l1) {
  cplx l2 = std::log(l1);
  return l1 - l2 + l2 / l1 + l2 * (l2 - 2.0) / (2.0 * l1 * l1);
}

cplx branch_point_seed(cplx z, double sgn) {
  cplx d = z + kInvE;
  return -1.0 + sgn * 2.33164398159712 * std::sqrt(d) - 1.81218788563936 * d;
}

// Initial guess per branch, after the hybrid scheme used by mpmath.
cplx seed(int k, cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const int imag_sign = y > 0 ? 1 : (y < 0 ? -1 : 0);

  if (k == 0) {
    if (y > -4.0 && y < 4.0 && x > -1.0 && x < 2.5) {
      if (imag_sign != 0) {
        if (y > 1.0) return cplx(0.876, 0.645) + cplx(0.118, -0.174) * (z - cplx(0.75, 2.5));
        if (y > 0.25) return cplx(0.505, 0.204) + cplx(0.375, -0.132) * (z - cplx(0.75, 0.5));
        if (y < -1.0) return cplx(0.876, -0.645) + cplx(0.118, 0.174) * (z - cplx(0.75, -2.5));
        if (y < -0.25) return cplx(0.505, -0.204) + cplx(0.375, 0.132) * (z - cplx(0.75, -0.5));
      }
      if (x < -0.5) {
        if (imag_sign >= 0) return cplx(-0.318, 1.34) + cplx(-0.697, -0.593) * (z + 1.0);
        return cplx(-0.318, -1.34) + cplx(-0.697, 0.593) * (z + 1.0);
      }
      if (x < -0.2) return branch_point_seed(z, 1.0);
      if (x < 0.5) return z;
      return 0.2 + 0.3 * z;
    }
    if (imag_sign == 0 && x > 0.0) {
      double l1 = std::log(x);
      return asymptotic_seed(cplx(l1, 0.0));
    }
    return asymptotic_seed(std::log(z));
  }
  if (k == -1) {
    if (imag_sign >= 0 && y < 0.1 && x > -0.6 && x < -0.2) return branch_point_seed(z, -1.0);
    if (imag_sign == 0 && x >= -0.2 && x < 0.0) {
      double l1 = std::log(-x);
      return cplx(l1 - std::log(-l1), 0.0);
    }
    return asymptotic_seed(std::log(z) - kTwoPi * kI);
  }
  return asymptotic_seed(std::log(z) + kTwoPi * k * kI);
}

}  // namespace

cplx lambert_w(int branch, cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(Errc::domain, "lambert_w: non-finite argument");
  if (z == cplx(0.0, 0.0)) {
    if (branch == 0) return {0.0, 0.0};
    throw Error(Errc::domain, "lambert_w: Z = 0 on branch " + std::to_string(branch));
  }
  if ((branch == 0 || branch == -1) && std::abs(z + kInvE) < 1e-12)
    throw Error(Errc::near_branch_point, "lambert_w: Z within 1e-12 of -1/e");

  cplx w = seed(branch, z);
  for (int it = 0; it < 100; ++it) {
    cplx ew = std::exp(w);
    cplx f = w * ew - z;
    cplx wp1 = w + 1.0;
    cplx step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 2e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace kqpd
