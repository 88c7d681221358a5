#include <algorithm>
#include <cmath>

#include "kqpd/specfun.hpp"

namespace kqpd {

double wrap_phase(double phase) {
  if (!std::isfinite(phase)) return phase;
  if (phase > -kPi && phase <= kPi) return phase;
  double r = std::remainder(phase, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

cplx unit_phasor(double phase) {
  if (phase == 0.0) return {1.0, 0.0};
  if (phase == kPi || phase == -kPi) return {-1.0, 0.0};
  if (phase == 0.5 * kPi) return {0.0, 1.0};
  if (phase == -0.5 * kPi) return {0.0, -1.0};
  return {std::cos(phase), std::sin(phase)};
}

LogComplex LogComplex::from(cplx z) {
  if (z == cplx(0.0, 0.0)) return {};
  return {std::log(std::abs(z)), wrap_phase(std::arg(z))};
}

LogComplex LogComplex::exp_of(cplx w) {
  if (w.real() == kNegInf) return {};
  return {w.real(), wrap_phase(w.imag())};
}

cplx LogComplex::value() const {
  if (is_zero()) return {0.0, 0.0};
  return std::exp(log_mag) * unit_phasor(phase);
}

LogComplex operator*(const LogComplex& a, const LogComplex& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.log_mag + b.log_mag, wrap_phase(a.phase + b.phase)};
}

LogComplex operator/(const LogComplex& a, const LogComplex& b) {
  if (a.is_zero()) return {};
  return {a.log_mag - b.log_mag, wrap_phase(a.phase - b.phase)};
}

LogReal LogReal::from(double x) {
  if (x == 0.0) return {};
  return {std::log(std::fabs(x)), x > 0 ? 1 : -1};
}

double LogReal::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_mag);
}

LogComplex log_sum_exp_complex(std::span<const LogComplex> terms) {
  double top = kNegInf;
  for (const auto& t : terms)
    if (!t.is_zero()) top = std::max(top, t.log_mag);
  if (top == kNegInf) return {};
  cplx acc{0.0, 0.0};
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    acc += std::exp(t.log_mag - top) * unit_phasor(t.phase);
  }
  if (acc == cplx(0.0, 0.0)) return {};
  return {top + std::log(std::abs(acc)), wrap_phase(std::arg(acc))};
}

cplx log_of(const LogComplex& z) { return {z.log_mag, z.phase}; }

}  // namespace kqpd
