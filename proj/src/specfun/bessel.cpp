#include <cmath>
#include <string>

#include "kqpd/error.hpp"
#include "kqpd/specfun.hpp"

namespace kqpd {
namespace {

struct Evaluated {
  LogComplex value;
  double loss;  // nats of cancellation: log(sum of |terms| / |sum|)
};

constexpr double kLossAccept = 8.0;

Evaluated series_log(int k, cplx z) {
  const cplx h = 0.5 * z;
  const cplx q = h * h;
  const double qa = std::abs(q);
  const cplx log_t0 = static_cast<double>(k) * std::log(h) - std::lgamma(k + 1.0);

  cplx r{1.0, 0.0};
  cplx sum{1.0, 0.0};
  double abs_sum = 1.0;
  double log_scale = 0.0;
  const long max_iter = static_cast<long>(4.0 * std::abs(z)) + 200;
  for (long m = 0; m < max_iter; ++m) {
    const double denom = static_cast<double>(m + 1) * static_cast<double>(m + 1 + k);
    r *= q / denom;
    sum += r;
    const double ra = std::abs(r);
    abs_sum += ra;
    if (abs_sum > 1e200) {
      r /= abs_sum;
      sum /= abs_sum;
      log_scale += std::log(abs_sum);
      abs_sum = 1.0;
    }
    if (denom > qa && ra <= 1e-18 * abs_sum) break;
  }
  if (sum == cplx(0.0, 0.0)) return {LogComplex::zero(), kNegInf};
  LogComplex v = LogComplex::exp_of(log_t0 + log_scale) * LogComplex::from(sum);
  return {v, std::log(abs_sum / std::abs(sum))};
}

// Trapezoidal rule on I_k(z) = e^z (1/pi) int_0^pi e^{-2 z sin^2(t/2)} cos(k t) dt,
// refined by halving until successive levels agree. Re z >= 0.
Evaluated quadrature_log(int k, cplx z) {
  auto g = [&](double t) {
    const double s = std::sin(0.5 * t);
    return std::exp(-2.0 * z * (s * s)) * std::cos(k * t);
  };
  long m = 16;
  while (m < 2L * (k + 8) + static_cast<long>(2.0 * std::sqrt(std::abs(z)))) m *= 2;

  const cplx ends = 0.5 * (g(0.0) + g(kPi));
  double abs_ends = 0.5 * (std::abs(g(0.0)) + std::abs(g(kPi)));
  cplx inner{0.0, 0.0};
  double abs_inner = 0.0;
  for (long j = 1; j < m; ++j) {
    cplx v = g(kPi * static_cast<double>(j) / static_cast<double>(m));
    inner += v;
    abs_inner += std::abs(v);
  }
  cplx prev = (ends + inner) / static_cast<double>(m);
  constexpr long kMaxPoints = 1L << 24;
  while (true) {
    cplx mids{0.0, 0.0};
    for (long j = 0; j < m; ++j) {
      cplx v = g(kPi * (2.0 * static_cast<double>(j) + 1.0) / (2.0 * static_cast<double>(m)));
      mids += v;
      abs_inner += std::abs(v);
    }
    inner += mids;
    m *= 2;
    cplx cur = (ends + inner) / static_cast<double>(m);
    const double scale = (abs_ends + abs_inner) / static_cast<double>(m);
    if (std::abs(cur - prev) <= 1e-10 * scale) {
      if (cur == cplx(0.0, 0.0)) return {LogComplex::zero(), kNegInf};
      LogComplex v = LogComplex::exp_of(z) * LogComplex::from(cur);
      return {v, std::log(scale / std::abs(cur))};
    }
    if (m >= kMaxPoints)
      throw Error(Errc::overflow, "bessel quadrature did not converge for order " + std::to_string(k));
    prev = cur;
  }
}

}  // namespace

LogComplex bessel_i_log_exact(int order, cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(Errc::domain, "bessel: non-finite argument");
  const int k = order < 0 ? -order : order;
  if (z == cplx(0.0, 0.0)) return k == 0 ? LogComplex{0.0, 0.0} : LogComplex::zero();

  // I_k(-z) = (-1)^k I_k(z)
  bool negate = false;
  if (z.real() < 0.0) {
    z = -z;
    negate = (k % 2) == 1;
  }
  auto finish = [&](LogComplex v) { return negate ? v * LogComplex{0.0, kPi} : v; };

  const double az = std::abs(z);
  if (az > kBesselExactMaxAbs && k < az) return finish(quadrature_log(k, z).value);

  Evaluated s = series_log(k, z);
  if (s.loss <= kLossAccept) return finish(s.value);
  Evaluated q = quadrature_log(k, z);
  return finish(q.loss < s.loss ? q.value : s.value);
}

cplx bessel_i_exact(int order, cplx z) {
  if (std::abs(z) > kBesselExactMaxAbs)
    throw Error(Errc::use_asymptotic, "bessel_i_exact: |z| above 1e3");
  LogComplex v = bessel_i_log_exact(order, z);
  if (v.log_mag > 709.0) throw Error(Errc::overflow, "bessel_i_exact: result exceeds double range");
  return v.value();
}

cplx bessel_v_minus_z(int order, cplx z) {
  const double k = std::fabs(static_cast<double>(order));
  const cplx zz = z * z + k * k;
  const cplx root = std::sqrt(zz);
  return k * k / (root + z) - k * std::asinh(k / z) - 0.25 * std::log(zz);
}

LogComplex bessel_i_log_asymptotic(int order, cplx z) {
  if (!(z.real() > 0.0)) throw Error(Errc::domain, "bessel asymptotic: Re z must be positive");
  const double k = static_cast<double>(order);
  if (std::sqrt(std::norm(z) + k * k) < kBesselAsymptoticMin)
    throw Error(Errc::use_exact, "bessel asymptotic: sqrt(|z|^2 + k^2) below 25");
  return LogComplex::exp_of(z + bessel_v_minus_z(order, z) - 0.5 * std::log(kTwoPi));
}

}  // namespace kqpd
