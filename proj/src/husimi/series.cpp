#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kqpd/error.hpp"
#include "kqpd/husimi.hpp"

namespace kqpd {

double reduce_gamma(double gamma) { return wrap_phase(gamma); }

double RationalGamma::gamma() const {
  return kTwoPi * static_cast<double>(num) / static_cast<double>(den);
}

void RationalGamma::validate() const {
  if (den < 1 || den % 2 == 0)
    throw Error(Errc::precondition, "rational gamma: denominator must be odd and positive");
  if (std::gcd(num < 0 ? -num : num, den) != 1)
    throw Error(Errc::precondition, "rational gamma: fraction not reduced");
}

RationalGamma RationalGamma::approximate(double gamma, std::int64_t max_den) {
  const long double x = static_cast<long double>(gamma) / (2.0L * 3.14159265358979323846264338327950288L);
  RationalGamma best{0, 1};
  long double best_err = std::fabs(x);
  for (std::int64_t q = 1; q <= max_den; q += 2) {
    const std::int64_t p = std::llround(x * q);
    const long double err = std::fabs(x - static_cast<long double>(p) / q);
    if (err < best_err) {
      const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
      best = {p / g, q / g};
      best_err = err;
    }
  }
  return best;
}

LogComplex f_direct_log(cplx a, double gamma_nl, double rel_tol) {
  if (!(rel_tol > 0.0)) throw Error(Errc::precondition, "f_direct: rel_tol must be positive");
  const double r = std::abs(a);
  if (r > kDirectMaxAbsA)
    throw Error(Errc::too_large, "f_direct: |A| = " + std::to_string(r) + " above 1e4, use f_saddle");
  if (r == 0.0) return {0.0, 0.0};
  if (reduce_gamma(gamma_nl) == 0.0) return LogComplex::exp_of(a);

  using ld = long double;
  constexpr ld two_pi = 6.283185307179586476925286766559005768L;
  const ld g = reduce_gamma(gamma_nl);
  const ld th = std::arg(a);
  const ld lr = std::log(static_cast<ld>(r));
  const ld width = 12.0L * std::sqrt(static_cast<ld>(r) + 1.0L);

  auto log_term = [&](long n) { return n * lr - std::lgamma(static_cast<ld>(n) + 1.0L); };
  const long n_peak = static_cast<long>(std::floor(r));
  const ld l_peak = log_term(n_peak);
  const ld l_cut = std::log(static_cast<ld>(rel_tol)) - 5.0L;

  long n_lo = std::max(0L, static_cast<long>(std::floor(r - width)));
  while (n_lo > 0 && log_term(n_lo) - l_peak > l_cut) --n_lo;
  const long n_window = static_cast<long>(std::ceil(r + width));

  ld mag = std::exp(log_term(n_lo) - l_peak);
  ld sr = 0.0L, si = 0.0L;
  for (long n = n_lo;; ++n) {
    const ld nn = static_cast<ld>(n);
    const ld ph = std::fmod(nn * th + g * nn * nn, two_pi);
    sr += mag * std::cos(ph);
    si += mag * std::sin(ph);
    if (n >= n_window && std::log(mag) < l_cut) break;
    mag *= static_cast<ld>(r) / (nn + 1.0L);
    if (mag == 0.0L) break;
  }
  const ld abs_s = std::hypot(sr, si);
  if (abs_s == 0.0L) return {};
  return {static_cast<double>(l_peak + std::log(abs_s)),
          wrap_phase(static_cast<double>(std::atan2(si, sr)))};
}

cplx f_direct(cplx a, double gamma_nl, double rel_tol) {
  LogComplex v = f_direct_log(a, gamma_nl, rel_tol);
  if (v.log_mag > 709.0) throw Error(Errc::overflow, "f_direct: result exceeds double range");
  return v.value();
}

LogComplex f_rational_log(cplx a, const RationalGamma& frac) {
  frac.validate();
  if (frac.den > 100000) throw Error(Errc::precondition, "f_rational: denominator above 1e5");
  const std::int64_t n = frac.den;
  const std::int64_t k = ((frac.num % n) + n) % n;
  const double dn = static_cast<double>(n);

  std::vector<LogComplex> terms(static_cast<size_t>(n));
  cplx gauss{0.0, 0.0};
  for (std::int64_t j = 0; j < n; ++j) {
    const std::int64_t m2 = (2 * k % n) * j % n;
    const std::int64_t mq = k * ((j * j) % n) % n;
    const double psi = kTwoPi * static_cast<double>(m2) / dn;
    const double chi = kTwoPi * static_cast<double>(mq) / dn;
    const cplx e = a * cplx(std::cos(psi), std::sin(psi));
    terms[static_cast<size_t>(j)] = {e.real(), wrap_phase(e.imag() - chi)};
    gauss += cplx(std::cos(chi), -std::sin(chi));
  }
  return log_sum_exp_complex(terms) / LogComplex::from(gauss);
}

cplx f_rational(cplx a, const RationalGamma& frac) {
  LogComplex v = f_rational_log(a, frac);
  if (v.log_mag > 709.0) throw Error(Errc::overflow, "f_rational: result exceeds double range");
  return v.value();
}

}  // namespace kqpd
