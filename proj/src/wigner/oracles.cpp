#include <cmath>
#include <string>
#include <vector>

#include "kqpd/error.hpp"
#include "kqpd/wigner.hpp"

namespace kqpd {

double wigner_qseries_oracle(const KerrState& state, cplx beta, int m_max) {
  const double a2 = std::norm(state.alpha);
  if (a2 > 9.0) throw Error(Errc::oracle_out_of_range, "wigner_qseries_oracle: |alpha| above 3");
  const double g = reduce_gamma(state.gamma_nl);
  const int m_min = static_cast<int>(std::ceil(a2 * std::exp(2.0) + 40.0));
  const int m_used = a2 == 0.0 ? 0 : std::max(m_max, m_min);
  const double b2 = std::norm(beta);
  std::vector<LogComplex> terms;
  for (int m = 0; m <= m_used; ++m) {
    const LogReal q = husimi_direct(state, 2.0 * beta * std::polar(1.0, -2.0 * m * g));
    if (q.sign == 0) continue;
    const double lm = m == 0 ? 0.0 : m * std::log(a2) - std::lgamma(m + 1.0);
    terms.push_back({std::log(2.0) + 2.0 * b2 + lm + q.log_mag, m % 2 == 0 ? 0.0 : kPi});
  }
  return log_sum_exp_complex(terms).value().real();
}

// W = (2/pi) sum_{n,m} c_n c_m* <m| D(2 beta) (-1)^N |n>, grouped by diagonal
// offset d with normalized associated Laguerre functions.
double wigner_fock_oracle(const KerrState& state, cplx beta, int n_cut) {
  if (n_cut > 400 || n_cut < 0) throw Error(Errc::precondition, "wigner_fock_oracle: n_cut must be in [0, 400]");
  const double a2 = std::norm(state.alpha);
  if (a2 + 10.0 * std::sqrt(a2 + 1.0) > n_cut)
    throw Error(Errc::precondition, "wigner_fock_oracle: n_cut below |alpha|^2 + 10 sqrt(|alpha|^2 + 1)");
  const double g = reduce_gamma(state.gamma_nl);
  const double la = std::log(std::abs(state.alpha));
  const double aa = std::arg(state.alpha);

  const int n = n_cut + 1;
  std::vector<double> lc(n);
  std::vector<double> pc(n);
  auto log_c = [&](int j) {
    if (a2 == 0.0) return j == 0 ? 0.0 : kNegInf;
    return -0.5 * a2 + j * la - 0.5 * std::lgamma(j + 1.0);
  };
  for (int j = 0; j < n; ++j) {
    lc[j] = log_c(j);
    pc[j] = j * aa + g * static_cast<double>(j) * (j - 1);
  }
  double tail = 0.0;
  for (int j = n; j < n + 4000; ++j) {
    const double t = std::exp(2.0 * log_c(j));
    tail += t;
    if (t < 1e-30) break;
  }
  if (tail > 1e-12) throw Error(Errc::precondition, "wigner_fock_oracle: cutoff leaves tail weight above 1e-12");

  const cplx gam = 2.0 * beta;
  const double x = std::norm(gam);
  const double lr = 0.5 * std::log(x);
  const double theta = std::arg(gam);

  double total = 0.0;
  for (int d = 0; d < n; ++d) {
    // f_j = v_j e^{ls}
    double ls = x == 0.0 ? (d == 0 ? 0.0 : kNegInf) : d * lr - 0.5 * x - 0.5 * std::lgamma(d + 1.0);
    if (ls == kNegInf) continue;
    double v_prev = 0.0;
    double v = 1.0;
    cplx acc{0.0, 0.0};
    for (int j = 0; j + d < n; ++j) {
      const double lw = lc[j] + lc[j + d] + ls;
      if (lw > -745.0 && v != 0.0) {
        const double sgn = j % 2 == 0 ? 1.0 : -1.0;
        acc += sgn * v * std::exp(lw) * std::polar(1.0, pc[j] - pc[j + d]);
      }
      const double jj = j;
      const double v_next =
          ((2.0 * jj + 1.0 + d - x) * v - std::sqrt(jj * (jj + d)) * v_prev) / std::sqrt((jj + 1.0) * (jj + 1.0 + d));
      v_prev = v;
      v = v_next;
      if (std::fabs(v) > 1e200) {
        v *= 1e-200;
        v_prev *= 1e-200;
        ls += 200.0 * std::log(10.0);
      }
    }
    if (d == 0)
      total += acc.real();
    else
      total += 2.0 * (std::polar(1.0, d * theta) * acc).real();
  }
  return 2.0 / kPi * total;
}

}  // namespace kqpd
