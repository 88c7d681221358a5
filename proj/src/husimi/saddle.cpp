#include <array>
#include <cmath>
#include <string>

#include "kqpd/error.hpp"
#include "kqpd/husimi.hpp"

namespace kqpd {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kMaxCorrectionOrder = 8;

double sign_of(double x) { return x > 0 ? 1.0 : -1.0; }

// S3(2n + 2j, j) / (n + j)!
const std::array<std::array<double, 2 * kMaxCorrectionOrder + 1>, kMaxCorrectionOrder + 1>& cfww_coefficients() {
  static const auto table = [] {
    std::array<std::array<double, 2 * kMaxCorrectionOrder + 1>, kMaxCorrectionOrder + 1> c{};
    auto& st = Stirling3Table::global();
    for (int n = 1; n <= kMaxCorrectionOrder; ++n)
      for (int j = 0; j <= 2 * n; ++j)
        c[n][j] = std::exp(std::log(st.get_double(2 * n + 2 * j, j)) - std::lgamma(n + j + 1.0));
    return c;
  }();
  return table;
}

}  // namespace

bool branch_admissible(int k, double gamma_nl) { return gamma_nl > 0 ? k <= 0 : k >= 0; }

KbarSelection select_kbar(cplx a, double gamma_nl) {
  if (gamma_nl == 0.0 || a == cplx(0.0, 0.0))
    throw Error(Errc::precondition, "select_kbar: needs Gamma != 0 and A != 0");
  const cplx z = -2.0 * kI * a * gamma_nl;
  const double big_r = std::abs(z);
  const double phi = wrap_phase(std::arg(z));
  const double v = (phi + (big_r + 0.5 * kPi) * sign_of(gamma_nl)) / kTwoPi;
  const double fl = std::floor(v);
  const double frac = v - fl;
  double rounded;
  if (frac == 0.5)
    rounded = v > 0 ? fl : fl + 1.0;
  else
    rounded = std::floor(v + 0.5);
  return {-static_cast<int>(rounded), std::fabs(1.0 - 2.0 * frac)};
}

int select_kbar_main_text(cplx a, double gamma_nl) {
  const double s = sign_of(gamma_nl);
  const cplx ga = gamma_nl * a;
  const double v = (2.0 * std::abs(ga) + std::fabs(std::arg(ga) + 0.5 * kPi * s)) / kTwoPi;
  return -static_cast<int>(s * std::floor(v + 0.5));
}

cplx cfww_correction(cplx z_k, double gamma_nl, int order) {
  if (order < 0 || order > kMaxCorrectionOrder)
    throw Error(Errc::precondition, "cfww_correction: order must be in [0, 8]");
  const cplx d = kI + z_k;
  if (std::abs(d) < 1e-8) throw Error(Errc::degenerate_saddle, "cfww_correction: z_k too close to -i");
  if (order == 0) return {1.0, 0.0};
  const auto& c = cfww_coefficients();
  const cplx u = -gamma_nl / d;
  const cplx v = -0.5 * z_k / d;
  cplx total{1.0, 0.0};
  cplx un{1.0, 0.0};
  for (int n = 1; n <= order; ++n) {
    un *= u;
    cplx inner{0.0, 0.0};
    cplx vj{1.0, 0.0};
    for (int j = 0; j <= 2 * n; ++j) {
      inner += vj * c[n][j];
      vj *= v;
    }
    total += un * inner;
  }
  return total;
}

SaddleTerm saddle_term(cplx a, double gamma_nl, int k, int correction_order) {
  const double s = sign_of(gamma_nl);
  const cplx big_z = -2.0 * kI * a * gamma_nl;
  const cplx w = lambert_w(k, big_z);
  const cplx z = kI * w;
  if (std::abs(z + kI) < 1e-8) throw Error(Errc::degenerate_saddle, "saddle at z = -i");
  SaddleTerm t;
  t.branch_k = k;
  t.z_k = z;
  // at the saddle i Z e^{iz} = z, so f = z^2/(2i) + z = i (w^2 + 2w) / 2
  t.f_zk = 0.5 * kI * (w * w + 2.0 * w);
  // root of -s(i+z) taken as -i s sqrt(s(i+z)) so the contour crosses the saddle rightward
  const cplx log_amp = t.f_zk / (2.0 * gamma_nl) + std::log(2.0 * std::sqrt(std::fabs(gamma_nl))) -
                       0.5 * std::log(s * (kI + z)) + cplx(0.0, 0.5 * kPi * s);
  t.amplitude = LogComplex::exp_of(log_amp);
  t.correction = cfww_correction(z, gamma_nl, correction_order);
  return t;
}

SaddleResult f_saddle_detailed(cplx a, double gamma_nl, const FEvalOptions& opts) {
  SaddleResult res;
  const double g = reduce_gamma(gamma_nl);
  if (g == 0.0) {
    res.value = LogComplex::exp_of(a);
    return res;
  }
  if (std::abs(a) <= opts.direct_fallback_threshold) {
    res.value = f_direct_log(a, g, 1e-16);
    res.diag.used_direct = true;
    return res;
  }
  if (opts.branch_window < 0) throw Error(Errc::precondition, "branch_window must be >= 0");

  const KbarSelection sel = select_kbar(a, g);
  res.diag.kbar = sel.kbar;
  res.diag.delta_kbar = sel.delta_kbar;

  int center = sel.kbar;
  if (!branch_admissible(center, g)) {
    res.diag.kbar_outside_contour = true;
    center = 0;
  }
  std::vector<LogComplex> parts;
  for (int j = -opts.branch_window; j <= opts.branch_window; ++j) {
    const int k = center + j;
    if (!branch_admissible(k, g)) continue;
    SaddleTerm t = saddle_term(a, g, k, opts.correction_order);
    parts.push_back(t.amplitude * LogComplex::from(t.correction));
    res.terms.push_back(t);
  }
  for (size_t i = 0; i < res.terms.size(); ++i) {
    if (res.terms[i].branch_k != center) continue;
    for (size_t j = 0; j < res.terms.size(); ++j) {
      if (std::abs(res.terms[j].branch_k - center) != 1) continue;
      if (std::fabs(res.terms[i].f_zk.real() - res.terms[j].f_zk.real()) < 2.0 * std::fabs(g))
        res.diag.two_term_regime = true;
    }
  }
  const double s = sign_of(g);
  const LogComplex prefactor{-std::log(2.0 * std::sqrt(std::fabs(g))), wrap_phase(-0.25 * kPi * s)};
  res.value = log_sum_exp_complex(parts) * prefactor;
  return res;
}

LogComplex f_saddle(cplx a, double gamma_nl, const FEvalOptions& opts) {
  return f_saddle_detailed(a, gamma_nl, opts).value;
}

namespace {

LogReal q_from_f(const KerrState& st, cplx beta, const LogComplex& f) {
  if (f.is_zero()) return {};
  const double lq = 2.0 * f.log_mag - std::norm(st.alpha) - std::norm(beta) - std::log(kPi);
  return {lq, 1};
}

cplx husimi_argument(const KerrState& st, cplx beta, double g) {
  return st.alpha * std::conj(beta) * std::polar(1.0, -g);
}

}  // namespace

LogReal husimi_point(const KerrState& state, cplx beta, const FEvalOptions& opts) {
  const double g = reduce_gamma(state.gamma_nl);
  if (g == 0.0) return {-std::norm(beta - state.alpha) - std::log(kPi), 1};
  return q_from_f(state, beta, f_saddle(husimi_argument(state, beta, g), g, opts));
}

LogReal husimi_direct(const KerrState& state, cplx beta) {
  const double g = reduce_gamma(state.gamma_nl);
  if (g == 0.0) return {-std::norm(beta - state.alpha) - std::log(kPi), 1};
  if (std::abs(state.alpha) * std::abs(beta) > kDirectMaxAbsA)
    throw Error(Errc::oracle_out_of_range, "husimi_direct: |alpha||beta| above 1e4");
  return q_from_f(state, beta, f_direct_log(husimi_argument(state, beta, g), g, 1e-17));
}

LogReal husimi_rational(const KerrState& state, cplx beta, const RationalGamma& frac) {
  const double g = frac.gamma();
  return q_from_f(state, beta, f_rational_log(husimi_argument(state, beta, g), frac));
}

}  // namespace kqpd
