#include <algorithm>
#include <cmath>
#include <string>

#include "kqpd/error.hpp"
#include "kqpd/wigner.hpp"

namespace kqpd {
namespace {

constexpr long kPhasorResync = 256;

double closed_form_log(const KerrState& st, cplx beta) {
  return std::log(2.0 / kPi) - 2.0 * std::norm(beta - st.alpha);
}

}  // namespace

void WignerOptions::validate() const {
  if (!(rel_eps > 0.0 && rel_eps <= 1e-2)) throw Error(Errc::precondition, "rel_eps must be in (0, 1e-2]");
  if (kmax_cap < 0) throw Error(Errc::precondition, "kmax_cap must be >= 1 (or 0 for automatic)");
}

long effective_kmax_cap(double gamma_nl, const WignerOptions& opts) {
  const double g = std::fabs(reduce_gamma(gamma_nl));
  if (g == 0.0) return 0;
  const double half_pi = 0.5 * kPi;
  double c = std::ceil(half_pi / g);
  if (c > 2e9) c = 2e9;
  long cap = static_cast<long>(c);
  while (cap > 0 && static_cast<double>(cap) * g >= half_pi) --cap;
  if (opts.kmax_cap > 0) cap = std::min(cap, opts.kmax_cap);
  return cap;
}

double wigner_phi0(const KerrState& state, cplx beta) {
  const double g = reduce_gamma(state.gamma_nl);
  return wrap_phase(std::arg(state.alpha * std::conj(beta) * std::polar(1.0, -g)));
}

cplx wigner_term_exponent(const KerrState& state, double beta_abs, long k, bool exact) {
  const double g = reduce_gamma(state.gamma_nl);
  const double a = std::abs(state.alpha);
  const double x = 4.0 * a * beta_abs;
  const double kg = static_cast<double>(k) * g;
  const double sh = std::sin(0.5 * kg);
  const double sk = std::sin(kg);
  // |alpha|^2 (1 - e^{2ik Gamma}) - 2 (|beta| - |alpha|)^2 + log(2/pi)
  const cplx rest(a * a * 2.0 * sk * sk - 2.0 * (beta_abs - a) * (beta_abs - a) + std::log(2.0 / kPi),
                  -a * a * std::sin(2.0 * kg));
  if (exact) {
    const cplx z = x * cplx(std::cos(kg), sk);
    const LogComplex li = bessel_i_log_exact(static_cast<int>(k), z);
    if (li.is_zero()) return {kNegInf, 0.0};
    return log_of(li) - x + rest;
  }
  if (x < kBesselAsymptoticMin)
    throw Error(Errc::use_exact, "wigner: 4|alpha beta| = " + std::to_string(x) + " below the asymptotic regime");
  if (!(std::cos(kg) > 0.0)) throw Error(Errc::domain, "wigner: Re z <= 0, k Gamma outside (-pi/2, pi/2)");
  const cplx z = x * cplx(std::cos(kg), sk);
  // x (e^{ik Gamma} - 1) written without cancellation
  const cplx shift(-2.0 * x * sh * sh, x * sk);
  return shift + bessel_v_minus_z(static_cast<int>(k), z) - 0.5 * std::log(kTwoPi) + rest;
}

double wigner_term_log_mag(const KerrState& state, double beta_abs, long k, bool exact) {
  return wigner_term_exponent(state, beta_abs, k, exact).real();
}

std::optional<double> beta_split(const KerrState& state) {
  const double a = std::abs(state.alpha);
  const double p = a * a * std::fabs(reduce_gamma(state.gamma_nl));
  if (p < 0.5) return std::nullopt;
  const double q = 1.0 / (2.0 * p);
  return 0.5 * a * (1.0 + std::sqrt(1.0 - q * q));
}

KmaxResult find_kmax(const KerrState& state, cplx beta, const WignerOptions& opts) {
  opts.validate();
  KmaxResult res;
  if (reduce_gamma(state.gamma_nl) == 0.0) return res;
  const long cap = effective_kmax_cap(state.gamma_nl, opts);
  const double b = std::abs(beta);
  auto prof = [&](long k) { return wigner_term_log_mag(state, b, k, opts.exact_bessel); };

  // linear stride plus a geometric ladder, so narrow maxima near k = 0
  std::vector<long> ks;
  const long stride = std::max(1L, (cap + 511) / 512);
  for (long k = 0; k <= cap; k += stride) ks.push_back(k);
  ks.push_back(cap);
  for (double k = 1.0; k <= static_cast<double>(cap); k *= std::sqrt(2.0)) ks.push_back(static_cast<long>(k));
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  std::vector<double> vals(ks.size());
  size_t best = 0;
  for (size_t i = 0; i < ks.size(); ++i) {
    vals[i] = prof(ks[i]);
    if (vals[i] > vals[best]) best = i;
  }
  // refine the peak between neighbouring samples (unimodal there)
  long lo = ks[best > 0 ? best - 1 : 0];
  long hi = ks[best + 1 < ks.size() ? best + 1 : best];
  long peak_k = ks[best];
  double peak = vals[best];
  while (hi - lo > 2) {
    const long m1 = lo + (hi - lo) / 3;
    const long m2 = hi - (hi - lo) / 3;
    if (prof(m1) < prof(m2))
      lo = m1;
    else
      hi = m2;
  }
  for (long k = lo; k <= hi; ++k) {
    const double v = prof(k);
    if (v > peak) {
      peak = v;
      peak_k = k;
    }
  }
  res.peak_k = peak_k;
  res.peak_log = peak;
  if (peak == kNegInf) return res;
  const double thr = peak + std::log(opts.rel_eps);

  size_t last = 0;
  for (size_t i = 0; i < ks.size(); ++i)
    if (vals[i] >= thr) last = i;
  if (ks[last] < peak_k) {
    // the refined peak lies past the last sample above threshold
    while (last + 1 < ks.size() && ks[last + 1] <= peak_k) ++last;
  }
  long above = std::max(ks[last], peak_k);
  while (true) {
    if (above >= cap) {
      res.kmax = cap;
      res.truncated = prof(cap) >= thr;
      return res;
    }
    auto next = std::upper_bound(ks.begin(), ks.end(), above);
    long below = next == ks.end() ? cap : *next;
    if (below == above) below = std::min(cap, above + 1);
    if (prof(below) >= thr) {
      above = below;
      continue;
    }
    while (below - above > 1) {
      const long mid = above + (below - above) / 2;
      if (prof(mid) >= thr)
        above = mid;
      else
        below = mid;
    }
    // probes past the candidate
    const long probe = std::max(1L, stride / 8);
    long reopen = -1;
    for (int j = 1; j <= 4; ++j) {
      const long k = std::min(cap, above + j * probe);
      if (prof(k) >= thr) reopen = k;
    }
    if (reopen < 0) break;
    above = reopen;
  }
  res.kmax = above;
  return res;
}

WignerRadialSeries::WignerRadialSeries(const KerrState& state, double beta_abs, const WignerOptions& opts) {
  const KmaxResult km = find_kmax(state, cplx(beta_abs, 0.0), opts);
  kmax_ = km.kmax;
  truncated_ = km.truncated;
  build(state, beta_abs, opts.exact_bessel);
}

WignerRadialSeries::WignerRadialSeries(const KerrState& state, double beta_abs, long kmax, bool exact) {
  if (kmax < 0) throw Error(Errc::precondition, "kmax must be >= 0");
  kmax_ = kmax;
  build(state, beta_abs, exact);
}

void WignerRadialSeries::build(const KerrState& state, double beta_abs, bool exact) {
  const size_t n = static_cast<size_t>(kmax_) + 1;
  std::vector<cplx> ep(n), en(n);
  double top = kNegInf;
  for (long k = 0; k <= kmax_; ++k) {
    ep[k] = wigner_term_exponent(state, beta_abs, k, exact);
    en[k] = k == 0 ? ep[0] : wigner_term_exponent(state, beta_abs, -k, exact);
    top = std::max({top, ep[k].real(), en[k].real()});
  }
  log_scale_ = top;
  pos_.resize(n);
  neg_.resize(n);
  abs_total_ = 0.0;
  for (size_t k = 0; k < n; ++k) {
    pos_[k] = top == kNegInf ? cplx{} : LogComplex::exp_of(ep[k] - top).value();
    neg_[k] = top == kNegInf ? cplx{} : LogComplex::exp_of(en[k] - top).value();
    abs_total_ += std::abs(pos_[k]) + (k > 0 ? std::abs(neg_[k]) : 0.0);
  }
}

cplx WignerRadialSeries::sum(double phi0) const {
  cplx acc = pos_[0];
  const cplx step = std::polar(1.0, phi0);
  cplx p{1.0, 0.0};
  for (long k = 1; k <= kmax_; ++k) {
    if (k % kPhasorResync == 0)
      p = std::polar(1.0, std::remainder(static_cast<double>(k) * phi0, kTwoPi));
    else
      p *= step;
    acc += p * pos_[k] + std::conj(p) * neg_[k];
  }
  return acc;
}

LogReal WignerRadialSeries::evaluate(double phi0) const {
  const cplx s = sum(phi0);
  if (abs_total_ > 0.0 && std::fabs(s.imag()) > kWignerResidueMax * abs_total_)
    throw Error(Errc::accuracy, "wigner: imaginary residue above 1e-8 of the series scale");
  LogReal r = LogReal::from(s.real());
  if (r.sign != 0) r.log_mag += log_scale_;
  return r;
}

double WignerRadialSeries::residue(double phi0) const {
  if (abs_total_ == 0.0) return 0.0;
  return std::fabs(sum(phi0).imag()) / abs_total_;
}

std::vector<WignerSeriesTerm> WignerRadialSeries::terms(double phi0) const {
  std::vector<WignerSeriesTerm> out;
  for (long k = -kmax_; k <= kmax_; ++k) {
    const cplx t = k >= 0 ? pos_[k] : neg_[-k];
    LogComplex lt = LogComplex::from(t);
    if (!lt.is_zero()) {
      lt.log_mag += log_scale_;
      lt = lt * LogComplex{0.0, wrap_phase(std::remainder(static_cast<double>(k) * phi0, kTwoPi))};
    }
    out.push_back({static_cast<int>(k), lt});
  }
  return out;
}

WignerPointResult wigner_point_detailed(const KerrState& state, cplx beta, const WignerOptions& opts) {
  opts.validate();
  WignerPointResult res;
  if (reduce_gamma(state.gamma_nl) == 0.0 || state.alpha == cplx(0.0, 0.0)) {
    res.value = {closed_form_log(state, beta), 1};
    res.closed_form = true;
    return res;
  }
  WignerRadialSeries series(state, std::abs(beta), opts);
  const double phi0 = wigner_phi0(state, beta);
  res.value = series.evaluate(phi0);
  res.kmax = series.kmax();
  res.truncated = series.truncated();
  res.residue = series.residue(phi0);
  return res;
}

LogReal wigner_point(const KerrState& state, cplx beta, const WignerOptions& opts) {
  return wigner_point_detailed(state, beta, opts).value;
}

double wigner_fourier_exact(const KerrState& state, cplx beta, long k_max) {
  const double a = std::abs(state.alpha);
  const double b = std::abs(beta);
  if (4.0 * a * b > kBesselExactMaxAbs) throw Error(Errc::too_large, "wigner_fourier_exact: 4|alpha beta| above 1e3");
  if (k_max < 0) throw Error(Errc::precondition, "k_max must be >= 0");
  const double phi0 = wigner_phi0(state, beta);
  std::vector<LogComplex> terms;
  terms.reserve(static_cast<size_t>(2 * k_max + 1));
  for (long k = -k_max; k <= k_max; ++k) {
    const cplx e = wigner_term_exponent(state, b, k, true);
    if (e.real() == kNegInf) continue;
    terms.push_back(LogComplex::exp_of(e + cplx(0.0, std::remainder(static_cast<double>(k) * phi0, kTwoPi))));
  }
  return log_sum_exp_complex(terms).value().real();
}

}  // namespace kqpd
