#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "kqpd/husimi.hpp"
#include "kqpd/validate.hpp"
#include "kqpd/wigner.hpp"

namespace kqpd {

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["pass"] = pass();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    j["checks"].push_back(
        {{"suite", c.suite}, {"name", c.name}, {"pass", c.pass}, {"metric", c.metric}, {"tolerance", c.tolerance}});
  return j.dump(2) + "\n";
}

std::vector<cplx> banana_samples(const KerrState& state, int count, std::uint64_t seed, double min_log_q) {
  Sampler s(seed);
  const double a = std::abs(state.alpha);
  const double g = reduce_gamma(state.gamma_nl);
  const double center = std::arg(state.alpha) + 2.0 * g * a * a;
  const double half = std::min(kPi, 3.0 * (1.0 / a + 2.0 * std::fabs(g) * a));
  const double r_hi = std::min(a + 2.0, kDirectMaxAbsA / a);
  std::vector<cplx> out;
  for (int tries = 0; tries < 200 * count && static_cast<int>(out.size()) < count; ++tries) {
    const cplx b = std::polar(s.uniform(a - 2.0, r_hi), center + s.uniform(-half, half));
    if (husimi_direct(state, b).log_mag >= min_log_q) out.push_back(b);
  }
  return out;
}

namespace {

using boost::multiprecision::cpp_rational;

void add(ValidationReport& r, const std::string& suite, const std::string& name, double metric, double tol) {
  r.checks.push_back({suite, name, metric <= tol, metric, tol});
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

void lambert_suite(ValidationReport& rep, Sampler& s, int n) {
  double worst = 0.0;
  bool ordered = true;
  for (int i = 0; i < n; ++i) {
    const int k = s.integer(-20, 20);
    const cplx z = std::polar(std::pow(10.0, s.uniform(-3.0, 6.0)), s.uniform(-kPi, kPi));
    const cplx w = lambert_w(k, z);
    worst = std::max(worst, std::abs(w * std::exp(w) - z) / std::max(std::abs(z), 1.0));
    if (k < 20 && !(lambert_w(k + 1, z).imag() > w.imag())) ordered = false;
  }
  add(rep, "specfun", "lambert_w residual", worst, 1e-12);
  add(rep, "specfun", "lambert_w branch ordering", ordered ? 0.0 : 1.0, 0.0);
}

void stirling_suite(ValidationReport& rep) {
  // coefficients of (e^t - 1 - t - t^2/2)^k / k! up to t^12
  constexpr int kN = 12;
  std::vector<cpp_rational> g(kN + 1, 0);
  cpp_rational fact = 1;
  for (int m = 1; m <= kN; ++m) {
    fact *= m;
    if (m >= 3) g[m] = cpp_rational(1) / fact;
  }
  std::vector<cpp_rational> pw(kN + 1, 0);
  pw[0] = 1;
  long mismatches = 0;
  cpp_rational kfact = 1;
  for (int k = 0; 3 * k <= kN; ++k) {
    if (k > 0) {
      std::vector<cpp_rational> next(kN + 1, 0);
      for (int i = 0; i <= kN; ++i)
        for (int j = 0; i + j <= kN; ++j) next[i + j] += pw[i] * g[j];
      pw = next;
      kfact *= k;
    }
    cpp_rational nf = 1;
    for (int n = 0; n <= kN; ++n) {
      if (n > 0) nf *= n;
      const cpp_rational expect = pw[n] * nf / kfact;
      if (expect != cpp_rational(stirling3(n, k))) ++mismatches;
      if (n + 1 <= kN && k >= 1) {
        const BigInt lhs = stirling3(n + 1, k);
        const BigInt rhs = BigInt(k) * stirling3(n, k) + BigInt(n * (n - 1) / 2) * stirling3(n - 2, k - 1);
        if (lhs != rhs) ++mismatches;
      }
    }
  }
  add(rep, "specfun", "stirling3 generating function and recurrence, n <= 12", static_cast<double>(mismatches), 0.0);
}

void gamma0_suite(ValidationReport& rep, Sampler& s, int n) {
  double wq = 0.0, ww = 0.0, wd = 0.0;
  for (double a : {1.0, 100.0}) {
    const KerrState st{std::polar(a, s.uniform(-kPi, kPi)), 0.0};
    for (int i = 0; i < n; ++i) {
      const cplx b = st.alpha + cplx(s.uniform(-3.0, 3.0), s.uniform(-3.0, 3.0));
      const double q = std::exp(-std::norm(b - st.alpha)) / kPi;
      const double w = 2.0 / kPi * std::exp(-2.0 * std::norm(b - st.alpha));
      wq = std::max(wq, rel(husimi_point(st, b).value(), q));
      ww = std::max(ww, rel(wigner_point(st, b).value(), w));
      wd = std::max(wd, rel(husimi_direct(st, b).value(), q));
    }
  }
  add(rep, "gamma0", "husimi_point closed form", wq, 1e-12);
  add(rep, "gamma0", "wigner_point closed form", ww, 1e-12);
  add(rep, "gamma0", "husimi_direct closed form", wd, 1e-10);
}

void husimi_suite(ValidationReport& rep, const ValidateConfig& cfg, int n) {
  std::vector<double> alphas{10.0, 30.0};
  if (cfg.scale == "full") alphas.push_back(100.0);
  for (double a : alphas)
    for (double g : {1e-2, 1e-3}) {
      const KerrState st{cplx(a, 0.0), g};
      double worst = 0.0;
      for (const cplx& b : banana_samples(st, n, cfg.seed, -25.0))
        worst = std::max(worst, std::fabs(husimi_point(st, b).log_mag - husimi_direct(st, b).log_mag));
      add(rep, "husimi", "saddle vs direct |alpha|=" + std::to_string(static_cast<int>(a)) +
                             " gamma=" + (g == 1e-2 ? std::string("1e-2") : std::string("1e-3")),
          worst, 100.0 * g);
    }
}

void wigner_suite(ValidationReport& rep, Sampler& s, int n) {
  const KerrState small{std::polar(2.0, 0.3), 0.05};
  const KerrState mid{cplx(4.0, 0.0), 0.01};
  double qf = 0.0, ef = 0.0, fe = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx b = small.alpha * std::polar(1.0, 0.1) + cplx(s.uniform(-1.5, 1.5), s.uniform(-1.5, 1.5));
    qf = std::max(qf, std::fabs(wigner_qseries_oracle(small, b, 0) - wigner_fock_oracle(small, b, 80)));
    const cplx c = std::polar(4.0 + s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0));
    const WignerOptions exact{1e-12, 0, true};
    const WignerPointResult pe = wigner_point_detailed(mid, c, exact);
    ef = std::max(ef, std::fabs(pe.value.value() - wigner_fock_oracle(mid, c, 80)));
    fe = std::max(fe, std::fabs(wigner_fourier_exact(mid, c, pe.kmax) - pe.value.value()));
  }
  add(rep, "wigner", "qseries vs fock |alpha|=2", qf, 1e-6);
  add(rep, "wigner", "point(exact) vs fock |alpha|=4", ef, 1e-8);
  add(rep, "wigner", "fourier_exact vs point(exact) |alpha|=4", fe, 1e-10);
}

}  // namespace

ValidationReport run_validation(const ValidateConfig& cfg) {
  ValidationReport rep;
  const bool full = cfg.scale == "full";
  Sampler s(cfg.seed);
  lambert_suite(rep, s, full ? 4000 : 400);
  stirling_suite(rep);
  gamma0_suite(rep, s, full ? 200 : 40);
  husimi_suite(rep, cfg, full ? 64 : 16);
  wigner_suite(rep, s, full ? 32 : 8);
  return rep;
}

}  // namespace kqpd
