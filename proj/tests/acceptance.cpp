#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kqpd/bench.hpp"
#include "kqpd/error.hpp"
#include "kqpd/grid.hpp"
#include "kqpd/husimi.hpp"
#include "kqpd/specfun.hpp"
#include "kqpd/validate.hpp"
#include "kqpd/wigner.hpp"

using namespace kqpd;

namespace {

struct Outcome {
  bool pass = false;
  std::string metric;
};

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GridSpec window(const KerrState& st, int n) {
  GridSpec s = auto_window(st);
  s.resolution = {n, n};
  return s;
}

// |exp(log_mag - ref_log) - 1| with matching sign
double rel_log(const LogReal& v, double ref_log) {
  if (v.sign != 1) return 1e300;
  return std::fabs(std::expm1(v.log_mag - ref_log));
}

Outcome gamma_zero_exactness() {
  double worst_q = 0.0, worst_w = 0.0;
  for (double a : {1.0, 100.0, 1e4}) {
    const KerrState st{std::polar(a, 0.3), 0.0};
    const GridSpec s = window(st, 100);
    const QpdField q = eval_field(st, s, FieldKind::husimi);
    const QpdField w = eval_field(st, s, FieldKind::wigner);
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        const double d2 = std::norm(s.node(i, j) - st.alpha);
        worst_q = std::max(worst_q, rel_log(q.at(i, j), -d2 - std::log(kPi)));
        worst_w = std::max(worst_w, rel_log(w.at(i, j), std::log(2.0 / kPi) - 2.0 * d2));
      }
    worst_q = std::max(worst_q, std::fabs(husimi_point(st, st.alpha).value() * kPi - 1.0));
    worst_w = std::max(worst_w, std::fabs(wigner_point(st, st.alpha).value() * kPi / 2.0 - 1.0));
  }
  return {worst_q <= 1e-10 && worst_w <= 1e-10, fmt("max rel Q %.2e, W %.2e (tol 1e-10)", worst_q, worst_w)};
}

Outcome husimi_oracle_equivalence() {
  bool ok = true;
  std::ostringstream os;
  std::vector<double> gammas{1e-2, 1e-3}, maxes;
  int used = 0;
  for (double g : gammas) {
    double gmax = 0.0;
    for (double a : {10.0, 30.0, 100.0}) {
      const KerrState st{a, g};
      const auto pts = banana_samples(st, 64, 2024, -25.0);
      if (pts.size() != 64) ok = false;
      double worst = 0.0;
      for (const cplx& b : pts) {
        const double d = husimi_direct(st, b).log_mag;
        if (d < -200.0) continue;
        ++used;
        worst = std::max(worst, std::fabs(husimi_point(st, b).log_mag - d));
      }
      ok = ok && worst <= 100.0 * g;
      gmax = std::max(gmax, worst);
      os << fmt("|a|=%g G=%g err %.1e; ", a, g, worst);
    }
    maxes.push_back(gmax);
  }
  const double slope = std::log10(maxes[0] / maxes[1]) / std::log10(gammas[0] / gammas[1]);
  ok = ok && slope >= 0.9;
  os << fmt("samples %d, max-error slope vs Gamma %.2f (>= 0.9)", used, slope);
  return {ok, os.str()};
}

Outcome rational_bridge() {
  Sampler s(77);
  const RationalGamma fifth{1, 5};
  double worst_direct = 0.0;
  for (int i = 0; i < 64; ++i) {
    const cplx a = std::polar(s.uniform(0.0, 50.0), s.uniform(-kPi, kPi));
    const cplx d = log_of(f_direct_log(a, fifth.gamma(), 1e-18));
    const cplx r = log_of(f_rational_log(a, fifth));
    worst_direct = std::max(worst_direct, std::abs(std::exp(r - d) - 1.0));
  }
  const RationalGamma frac{7, 4001};
  const double g = frac.gamma();
  double worst_saddle = 0.0;
  for (double dphi : {-0.05, -0.02, 0.0, 0.02, 0.05}) {
    const cplx a = std::polar(2000.0, -2.0 * 2000.0 * g + dphi);
    const cplx r = log_of(f_rational_log(a, frac));
    const cplx f = log_of(f_saddle(a, g));
    worst_saddle = std::max(worst_saddle, std::abs(std::exp(f - r) - 1.0));
  }
  return {worst_direct <= 1e-10 && worst_saddle <= 1e-3,
          fmt("rational vs direct (2pi/5, |A|<=50) %.2e (tol 1e-10); saddle vs rational (2pi 7/4001, |A|=2000) %.2e "
              "(tol 1e-3)",
              worst_direct, worst_saddle)};
}

Outcome wigner_oracle_chain() {
  const double g = 0.01;
  const WignerOptions exact{1e-14, 0, true};
  Sampler s(404);
  double worst3 = 0.0, worst5 = 0.0;
  for (int i = 0; i < 32; ++i) {
    const KerrState st{3.0, g};
    const cplx b = std::polar(3.0 + s.uniform(-1.5, 1.5), 2.0 * g * 9.0 + s.uniform(-1.0, 1.0));
    const double v[4] = {wigner_qseries_oracle(st, b, 0), wigner_fock_oracle(st, b, 80),
                         wigner_fourier_exact(st, b, effective_kmax_cap(g, {})), wigner_point(st, b, exact).value()};
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) worst3 = std::max(worst3, std::fabs(v[p] - v[q]));
  }
  for (int i = 0; i < 32; ++i) {
    const KerrState st{5.0, g};
    const cplx b = std::polar(5.0 + s.uniform(-1.5, 1.5), 2.0 * g * 25.0 + s.uniform(-1.0, 1.0));
    const double v[3] = {wigner_fock_oracle(st, b, 120), wigner_fourier_exact(st, b, effective_kmax_cap(g, {})),
                         wigner_point(st, b, exact).value()};
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) worst5 = std::max(worst5, std::fabs(v[p] - v[q]));
  }
  return {worst3 <= 1e-6 && worst5 <= 1e-6,
          fmt("max pairwise |dW|: 4 evaluators at |a|=3 %.2e, 3 evaluators at |a|=5 %.2e (tol 1e-6)", worst3, worst5)};
}

Outcome asymptotic_bessel_convergence() {
  const double g = 0.01;
  std::vector<double> amps{5.0, 20.0, 80.0}, devs;
  for (double a : amps) {
    const KerrState st{a, g};
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < 16; ++i) {
      const cplx b = std::polar(a + (i % 4 - 1.5) * 0.3, 2.0 * g * a * a + (i / 4 - 1.5) * 0.5 / a);
      const double e = wigner_point(st, b, {1e-12, 0, true}).value();
      const double v = wigner_point(st, b, {1e-12, 0, false}).value();
      worst = std::max(worst, std::fabs(v - e));
      scale = std::max(scale, std::fabs(e));
    }
    devs.push_back(worst / scale);
  }
  const double slope = loglog_slope(amps, devs);
  return {slope <= -0.9 && devs[1] < devs[0] && devs[2] < devs[1],
          fmt("rel deviation %.2e, %.2e, %.2e at |a| = 5, 20, 80; slope %.2f (<= -0.9)", devs[0], devs[1], devs[2],
              slope)};
}

Outcome negativity_witness() {
  const KerrState st{50.0, 1e-3};
  const GridSpec s = window(st, 300);
  const QpdField w = eval_field(st, s, FieldKind::wigner);
  const QpdField q = eval_field(st, s, FieldKind::husimi);
  double wmin = 1.0, qmin = 1.0;
  bool signs = true;
  for (const auto& v : w.values) wmin = std::min(wmin, v.value());
  for (const auto& v : q.values) {
    qmin = std::min(qmin, v.value());
    signs = signs && v.sign >= 0;
  }
  return {wmin < 0.0 && qmin >= 0.0 && signs, fmt("min W %.4e (< 0), min Q %.3e (>= 0)", wmin, qmin)};
}

Outcome complexity() {
  const BenchReport rep = run_bench(BenchConfig{});
  std::ostringstream os;
  bool ok = true;
  for (const auto& sc : rep.slopes) {
    ok = ok && sc.pass();
    os << fmt("%s %.3f [%.2f, %.2f]; ", sc.name.c_str(), sc.slope, sc.lo, sc.hi);
  }
  return {ok && !rep.slopes.empty(), os.str()};
}

struct Morphology {
  double seconds = 0.0;
  bool finite = true;
  double mass = 0.0;
  int multi_run_rows = 0;
  double drift = 0.0;
  std::vector<int> hpd_span;       // angular columns of the highest-density region, per mass fraction
  std::vector<int> rel_level_span;  // angular columns of |X| >= L max|X|
};

Morphology analyse(const QpdField& f, double seconds) {
  Morphology m;
  m.seconds = seconds;
  const GridSpec& s = f.spec;
  const int n0 = s.resolution[0], n1 = s.resolution[1];
  double vmax = 0.0;
  for (const auto& v : f.values) {
    if (std::isnan(v.log_mag) || v.log_mag == std::numeric_limits<double>::infinity()) m.finite = false;
    vmax = std::max(vmax, std::fabs(v.value()));
  }
  m.mass = integrate_field(f);

  // one contiguous run above 5% of the row peak in every row that carries weight
  std::vector<double> row_mass(n0, 0.0), row_centroid(n0, 0.0), radius(n0, 0.0);
  std::vector<int> runs(n0, 0);
  double heaviest = 0.0;
  for (int i = 0; i < n0; ++i) {
    radius[i] = s.axis(0, i);
    double rmax = 0.0, wsum = 0.0, wphi = 0.0;
    for (int j = 0; j < n1; ++j) {
      const double v = std::max(0.0, f.at(i, j).value());
      rmax = std::max(rmax, v);
      wsum += v;
      wphi += v * (s.axis(1, j) - std::arg(s.center));
    }
    row_mass[i] = wsum * std::fabs(radius[i]);
    row_centroid[i] = wsum > 0.0 ? wphi / wsum : 0.0;
    heaviest = std::max(heaviest, row_mass[i]);
    bool inside = false;
    for (int j = 0; j < n1; ++j) {
      const bool above = rmax > 0.0 && f.at(i, j).value() >= 0.05 * rmax;
      if (above && !inside) ++runs[i];
      inside = above;
    }
  }
  for (int i = 0; i < n0; ++i)
    if (row_mass[i] >= 1e-3 * heaviest && runs[i] > 1) ++m.multi_run_rows;
  double sw = 0, sr = 0, sc = 0, srr = 0, src = 0;
  for (int i = 0; i < n0; ++i) {
    if (row_mass[i] < 1e-3 * heaviest) continue;
    const double w = row_mass[i];
    sw += w, sr += w * radius[i], sc += w * row_centroid[i];
    srr += w * radius[i] * radius[i], src += w * radius[i] * row_centroid[i];
  }
  m.drift = (sw * src - sr * sc) / (sw * srr - sr * sr);

  std::vector<std::pair<double, int>> cells;
  double total = 0.0;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const double w = std::max(0.0, f.at(i, j).value()) * std::fabs(radius[i]);
      cells.push_back({w, j});
      total += w;
    }
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (double frac : {0.5, 0.9, 0.99}) {
    double acc = 0.0;
    int lo = n1, hi = -1;
    for (const auto& c : cells) {
      if (acc >= frac * total) break;
      acc += c.first;
      lo = std::min(lo, c.second);
      hi = std::max(hi, c.second);
    }
    m.hpd_span.push_back(hi - lo + 1);
  }
  for (double lvl : {0.5, 0.1, 0.01}) {
    int lo = n1, hi = -1;
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j)
        if (std::fabs(f.at(i, j).value()) >= lvl * vmax) lo = std::min(lo, j), hi = std::max(hi, j);
    m.rel_level_span.push_back(hi - lo + 1);
  }
  return m;
}

Outcome large_scale_structure() {
  std::ostringstream os;
  bool ok = true;
  for (double g : {1e-6, -1e-6}) {
    const KerrState st{2700.0, g};
    const GridSpec s = window(st, 400);
    if (s.mode != GridMode::polar) return {false, "auto window is not polar at |alpha| = 2700"};
    auto t0 = std::chrono::steady_clock::now();
    const QpdField q = eval_field(st, s, FieldKind::husimi);
    const Morphology mq = analyse(q, seconds_since(t0));
    const bool drift_ok = (mq.drift > 0.0) == (g > 0.0) && mq.drift != 0.0;
    ok = ok && mq.finite && mq.seconds < 120.0 && mq.mass >= 0.999 && mq.multi_run_rows == 0 && drift_ok;
    os << fmt("G=%g Q: %.1fs mass %.6f multi-ridge rows %d drift %+.3e rad/unit; ", g, mq.seconds, mq.mass,
              mq.multi_run_rows, mq.drift);
    if (g < 0.0) break;

    t0 = std::chrono::steady_clock::now();
    const QpdField w = eval_field(st, s, FieldKind::wigner);
    const Morphology mw = analyse(w, seconds_since(t0));
    const bool wider = mw.hpd_span[1] > mq.hpd_span[1] && mw.hpd_span[2] > mq.hpd_span[2];
    ok = ok && mw.finite && mw.seconds < 120.0 && wider;
    os << fmt("W: %.1fs mass %.6f; angular columns of the 50/90/99%% highest-density sets W %d/%d/%d vs Q %d/%d/%d; "
              "at 0.5/0.1/0.01 of peak W %d/%d/%d vs Q %d/%d/%d; ",
              mw.seconds, mw.mass, mw.hpd_span[0], mw.hpd_span[1], mw.hpd_span[2], mq.hpd_span[0], mq.hpd_span[1],
              mq.hpd_span[2], mw.rel_level_span[0], mw.rel_level_span[1], mw.rel_level_span[2],
              mq.rel_level_span[0], mq.rel_level_span[1], mq.rel_level_span[2]);
  }
  return {ok, os.str()};
}

Outcome special_functions() {
  Sampler s(9);
  double lw = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const int k = s.integer(-20, 20);
    const cplx z = std::polar(std::pow(10.0, s.uniform(-3.0, 6.0)), s.uniform(-kPi, kPi));
    const cplx w = lambert_w(k, z);
    lw = std::max(lw, std::abs(w * std::exp(w) - z) / std::max(std::abs(z), 1.0));
  }

  using boost::multiprecision::cpp_rational;
  constexpr int kN = 12;
  int mismatches = 0;
  for (int n = 3; n <= kN; ++n)
    for (int k = 1; k <= n; ++k) {
      const BigInt c2 = BigInt(n - 1) * BigInt(n - 2) / 2;
      if (stirling3(n, k) != BigInt(k) * stirling3(n - 1, k) + c2 * stirling3(n - 3, k - 1)) ++mismatches;
    }
  std::vector<cpp_rational> g(kN + 1, 0), power(kN + 1, 0);
  cpp_rational fact = 1;
  for (int m = 1; m <= kN; ++m) {
    fact *= m;
    if (m >= 3) g[m] = cpp_rational(1) / fact;
  }
  power[0] = 1;
  cpp_rational kfact = 1;
  for (int k = 0; k <= kN; ++k) {
    if (k > 0) {
      std::vector<cpp_rational> next(kN + 1, 0);
      for (int i = 0; i <= kN; ++i)
        for (int j = 0; i + j <= kN; ++j) next[i + j] += power[i] * g[j];
      power = next;
      kfact *= k;
    }
    cpp_rational nf = 1;
    for (int n = 0; n <= kN; ++n) {
      if (n > 0) nf *= n;
      if (cpp_rational(stirling3(n, k)) != power[n] * nf / kfact) ++mismatches;
    }
  }

  double br = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const cplx z = std::polar(std::pow(10.0, s.uniform(0.0, 2.0)), s.uniform(-kPi, kPi));
    const int k = s.integer(1, 20);
    const cplx lhs = bessel_i_exact(k - 1, z) - bessel_i_exact(k + 1, z);
    const cplx rhs = 2.0 * k / z * bessel_i_exact(k, z);
    br = std::max(br, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
  }
  return {lw <= 1e-12 && mismatches == 0 && br <= 1e-9,
          fmt("Lambert residual %.2e (1e-12), Stirling mismatches %d, Bessel recurrence %.2e (1e-9)", lw, mismatches,
              br)};
}

Outcome normalization() {
  const KerrState st{10.0, 1e-2};
  const GridSpec s = window(st, 400);
  const double iq = integrate_field(eval_field(st, s, FieldKind::husimi));
  const double iw = integrate_field(eval_field(st, s, FieldKind::wigner));
  return {std::fabs(iq - 1.0) <= 1e-3 && std::fabs(iw - 1.0) <= 1e-2,
          fmt("int Q = %.8f (1 +- 1e-3), int W = %.8f (1 +- 1e-2)", iq, iw)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "Gamma = 0 exactness", 5.0, gamma_zero_exactness},
      {2, "Husimi oracle equivalence", 30.0, husimi_oracle_equivalence},
      {3, "rational-Gamma bridge", 10.0, rational_bridge},
      {4, "Wigner oracle chain", 60.0, wigner_oracle_chain},
      {5, "asymptotic Bessel convergence", 60.0, asymptotic_bessel_convergence},
      {6, "negativity witness", 120.0, negativity_witness},
      {7, "complexity slopes", 300.0, complexity},
      {8, "large-scale structure", 360.0, large_scale_structure},
      {9, "special-function properties", 10.0, special_functions},
      {10, "normalization", 30.0, normalization},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double el = seconds_since(t0);
    const bool pass = o.pass && el < c.limit_s;
    failed += pass ? 0 : 1;
    std::printf("%s [%d] %s: %s | %.1fs (limit %.0fs)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.metric.c_str(), el,
                c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
