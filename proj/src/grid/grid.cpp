#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "kqpd/error.hpp"
#include "kqpd/grid.hpp"

namespace kqpd {

const char* to_string(GridMode m) { return m == GridMode::polar ? "polar" : "cartesian"; }
const char* to_string(FieldKind k) { return k == FieldKind::wigner ? "wigner" : "husimi"; }

GridMode grid_mode_from(const std::string& s) {
  if (s == "polar") return GridMode::polar;
  if (s == "cartesian") return GridMode::cartesian;
  throw Error(Errc::precondition, "unknown grid mode '" + s + "'");
}

FieldKind field_kind_from(const std::string& s) {
  if (s == "husimi") return FieldKind::husimi;
  if (s == "wigner") return FieldKind::wigner;
  throw Error(Errc::precondition, "unknown field kind '" + s + "'");
}

void GridSpec::validate() const {
  if (resolution[0] < 2 || resolution[1] < 2) throw Error(Errc::precondition, "grid resolution must be >= 2 per axis");
  if (!(extent[0] > 0.0) || !(extent[1] > 0.0)) throw Error(Errc::precondition, "grid extents must be positive");
  if (mode == GridMode::polar && extent[1] > kPi) throw Error(Errc::precondition, "polar angular extent must be <= pi");
}

double GridSpec::axis(int ax, int i) const {
  double c;
  if (mode == GridMode::cartesian)
    c = ax == 0 ? center.real() : center.imag();
  else
    c = ax == 0 ? std::abs(center) : std::arg(center);
  const double e = extent[ax];
  return c - e + 2.0 * e * static_cast<double>(i) / static_cast<double>(resolution[ax] - 1);
}

cplx GridSpec::node(int i0, int i1) const {
  const double u = axis(0, i0);
  const double v = axis(1, i1);
  if (mode == GridMode::cartesian) return {u, v};
  return {u * std::cos(v), u * std::sin(v)};
}

GridSpec auto_window(const KerrState& state) {
  GridSpec s;
  s.resolution = {100, 100};
  const double a = std::abs(state.alpha);
  if (a == 0.0) {
    s.mode = GridMode::cartesian;
    s.center = {0.0, 0.0};
    s.extent = {4.0, 4.0};
    return s;
  }
  if (a < 4.0) {
    s.mode = GridMode::cartesian;
    s.center = {0.0, 0.0};
    s.extent = {a + 4.0, a + 4.0};
    return s;
  }
  const double g = reduce_gamma(state.gamma_nl);
  s.mode = GridMode::polar;
  s.center = std::polar(a, wrap_phase(std::arg(state.alpha) + 2.0 * g * a * a));
  s.extent = {4.0, std::min(kPi, 6.0 * (1.0 / a + 2.0 * std::fabs(g) * a))};
  return s;
}

namespace {

struct NodeInfo {
  long kmax = 0;
  bool truncated = false;
  bool exact_fallback = false;
};

bool wigner_closed(const KerrState& st) {
  return reduce_gamma(st.gamma_nl) == 0.0 || st.alpha == cplx(0.0, 0.0);
}

bool needs_exact(const KerrState& st, double beta_abs) {
  return 4.0 * std::abs(st.alpha) * beta_abs < kBesselAsymptoticMin;
}

}  // namespace

QpdField eval_field(const KerrState& state, const GridSpec& spec, FieldKind kind, const EvalOptions& opts) {
  spec.validate();
  opts.wigner.validate();
  const auto t0 = std::chrono::steady_clock::now();
  QpdField f;
  f.spec = spec;
  f.kind = kind;
  f.state = state;
  f.options = opts;
  f.values.assign(spec.size(), LogReal{});
  std::vector<NodeInfo> info(spec.size());

  const int n0 = spec.resolution[0];
  const int n1 = spec.resolution[1];
  const int workers = std::max(1, opts.workers);

  auto run_row = [&](int i0, int& i1) {
    const size_t base = static_cast<size_t>(i0) * n1;
    if (kind == FieldKind::husimi) {
      for (i1 = 0; i1 < n1; ++i1) f.values[base + i1] = husimi_point(state, spec.node(i0, i1), opts.husimi);
      return;
    }
    if (wigner_closed(state)) {
      for (i1 = 0; i1 < n1; ++i1) f.values[base + i1] = wigner_point(state, spec.node(i0, i1), opts.wigner);
      return;
    }
    if (spec.mode == GridMode::polar) {
      const double r = std::fabs(spec.axis(0, i0));
      WignerOptions wo = opts.wigner;
      const bool fallback = !wo.exact_bessel && needs_exact(state, r);
      wo.exact_bessel = wo.exact_bessel || fallback;
      i1 = 0;
      WignerRadialSeries series(state, r, wo);
      for (i1 = 0; i1 < n1; ++i1) {
        f.values[base + i1] = series.evaluate(wigner_phi0(state, spec.node(i0, i1)));
        info[base + i1] = {series.kmax(), series.truncated(), fallback};
      }
      return;
    }
    for (i1 = 0; i1 < n1; ++i1) {
      const cplx b = spec.node(i0, i1);
      WignerOptions wo = opts.wigner;
      const bool fallback = !wo.exact_bessel && needs_exact(state, std::abs(b));
      wo.exact_bessel = wo.exact_bessel || fallback;
      const WignerPointResult r = wigner_point_detailed(state, b, wo);
      f.values[base + i1] = r.value;
      info[base + i1] = {r.kmax, r.truncated, fallback};
    }
  };

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  std::exception_ptr err;
  std::string err_where;
  auto worker = [&] {
    while (!failed.load()) {
      const int i0 = next.fetch_add(1);
      if (i0 >= n0) return;
      int i1 = 0;
      try {
        run_row(i0, i1);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) {
          err = std::current_exception();
          const cplx b = spec.node(i0, std::min(i1, n1 - 1));
          std::ostringstream os;
          os << " at node (" << i0 << ", " << std::min(i1, n1 - 1) << "), beta = " << b.real() << " + "
             << b.imag() << "i";
          err_where = os.str();
        }
        failed.store(true);
        return;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) {
    try {
      std::rethrow_exception(err);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + err_where);
    } catch (const std::exception& e) {
      throw Error(Errc::domain, std::string(e.what()) + err_where);
    }
  }

  f.stats.points = spec.size();
  f.stats.workers = workers;
  if (kind == FieldKind::wigner && !wigner_closed(state)) {
    long lo = info[0].kmax, hi = info[0].kmax;
    double sum = 0.0;
    for (const auto& i : info) {
      lo = std::min(lo, i.kmax);
      hi = std::max(hi, i.kmax);
      sum += static_cast<double>(i.kmax);
      f.stats.truncated_nodes += i.truncated ? 1 : 0;
      f.stats.exact_fallback_nodes += i.exact_fallback ? 1 : 0;
    }
    f.stats.kmax_min = lo;
    f.stats.kmax_max = hi;
    f.stats.kmax_mean = sum / static_cast<double>(info.size());
  }
  f.stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return f;
}

double integrate_field(const QpdField& field) {
  const GridSpec& s = field.spec;
  const int n0 = s.resolution[0];
  const int n1 = s.resolution[1];
  const double h0 = 2.0 * s.extent[0] / (n0 - 1);
  const double h1 = 2.0 * s.extent[1] / (n1 - 1);
  double total = 0.0;
  for (int i0 = 0; i0 < n0; ++i0) {
    double row = 0.0;
    for (int i1 = 0; i1 < n1; ++i1) {
      const double w1 = (i1 == 0 || i1 == n1 - 1) ? 0.5 : 1.0;
      row += w1 * field.at(i0, i1).value();
    }
    double w0 = (i0 == 0 || i0 == n0 - 1) ? 0.5 : 1.0;
    if (s.mode == GridMode::polar) w0 *= std::fabs(s.axis(0, i0));
    total += w0 * row;
  }
  return total * h0 * h1;
}

}  // namespace kqpd
