#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "kqpd/bench.hpp"
#include "kqpd/husimi.hpp"
#include "kqpd/wigner.hpp"

namespace kqpd {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

bool BenchReport::pass() const {
  for (const auto& s : slopes)
    if (!s.pass()) return false;
  return true;
}

BenchReport run_bench(const BenchConfig& cfg) {
  BenchReport rep;
  volatile double sink = 0.0;
  for (double a : cfg.alphas) {
    BenchRow row;
    row.alpha = a;
    row.nbar = a * a;
    row.gamma = 2.0 / (a * a);
    const KerrState st{cplx(a, 0.0), row.gamma};
    const cplx beta(a, 0.0);
    row.husimi_seconds =
        time_per_call([&] { sink = sink + husimi_point(st, beta).log_mag; }, cfg.min_seconds, cfg.repeats);
    row.wigner_seconds =
        time_per_call([&] { sink = sink + wigner_point(st, beta).log_mag; }, cfg.min_seconds, cfg.repeats);
    row.kmax = find_kmax(st, beta).kmax;
    rep.rows.push_back(row);
  }
  for (double a : cfg.direct_alphas) {
    DirectRow row;
    row.alpha = a;
    row.nbar = a * a;
    const KerrState st{cplx(a, 0.0), 2.0 / (a * a)};
    row.seconds = time_per_call([&] { sink = sink + husimi_direct(st, cplx(a, 0.0)).log_mag; }, cfg.min_seconds,
                                cfg.repeats);
    rep.direct.push_back(row);
  }
  std::vector<double> nb, al, th, tw, km, dn, dt;
  for (const auto& r : rep.rows) {
    nb.push_back(r.nbar);
    al.push_back(r.alpha);
    th.push_back(r.husimi_seconds);
    tw.push_back(r.wigner_seconds);
    km.push_back(static_cast<double>(std::max(1L, r.kmax)));
  }
  for (const auto& r : rep.direct) {
    dn.push_back(r.nbar);
    dt.push_back(r.seconds);
  }
  if (nb.size() >= 2) {
    rep.slopes.push_back({"husimi_point_time_vs_nbar", loglog_slope(nb, th), -0.1, 0.1});
    rep.slopes.push_back({"wigner_point_time_vs_nbar", loglog_slope(nb, tw), 0.35, 0.65});
    rep.slopes.push_back({"kmax_vs_alpha", loglog_slope(al, km), 0.8, 1.2});
  }
  if (dn.size() >= 2) rep.slopes.push_back({"husimi_direct_time_vs_nbar", loglog_slope(dn, dt), 0.35, 0.65});
  return rep;
}

std::string BenchReport::to_json() const {
  nlohmann::ordered_json j;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    j["points"].push_back({{"alpha", r.alpha},
                           {"nbar", r.nbar},
                           {"gamma", r.gamma},
                           {"husimi_seconds", r.husimi_seconds},
                           {"wigner_seconds", r.wigner_seconds},
                           {"kmax", r.kmax}});
  j["direct"] = nlohmann::ordered_json::array();
  for (const auto& r : direct) j["direct"].push_back({{"alpha", r.alpha}, {"nbar", r.nbar}, {"seconds", r.seconds}});
  j["slopes"] = nlohmann::ordered_json::array();
  for (const auto& s : slopes)
    j["slopes"].push_back({{"name", s.name}, {"slope", s.slope}, {"lo", s.lo}, {"hi", s.hi}, {"pass", s.pass()}});
  j["pass"] = pass();
  return j.dump(2) + "\n";
}

std::string BenchReport::table() const {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%10s %12s %12s %14s %14s %10s\n", "|alpha|", "nbar", "gamma", "husimi [s]",
                "wigner [s]", "kmax");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%10.4g %12.4g %12.4g %14.4g %14.4g %10ld\n", r.alpha, r.nbar, r.gamma,
                  r.husimi_seconds, r.wigner_seconds, r.kmax);
    os << buf;
  }
  if (!direct.empty()) {
    std::snprintf(buf, sizeof buf, "%10s %12s %14s\n", "|alpha|", "nbar", "direct [s]");
    os << buf;
    for (const auto& r : direct) {
      std::snprintf(buf, sizeof buf, "%10.4g %12.4g %14.4g\n", r.alpha, r.nbar, r.seconds);
      os << buf;
    }
  }
  for (const auto& s : slopes) {
    std::snprintf(buf, sizeof buf, "%-28s slope %+.3f  band [%g, %g]  %s\n", s.name.c_str(), s.slope, s.lo, s.hi,
                  s.pass() ? "ok" : "OUT");
    os << buf;
  }
  return os.str();
}

}  // namespace kqpd
