#pragma once

#include <string>
#include <vector>

namespace kqpd {

struct BenchConfig {
  std::vector<double> alphas{1e2, 1e3, 1e4, 3e4};
  std::vector<double> direct_alphas{20.0, 40.0, 70.0, 100.0};
  double min_seconds = 0.05;  // per timing batch
  int repeats = 3;            // best of
};

struct BenchRow {
  double alpha = 0.0;
  double nbar = 0.0;
  double gamma = 0.0;
  double husimi_seconds = 0.0;
  double wigner_seconds = 0.0;
  long kmax = 0;
};

struct DirectRow {
  double alpha = 0.0;
  double nbar = 0.0;
  double seconds = 0.0;
};

struct SlopeCheck {
  std::string name;
  double slope = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass() const { return slope >= lo && slope <= hi; }
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<DirectRow> direct;
  std::vector<SlopeCheck> slopes;
  bool pass() const;
  std::string to_json() const;
  std::string table() const;
};

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Per-call wall time of fn: batches of at least min_seconds, best of repeats.
template <class Fn>
double time_per_call(Fn&& fn, double min_seconds, int repeats);

BenchReport run_bench(const BenchConfig& cfg);

}  // namespace kqpd

#include <algorithm>
#include <chrono>

namespace kqpd {

template <class Fn>
double time_per_call(Fn&& fn, double min_seconds, int repeats) {
  using clock = std::chrono::steady_clock;
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    long calls = 0;
    const auto t0 = clock::now();
    double el = 0.0;
    do {
      fn();
      ++calls;
      el = std::chrono::duration<double>(clock::now() - t0).count();
    } while (el < min_seconds);
    best = std::min(best, el / static_cast<double>(calls));
  }
  return best;
}

}  // namespace kqpd
