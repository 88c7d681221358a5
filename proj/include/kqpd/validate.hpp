#pragma once

#include <cstdint>
#include <string>
#include <complex>
#include <random>
#include <vector>

#include "kqpd/husimi.hpp"

namespace kqpd {

struct ValidateConfig {
  std::string scale = "small";  // small | full
  std::uint64_t seed = 1;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double metric = 0.0;
  double tolerance = 0.0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool pass() const;
  std::string to_json() const;
};

ValidationReport run_validation(const ValidateConfig& cfg);

// Platform-independent uniform draws from a seeded mt19937_64.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1p-53;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 gen_;
};

// Points near the SPM-rotated ridge where the direct oracle gives
// log Q >= min_log_q.
std::vector<cplx> banana_samples(const KerrState& state, int count, std::uint64_t seed, double min_log_q);

}  // namespace kqpd
