#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kqpd {

using cplx = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Reduces an angle into (-pi, pi].
double wrap_phase(double phase);

// e^{i phase}; exact at multiples of pi/2 so that sign flips cancel exactly.
cplx unit_phasor(double phase);

struct LogComplex {
  double log_mag = kNegInf;
  double phase = 0.0;

  static LogComplex zero() { return {}; }
  static LogComplex from(cplx z);
  // exp(w) for complex w, i.e. log_mag = Re w, phase = Im w (wrapped).
  static LogComplex exp_of(cplx w);

  bool is_zero() const { return log_mag == kNegInf; }
  cplx value() const;
  LogComplex conj() const { return is_zero() ? *this : LogComplex{log_mag, wrap_phase(-phase)}; }
};

LogComplex operator*(const LogComplex& a, const LogComplex& b);
LogComplex operator/(const LogComplex& a, const LogComplex& b);

struct LogReal {
  double log_mag = kNegInf;
  int sign = 0;

  static LogReal from(double x);
  double value() const;
};

// Stable sum of log-domain terms. Exact-zero terms are skipped; empty input
// gives exact zero.
LogComplex log_sum_exp_complex(std::span<const LogComplex> terms);

// Principal-branch log of a complex number as a LogComplex-compatible pair.
cplx log_of(const LogComplex& z);

// Lambert W on branch k: w e^w = Z.
cplx lambert_w(int branch, cplx z);

// Associated Stirling numbers of the second kind with r = 3, exact.
class Stirling3Table {
 public:
  static Stirling3Table& global();

  BigInt get(int n, int k);
  double get_double(int n, int k);
  int max_n() const;

 private:
  void grow(int n);

  mutable std::mutex mu_;
  std::vector<std::vector<BigInt>> rows_;  // rows_[n][k], k <= n/3
};

BigInt stirling3(int n, int k);

// Modified Bessel I_k(z) for integer order. Linear result; |z| <= 1e3.
cplx bessel_i_exact(int order, cplx z);

// log I_k(z) without range limits. Chooses the ascending series or a
// periodic trapezoidal rule, whichever cancels less.
LogComplex bessel_i_log_exact(int order, cplx z);

// Leading uniform asymptotic form (1/sqrt(2 pi)) exp(V_k(z)) in log form.
// Requires Re z > 0 and sqrt(|z|^2 + k^2) >= 25.
LogComplex bessel_i_log_asymptotic(int order, cplx z);

// V_k(z) - z, the exponent of the asymptotic form relative to e^z. Written
// to avoid cancellation when |z| >> k. Caller guarantees Re z > 0.
cplx bessel_v_minus_z(int order, cplx z);

inline constexpr double kBesselAsymptoticMin = 25.0;
inline constexpr double kBesselExactMaxAbs = 1e3;

}  // namespace kqpd
