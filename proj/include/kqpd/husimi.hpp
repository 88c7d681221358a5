#pragma once

#include <cstdint>
#include <vector>

#include "kqpd/specfun.hpp"

namespace kqpd {

struct KerrState {
  cplx alpha{0.0, 0.0};
  double gamma_nl = 0.0;

  double mean_photon_number() const { return std::norm(alpha); }
};

// Gamma / (2 pi) = num / den, reduced, den odd.
struct RationalGamma {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double gamma() const;
  void validate() const;
  // Best fraction with odd denominator <= max_den approximating gamma / (2 pi).
  static RationalGamma approximate(double gamma, std::int64_t max_den);
};

// Reduces Gamma into (-pi, pi]; e^{i Gamma n^2} is 2 pi periodic.
double reduce_gamma(double gamma);

struct SaddleTerm {
  int branch_k = 0;
  cplx z_k{0.0, 0.0};
  cplx f_zk{0.0, 0.0};
  LogComplex amplitude;   // sqrt(4 Gamma / (-i - z_k)) exp(f(z_k) / (2 Gamma))
  cplx correction{1.0, 0.0};
};

struct FEvalOptions {
  int correction_order = 1;
  int branch_window = 1;
  double direct_fallback_threshold = 30.0;
};

struct SaddleDiagnostics {
  int kbar = 0;
  double delta_kbar = 0.0;
  bool used_direct = false;
  bool kbar_outside_contour = false;
  bool two_term_regime = false;  // |Re f(z_kbar) - Re f(z_neighbor)| < 2 |Gamma|
};

struct SaddleResult {
  LogComplex value;
  std::vector<SaddleTerm> terms;
  SaddleDiagnostics diag;
};

LogComplex f_direct_log(cplx a, double gamma_nl, double rel_tol);
cplx f_direct(cplx a, double gamma_nl, double rel_tol);

LogComplex f_rational_log(cplx a, const RationalGamma& frac);
cplx f_rational(cplx a, const RationalGamma& frac);

struct KbarSelection {
  int kbar = 0;
  double delta_kbar = 0.0;
};
KbarSelection select_kbar(cplx a, double gamma_nl);

// Branch index preferred by the main-text rule, arg(Gamma alpha beta* e^{-i Gamma}) + (pi/2) sign Gamma.
int select_kbar_main_text(cplx a, double gamma_nl);

bool branch_admissible(int k, double gamma_nl);

// f(z)/(2 Gamma) at the saddle z_k = i W_k(Z), Z = -2 i A Gamma.
SaddleTerm saddle_term(cplx a, double gamma_nl, int k, int correction_order);

cplx cfww_correction(cplx z_k, double gamma_nl, int order);

SaddleResult f_saddle_detailed(cplx a, double gamma_nl, const FEvalOptions& opts = {});
LogComplex f_saddle(cplx a, double gamma_nl, const FEvalOptions& opts = {});

LogReal husimi_point(const KerrState& state, cplx beta, const FEvalOptions& opts = {});
LogReal husimi_direct(const KerrState& state, cplx beta);

// Q(beta) from f_rational for Gamma = 2 pi num / den.
LogReal husimi_rational(const KerrState& state, cplx beta, const RationalGamma& frac);

inline constexpr double kDirectMaxAbsA = 1e4;

}  // namespace kqpd
