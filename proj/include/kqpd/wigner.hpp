#pragma once

#include <optional>
#include <vector>

#include "kqpd/husimi.hpp"

namespace kqpd {

struct WignerOptions {
  double rel_eps = 1e-8;
  long kmax_cap = 0;  // 0: largest k with k |Gamma| < pi/2
  bool exact_bessel = false;

  void validate() const;
};

struct WignerSeriesTerm {
  int k = 0;
  LogComplex log_term;
};

struct KmaxResult {
  long kmax = 0;
  bool truncated = false;
  long peak_k = 0;
  double peak_log = kNegInf;
};

long effective_kmax_cap(double gamma_nl, const WignerOptions& opts);

// arg(alpha beta* e^{-i Gamma})
double wigner_phi0(const KerrState& state, cplx beta);

// Summand k of the Fourier-Bessel series without the e^{i k Phi0} factor, as
// a complex exponent. Exact-Bessel or asymptotic kernel.
cplx wigner_term_exponent(const KerrState& state, double beta_abs, long k, bool exact);

// log |term k| profile used by the truncation search.
double wigner_term_log_mag(const KerrState& state, double beta_abs, long k, bool exact);

KmaxResult find_kmax(const KerrState& state, cplx beta, const WignerOptions& opts = {});

std::optional<double> beta_split(const KerrState& state);

// All series terms for one |beta|. The magnitudes do not depend on arg beta,
// so a grid row at fixed radius reuses one instance.
class WignerRadialSeries {
 public:
  WignerRadialSeries(const KerrState& state, double beta_abs, const WignerOptions& opts);
  WignerRadialSeries(const KerrState& state, double beta_abs, long kmax, bool exact);

  LogReal evaluate(double phi0) const;
  // Imaginary part of the last evaluate() relative to the sum of |terms|.
  double residue(double phi0) const;

  long kmax() const { return kmax_; }
  bool truncated() const { return truncated_; }
  std::vector<WignerSeriesTerm> terms(double phi0) const;

 private:
  void build(const KerrState& state, double beta_abs, bool exact);
  cplx sum(double phi0) const;

  long kmax_ = 0;
  bool truncated_ = false;
  double log_scale_ = 0.0;
  double abs_total_ = 0.0;
  std::vector<cplx> pos_;
  std::vector<cplx> neg_;
};

struct WignerPointResult {
  LogReal value;
  long kmax = 0;
  bool truncated = false;
  double residue = 0.0;
  bool closed_form = false;
};

WignerPointResult wigner_point_detailed(const KerrState& state, cplx beta, const WignerOptions& opts = {});
LogReal wigner_point(const KerrState& state, cplx beta, const WignerOptions& opts = {});

double wigner_fourier_exact(const KerrState& state, cplx beta, long k_max);
double wigner_qseries_oracle(const KerrState& state, cplx beta, int m_max);
double wigner_fock_oracle(const KerrState& state, cplx beta, int n_cut);

inline constexpr double kWignerResidueMax = 1e-8;

}  // namespace kqpd
