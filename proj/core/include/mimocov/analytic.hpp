#pragma once

#include "mimocov/model.hpp"
#include "mimocov/series.hpp"

namespace mimocov {

enum class Flavor { cellular_c, adhoc_a };

/// Toeplitz entries {c_n} or {a_n} with the parameters they were built from.
struct EntrySequence {
  SeriesM series;
  Flavor flavor;
  double tau = 0.0;
  double theta = 0.0;
  double delta = 0.0;
  double lambda = 0.0;  // ad hoc only
  double r0 = 0.0;      // ad hoc only
  double noise = 0.0;   // ad hoc only
  double kappa = 0.0;   // gamma interferers only
  double beta = 0.0;    // gamma interferers only
};

/// How the entries are turned into a coverage value. Both routes use the
/// same entries; they differ in the series algebra.
enum class Route {
  finite_sum,  // exp / reciprocal coefficient recursions
  toeplitz,    // nilpotent exponential series / forward substitution
};

/// c_n for gamma interferers:
/// Gamma(kappa+n)/(Gamma(kappa) n!) delta/(delta-n) x^n 2F1(n+kappa, n-delta; n+1-delta; -x)
/// with x = tau beta / theta. c_0 > 0 and c_n < 0 for n >= 1.
EntrySequence cellular_entries_gamma(const Bundle& b, int M);

/// c_n = delta/(delta-n) E[(tau g/theta)^n / n! 1F1(n-delta; n+1-delta; -tau g/theta)].
EntrySequence cellular_entries_general(const Bundle& b, int M);

/// Gamma closed form when available, otherwise the general expectation.
EntrySequence cellular_entries(const Bundle& b, int M);

/// SIR coverage sum_n [z^n] 1/C(z). Throws UnsupportedConfiguration when the
/// bundle carries noise.
CoverageEstimate cellular_coverage(const Bundle& b, int M, Route route = Route::finite_sum);

/// mu = pi lambda r0^2 Gamma(1-delta) (tau/theta)^delta E[g^delta].
double adhoc_mu(const Bundle& b);

/// a_n = (-1)^n/n! (-[n<=1] (tau r0^alpha/theta) noise - mu (delta)_n).
EntrySequence adhoc_entries(const Bundle& b, int M);

/// SINR coverage sum_n [z^n] exp(A(z)).
CoverageEstimate adhoc_coverage(const Bundle& b, int M, Route route = Route::finite_sum);

/// Dispatches on the bundle kind with M taken from the bundle's signal spec.
CoverageEstimate coverage(const Bundle& b, Route route = Route::finite_sum);

/// Coverage for a mixture signal density: each term contributes its mass
/// times the coverage of Gamma(q+1, 1/phi_p).
CoverageEstimate coverage_general_pdf(const Bundle& b, const GeneralSignalPdf& sig,
                                      Route route = Route::finite_sum);

/// Cellular coverage at threshold tau/G for a non-Poisson deployment with
/// gain factor G. Throws DomainError for G <= 0.
CoverageEstimate coverage_non_poisson(const Bundle& b, int M, double gain_factor,
                                      Route route = Route::finite_sum);

/// Throws NumericalFailure when p lies outside [0, 1] by more than 1e-12.
/// Never clamps.
double check_probability(double p, const char* where);

}  // namespace mimocov
