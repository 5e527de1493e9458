#pragma once

// Least-squares fit of sampled E(L) curves to the string ansatz
//   E(L) = T L + C - γ/L [- δ/L³]
// and comparison of the fitted coefficients with the NC expansion values.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fuzzy_casimir::luscher {

struct CurveSample {
  double L = 0.0;
  double E = 0.0;
  double weight = 1.0;
};

struct LuscherFit {
  double T = 0.0;      ///< tension, coefficient of L
  double C = 0.0;      ///< constant
  double gamma = 0.0;  ///< coefficient of -1/L
  double delta = 0.0;  ///< coefficient of -1/L³, zero unless has_delta
  bool has_delta = false;
  double residual_rms = 0.0;        ///< weighted RMS of E - fit
  double condition_estimate = 0.0;  ///< 2-norm condition of the scaled design
  std::size_t sample_count = 0;
};

struct RelativeErrors {
  double T = 0.0;
  double C = 0.0;
  double gamma = 0.0;
  double delta_720 = 0.0;  ///< against π³λ²/720
  double delta_288 = 0.0;  ///< against π³λ²/288
};

struct CoefficientReport {
  LuscherFit fitted;
  double lambda = 0.0;
  double theory_T = 0.0;
  double theory_C = 0.0;
  double theory_gamma = 0.0;
  double theory_delta_720 = 0.0;
  double theory_delta_288 = 0.0;
  RelativeErrors relative_errors;
  /// "720" if the fitted δ is closer to π³λ²/720, "288" if closer to
  /// π³λ²/288, "n/a" when the fit has no δ term.
  std::string verdict;
};

/// Closed-form NC Casimir energy at each grid point. Every L must be >= 2λ.
std::vector<CurveSample> sample_curve(double lambda, std::span<const double> L_grid);

/// count points spaced evenly over [start, stop], both endpoints included.
std::vector<double> linear_grid(double start, double stop, int count);

/// Default grid [100λ, 1000λ], far enough above the cut-off that the O(λ⁴)
/// remainder stays below the coefficient tolerances.
std::vector<double> default_fit_grid(double lambda, int count = 50);

/// Weighted linear least squares on the basis {L, 1, -1/L[, -1/L³]}.
///
/// Columns are scaled to unit norm and solved by column-pivoted Householder
/// QR. Throws ConfigError for fewer samples than coefficients or non-positive
/// L / weights, ConditioningError when the design is rank deficient.
LuscherFit fit_luscher(std::span<const CurveSample> samples, bool include_delta);

CoefficientReport compare_coefficients(const LuscherFit& fit, double lambda);

/// Adds N(0, sigma²) noise to every E. Robustness experiments only.
std::vector<CurveSample> add_gaussian_noise(std::span<const CurveSample> samples, double sigma,
                                            std::uint64_t seed);

}  // namespace fuzzy_casimir::luscher
