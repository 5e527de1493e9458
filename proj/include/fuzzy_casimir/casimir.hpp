#pragma once

// One-dimensional Casimir energy with the NC dispersion ω_n = sin(nπλ/L)/λ.
//
// Energies use the convention of the commutative zeta result -π/(12L): the
// ½ω zero-point factor times two polarizations counts each mode once.

#include <cstdint>
#include <optional>
#include <string>

namespace fuzzy_casimir::casimir {

enum class ModePolicy { RequireInteger, Floor };
enum class Summation { Naive, Compensated };
enum class Method { DirectSum, ClosedForm, Taylor, CommutativeZeta };

std::string to_string(ModePolicy p);
std::string to_string(Method m);

struct CasimirConfig {
  double lambda = 1.0;
  double L = 2.0;
  ModePolicy mode_policy = ModePolicy::Floor;
  Summation summation = Summation::Compensated;

  /// Throws ConfigError on λ <= 0, L <= 0, or a non-integer L/(2λ) under
  /// RequireInteger (1e-9 relative).
  void validate() const;
};

struct EnergyResult {
  double value = 0.0;
  std::int64_t mode_count = 0;
  Method method = Method::ClosedForm;
  int taylor_order = -1;  ///< only meaningful for Method::Taylor
  double est_error = 0.0;
};

/// Plates at a < b inside the box (-Λ, Λ); three segments in total.
struct SegmentSystem {
  double a = 0.0;
  double b = 1.0;
  double Lambda_box = 1e3;
  double lambda = 0.01;
};

/// True if L/(2λ) is within 1e-9 relative of an integer.
bool has_integer_mode_count(double L, double lambda);

/// Number of modes below the cut-off: L/(2λ) rounded when it is an integer to
/// within 1e-9 relative, otherwise floored (or rejected under RequireInteger).
std::int64_t mode_count(double L, double lambda, ModePolicy policy = ModePolicy::Floor);

/// sin(nπλ/L)/λ for 1 <= n <= mode_count(L, λ); RangeError otherwise.
double mode_frequency(std::int64_t n, double L, double lambda);

/// Σ_{n=1}^{M} sin(nπλ/L)/λ term by term.
EnergyResult energy_direct_sum(const CasimirConfig& cfg);

/// (1 + cot(πλ/2L)) / (2λ). Under RequireInteger, L/(2λ) must be integral;
/// under Floor the expression is evaluated as the smooth continuation in L.
EnergyResult energy_closed_form(const CasimirConfig& cfg);

/// Exact closed form of the floored mode sum, partial_sine_sum(M, πλ/L)/λ.
/// Agrees with energy_direct_sum for every L >= 2λ.
EnergyResult energy_partial_closed_form(const CasimirConfig& cfg);

/// (1 + cot(πλ/2L)) / (2λ) without any mode-count check. L >= 2λ.
double closed_form_value(double L, double lambda);

/// Σ_{n=1}^{M} sin(nθ) = sin(Mθ/2) sin((M+1)θ/2) / sin(θ/2), 0 < θ < 2π.
double partial_sine_sum(std::int64_t M, double theta);

/// Zeta-regularized commutative energy -π/(12L).
EnergyResult energy_commutative(double L);

/// Term k (0..3) of the small-λ expansion
///   L/(πλ²) + 1/(2λ) - π/(12L) - π³λ²/(720L³) + O(λ⁴).
double taylor_term(int k, double L, double lambda);

/// Partial sum of the expansion through term `order` (0..3).
EnergyResult energy_taylor(double L, double lambda, int order);

/// closed_form - taylor(3), evaluated without cancellation. Negative.
double taylor_remainder(double L, double lambda);

/// Frozen C in |closed - taylor(3)| <= C λ⁴/L⁵, valid for all L >= 2λ.
inline constexpr double kTaylorRemainderConstant = 0.0108;

/// closed_form - L/(πλ²) - 1/(2λ), evaluated without cancellation.
/// Tends to -π/(12L) as λ -> 0.
double subtracted_energy(double L, double lambda);

/// -dE/dL of the closed form: -(π/(4L²)) csc²(πλ/(2L)). L >= 2λ.
double force(double L, double lambda);

/// -dE/dL of subtracted_energy: -(π/(4L²)) (csc²x - 1/x²), x = πλ/(2L).
double casimir_force(double L, double lambda);

/// Scan casimir_force on `samples` points of [L_lo, L_hi] for a sign change;
/// returns the bracketing midpoint if found.
std::optional<double> casimir_force_zero_crossing(double lambda, double L_lo, double L_hi,
                                                  int samples = 1000);

/// E(a+Λ) + E(b-a) + E(Λ-b) - 2Λ/(πλ²) - 3/(2λ) with E the closed form.
/// Every segment must be at least 2λ long.
double interaction_energy(const SegmentSystem& sys);

/// Shortest wavelength 2πλ allowed by the frequency cut-off 1/λ.
double min_wavelength(double lambda);
/// πλ: below this length not even the shortest wavelength fits.
double min_half_wavelength(double lambda);

}  // namespace fuzzy_casimir::casimir
