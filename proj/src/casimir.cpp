#include "fuzzy_casimir/casimir.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>

#include "fuzzy_casimir/errors.hpp"
#include "fuzzy_casimir/summation.hpp"

namespace fuzzy_casimir::casimir {

namespace {

using std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kIntegerTolerance = 1e-9;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be positive and finite");
  }
}

void require_fits_a_mode(double L, double lambda) {
  require_positive(L, "L");
  require_positive(lambda, "lambda");
  if (L / (2.0 * lambda) < 1.0 - kIntegerTolerance) {
    throw DomainError("L = " + std::to_string(L) + " is below half minimum wavelength 2*lambda = " +
                      std::to_string(2.0 * lambda));
  }
}

// Partial-fraction expansion of the cotangent:
//   cot x - 1/x = -Σ_{k>=1} c_k x^{2k-1},  c_k = 2ζ(2k)/π^{2k},  |x| < π.
// Only x <= π/4 (L >= 2λ) is used, where successive terms shrink by >= 16.
constexpr int kSeriesTerms = 30;

const std::array<double, kSeriesTerms + 1>& zeta_even() {
  static const auto table = [] {
    std::array<double, kSeriesTerms + 1> z{};
    for (int k = 1; k <= kSeriesTerms; ++k) z[k] = boost::math::zeta(2.0 * k);
    return z;
  }();
  return table;
}

// Σ_{k>=first} c_k x^{2k-1}
double cot_tail(double x, int first) {
  const auto& z = zeta_even();
  const double u = x / pi;
  const double u2 = u * u;
  double power = u;  // u^{2k-1}
  for (int k = 1; k < first; ++k) power *= u2;
  double acc = 0.0;
  for (int k = first; k <= kSeriesTerms; ++k) {
    const double term = 2.0 * z[k] / pi * power;
    acc += term;
    if (term <= kEps * 0.25 * acc) break;
    power *= u2;
  }
  return acc;
}

// csc²x - 1/x² = Σ_{k>=1} (2k-1) c_k x^{2k-2}
double csc2_tail(double x) {
  const auto& z = zeta_even();
  const double u = x / pi;
  const double u2 = u * u;
  double power = 1.0;  // u^{2k-2}
  double acc = 0.0;
  for (int k = 1; k <= kSeriesTerms; ++k) {
    const double term = (2.0 * k - 1.0) * 2.0 * z[k] / (pi * pi) * power;
    acc += term;
    if (term <= kEps * 0.25 * acc) break;
    power *= u2;
  }
  return acc;
}

double half_angle(double L, double lambda) { return pi * lambda / (2.0 * L); }

// sin(m·θ/2) with the rounding error of the product m·θ carried to first order.
double sin_half_product(double m, double theta) {
  const double hi = m * theta;
  const double lo = std::fma(m, theta, -hi);
  const double arg = 0.5 * hi;
  return std::sin(arg) + 0.5 * lo * std::cos(arg);
}

}  // namespace

std::string to_string(ModePolicy p) {
  return p == ModePolicy::Floor ? "floor" : "require-integer";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::DirectSum: return "direct_sum";
    case Method::ClosedForm: return "closed_form";
    case Method::Taylor: return "taylor";
    case Method::CommutativeZeta: return "commutative_zeta";
  }
  return "unknown";
}

void CasimirConfig::validate() const {
  require_positive(lambda, "lambda");
  require_positive(L, "L");
  if (mode_policy == ModePolicy::RequireInteger && !has_integer_mode_count(L, lambda)) {
    throw ConfigError("L/(2*lambda) = " + std::to_string(L / (2.0 * lambda)) +
                      " is not an integer (mode policy require-integer)");
  }
}

bool has_integer_mode_count(double L, double lambda) {
  const double r = L / (2.0 * lambda);
  return std::abs(r - std::round(r)) <= kIntegerTolerance * r;
}

std::int64_t mode_count(double L, double lambda, ModePolicy policy) {
  require_positive(L, "L");
  require_positive(lambda, "lambda");
  const double r = L / (2.0 * lambda);
  if (has_integer_mode_count(L, lambda)) return static_cast<std::int64_t>(std::round(r));
  if (policy == ModePolicy::RequireInteger) {
    throw ConfigError("L/(2*lambda) = " + std::to_string(r) + " is not an integer");
  }
  return static_cast<std::int64_t>(std::floor(r));
}

double mode_frequency(std::int64_t n, double L, double lambda) {
  const auto m = mode_count(L, lambda);
  if (n < 1 || n > m) {
    throw RangeError("mode " + std::to_string(n) + " outside 1.." + std::to_string(m) +
                     "; beyond it the frequency would decrease past the cut-off 1/lambda");
  }
  return std::sin(static_cast<double>(n) * pi * lambda / L) / lambda;
}

EnergyResult energy_direct_sum(const CasimirConfig& cfg) {
  cfg.validate();
  require_fits_a_mode(cfg.L, cfg.lambda);
  const auto m = mode_count(cfg.L, cfg.lambda, cfg.mode_policy);
  const double theta = pi * cfg.lambda / cfg.L;
  auto term = [theta](std::int64_t n) { return std::sin(static_cast<double>(n) * theta); };

  EnergyResult r;
  r.mode_count = m;
  r.method = Method::DirectSum;
  if (cfg.summation == Summation::Compensated) {
    const auto s = compensated_series(1, m, term);
    r.value = s.value / cfg.lambda;
    r.est_error = 2.0 * kEps * s.abs_sum / cfg.lambda;
  } else {
    const auto s = naive_series(1, m, term);
    r.value = s.value / cfg.lambda;
    r.est_error = static_cast<double>(m) * kEps * s.abs_sum / cfg.lambda;
  }
  return r;
}

double closed_form_value(double L, double lambda) {
  require_fits_a_mode(L, lambda);
  const double x = half_angle(L, lambda);
  return (1.0 + std::cos(x) / std::sin(x)) / (2.0 * lambda);
}

EnergyResult energy_closed_form(const CasimirConfig& cfg) {
  cfg.validate();
  require_fits_a_mode(cfg.L, cfg.lambda);
  const double x = half_angle(cfg.L, cfg.lambda);
  const double cot = std::cos(x) / std::sin(x);
  EnergyResult r;
  r.value = (1.0 + cot) / (2.0 * cfg.lambda);
  r.mode_count = mode_count(cfg.L, cfg.lambda, cfg.mode_policy);
  r.method = Method::ClosedForm;
  r.est_error = 4.0 * (std::nextafter(cot, 2.0 * cot) - cot) / (2.0 * cfg.lambda);
  return r;
}

EnergyResult energy_partial_closed_form(const CasimirConfig& cfg) {
  cfg.validate();
  require_fits_a_mode(cfg.L, cfg.lambda);
  const auto m = mode_count(cfg.L, cfg.lambda, cfg.mode_policy);
  EnergyResult r;
  r.value = partial_sine_sum(m, pi * cfg.lambda / cfg.L) / cfg.lambda;
  r.mode_count = m;
  r.method = Method::ClosedForm;
  r.est_error = 8.0 * kEps * std::abs(r.value);
  return r;
}

double partial_sine_sum(std::int64_t M, double theta) {
  if (M < 1) throw ConfigError("partial_sine_sum needs M >= 1");
  if (!(theta > 0.0) || !(theta < 2.0 * pi)) {
    throw ConfigError("partial_sine_sum needs 0 < theta < 2*pi");
  }
  const double m = static_cast<double>(M);
  const double num = sin_half_product(m, theta) * sin_half_product(m + 1.0, theta);
  if (theta < 1e-6) {
    // 1/sin(t) = (1/t)(1 + t²/6 + 7t⁴/360 + ...), t = θ/2
    const double t = 0.5 * theta;
    const double t2 = t * t;
    return num / t * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0);
  }
  return num / std::sin(0.5 * theta);
}

EnergyResult energy_commutative(double L) {
  require_positive(L, "L");
  EnergyResult r;
  r.value = -pi / (12.0 * L);
  r.method = Method::CommutativeZeta;
  r.est_error = 2.0 * kEps * std::abs(r.value);
  return r;
}

double taylor_term(int k, double L, double lambda) {
  require_positive(L, "L");
  require_positive(lambda, "lambda");
  switch (k) {
    case 0: return L / (pi * lambda * lambda);
    case 1: return 1.0 / (2.0 * lambda);
    case 2: return -pi / (12.0 * L);
    case 3: return -pi * pi * pi * lambda * lambda / (720.0 * L * L * L);
    default: throw ConfigError("taylor term index must be in 0..3");
  }
}

EnergyResult energy_taylor(double L, double lambda, int order) {
  if (order < 0 || order > 3) throw ConfigError("taylor order must be in 0..3");
  EnergyResult r;
  CompensatedSum s;
  for (int k = 0; k <= order; ++k) s += taylor_term(k, L, lambda);
  r.value = s.value();
  r.method = Method::Taylor;
  r.taylor_order = order;
  r.est_error = order < 3 ? std::abs(taylor_term(order + 1, L, lambda))
                          : kTaylorRemainderConstant * std::pow(lambda, 4) / std::pow(L, 5);
  return r;
}

double taylor_remainder(double L, double lambda) {
  require_fits_a_mode(L, lambda);
  return -cot_tail(half_angle(L, lambda), 3) / (2.0 * lambda);
}

double subtracted_energy(double L, double lambda) {
  require_fits_a_mode(L, lambda);
  return -cot_tail(half_angle(L, lambda), 1) / (2.0 * lambda);
}

double force(double L, double lambda) {
  require_fits_a_mode(L, lambda);
  const double s = std::sin(half_angle(L, lambda));
  return -(pi / (4.0 * L * L)) / (s * s);
}

double casimir_force(double L, double lambda) {
  require_fits_a_mode(L, lambda);
  return -(pi / (4.0 * L * L)) * csc2_tail(half_angle(L, lambda));
}

std::optional<double> casimir_force_zero_crossing(double lambda, double L_lo, double L_hi,
                                                  int samples) {
  require_fits_a_mode(L_lo, lambda);
  if (!(L_hi > L_lo) || samples < 2) throw ConfigError("scan needs L_hi > L_lo and >= 2 samples");
  double prev_L = L_lo;
  double prev_F = casimir_force(L_lo, lambda);
  for (int i = 1; i < samples; ++i) {
    const double L = L_lo + (L_hi - L_lo) * i / (samples - 1);
    const double F = casimir_force(L, lambda);
    if ((prev_F < 0.0) != (F < 0.0)) return 0.5 * (prev_L + L);
    prev_L = L;
    prev_F = F;
  }
  return std::nullopt;
}

double interaction_energy(const SegmentSystem& sys) {
  require_positive(sys.lambda, "lambda");
  require_positive(sys.Lambda_box, "Lambda_box");
  if (!(-sys.Lambda_box < sys.a && sys.a < sys.b && sys.b < sys.Lambda_box)) {
    throw ConfigError("segment system needs -Lambda < a < b < Lambda");
  }
  // The linear parts L/(πλ²) of the three segments add up to 2Λ/(πλ²) and each
  // segment carries one 1/(2λ); both are subtracted analytically, leaving the
  // sum of the subtracted energies.
  return subtracted_energy(sys.a + sys.Lambda_box, sys.lambda) +
         subtracted_energy(sys.b - sys.a, sys.lambda) +
         subtracted_energy(sys.Lambda_box - sys.b, sys.lambda);
}

double min_wavelength(double lambda) {
  require_positive(lambda, "lambda");
  return 2.0 * pi * lambda;
}

double min_half_wavelength(double lambda) {
  require_positive(lambda, "lambda");
  return pi * lambda;
}

}  // namespace fuzzy_casimir::casimir
