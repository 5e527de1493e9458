#include "fuzzy_casimir/luscher_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "fuzzy_casimir/casimir.hpp"
#include "fuzzy_casimir/errors.hpp"

namespace fuzzy_casimir::luscher {

namespace {

using std::numbers::pi;

// Beyond this the scaled design has lost more than half the digits.
constexpr double kMaxCondition = 1e10;

double relative_error(double value, double reference) {
  return reference == 0.0 ? std::abs(value) : std::abs(value - reference) / std::abs(reference);
}

}  // namespace

std::vector<CurveSample> sample_curve(double lambda, std::span<const double> L_grid) {
  std::vector<CurveSample> out;
  out.reserve(L_grid.size());
  for (double L : L_grid) out.push_back({L, casimir::closed_form_value(L, lambda), 1.0});
  return out;
}

std::vector<double> linear_grid(double start, double stop, int count) {
  if (count < 1) throw ConfigError("grid count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    g[static_cast<std::size_t>(i)] = start + (stop - start) * static_cast<double>(i) / (count - 1);
  }
  g.back() = stop;
  return g;
}

std::vector<double> default_fit_grid(double lambda, int count) {
  return linear_grid(100.0 * lambda, 1000.0 * lambda, count);
}

LuscherFit fit_luscher(std::span<const CurveSample> samples, bool include_delta) {
  const Eigen::Index p = include_delta ? 4 : 3;
  const auto n = static_cast<Eigen::Index>(samples.size());
  if (n < p) {
    throw ConfigError("fit with " + std::to_string(p) + " coefficients needs at least " +
                      std::to_string(p) + " samples, got " + std::to_string(n));
  }

  std::set<double> distinct;
  Eigen::MatrixXd A(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (!(s.L > 0.0) || !std::isfinite(s.L)) throw ConfigError("sample L must be positive");
    if (!(s.weight > 0.0) || !std::isfinite(s.weight)) throw ConfigError("sample weight must be positive");
    distinct.insert(s.L);
    const double w = std::sqrt(s.weight);
    A(i, 0) = w * s.L;
    A(i, 1) = w;
    A(i, 2) = -w / s.L;
    if (include_delta) A(i, 3) = -w / (s.L * s.L * s.L);
    y(i) = w * s.E;
  }
  if (static_cast<Eigen::Index>(distinct.size()) < p) {
    throw ConditioningError("only " + std::to_string(distinct.size()) +
                                " distinct L values for " + std::to_string(p) + " coefficients",
                            std::numeric_limits<double>::infinity());
  }

  const Eigen::VectorXd scale = A.colwise().norm().transpose();
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(As);
  const auto& sv = svd.singularValues();
  const double cond = sv(p - 1) > 0.0 ? sv(0) / sv(p - 1) : std::numeric_limits<double>::infinity();

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(As);
  if (qr.rank() < p || !(cond <= kMaxCondition)) {
    throw ConditioningError("design matrix is rank deficient or ill-conditioned (condition " +
                                std::to_string(cond) + ")",
                            cond);
  }
  const Eigen::VectorXd coeff = qr.solve(y).cwiseQuotient(scale);

  LuscherFit fit;
  fit.T = coeff(0);
  fit.C = coeff(1);
  fit.gamma = coeff(2);
  fit.has_delta = include_delta;
  fit.delta = include_delta ? coeff(3) : 0.0;
  fit.condition_estimate = cond;
  fit.sample_count = samples.size();

  double sum_w = 0.0;
  double sum_wr2 = 0.0;
  for (const auto& s : samples) {
    double model = fit.T * s.L + fit.C - fit.gamma / s.L;
    if (include_delta) model -= fit.delta / (s.L * s.L * s.L);
    const double r = s.E - model;
    sum_w += s.weight;
    sum_wr2 += s.weight * r * r;
  }
  fit.residual_rms = std::sqrt(sum_wr2 / sum_w);
  return fit;
}

CoefficientReport compare_coefficients(const LuscherFit& fit, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  CoefficientReport r;
  r.fitted = fit;
  r.lambda = lambda;
  r.theory_T = 1.0 / (pi * lambda * lambda);
  r.theory_C = 1.0 / (2.0 * lambda);
  r.theory_gamma = pi / 12.0;
  r.theory_delta_720 = pi * pi * pi * lambda * lambda / 720.0;
  r.theory_delta_288 = pi * pi * pi * lambda * lambda / 288.0;

  r.relative_errors.T = relative_error(fit.T, r.theory_T);
  r.relative_errors.C = relative_error(fit.C, r.theory_C);
  r.relative_errors.gamma = relative_error(fit.gamma, r.theory_gamma);
  if (fit.has_delta) {
    r.relative_errors.delta_720 = relative_error(fit.delta, r.theory_delta_720);
    r.relative_errors.delta_288 = relative_error(fit.delta, r.theory_delta_288);
    const bool closer_720 = std::abs(fit.delta - r.theory_delta_720) <=
                       std::abs(fit.delta - r.theory_delta_288);
    r.verdict = closer_720 ? "720" : "288";
  } else {
    r.verdict = "n/a";
  }
  return r;
}

std::vector<CurveSample> add_gaussian_noise(std::span<const CurveSample> samples, double sigma,
                                            std::uint64_t seed) {
  if (sigma < 0.0) throw ConfigError("noise sigma must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<CurveSample> out(samples.begin(), samples.end());
  if (sigma == 0.0) return out;
  for (auto& s : out) s.E += normal(rng);
  return out;
}

}  // namespace fuzzy_casimir::luscher
