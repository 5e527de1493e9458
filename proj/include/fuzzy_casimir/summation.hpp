#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace fuzzy_casimir {

// Neumaier's variant of Kahan summation; the correction also survives
// addends larger than the running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct SeriesSum {
  double value = 0.0;
  double abs_sum = 0.0;  ///< Σ|term|, the scale of the round-off bound
};

/// Number of worker threads for long sums: FUZZY_CASIMIR_THREADS if set and
/// positive, otherwise the hardware concurrency (at least 1).
unsigned worker_threads();

/// Σ_{n=first}^{last} term(n) with compensated summation.
///
/// The range is cut into fixed-size chunks whose partial sums are combined in
/// chunk order, so the result is bit-identical for every thread count.
SeriesSum compensated_series(std::int64_t first, std::int64_t last,
                             const std::function<double(std::int64_t)>& term,
                             unsigned threads = worker_threads());

/// Plain left-to-right accumulation, always single threaded.
SeriesSum naive_series(std::int64_t first, std::int64_t last,
                       const std::function<double(std::int64_t)>& term);

}  // namespace fuzzy_casimir
