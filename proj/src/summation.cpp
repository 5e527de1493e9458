#include "fuzzy_casimir/summation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <thread>
#include <vector>

namespace fuzzy_casimir {

namespace {

constexpr std::int64_t kChunk = std::int64_t{1} << 16;

struct ChunkResult {
  CompensatedSum value;
  CompensatedSum abs_sum;
};

ChunkResult sum_chunk(std::int64_t first, std::int64_t last,
                      const std::function<double(std::int64_t)>& term) {
  ChunkResult r;
  for (std::int64_t n = first; n <= last; ++n) {
    const double t = term(n);
    r.value += t;
    r.abs_sum += std::abs(t);
  }
  return r;
}

}  // namespace

unsigned worker_threads() {
  if (const char* env = std::getenv("FUZZY_CASIMIR_THREADS")) {
    unsigned parsed = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, parsed);
    if (ec == std::errc{} && ptr == end && parsed > 0) return parsed;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SeriesSum compensated_series(std::int64_t first, std::int64_t last,
                             const std::function<double(std::int64_t)>& term,
                             unsigned threads) {
  if (last < first) return {};
  const std::int64_t count = last - first + 1;
  const std::int64_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<ChunkResult> partial(static_cast<std::size_t>(chunks));

  auto run = [&](std::int64_t c) {
    const std::int64_t lo = first + c * kChunk;
    const std::int64_t hi = std::min(last, lo + kChunk - 1);
    partial[static_cast<std::size_t>(c)] = sum_chunk(lo, hi, term);
  };

  const auto workers =
      static_cast<std::int64_t>(std::clamp<std::int64_t>(threads, 1, chunks));
  if (workers == 1) {
    for (std::int64_t c = 0; c < chunks; ++c) run(c);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t c = w; c < chunks; c += workers) run(c);
      });
    }
  }

  CompensatedSum value;
  CompensatedSum abs_sum;
  for (const auto& p : partial) {
    value += p.value.value();
    abs_sum += p.abs_sum.value();
  }
  return {value.value(), abs_sum.value()};
}

SeriesSum naive_series(std::int64_t first, std::int64_t last,
                       const std::function<double(std::int64_t)>& term) {
  SeriesSum s;
  for (std::int64_t n = first; n <= last; ++n) {
    const double t = term(n);
    s.value += t;
    s.abs_sum += std::abs(t);
  }
  return s;
}

}  // namespace fuzzy_casimir
