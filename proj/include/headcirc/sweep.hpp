#pragma once

// Frequency grids and a small parallel-map helper for sweeps.

#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "headcirc/errors.hpp"

namespace headcirc {

struct FrequencyGrid {
  double min_hz = 10.0;
  double max_hz = 50e3;
  int points = 61;

  // Logarithmically spaced, endpoints inclusive.
  std::vector<double> values() const {
    if (!(min_hz > 0.0) || !(max_hz > min_hz) || points < 2)
      throw ValidationError("frequency grid requires 0 < min < max, points >= 2");
    std::vector<double> out(static_cast<std::size_t>(points));
    const double l0 = std::log10(min_hz), l1 = std::log10(max_hz);
    for (int i = 0; i < points; ++i)
      out[static_cast<std::size_t>(i)] =
          std::pow(10.0, l0 + (l1 - l0) * i / (points - 1));
    out.front() = min_hz;
    out.back() = max_hz;
    return out;
  }
};

// Evaluates fn(i) for i in [0, n) on up to `threads` workers; deterministic
// output ordering. fn must be safe to call concurrently.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned nw = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nw);
  pool.reserve(nw);
  for (unsigned w = 0; w < nw; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += nw) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace headcirc
