// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/fd_oracle.hpp"

#include <cmath>
#include <string>

#include "spsatune/error.hpp"

namespace spsatune {

std::vector<double> finite_difference_oracle(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x, double h,
    std::span<const double> lower, std::span<const double> upper) {
  const std::size_t n = x.size();
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("finite difference step must be positive");
  if ((!lower.empty() && lower.size() != n) || (!upper.empty() && upper.size() != n))
    throw StructuralError("bounds dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = lower.empty() ? 0.0 : lower[i];
    const double hi = upper.empty() ? 1.0 : upper[i];
    if (!(x[i] >= lo && x[i] + h <= hi))
      throw DomainError("probe " + std::to_string(i) + " leaves the box");
  }

  std::vector<double> probe(x.begin(), x.end());
  const double f0 = f(probe);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    probe[i] = x[i] + h;
    g[i] = (f(probe) - f0) / h;
    probe[i] = x[i];
  }
  return g;
}

}  // namespace spsatune
