// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace spsatune {

/// Analytic test function on the unit cube with its exact gradient.
struct SyntheticFunction {
  std::string name;
  std::string description;
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

/// sum_i (x_i - center_i)^2
SyntheticFunction shifted_quadratic(std::vector<double> center);
/// Shifted quadratic with every center coordinate equal to `a`.
SyntheticFunction shifted_quadratic(double a = 0.3);

/// Rosenbrock chain on y = 4x - 2, so the minimum sits at x = 0.75.
SyntheticFunction rosenbrock_cube();

/// x^T A x with A tridiagonal: 2 on the diagonal, 0.5 beside it.
SyntheticFunction cross_quadratic();

/// sum_i x_i^3 + sum_i x_i^2 x_{i+1}.
SyntheticFunction cubic_probe();

/// Catalog keyed by name: "quadratic", "rosenbrock", "cross_quadratic", "cubic".
const std::map<std::string, SyntheticFunction>& builtin_synthetics();

/// Throws LookupError for unknown names.
const SyntheticFunction& find_synthetic(const std::string& name);

}  // namespace spsatune
