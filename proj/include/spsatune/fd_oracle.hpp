// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spsatune {

/// Forward-difference gradient: coordinate i is (f(x + h e_i) - f(x)) / h.
/// Uses exactly n + 1 evaluations of `f`. Every probe x + h e_i must stay
/// inside [lower, upper] (the unit cube when the bounds are empty);
/// otherwise DomainError is thrown before any evaluation.
std::vector<double> finite_difference_oracle(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x, double h,
    std::span<const double> lower = {}, std::span<const double> upper = {});

}  // namespace spsatune
