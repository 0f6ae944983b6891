// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/synthetics.hpp"

#include "spsatune/error.hpp"

namespace spsatune {

namespace {

SyntheticFunction quadratic_about(std::function<double(std::size_t)> a) {
  SyntheticFunction f;
  f.name = "quadratic";
  f.description = "sum_i (x_i - a_i)^2";
  f.value = [a](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - a(i)) * (x[i] - a(i));
    return s;
  };
  f.gradient = [a](std::span<const double> x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * (x[i] - a(i));
    return g;
  };
  return f;
}

}  // namespace

SyntheticFunction shifted_quadratic(std::vector<double> center) {
  if (center.empty()) return shifted_quadratic(0.3);
  return quadratic_about([center = std::move(center)](std::size_t i) {
    if (i >= center.size()) throw StructuralError("quadratic center is shorter than the point");
    return center[i];
  });
}

SyntheticFunction shifted_quadratic(double a) {
  return quadratic_about([a](std::size_t) { return a; });
}

SyntheticFunction rosenbrock_cube() {
  SyntheticFunction f;
  f.name = "rosenbrock";
  f.description = "sum_i 100 (y_{i+1} - y_i^2)^2 + (1 - y_i)^2 with y = 4x - 2";
  f.value = [](std::span<const double> x) {
    if (x.size() == 1) {
      double y = 4.0 * x[0] - 2.0;
      return (1.0 - y) * (1.0 - y);
    }
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      double yi = 4.0 * x[i] - 2.0, yn = 4.0 * x[i + 1] - 2.0;
      s += 100.0 * (yn - yi * yi) * (yn - yi * yi) + (1.0 - yi) * (1.0 - yi);
    }
    return s;
  };
  f.gradient = [](std::span<const double> x) {
    std::vector<double> g(x.size(), 0.0);
    if (x.size() == 1) {
      double y = 4.0 * x[0] - 2.0;
      g[0] = -2.0 * (1.0 - y) * 4.0;
      return g;
    }
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      double yi = 4.0 * x[i] - 2.0, yn = 4.0 * x[i + 1] - 2.0;
      double r = yn - yi * yi;
      g[i] += 4.0 * (-400.0 * r * yi - 2.0 * (1.0 - yi));
      g[i + 1] += 4.0 * (200.0 * r);
    }
    return g;
  };
  return f;
}

SyntheticFunction cross_quadratic() {
  SyntheticFunction f;
  f.name = "cross_quadratic";
  f.description = "x^T A x, A = tridiag(0.5, 2, 0.5)";
  auto apply = [](std::span<const double> x) {
    std::vector<double> ax(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double v = 2.0 * x[i];
      if (i > 0) v += 0.5 * x[i - 1];
      if (i + 1 < x.size()) v += 0.5 * x[i + 1];
      ax[i] = v;
    }
    return ax;
  };
  f.value = [apply](std::span<const double> x) {
    auto ax = apply(x);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * ax[i];
    return s;
  };
  f.gradient = [apply](std::span<const double> x) {
    auto g = apply(x);
    for (double& v : g) v *= 2.0;
    return g;
  };
  return f;
}

SyntheticFunction cubic_probe() {
  SyntheticFunction f;
  f.name = "cubic";
  f.description = "sum_i x_i^3 + sum_i x_i^2 x_{i+1}";
  f.value = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += x[i] * x[i] * x[i];
      if (i + 1 < x.size()) s += x[i] * x[i] * x[i + 1];
    }
    return s;
  };
  f.gradient = [](std::span<const double> x) {
    std::vector<double> g(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      g[i] += 3.0 * x[i] * x[i];
      if (i + 1 < x.size()) {
        g[i] += 2.0 * x[i] * x[i + 1];
        g[i + 1] += x[i] * x[i];
      }
    }
    return g;
  };
  return f;
}

const std::map<std::string, SyntheticFunction>& builtin_synthetics() {
  static const std::map<std::string, SyntheticFunction> catalog = [] {
    std::map<std::string, SyntheticFunction> m;
    for (auto f : {shifted_quadratic(), rosenbrock_cube(), cross_quadratic(), cubic_probe()})
      m.emplace(f.name, std::move(f));
    return m;
  }();
  return catalog;
}

const SyntheticFunction& find_synthetic(const std::string& name) {
  const auto& cat = builtin_synthetics();
  auto it = cat.find(name);
  if (it == cat.end()) throw LookupError("unknown synthetic function '" + name + "'");
  return it->second;
}

}  // namespace spsatune
