#include "nilsphere/quadrature.hpp"

#include "nilsphere/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace nilsphere {
namespace {

constexpr int kMaxNewton = 100;

void sort_rule(QuadratureRule& rule) {
  std::vector<std::size_t> order(rule.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
  QuadratureRule sorted;
  for (std::size_t i : order) {
    sorted.nodes.push_back(rule.nodes[i]);
    sorted.weights.push_back(rule.weights[i]);
  }
  rule = std::move(sorted);
}

QuadratureRule compute_gauss_hermite(int n) {
  QuadratureRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  auto& x = rule.nodes;
  auto& w = rule.weights;
  const double pim4 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    for (int its = 0; its < kMaxNewton; ++its) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
      if (its == kMaxNewton - 1) throw BudgetError("gauss_hermite: Newton iteration failed");
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / (pp * pp);
  }
  sort_rule(rule);
  return rule;
}

QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int its = 0; its < kMaxNewton; ++its) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = -z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = rule.weights[static_cast<std::size_t>(n - 1 - i)] =
        2.0 / ((1.0 - z * z) * pp * pp);
  }
  sort_rule(rule);
  return rule;
}

template <class Compute>
const QuadratureRule& cached(std::map<int, std::unique_ptr<QuadratureRule>>& cache, std::mutex& mu, int n,
                             Compute compute) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<QuadratureRule>(compute(n))).first;
  return *it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
  if (n < 1 || n > 400) throw DomainError("gauss_hermite: node count must be in [1, 400]");
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, compute_gauss_hermite);
}

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1 || n > 2000) throw DomainError("gauss_legendre: node count must be in [1, 2000]");
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, compute_gauss_legendre);
}

QuadratureRule gauss_laguerre(int n, double alpha) {
  if (n < 1) throw DomainError("gauss_laguerre: n must be >= 1");
  if (!(alpha > -1.0)) throw DomainError("gauss_laguerre: alpha must be > -1");
  QuadratureRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  auto& x = rule.nodes;
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * n + 1.8 * alpha);
    } else if (i == 1) {
      z += (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai)) *
           (z - x[static_cast<std::size_t>(i - 2)]) / (1.0 + 0.3 * alpha);
    }
    double pp = 0.0, p2 = 0.0;
    for (int its = 0; its < kMaxNewton; ++its) {
      double p1 = 1.0;
      p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0 + alpha - z) * p2 - (j + alpha) * p3) / (j + 1.0);
      }
      pp = (n * p1 - (n + alpha) * p2) / z;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
      if (its == kMaxNewton - 1) throw BudgetError("gauss_laguerre: Newton iteration failed");
    }
    x[static_cast<std::size_t>(i)] = z;
    rule.weights[static_cast<std::size_t>(i)] =
        -std::exp(std::lgamma(alpha + n) - std::lgamma(static_cast<double>(n))) / (pp * n * p2);
  }
  return rule;
}

QuadratureRule gauss_legendre_on(int n, double a, double b) {
  const QuadratureRule& base = gauss_legendre(n);
  QuadratureRule rule;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    rule.nodes.push_back(mid + half * base.nodes[i]);
    rule.weights.push_back(half * base.weights[i]);
  }
  return rule;
}

AdaptiveResult adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                       double abs_tol, int n, int max_depth) {
  const QuadratureRule& lo = gauss_legendre(n);
  const QuadratureRule& hi = gauss_legendre(2 * n);
  auto panel = [&](double x0, double x1, const QuadratureRule& rule) {
    const double half = 0.5 * (x1 - x0), mid = 0.5 * (x1 + x0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
  };

  struct Panel {
    double x0, x1, coarse, fine;
    int depth;
  };
  AdaptiveResult result;
  std::vector<Panel> todo;
  todo.push_back({a, b, panel(a, b, lo), panel(a, b, hi), 0});
  // The global scale is refreshed from the accepted-plus-pending total.
  double scale = std::abs(todo.back().fine);
  while (!todo.empty()) {
    Panel pnl = todo.back();
    todo.pop_back();
    const double diff = std::abs(pnl.fine - pnl.coarse);
    if (diff <= std::max(abs_tol, rel_tol * scale) || pnl.depth >= max_depth) {
      result.value += pnl.fine;
      result.error_estimate += diff;
      ++result.panels;
      continue;
    }
    const double xm = 0.5 * (pnl.x0 + pnl.x1);
    Panel left{pnl.x0, xm, panel(pnl.x0, xm, lo), panel(pnl.x0, xm, hi), pnl.depth + 1};
    Panel right{xm, pnl.x1, panel(xm, pnl.x1, lo), panel(xm, pnl.x1, hi), pnl.depth + 1};
    scale = std::max(scale, std::abs(result.value + left.fine + right.fine));
    todo.push_back(right);
    todo.push_back(left);
  }
  return result;
}

}  // namespace nilsphere
