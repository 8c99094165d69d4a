#include "nilsphere/sublaplacian.hpp"

#include "nilsphere/errors.hpp"

namespace nilsphere {

Complex second_derivative(const GroupFn& f, const GroupPoint& n, int i, double h) {
  const int p = n.dim();
  if (i < 0 || i >= p) throw DimensionError("second_derivative: direction index out of range");
  if (!(h > 0.0)) throw DomainError("second_derivative: step must be positive");
  const VVector e = VVector::basis(p, i);
  const ZSkew zero = ZSkew::zero(p);
  auto g = [&](double t) { return f(one_param_curve(n, e, zero, t)); };
  const Complex f0 = f(n);
  return (-g(2.0 * h) + 16.0 * g(h) - 30.0 * f0 + 16.0 * g(-h) - g(-2.0 * h)) / (12.0 * h * h);
}

Complex sublap_apply(const GroupFn& f, const GroupPoint& n, double h) {
  Complex s{0.0, 0.0};
  for (int i = 0; i < n.dim(); ++i) s -= second_derivative(f, n, i, h);
  return s;
}

Complex second_derivative_richardson(const GroupFn& f, const GroupPoint& n, int i, double h) {
  return (16.0 * second_derivative(f, n, i, 0.5 * h) - second_derivative(f, n, i, h)) / 15.0;
}

Complex sublap_apply_richardson(const GroupFn& f, const GroupPoint& n, double h) {
  Complex s{0.0, 0.0};
  for (int i = 0; i < n.dim(); ++i) s -= second_derivative_richardson(f, n, i, h);
  return s;
}

}  // namespace nilsphere
