#include "detail/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <vector>

namespace ittail::detail {
namespace {

boost::math::quadrature::tanh_sinh<double>& finite_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule;
}

boost::math::quadrature::exp_sinh<double>& infinite_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule;
  return rule;
}

QuadResult piece(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return {};
  double err = 0.0;
  double v = finite_rule().integrate(f, a, b, tol, &err);
  return {v, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, std::span<const double> breaks,
                     double scale, double tol) {
  std::vector<double> cuts{lo};
  for (double b : breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  bool infinite = std::isinf(hi);
  if (!infinite) cuts.push_back(hi);

  QuadResult out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadResult r = piece(f, cuts[i], cuts[i + 1], tol);
    out.value += r.value;
    out.error += r.error;
  }
  if (infinite) {
    double c = cuts.back();
    double m = c + scale;
    QuadResult r = piece(f, c, m, tol);
    out.value += r.value;
    out.error += r.error;
    double err = 0.0;
    double v = infinite_rule().integrate([&](double u) { return f(m + u); }, tol, &err);
    out.value += v;
    out.error += err;
  }
  return out;
}

}  // namespace ittail::detail
