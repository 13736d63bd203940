#pragma once
// Independent reference computations for the test suites: composite
// Gauss-Legendre on a mapped half line, no shared code with the library.

#include <cmath>
#include <functional>

namespace oracle {

inline double gl_panel(const std::function<double(double)>& f, double a, double b) {
  static const double x[] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
                             -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
                             0.8650633666889845,  0.9739065285171717};
  static const double w[] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
                             0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                             0.1494513491505806, 0.0666713443086881};
  double c = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
  for (int i = 0; i < 10; ++i) s += w[i] * f(c + h * x[i]);
  return s * h;
}

inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 400) {
  double s = 0.0, h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) s += gl_panel(f, a + i * h, a + (i + 1) * h);
  return s;
}

// Integral over [a, inf) through t = a + u/(1-u), graded towards both ends.
inline double integrate_inf(const std::function<double(double)>& f, double a, double scale = 1.0,
                            int panels = 2000) {
  auto g = [&](double v) {
    // v in (0,1), u = v^2 clusters panels near the start
    double u = v * v;
    double t = a + scale * u / (1.0 - u);
    double dt = scale * 2.0 * v / ((1.0 - u) * (1.0 - u));
    double y = f(t) * dt;
    return std::isfinite(y) ? y : 0.0;
  };
  return integrate(g, 0.0, 1.0, panels);
}

}  // namespace oracle
