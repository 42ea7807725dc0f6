#include "radelast/grid.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace radelast {

GridScheme parse_scheme(const std::string& name) {
  if (name == "cell_centered") return GridScheme::cell_centered;
  if (name == "shifted_uniform") return GridScheme::shifted_uniform;
  throw std::invalid_argument("unknown grid scheme '" + name + "'");
}

std::string to_string(GridScheme s) {
  return s == GridScheme::cell_centered ? "cell_centered" : "shifted_uniform";
}

GridSpec make_grid(int N, GridScheme scheme) {
  if (N < 4) throw std::invalid_argument("grid needs N >= 4, got " + std::to_string(N));
  GridSpec g;
  g.N = N;
  g.scheme = scheme;
  const double h = 1.0 / N;

  if (scheme == GridScheme::cell_centered) {
    for (int i = 1; i <= N; ++i) g.nodes.push_back((i - 0.5) * h);
    g.nodes.push_back(1.0);
    g.weights.assign(g.nodes.size(), h);
    g.weights.back() = 0.0;
  } else {
    for (int i = 1; i < N; ++i) g.nodes.push_back(i * h);
    g.nodes.push_back(1.0);
    // First node carries the [0, 1.5h] piece; exact on affine functions.
    g.weights.assign(g.nodes.size(), h);
    g.weights[0] = 2.0 * h;
    g.weights[1] = 0.5 * h;
    g.weights.back() = 0.5 * h;
  }

  const std::size_t n = g.nodes.size();
  for (double r : g.nodes) {
    const double c = std::cbrt(r);
    g.rho13.push_back(c);
    g.rho23.push_back(c * c);
  }

  g.face_width.resize(n);
  g.face_mid.resize(n);
  g.a1.resize(n);
  g.a5.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = k == 0 ? 0.0 : g.nodes[k - 1];
    const double lo13 = k == 0 ? 0.0 : g.rho13[k - 1];
    const double lo23 = k == 0 ? 0.0 : g.rho23[k - 1];
    const double d = g.nodes[k] - lo;
    g.face_width[k] = d;
    g.face_mid[k] = 0.5 * (g.nodes[k] + lo);
    g.a1[k] = d / (3.0 * (g.rho13[k] - lo13));
    g.a5[k] = (2.0 / 3.0) * d / (g.rho23[k] - lo23);
  }

  g.w2.assign(n, 0.0);
  g.w4.assign(n, 0.0);
  double s2 = 0.0;
  double s4 = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.w2[i] = 1.5 * g.rho13[i] * (g.a1[i + 1] - g.a1[i]);
    g.w4[i] = 3.0 * g.rho23[i] * (g.a5[i + 1] - g.a5[i]);
    s2 += g.w2[i];
    s4 += g.w4[i];
  }
  g.w2.back() = 1.0 - s2;
  g.w4.back() = 1.0 - s4;
  return g;
}

std::vector<double> ddr(const GridSpec& grid, const std::vector<double>& f) {
  const auto& x = grid.nodes;
  const std::size_t n = x.size();
  if (f.size() != n) throw std::invalid_argument("ddr: size mismatch");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    // Weights of the Lagrange derivative at x[i]; written against f[i] so a
    // constant gives an exact zero.
    double acc = 0.0;
    for (std::size_t a = s; a < s + 3; ++a) {
      if (a == i) continue;
      double num = 0.0;
      double den = 1.0;
      for (std::size_t b = s; b < s + 3; ++b) {
        if (b == a) continue;
        den *= x[a] - x[b];
      }
      // d/dx of prod_{b != a}(x - x_b) at x[i]; the b == i factor survives alone.
      for (std::size_t b = s; b < s + 3; ++b) {
        if (b == a) continue;
        double term = 1.0;
        for (std::size_t c = s; c < s + 3; ++c) {
          if (c == a || c == b) continue;
          term *= x[i] - x[c];
        }
        num += term;
      }
      acc += num / den * (f[a] - f[i]);
    }
    d[i] = acc;
  }
  return d;
}

double integrate(const GridSpec& grid, const std::vector<double>& f) {
  if (f.size() != grid.size()) throw std::invalid_argument("integrate: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += grid.weights[i] * f[i];
  return s;
}

}  // namespace radelast
