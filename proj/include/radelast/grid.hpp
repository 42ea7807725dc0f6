#pragma once

#include <string>
#include <vector>

namespace radelast {

enum class GridScheme { cell_centered, shifted_uniform };

GridScheme parse_scheme(const std::string& name);
std::string to_string(GridScheme s);

/**
 * @brief Uniform mesh on rho in (0,1]
 *
 * nodes[0..n-1] are strictly positive, nodes[n-1] == 1 is the Dirichlet
 * boundary node; the origin is never a node. The solver works on a staggered
 * layout: face k sits between point k and point k+1, where point 0 is the
 * origin and point i+1 is nodes[i]. So node i has faces i (left) and i+1
 * (right), and there are n faces in total.
 *
 * The face factors a1, a5 and node factors w2, w4 are the mimetic
 * replacements for rho^{2/3} and rho^{1/3} that make the discrete
 * null-Lagrangian identities hold exactly (see step.hpp).
 */
struct GridSpec {
  int N = 0;
  GridScheme scheme = GridScheme::cell_centered;

  std::vector<double> nodes;    // size n
  std::vector<double> weights;  // quadrature weights, size n, sum 1
  std::vector<double> rho13;    // nodes^{1/3}
  std::vector<double> rho23;    // nodes^{2/3}

  std::vector<double> face_width;  // d_k = p_{k+1} - p_k, size n
  std::vector<double> face_mid;    // face midpoints
  std::vector<double> a1;          // d_k / (3 (p_{k+1}^{1/3} - p_k^{1/3}))
  std::vector<double> a5;          // (2/3) d_k / (p_{k+1}^{2/3} - p_k^{2/3})
  std::vector<double> w2;          // node weights of the psi terms, boundary entry closes the sum to 1
  std::vector<double> w4;          // node weights of the g(xi_4) term, same closure

  std::size_t size() const { return nodes.size(); }
  std::size_t free_size() const { return nodes.size() - 1; }
  double spacing() const { return 1.0 / N; }
};

/// N >= 4. cell_centered: (i-1/2)/N for i=1..N plus the boundary node 1.
/// shifted_uniform: i/N for i=1..N, the last node being the boundary.
GridSpec make_grid(int N, GridScheme scheme = GridScheme::cell_centered);

/// Three-point Lagrange derivative; central inside, one-sided at both ends.
std::vector<double> ddr(const GridSpec& grid, const std::vector<double>& f);

double integrate(const GridSpec& grid, const std::vector<double>& f);

}  // namespace radelast
