#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace radelast {

/// Thrown when a function is evaluated outside its domain (e.g. h at a
/// non-positive determinant).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Value and first two derivatives of a scalar function at one point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

using ScalarFunction = std::function<Jet(double)>;

enum class Component { phi, psi, g, h };

Component parse_component(const std::string& name);
std::string to_string(Component c);

/**
 * @brief Additively split polyconvex stored energy
 *
 * Phi(v1,v2,v3) = phi(v1)+phi(v2)+phi(v3) + g(v2 v3)+g(v1 v3)+g(v1 v2) + h(v1 v2 v3),
 * with psi(x) = phi(x^{1/3}) carried as its own closed form. The exponents p, q
 * and constants c1, c2 describe the growth at infinity and are only used by the
 * assumption auditor.
 */
struct StoredEnergyModel {
  std::string name;
  ScalarFunction phi;
  ScalarFunction psi;
  ScalarFunction g;
  ScalarFunction h;  ///< defined on (0, inf) only
  double p = 2.0;
  double q = 2.0;
  double c1 = 1.0;
  double c2 = 1.0;

  Jet eval(Component which, double x) const;
};

/// phi(x)=x^6, psi(x)=x^2, g(x)=x^2, h(d)=d^2+1/d.
StoredEnergyModel default_model();

/**
 * Power-law family: phi = c1|x|^{3p}, psi = c1|x|^p, g = c2|x|^q,
 * h(d) = h_quadratic d^2 + h_barrier / d. The default model is power_model(2, 2, 1, 1, 1, 1).
 */
StoredEnergyModel power_model(double p, double q, double c1, double c2, double h_quadratic,
                              double h_barrier);

/// Strong type for the 7-vector of null-Lagrangians and lower-order terms.
struct XiVector {
  std::array<double, 7> xi{};

  double& operator[](std::size_t i) { return xi[i]; }
  double operator[](std::size_t i) const { return xi[i]; }

  friend XiVector operator+(const XiVector& a, const XiVector& b);
  friend XiVector operator*(double s, const XiVector& a);
};

/// G(Xi; rho) = phi(x1)+psi(x2)+psi(x3)+g(x4/r^{1/3})+g(x5/r^{1/3})+g(x6/r^{1/3})+h(x7/r^{2/3}).
double eval_G(const StoredEnergyModel& model, const XiVector& xi, double rho);

/// Exact partials dG/dxi_i.
std::array<double, 7> grad_G(const StoredEnergyModel& model, const XiVector& xi, double rho);

/// G is a sum of univariate terms, so its Hessian is diagonal.
std::array<double, 7> hess_diag_G(const StoredEnergyModel& model, const XiVector& xi, double rho);

/// Phi from principal stretches, composed directly through Gbar (no Xi).
double eval_Phi(const StoredEnergyModel& model, double v1, double v2, double v3);

// ---------------------------------------------------------------------------
// Assumption audit

struct SampleSpec {
  double real_range = 50.0;      ///< phi, psi, g sampled on [-real_range, real_range]
  int real_samples = 2001;
  double delta_min = 1e-6;       ///< h sampled geometrically on [delta_min, delta_max]
  double delta_max = 1e6;
  int delta_samples = 241;
  double growth_max = 1e6;       ///< A3/A4 ratios sampled on [10, growth_max]
};

struct AuditEntry {
  std::string assumption;  ///< "A1".."A4", "psi"
  std::string check;
  bool pass = true;
  double witness_x = 0.0;
  double witness_value = 0.0;
  std::string note;
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  bool passed(const std::string& assumption) const;
  bool all_passed() const;
  std::string to_text() const;
};

AuditReport audit_assumptions(const StoredEnergyModel& model, const SampleSpec& spec = {});

}  // namespace radelast
