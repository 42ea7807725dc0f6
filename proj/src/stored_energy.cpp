#include "radelast/stored_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radelast {

Component parse_component(const std::string& name) {
  if (name == "phi") return Component::phi;
  if (name == "psi") return Component::psi;
  if (name == "g") return Component::g;
  if (name == "h") return Component::h;
  throw std::invalid_argument("unknown stored-energy component '" + name + "'");
}

std::string to_string(Component c) {
  switch (c) {
    case Component::phi: return "phi";
    case Component::psi: return "psi";
    case Component::g: return "g";
    case Component::h: return "h";
  }
  return "?";
}

Jet StoredEnergyModel::eval(Component which, double x) const {
  switch (which) {
    case Component::phi: return phi(x);
    case Component::psi: return psi(x);
    case Component::g: return g(x);
    case Component::h:
      if (!(x > 0.0)) throw DomainError("h evaluated at non-positive determinant " + std::to_string(x));
      return h(x);
  }
  return {};
}

StoredEnergyModel default_model() {
  StoredEnergyModel m;
  m.name = "default";
  m.phi = [](double x) {
    const double x2 = x * x;
    const double x4 = x2 * x2;
    return Jet{x4 * x2, 6.0 * x4 * x, 30.0 * x4};
  };
  m.psi = [](double x) { return Jet{x * x, 2.0 * x, 2.0}; };
  m.g = [](double x) { return Jet{x * x, 2.0 * x, 2.0}; };
  m.h = [](double d) {
    const double inv = 1.0 / d;
    return Jet{d * d + inv, 2.0 * d - inv * inv, 2.0 + 2.0 * inv * inv * inv};
  };
  m.p = 2.0;
  m.q = 2.0;
  m.c1 = 1.0;
  m.c2 = 1.0;
  return m;
}

namespace {

ScalarFunction abs_power(double coeff, double a) {
  return [coeff, a](double x) {
    const double ax = std::abs(x);
    if (ax == 0.0) {
      const double d2 = a == 2.0 ? 2.0 * coeff : (a > 2.0 ? 0.0 : std::numeric_limits<double>::infinity());
      return Jet{0.0, 0.0, d2};
    }
    const double s = x < 0.0 ? -1.0 : 1.0;
    const double pa2 = std::pow(ax, a - 2.0);
    return Jet{coeff * pa2 * ax * ax, coeff * s * a * pa2 * ax, coeff * a * (a - 1.0) * pa2};
  };
}

}  // namespace

StoredEnergyModel power_model(double p, double q, double c1, double c2, double h_quadratic,
                              double h_barrier) {
  StoredEnergyModel m;
  m.name = "power";
  m.phi = abs_power(c1, 3.0 * p);
  m.psi = abs_power(c1, p);
  m.g = abs_power(c2, q);
  m.h = [h_quadratic, h_barrier](double d) {
    const double inv = 1.0 / d;
    return Jet{h_quadratic * d * d + h_barrier * inv, 2.0 * h_quadratic * d - h_barrier * inv * inv,
               2.0 * h_quadratic + 2.0 * h_barrier * inv * inv * inv};
  };
  m.p = p;
  m.q = q;
  m.c1 = c1;
  m.c2 = c2;
  return m;
}

XiVector operator+(const XiVector& a, const XiVector& b) {
  XiVector r;
  for (std::size_t i = 0; i < 7; ++i) r.xi[i] = a.xi[i] + b.xi[i];
  return r;
}

XiVector operator*(double s, const XiVector& a) {
  XiVector r;
  for (std::size_t i = 0; i < 7; ++i) r.xi[i] = s * a.xi[i];
  return r;
}

namespace {

struct RhoPowers {
  double r13;
  double r23;
};

RhoPowers rho_powers(double rho) {
  const double r13 = std::cbrt(rho);
  return {r13, r13 * r13};
}

void require_admissible(const XiVector& xi) {
  if (!(xi[6] > 0.0)) throw DomainError("xi_7 must be positive, got " + std::to_string(xi[6]));
}

}  // namespace

double eval_G(const StoredEnergyModel& model, const XiVector& xi, double rho) {
  require_admissible(xi);
  const auto [r13, r23] = rho_powers(rho);
  return model.phi(xi[0]).value + model.psi(xi[1]).value + model.psi(xi[2]).value +
         model.g(xi[3] / r13).value + model.g(xi[4] / r13).value + model.g(xi[5] / r13).value +
         model.h(xi[6] / r23).value;
}

std::array<double, 7> grad_G(const StoredEnergyModel& model, const XiVector& xi, double rho) {
  require_admissible(xi);
  const auto [r13, r23] = rho_powers(rho);
  return {model.phi(xi[0]).d1,
          model.psi(xi[1]).d1,
          model.psi(xi[2]).d1,
          model.g(xi[3] / r13).d1 / r13,
          model.g(xi[4] / r13).d1 / r13,
          model.g(xi[5] / r13).d1 / r13,
          model.h(xi[6] / r23).d1 / r23};
}

std::array<double, 7> hess_diag_G(const StoredEnergyModel& model, const XiVector& xi, double rho) {
  require_admissible(xi);
  const auto [r13, r23] = rho_powers(rho);
  return {model.phi(xi[0]).d2,
          model.psi(xi[1]).d2,
          model.psi(xi[2]).d2,
          model.g(xi[3] / r13).d2 / r23,
          model.g(xi[4] / r13).d2 / r23,
          model.g(xi[5] / r13).d2 / r23,
          model.h(xi[6] / r23).d2 / (r23 * r23)};
}

double eval_Phi(const StoredEnergyModel& model, double v1, double v2, double v3) {
  const double det = v1 * v2 * v3;
  if (!(det > 0.0)) throw DomainError("Phi needs a positive determinant");
  return model.phi(v1).value + model.phi(v2).value + model.phi(v3).value + model.g(v2 * v3).value +
         model.g(v1 * v3).value + model.g(v1 * v2).value + model.h(det).value;
}

// ---------------------------------------------------------------------------

bool AuditReport::passed(const std::string& assumption) const {
  return std::all_of(entries.begin(), entries.end(), [&](const AuditEntry& e) {
    return e.assumption != assumption || e.pass;
  });
}

bool AuditReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.pass; });
}

std::string AuditReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  for (const auto& a : {"A1", "A2", "A3", "A4", "psi"}) {
    bool any = false;
    for (const auto& e : entries) any = any || e.assumption == a;
    if (!any) continue;
    os << a << ": " << (passed(a) ? "PASS" : "FAIL") << "\n";
    for (const auto& e : entries) {
      if (e.assumption != a) continue;
      os << "  [" << (e.pass ? "ok" : "FAIL") << "] " << e.check;
      if (!e.pass) os << " witness x=" << e.witness_x << " value=" << e.witness_value;
      if (!e.note.empty()) os << " (" << e.note << ")";
      os << "\n";
    }
  }
  os << "overall: " << (all_passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return x;
}

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  const double la = std::log10(a);
  const double lb = std::log10(b);
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = std::pow(10.0, la + (lb - la) * i / (n - 1));
  return x;
}

// Scans f over xs and reports the first sample violating pred.
template <class F, class Pred>
AuditEntry scan(std::string assumption, std::string check, const std::vector<double>& xs, F&& f,
                Pred&& pred) {
  AuditEntry e{std::move(assumption), std::move(check)};
  for (double x : xs) {
    const double y = f(x);
    if (!pred(y)) {
      e.pass = false;
      e.witness_x = x;
      e.witness_value = y;
      break;
    }
  }
  return e;
}

// Ratio sequence r(x_k) along a growing geometric sample. Converged means finite,
// positive, and the last two samples agree to 1e-3 relative.
struct RatioTrend {
  std::vector<double> x;
  std::vector<double> r;
  bool finite = true;
  bool converged = false;
  bool non_increasing_tail = true;
  double limit = 0.0;
};

template <class F>
RatioTrend ratio_trend(const std::vector<double>& xs, F&& ratio) {
  RatioTrend t;
  t.x = xs;
  for (double x : xs) {
    const double r = ratio(x);
    t.r.push_back(r);
    if (!std::isfinite(r)) t.finite = false;
  }
  const std::size_t n = t.r.size();
  if (t.finite && n >= 2) {
    const double a = t.r[n - 2];
    const double b = t.r[n - 1];
    t.converged = std::abs(b - a) <= 1e-3 * std::max(std::abs(a), std::abs(b));
    t.limit = b;
    for (std::size_t k = n / 2 + 1; k < n; ++k) {
      if (t.r[k] > t.r[k - 1] * (1.0 + 1e-12)) t.non_increasing_tail = false;
    }
  }
  return t;
}

}  // namespace

AuditReport audit_assumptions(const StoredEnergyModel& model, const SampleSpec& spec) {
  AuditReport rep;
  const auto reals = linspace(-spec.real_range, spec.real_range, spec.real_samples);
  const auto deltas = geomspace(spec.delta_min, spec.delta_max, spec.delta_samples);

  // A1: h blows up at 0+ and is superlinear at infinity.
  {
    AuditEntry e{"A1", "h(delta) -> +inf as delta -> 0+ (delta = 10^-k)"};
    std::vector<double> hs;
    std::vector<double> ds;
    for (double d = 0.1; d >= spec.delta_min * (1 - 1e-12); d /= 10.0) {
      ds.push_back(d);
      hs.push_back(model.h(d).value);
    }
    for (std::size_t k = 1; k < hs.size(); ++k) {
      if (!(hs[k] > hs[k - 1])) {
        e.pass = false;
        e.witness_x = ds[k];
        e.witness_value = hs[k];
        break;
      }
    }
    if (e.pass && !(hs.back() >= 100.0 * std::max(1.0, std::abs(hs.front())))) {
      e.pass = false;
      e.witness_x = ds.back();
      e.witness_value = hs.back();
    }
    rep.entries.push_back(e);

    AuditEntry dec{"A1", "h strictly decreasing below some delta0"};
    double delta0 = 0.0;
    for (double d : deltas) {
      if (model.h(d).d1 < 0.0) delta0 = d;
      else break;
    }
    dec.pass = delta0 > 0.0;
    dec.witness_x = deltas.front();
    dec.witness_value = model.h(deltas.front()).d1;
    std::ostringstream note;
    note << "delta0 ~ " << delta0;
    dec.note = note.str();
    rep.entries.push_back(dec);

    AuditEntry sup{"A1", "h(delta)/delta -> +inf as delta -> inf (delta = 10^k)"};
    std::vector<double> rs;
    std::vector<double> xs;
    for (double d = 10.0; d <= spec.delta_max * (1 + 1e-12); d *= 10.0) {
      xs.push_back(d);
      rs.push_back(model.h(d).value / d);
    }
    for (std::size_t k = 1; k < rs.size(); ++k) {
      if (!(rs[k] > rs[k - 1])) {
        sup.pass = false;
        sup.witness_x = xs[k];
        sup.witness_value = rs[k];
        break;
      }
    }
    if (sup.pass && !(rs.back() >= 100.0 * std::max(1e-300, std::abs(rs.front())))) {
      sup.pass = false;
      sup.witness_x = xs.back();
      sup.witness_value = rs.back();
    }
    rep.entries.push_back(sup);
  }

  // A2: nonnegativity and convexity.
  const auto nonneg = [](double y) { return y >= 0.0; };
  rep.entries.push_back(scan("A2", "phi >= 0", reals, [&](double x) { return model.phi(x).value; }, nonneg));
  rep.entries.push_back(scan("A2", "psi >= 0", reals, [&](double x) { return model.psi(x).value; }, nonneg));
  rep.entries.push_back(scan("A2", "g >= 0", reals, [&](double x) { return model.g(x).value; }, nonneg));
  rep.entries.push_back(scan("A2", "h >= 0", deltas, [&](double x) { return model.h(x).value; }, nonneg));
  rep.entries.push_back(scan("A2", "phi'' >= 0", reals, [&](double x) { return model.phi(x).d2; }, nonneg));
  rep.entries.push_back(scan("A2", "psi'' >= 0", reals, [&](double x) { return model.psi(x).d2; }, nonneg));
  rep.entries.push_back(scan("A2", "g'' >= 0", reals, [&](double x) { return model.g(x).d2; }, nonneg));
  rep.entries.push_back(
      scan("A2", "h'' > 0", deltas, [&](double x) { return model.h(x).d2; }, [](double y) { return y > 0.0; }));

  // A3: power growth with positive finite limits, phi and psi sharing c1.
  const auto growth = geomspace(10.0, spec.growth_max, 11);
  const auto check_limit = [&](const char* label, const RatioTrend& t) {
    AuditEntry e{"A3", label};
    e.pass = t.finite && t.converged && t.limit > 0.0;
    e.witness_x = t.x.back();
    e.witness_value = t.r.back();
    std::ostringstream note;
    note << "limit ~ " << t.limit;
    e.note = note.str();
    rep.entries.push_back(e);
  };
  const auto phi_lim = ratio_trend(growth, [&](double x) { return model.phi(x).value / std::pow(x, 3.0 * model.p); });
  const auto psi_lim = ratio_trend(growth, [&](double x) { return model.psi(x).value / std::pow(x, model.p); });
  const auto g_lim = ratio_trend(growth, [&](double x) { return model.g(x).value / std::pow(x, model.q); });
  check_limit("phi(x)/x^{3p} -> c1 > 0", phi_lim);
  check_limit("psi(x)/x^p -> c1 > 0", psi_lim);
  check_limit("g(x)/x^q -> c2 > 0", g_lim);
  {
    AuditEntry e{"A3", "phi and psi share the constant c1"};
    e.pass = std::abs(phi_lim.limit - psi_lim.limit) <= 1e-3 * std::max(phi_lim.limit, psi_lim.limit);
    e.witness_value = phi_lim.limit - psi_lim.limit;
    rep.entries.push_back(e);
  }
  {
    AuditEntry e{"A3", "exponents p, q in (1, inf)"};
    e.pass = model.p > 1.0 && model.q > 1.0 && std::isfinite(model.p) && std::isfinite(model.q);
    e.witness_x = model.p;
    e.witness_value = model.q;
    rep.entries.push_back(e);
  }

  // A4: derivative growth, audited as a non-growing (or converged) ratio tail.
  const auto check_bound = [&](const char* label, const RatioTrend& t) {
    AuditEntry e{"A4", label};
    e.pass = t.finite && (t.converged || t.non_increasing_tail);
    e.witness_x = t.x.back();
    e.witness_value = t.r.back();
    rep.entries.push_back(e);
  };
  check_bound("|phi'(x)|/x^{3p-1} bounded",
              ratio_trend(growth, [&](double x) { return std::abs(model.phi(x).d1) / std::pow(x, 3.0 * model.p - 1.0); }));
  check_bound("|psi'(x)|/x^{p-1} bounded",
              ratio_trend(growth, [&](double x) { return std::abs(model.psi(x).d1) / std::pow(x, model.p - 1.0); }));
  check_bound("|g'(x)|/x^q bounded",
              ratio_trend(growth, [&](double x) { return std::abs(model.g(x).d1) / std::pow(x, model.q); }));

  // psi is stored independently; it has to agree with phi(x^{1/3}).
  {
    const auto pos = geomspace(1e-3, spec.real_range, 200);
    rep.entries.push_back(scan(
        "psi", "psi(x) = phi(x^{1/3}) for x > 0", pos,
        [&](double x) {
          const double a = model.psi(x).value;
          const double b = model.phi(std::cbrt(x)).value;
          return std::abs(a - b) / (1.0 + std::abs(a));
        },
        [](double y) { return y <= 1e-10; }));
  }
  return rep;
}

}  // namespace radelast
