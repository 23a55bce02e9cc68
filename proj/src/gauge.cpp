#include "kgfield/gauge.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "kgfield/inner_products.hpp"

namespace kgfield {
namespace {

const cplx I(0.0, 1.0);

double identity_distance(double a, double theta) {
  const GaugeElement g{theta, a};
  const auto d = g.diagonal();
  return std::max(std::abs(d[0] - 1.0), std::abs(d[1] - 1.0));
}

} // namespace

std::array<cplx, 2> GaugeElement::diagonal() const {
  return {std::polar(1.0, -(a + 1.0) * theta), std::polar(1.0, -(a - 1.0) * theta)};
}

LatticeField gauge_transform(const LatticeField& field, double theta, double a) {
  if (!std::isfinite(theta)) throw PreconditionError("gauge_transform: theta must be finite");
  const auto d = GaugeElement{theta, a}.diagonal();
  CGrid p = field.phi_plus(), m = field.phi_minus();
  for (auto& v : p) v *= d[0];
  for (auto& v : m) v *= d[1];
  return {field.lattice(), field.params(), std::move(p), std::move(m), field.t0()};
}

LatticeField gauge_transform_cos_sin(const LatticeField& field, double theta, double a) {
  const LatticeField c = apply_C(field);
  const cplx pre = std::polar(1.0, -a * theta);
  return field * (pre * std::cos(theta)) + c * (pre * -I * std::sin(theta));
}

double generator_check(const LatticeField& field, double a, double dtheta) {
  if (!(std::abs(dtheta) <= 1e-4) || dtheta == 0.0)
    throw PreconditionError("generator_check: dtheta must satisfy 0 < |dtheta| <= 1e-4");
  const double t = field.t0();
  const CGrid psi = field.evaluate(t).psi;
  const CGrid moved = gauge_transform(field, dtheta, a).evaluate(t).psi;
  const CGrid cpsi = apply_C(field).evaluate(t).psi;
  double dev = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const cplx fd = (moved[i] - psi[i]) / dtheta;
    const cplx gen = -I * (cpsi[i] + a * psi[i]);
    dev = std::max(dev, std::abs(fd - gen));
  }
  return dev;
}

double charge_phase_space(const LatticeField& field, double t) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  const double M = P.mass(), a = P.a();
  const double lambda = 1.0 / M;
  const FieldSamples s = field.evaluate(t);
  CGrid pi(s.psidot.size()), pis(s.psidot.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    pi[i] = 0.5 * lambda * std::conj(s.psidot[i]);
    pis[i] = std::conj(pi[i]);
  }
  const CGrid dpsi = apply_D_power(s.psi, 0.5, L, M);
  const CGrid dpis = apply_D_power(pis, -0.5, L, M);
  cplx total{};
  for (std::size_t i = 0; i < pi.size(); ++i) {
    total += std::conj(s.psi[i]) * dpsi[i] + 4.0 / (lambda * lambda) * pi[i] * dpis[i] +
             2.0 * I / lambda * a * (std::conj(s.psi[i]) * std::conj(pi[i]) - s.psi[i] * pi[i]);
  }
  return (P.kappa() / (2.0 * M) * total * L.cell_volume()).real();
}

GaugeParameter parse_gauge_parameter(const std::string& text) {
  const std::string tag = "irrational:";
  if (text.rfind(tag, 0) == 0) {
    const std::string rest = text.substr(tag.size());
    const auto eq = rest.find('=');
    if (eq == std::string::npos || eq == 0) throw PreconditionError("malformed irrational tag: " + text);
    std::size_t used = 0;
    const double v = std::stod(rest.substr(eq + 1), &used);
    if (used != rest.size() - eq - 1) throw PreconditionError("malformed irrational tag: " + text);
    return IrrationalTag{rest.substr(0, eq), v};
  }
  long long p = 0, q = 1;
  char slash = 0;
  std::istringstream in(text);
  if (!(in >> p)) throw PreconditionError("malformed rational: " + text);
  if (in >> slash) {
    if (slash != '/' || !(in >> q)) throw PreconditionError("malformed rational: " + text);
  }
  std::string trailing;
  if (in >> trailing) throw PreconditionError("malformed rational: " + text);
  return Rational{p, q};
}

GroupClass group_classify(const GaugeParameter& param) {
  if (const auto* r = std::get_if<Rational>(&param)) {
    long long m = r->p, n = r->q;
    if (n == 0) throw PreconditionError("group_classify: zero denominator");
    if (n < 0) {
      m = -m;
      n = -n;
    }
    if (std::gcd(m, n) != 1) throw PreconditionError("group_classify: rational not in lowest terms");
    if (!(std::abs(m) < n)) throw PreconditionError("group_classify: a must lie in (-1, 1)");
    const double a = double(m) / double(n);
    // (a +- 1) theta in 2 pi Z  <=>  theta in (2 pi n / gcd(m+n, m-n)) Z.
    const long long g = std::gcd(m + n, m - n);
    const long long half_turns = 2 * n / g;
    const double period = kPi * double(half_turns);
    double worst = 0.0;
    for (double theta0 : {0.0, 0.3, 1.7, -2.2}) {
      const auto x = GaugeElement{theta0, a}.diagonal();
      const auto y = GaugeElement{theta0 + period, a}.diagonal();
      worst = std::max({worst, std::abs(x[0] - y[0]), std::abs(x[1] - y[1])});
    }
    if (worst > 1e-12) throw NumericalError("group_classify: period check failed");
    // The identity can only recur at multiples of pi (the ratio of the two phases is e^{2i theta}).
    for (long long j = 1; j < half_turns; ++j)
      if (identity_distance(a, kPi * double(j)) <= 1e-12)
        throw NumericalError("group_classify: a smaller period exists");
    return {GroupClass::Kind::U1, period, worst};
  }
  const auto& tag = std::get<IrrationalTag>(param);
  if (!(tag.approx > -1.0 && tag.approx < 1.0)) throw PreconditionError("group_classify: a must lie in (-1, 1)");
  double closest = 2.0;
  for (int j = 1; j <= 10000; ++j) closest = std::min(closest, identity_distance(tag.approx, 2.0 * kPi * j));
  if (!(closest > 1e-6)) throw NumericalError("group_classify: sampled group element returned to identity");
  return {GroupClass::Kind::Rplus, std::nullopt, closest};
}

} // namespace kgfield
