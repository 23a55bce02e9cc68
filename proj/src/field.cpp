#include "kgfield/field.hpp"

#include <algorithm>
#include <cmath>

namespace kgfield {
namespace {

void check_finite(const CGrid& g, const char* what) {
  for (const auto& v : g)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw PreconditionError(std::string(what) + ": non-finite value");
}

void check_finite(double t, const char* what) {
  if (!std::isfinite(t)) throw PreconditionError(std::string(what) + ": time must be finite");
}

double residual_with_scale(const LatticeField& field, double t, double scale) {
  check_finite(t, "kg_residual");
  const Lattice& lat = field.lattice();
  const auto& w = field.omega();
  const auto [p, m] = field.sector_coefficients_at(t);
  CGrid second(lat.size()), lap(lat.size()), psi(lat.size());
  const auto& k2 = lat.k_squared();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const cplx c = p[i] + m[i];
    const double ws = w[i] * scale;
    second[i] = -ws * ws * c;
    lap[i] = -k2[i] * c;
    psi[i] = c;
  }
  const CGrid g2 = to_grid(second, lat);
  const CGrid gl = to_grid(lap, lat);
  const CGrid g0 = to_grid(psi, lat);
  const double m2 = field.params().mass() * field.params().mass();
  double r = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) r = std::max(r, std::abs(g2[i] - gl[i] + m2 * g0[i]));
  return r;
}

} // namespace

LatticeField::LatticeField(Lattice lattice, ModelParams params, CGrid phi_plus,
                           CGrid phi_minus, double t0)
    : lattice_(std::move(lattice)), params_(params), plus_(std::move(phi_plus)),
      minus_(std::move(phi_minus)), t0_(t0) {
  if (plus_.size() != lattice_.size() || minus_.size() != lattice_.size())
    throw PreconditionError("LatticeField: coefficient grids do not match the lattice shape");
  check_finite(t0_, "LatticeField");
  check_finite(plus_, "LatticeField");
  check_finite(minus_, "LatticeField");
  omega_ = std::make_shared<const std::vector<double>>(frequencies(lattice_, params_.mass()));
}

LatticeField LatticeField::zero(const Lattice& lattice, const ModelParams& params, double t0) {
  return {lattice, params, CGrid(lattice.size()), CGrid(lattice.size()), t0};
}

LatticeField LatticeField::with_params(const ModelParams& params) const {
  if (params.mass() == params_.mass()) {
    LatticeField f = *this;
    f.params_ = params;
    return f;
  }
  return {lattice_, params, plus_, minus_, t0_};
}

std::pair<CGrid, CGrid> LatticeField::sector_coefficients_at(double t) const {
  check_finite(t, "evaluate");
  const double tau = t - t0_;
  const auto& w = omega();
  CGrid p(plus_.size()), m(minus_.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const cplx ph = std::polar(1.0, -w[i] * tau);
    p[i] = plus_[i] * ph;
    m[i] = minus_[i] * std::conj(ph);
  }
  return {std::move(p), std::move(m)};
}

FieldSamples LatticeField::coefficients_at(double t) const {
  auto [p, m] = sector_coefficients_at(t);
  const auto& w = omega();
  FieldSamples s{CGrid(p.size()), CGrid(p.size())};
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.psi[i] = p[i] + m[i];
    s.psidot[i] = cplx(0.0, -w[i]) * (p[i] - m[i]);
  }
  return s;
}

FieldSamples LatticeField::evaluate(double t) const {
  FieldSamples c = coefficients_at(t);
  return {to_grid(c.psi, lattice_), to_grid(c.psidot, lattice_)};
}

bool LatticeField::compatible(const LatticeField& other) const {
  return lattice_ == other.lattice_ && params_ == other.params_;
}

LatticeField LatticeField::operator+(const LatticeField& other) const {
  if (!compatible(other)) throw PreconditionError("field sum: lattice or parameter mismatch");
  const LatticeField o = other.t0_ == t0_ ? other : evolve(other, t0_ - other.t0_);
  CGrid p = plus_, m = minus_;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] += o.plus_[i];
    m[i] += o.minus_[i];
  }
  return {lattice_, params_, std::move(p), std::move(m), t0_};
}

LatticeField LatticeField::operator-(const LatticeField& other) const {
  return *this + other * cplx(-1.0, 0.0);
}

LatticeField LatticeField::operator*(cplx s) const {
  CGrid p = plus_, m = minus_;
  for (auto& v : p) v *= s;
  for (auto& v : m) v *= s;
  return {lattice_, params_, std::move(p), std::move(m), t0_};
}

double LatticeField::max_coeff_diff(const LatticeField& other) const {
  if (!(lattice_ == other.lattice_)) throw PreconditionError("max_coeff_diff: lattice mismatch");
  const LatticeField o = other.t0_ == t0_ ? other : evolve(other, t0_ - other.t0_);
  return std::max(max_abs_diff(plus_, o.plus_), max_abs_diff(minus_, o.minus_));
}

LatticeField from_initial_data(const CGrid& psi0, const CGrid& psidot0, const Lattice& lattice,
                               const ModelParams& params, double t0) {
  if (psi0.size() != lattice.size() || psidot0.size() != lattice.size())
    throw PreconditionError("from_initial_data: grids do not match the lattice shape");
  check_finite(psi0, "from_initial_data");
  check_finite(psidot0, "from_initial_data");
  const CGrid c = to_coeffs(psi0, lattice);
  const CGrid cd = to_coeffs(psidot0, lattice);
  const auto w = frequencies(lattice, params.mass());
  CGrid p(c.size()), m(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const cplx cpsi = cplx(0.0, 1.0) * cd[i] / w[i];
    p[i] = 0.5 * (c[i] + cpsi);
    m[i] = 0.5 * (c[i] - cpsi);
  }
  return {lattice, params, std::move(p), std::move(m), t0};
}

FieldSamples evaluate(const LatticeField& field, double t) { return field.evaluate(t); }

LatticeField apply_C(const LatticeField& field) {
  CGrid m = field.phi_minus();
  for (auto& v : m) v = -v;
  return {field.lattice(), field.params(), field.phi_plus(), std::move(m), field.t0()};
}

std::pair<LatticeField, LatticeField> energy_split(const LatticeField& field) {
  const CGrid zero(field.lattice().size());
  return {LatticeField(field.lattice(), field.params(), field.phi_plus(), zero, field.t0()),
          LatticeField(field.lattice(), field.params(), zero, field.phi_minus(), field.t0())};
}

LatticeField evolve(const LatticeField& field, double dt) {
  check_finite(dt, "evolve");
  if (dt == 0.0) return field;
  const double t1 = field.t0() + dt;
  auto [p, m] = field.sector_coefficients_at(t1);
  return {field.lattice(), field.params(), std::move(p), std::move(m), t1};
}

double kg_residual(const LatticeField& field, double t) { return residual_with_scale(field, t, 1.0); }

double foldy_residual(const LatticeField& field, double t) {
  const Lattice& lat = field.lattice();
  const auto [p, m] = field.sector_coefficients_at(t);
  const auto& w = field.omega();
  double r = 0.0;
  for (int eps : {+1, -1}) {
    const CGrid& c = eps > 0 ? p : m;
    CGrid lhs(c.size()), rhs(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      lhs[i] = cplx(0.0, 1.0) * cplx(0.0, -eps * w[i]) * c[i];
      rhs[i] = c[i];
    }
    const CGrid g_lhs = to_grid(lhs, lat);
    const CGrid g_rhs = apply_D_power(to_grid(rhs, lat), 0.5, lat, field.params().mass());
    for (std::size_t i = 0; i < c.size(); ++i) r = std::max(r, std::abs(g_lhs[i] - double(eps) * g_rhs[i]));
  }
  return r;
}

namespace testing {
double kg_residual_corrupted(const LatticeField& field, double t, double omega_scale) {
  return residual_with_scale(field, t, omega_scale);
}
} // namespace testing

} // namespace kgfield
