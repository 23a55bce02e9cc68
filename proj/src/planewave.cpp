#include "kgfield/planewave.hpp"

#include <cmath>

namespace kgfield {
namespace {

using CVec4 = std::array<cplx, 4>;

cplx mdot(const FourVector& p, const CVec4& t) {
  return -p[0] * t[0] + p[1] * t[1] + p[2] * t[2] + p[3] * t[3];
}

FourVector diff(const FourVector& a, const FourVector& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

// Bilinear forms sum_{m,n} T^mu_{mn} conj(e_m) e_n with e_m = e^{i p_m.x}.
struct Bilinear {
  const PlaneWaveField& f;
  const Event& x;
  std::vector<cplx> e;

  Bilinear(const PlaneWaveField& field, const Event& ev) : f(field), x(ev) {
    for (std::size_t i = 0; i < f.modes().size(); ++i) e.push_back(f.phase(i, x));
  }

  template <class Fn>
  void each(Fn&& fn) const {
    const std::size_t n = e.size();
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t k = 0; k < n; ++k) fn(m, k, std::conj(e[m]) * e[k]);
  }
};

// Probability-current kernel T^mu_{mn} for calJ_a = (kappa/2M) Im sum T conj(e_m) e_n.
CVec4 calj_kernel(const PlaneWaveField& f, double a, std::size_t m, std::size_t n) {
  const auto& mm = f.modes()[m];
  const auto& mn = f.modes()[n];
  const double wm = f.omega(m), wn = f.omega(n);
  const cplx alpha_m = std::sqrt(wm) * mm.coeff;
  const cplx pi_m = mm.coeff / std::sqrt(wm);
  const cplx gamma_m = double(mm.epsilon) * pi_m;
  const cplx alpha_n = std::sqrt(wn) * mn.coeff;
  const cplx beta_n = double(mn.epsilon) * alpha_n;
  const cplx pi_n = mn.coeff / std::sqrt(wn);
  const cplx gamma_n = double(mn.epsilon) * pi_n;
  const FourVector pm = f.momentum(m), pn = f.momentum(n);
  const cplx I(0.0, 1.0);
  CVec4 t{};
  for (int mu = 0; mu < 4; ++mu) {
    t[mu] = std::conj(alpha_m) * I * pn[mu] * gamma_n +
            I * pm[mu] * std::conj(pi_m) * beta_n +
            a * (std::conj(alpha_m) * I * pn[mu] * pi_n + I * pm[mu] * std::conj(gamma_m) * beta_n);
  }
  return t;
}

CVec4 ja_kernel(const PlaneWaveField& f, double a, std::size_t m, std::size_t n) {
  const auto& mm = f.modes()[m];
  const auto& mn = f.modes()[n];
  const FourVector pm = f.momentum(m), pn = f.momentum(n);
  const cplx tilde_n = (double(mn.epsilon) + a) * mn.coeff;
  CVec4 s{};
  for (int mu = 0; mu < 4; ++mu)
    s[mu] = cplx(0.0, pn[mu] + pm[mu]) * std::conj(mm.coeff) * tilde_n;
  return s;
}

} // namespace

Boost::Boost(Vec3 beta, Mode mode) : beta_(beta), mode_(mode) {
  for (double b : beta)
    if (!std::isfinite(b)) throw PreconditionError("Boost: velocity must be finite");
  const double s = speed();
  if (!(s < 1.0)) throw PreconditionError("Boost: |beta| must be < 1");
  if (mode == Mode::infinitesimal && s > 1e-3)
    throw PreconditionError("Boost: infinitesimal mode requires |beta| <= 1e-3");
}

double Boost::speed() const {
  return std::sqrt(beta_[0] * beta_[0] + beta_[1] * beta_[1] + beta_[2] * beta_[2]);
}

double Boost::gamma() const {
  const double s = speed();
  return 1.0 / std::sqrt(1.0 - s * s);
}

Matrix4 Boost::matrix() const {
  Matrix4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  if (mode_ == Mode::infinitesimal) {
    for (int i = 0; i < 3; ++i) m[0][i + 1] = m[i + 1][0] = -beta_[i];
    return m;
  }
  const double s2 = beta_[0] * beta_[0] + beta_[1] * beta_[1] + beta_[2] * beta_[2];
  const double g = gamma();
  m[0][0] = g;
  for (int i = 0; i < 3; ++i) {
    m[0][i + 1] = m[i + 1][0] = -g * beta_[i];
    for (int j = 0; j < 3; ++j)
      if (s2 > 0.0) m[i + 1][j + 1] += (g - 1.0) * beta_[i] * beta_[j] / s2;
  }
  return m;
}

Matrix4 Boost::inverse_matrix() const {
  return Boost({-beta_[0], -beta_[1], -beta_[2]}, mode_).matrix();
}

FourVector lorentz_apply(const Matrix4& m, const FourVector& v) {
  FourVector r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += m[i][j] * v[j];
  return r;
}

PlaneWaveField::PlaneWaveField(ModelParams params, int dim, std::vector<PlaneWaveMode> modes)
    : params_(params), dim_(dim), modes_(std::move(modes)) {
  if (dim < 1 || dim > 3) throw PreconditionError("PlaneWaveField: dimension must be 1, 2 or 3");
  if (modes_.empty()) throw PreconditionError("PlaneWaveField: mode list must be nonempty");
  for (const auto& m : modes_) {
    if (m.epsilon != 1 && m.epsilon != -1)
      throw PreconditionError("PlaneWaveField: epsilon must be +1 or -1");
    for (int ax = dim; ax < 3; ++ax)
      if (m.k[ax] != 0.0) throw PreconditionError("PlaneWaveField: wave vector exceeds dimension");
  }
}

double PlaneWaveField::omega(std::size_t i) const {
  const Vec3& k = modes_[i].k;
  const double M = params_.mass();
  return std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + M * M);
}

FourVector PlaneWaveField::momentum(std::size_t i) const {
  const auto& m = modes_[i];
  return {m.epsilon * omega(i), m.k[0], m.k[1], m.k[2]};
}

cplx PlaneWaveField::phase(std::size_t i, const Event& x) const {
  return std::polar(1.0, minkowski_dot(momentum(i), x));
}

cplx PlaneWaveField::psi(const Event& x) const {
  cplx s{};
  for (std::size_t i = 0; i < modes_.size(); ++i) s += modes_[i].coeff * phase(i, x);
  return s;
}

std::array<cplx, 4> PlaneWaveField::dpsi(const Event& x) const {
  std::array<cplx, 4> d{};
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const FourVector p = momentum(i);
    const cplx v = modes_[i].coeff * phase(i, x);
    d[0] += cplx(0.0, -p[0]) * v;
    for (int ax = 1; ax < 4; ++ax) d[ax] += cplx(0.0, p[ax]) * v;
  }
  return d;
}

cplx PlaneWaveField::psi_c(const Event& x) const {
  cplx s{};
  for (std::size_t i = 0; i < modes_.size(); ++i)
    s += double(modes_[i].epsilon) * modes_[i].coeff * phase(i, x);
  return s;
}

cplx PlaneWaveField::dinvsqrt_psidot(const Event& x) const {
  return cplx(0.0, -1.0) * psi_c(x);
}

PlaneWaveField boost_planewave(const PlaneWaveField& field, const Boost& boost) {
  for (int ax = field.dim(); ax < 3; ++ax)
    if (boost.beta()[ax] != 0.0) throw PreconditionError("boost_planewave: velocity exceeds dimension");
  const Matrix4 L = boost.matrix();
  std::vector<PlaneWaveMode> out;
  out.reserve(field.modes().size());
  for (std::size_t i = 0; i < field.modes().size(); ++i) {
    const FourVector p = lorentz_apply(L, field.momentum(i));
    PlaneWaveMode m = field.modes()[i];
    m.k = {p[1], p[2], p[3]};
    out.push_back(m);
  }
  return {field.params(), field.dim(), std::move(out)};
}

Event boost_event(const Boost& boost, const Event& x) { return lorentz_apply(boost.matrix(), x); }

std::array<cplx, 4> current_Ja_at(const PlaneWaveField& field, double a, const Event& x) {
  const double pref = field.params().kappa() / (2.0 * field.params().mass());
  CVec4 j{};
  Bilinear(field, x).each([&](std::size_t m, std::size_t n, cplx e) {
    const CVec4 s = ja_kernel(field, a, m, n);
    for (int mu = 0; mu < 4; ++mu) j[mu] += s[mu] * e;
  });
  for (auto& v : j) v *= cplx(0.0, -pref);
  return j;
}

cplx divergence_Ja_at(const PlaneWaveField& field, double a, const Event& x) {
  const double pref = field.params().kappa() / (2.0 * field.params().mass());
  cplx d{};
  Bilinear(field, x).each([&](std::size_t m, std::size_t n, cplx e) {
    const cplx s = mdot(diff(field.momentum(n), field.momentum(m)), ja_kernel(field, a, m, n));
    d += cplx(0.0, 1.0) * s * e;
  });
  return cplx(0.0, -pref) * d;
}

FourVector current_calJa_at(const PlaneWaveField& field, double a, const Event& x) {
  const double pref = field.params().kappa() / (2.0 * field.params().mass());
  CVec4 z{};
  Bilinear(field, x).each([&](std::size_t m, std::size_t n, cplx e) {
    const CVec4 t = calj_kernel(field, a, m, n);
    for (int mu = 0; mu < 4; ++mu) z[mu] += t[mu] * e;
  });
  FourVector j{};
  for (int mu = 0; mu < 4; ++mu) j[mu] = pref * z[mu].imag();
  return j;
}

double divergence_calJa_at(const PlaneWaveField& field, double a, const Event& x) {
  const double pref = field.params().kappa() / (2.0 * field.params().mass());
  cplx z{};
  Bilinear(field, x).each([&](std::size_t m, std::size_t n, cplx e) {
    const cplx s = mdot(diff(field.momentum(n), field.momentum(m)), calj_kernel(field, a, m, n));
    z += cplx(0.0, 1.0) * s * e;
  });
  return pref * z.imag();
}

} // namespace kgfield
