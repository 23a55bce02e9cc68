#include "kgfield/amplitude.hpp"

#include <algorithm>
#include <cmath>

#include "kgfield/quadrature.hpp"

namespace kgfield {
namespace {

Matrix4 identity4() {
  Matrix4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

Matrix4 multiply(const Matrix4& a, const Matrix4& b) {
  Matrix4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

double on_shell(const Vec3& k, double M) {
  return std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + M * M);
}

// Tensor-product rule over [c - R, c + R]^d.
template <class Fn>
void for_each_node(int dim, int order, const Vec3& c, double R, Fn&& fn) {
  std::array<GaussRule, 3> rules;
  for (int ax = 0; ax < dim; ++ax) rules[ax] = gauss_legendre(order, c[ax] - R, c[ax] + R);
  const int n1 = dim > 1 ? order : 1;
  const int n2 = dim > 2 ? order : 1;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < n1; ++j)
      for (int l = 0; l < n2; ++l) {
        Vec3 k{rules[0].nodes[i], dim > 1 ? rules[1].nodes[j] : 0.0, dim > 2 ? rules[2].nodes[l] : 0.0};
        double w = rules[0].weights[i];
        if (dim > 1) w *= rules[1].weights[j];
        if (dim > 2) w *= rules[2].weights[l];
        fn(k, w);
      }
}

struct Box {
  Vec3 center;
  double radius;
};

Box union_box(const Box& a, const Box& b, int dim) {
  Vec3 lo{}, hi{};
  for (int ax = 0; ax < dim; ++ax) {
    lo[ax] = std::min(a.center[ax] - a.radius, b.center[ax] - b.radius);
    hi[ax] = std::max(a.center[ax] + a.radius, b.center[ax] + b.radius);
  }
  Box r{{0.0, 0.0, 0.0}, 0.0};
  for (int ax = 0; ax < dim; ++ax) {
    r.center[ax] = 0.5 * (lo[ax] + hi[ax]);
    r.radius = std::max(r.radius, 0.5 * (hi[ax] - lo[ax]));
  }
  return r;
}

double inv_measure(int dim) { return 1.0 / std::pow(2.0 * kPi, dim); }

} // namespace

cplx GaussianPoly::operator()(const Vec3& k) const {
  const Vec3 q{k[0] - center[0], k[1] - center[1], k[2] - center[2]};
  const double r2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
  cplx p = terms.empty() ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
  for (const auto& t : terms)
    p += t.coeff * std::pow(q[0], t.power[0]) * std::pow(q[1], t.power[1]) * std::pow(q[2], t.power[2]);
  return scale * std::exp(-0.5 * r2 / (width * width)) * p;
}

double GaussianPoly::support_radius() const {
  int degree = 0;
  for (const auto& t : terms) degree = std::max(degree, t.power[0] + t.power[1] + t.power[2]);
  return width * (9.0 + 0.5 * degree);
}

AmplitudeField::AmplitudeField(ModelParams params, int dim, std::optional<GaussianPoly> plus,
                               std::optional<GaussianPoly> minus, int order)
    : params_(params), dim_(dim), plus_(std::move(plus)), minus_(std::move(minus)),
      order_(order), to_rest_(identity4()) {
  if (dim < 1 || dim > 3) throw PreconditionError("AmplitudeField: dimension must be 1, 2 or 3");
  if (order < 2) throw PreconditionError("AmplitudeField: quadrature order must be >= 2");
  if (!plus_ && !minus_) throw PreconditionError("AmplitudeField: at least one sector required");
  for (const auto* g : {&plus_, &minus_})
    if (*g && !((*g)->width > 0.0)) throw PreconditionError("AmplitudeField: width must be positive");
}

AmplitudeField AmplitudeField::with_order(int order) const {
  if (order < 2) throw PreconditionError("AmplitudeField: quadrature order must be >= 2");
  AmplitudeField f = *this;
  f.order_ = order;
  return f;
}

AmplitudeField AmplitudeField::with_params(const ModelParams& params) const {
  AmplitudeField f = *this;
  f.params_ = params;
  return f;
}

AmplitudeField AmplitudeField::with_radius_scale(double s) const {
  AmplitudeField f = *this;
  f.radius_scale_ *= s;
  return f;
}

bool AmplitudeField::has_sector(int epsilon) const {
  return epsilon > 0 ? plus_.has_value() : minus_.has_value();
}

cplx AmplitudeField::amplitude(int epsilon, const Vec3& kp) const {
  const auto& g = epsilon > 0 ? plus_ : minus_;
  if (!g) return {0.0, 0.0};
  const double M = params_.mass();
  const double wp = on_shell(kp, M);
  const FourVector p = lorentz_apply(to_rest_, {epsilon * wp, kp[0], kp[1], kp[2]});
  const Vec3 k{p[1], p[2], p[3]};
  const double w = epsilon * p[0];
  return (w / wp) * (*g)(k);
}

Vec3 AmplitudeField::box_center(int epsilon) const {
  const auto& g = epsilon > 0 ? plus_ : minus_;
  if (!g) return {0.0, 0.0, 0.0};
  Matrix4 to_frame = identity4();
  // to_rest_ is a product of boosts; invert by transposing the metric action.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) to_frame[i][j] = ((i == 0) != (j == 0) ? -1.0 : 1.0) * to_rest_[j][i];
  const double w = on_shell(g->center, params_.mass());
  const FourVector p = lorentz_apply(to_frame, {epsilon * w, g->center[0], g->center[1], g->center[2]});
  return {p[1], p[2], p[3]};
}

double AmplitudeField::box_radius(int epsilon) const {
  const auto& g = epsilon > 0 ? plus_ : minus_;
  if (!g) return 0.0;
  return g->support_radius() * radius_growth_ * radius_scale_;
}

cplx AmplitudeField::psi(const Event& x) const {
  cplx s{};
  for (int eps : {+1, -1}) {
    if (!has_sector(eps)) continue;
    for_each_node(dim_, order_, box_center(eps), box_radius(eps), [&](const Vec3& k, double w) {
      const FourVector p{eps * on_shell(k, params_.mass()), k[0], k[1], k[2]};
      s += w * amplitude(eps, k) * std::polar(1.0, minkowski_dot(p, x));
    });
  }
  return s * inv_measure(dim_);
}

AmplitudeField AmplitudeField::boosted(const Boost& boost) const {
  for (int ax = dim_; ax < 3; ++ax)
    if (boost.beta()[ax] != 0.0) throw PreconditionError("AmplitudeField: velocity exceeds dimension");
  AmplitudeField f = *this;
  f.to_rest_ = multiply(to_rest_, boost.inverse_matrix());
  f.radius_growth_ = radius_growth_ * boost.gamma() * (1.0 + boost.speed());
  return f;
}

cplx continuum_inner_a(const AmplitudeField& f1, const AmplitudeField& f2) {
  if (!(f1.params() == f2.params()) || f1.dim() != f2.dim())
    throw PreconditionError("continuum_inner_a: parameter mismatch");
  const ModelParams& P = f1.params();
  const double M = P.mass();
  const int order = std::max(f1.order(), f2.order());
  cplx total{};
  for (int eps : {+1, -1}) {
    if (!f1.has_sector(eps) || !f2.has_sector(eps)) continue;
    const Box b = union_box({f1.box_center(eps), f1.box_radius(eps)},
                            {f2.box_center(eps), f2.box_radius(eps)}, f1.dim());
    const double weight = eps > 0 ? 1.0 + P.a() : 1.0 - P.a();
    cplx s{};
    for_each_node(f1.dim(), order, b.center, b.radius, [&](const Vec3& k, double w) {
      s += w * (on_shell(k, M) / M) * std::conj(f1.amplitude(eps, k)) * f2.amplitude(eps, k);
    });
    total += weight * s;
  }
  return P.kappa() * total * inv_measure(f1.dim());
}

double amplitude_mass(const AmplitudeField& f) {
  double total = 0.0;
  for (int eps : {+1, -1}) {
    if (!f.has_sector(eps)) continue;
    for_each_node(f.dim(), f.order(), f.box_center(eps), f.box_radius(eps),
                  [&](const Vec3& k, double w) { total += w * std::norm(f.amplitude(eps, k)); });
  }
  return total * inv_measure(f.dim());
}

double truncation_check(const AmplitudeField& f) {
  // Judge truncation at an order high enough that the rule itself is converged.
  const int base = std::max(f.order(), f.dim() == 1 ? 128 : f.dim() == 2 ? 96 : 48);
  const double m1 = amplitude_mass(f.with_order(base));
  const double m2 = amplitude_mass(f.with_radius_scale(2.0).with_order(2 * base));
  const double rel = std::abs(m2 - m1) / std::max(std::abs(m2), 1e-300);
  if (rel > 1e-10) throw NumericalError("quadrature truncation check failed: box misses amplitude mass");
  return rel;
}

InvarianceResult invariance_check(const AmplitudeField& f1, const AmplitudeField& f2,
                                  const Boost& boost) {
  if (boost.mode() != Boost::Mode::exact)
    throw PreconditionError("invariance_check: exact boost required");
  truncation_check(f1);
  truncation_check(f2);
  const cplx before = continuum_inner_a(f1, f2);
  const AmplitudeField g1 = f1.boosted(boost), g2 = f2.boosted(boost);
  const cplx after = continuum_inner_a(g1, g2);
  const double rel = std::abs(after - before) / std::max(std::abs(before), 1e-300);
  return {before, after, rel};
}

} // namespace kgfield
