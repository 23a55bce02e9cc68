#include "kgfield/em.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>

namespace kgfield {
namespace {

const cplx I(0.0, 1.0);

CGrid grid_derivative(const CGrid& v, const Lattice& L, int axis) {
  return to_grid(derivative_coeffs(to_coeffs(v, L), L, axis), L);
}

Eigen::VectorXcd to_vec(const CGrid& g) {
  return Eigen::Map<const Eigen::VectorXcd>(g.data(), static_cast<Eigen::Index>(g.size()));
}

CGrid to_grid_vec(const Eigen::VectorXcd& v) { return CGrid(v.data(), v.data() + v.size()); }

} // namespace

EMBackground EMBackground::zero(const Lattice& lattice, double q) {
  return {lattice, std::vector<RGrid>(lattice.dim(), RGrid(lattice.size(), 0.0)),
          RGrid(lattice.size(), 0.0), q};
}

EMBackground EMBackground::constant(const Lattice& lattice, double q, const Vec3& A0) {
  EMBackground bg = zero(lattice, q);
  for (int ax = 0; ax < lattice.dim(); ++ax) std::fill(bg.A[ax].begin(), bg.A[ax].end(), A0[ax]);
  return bg;
}

EMBackground EMBackground::periodic_field(const Lattice& lattice, double q, double B) {
  EMBackground bg = zero(lattice, q);
  if (lattice.dim() < 2) throw PreconditionError("periodic_field needs at least 2 dimensions");
  const double L = lattice.length(1);
  for (std::size_t i = 0; i < lattice.size(); ++i)
    bg.A[0][i] = -B * L / (2.0 * kPi) * std::sin(2.0 * kPi * lattice.position(i)[1] / L);
  return bg;
}

EMBackground EMBackground::gauge_shifted(const RGrid& lambda) const {
  if (lambda.size() != lattice.size()) throw PreconditionError("gauge_shifted: grid size mismatch");
  EMBackground bg = *this;
  const CGrid l(lambda.begin(), lambda.end());
  for (int ax = 0; ax < lattice.dim(); ++ax) {
    const CGrid d = grid_derivative(l, lattice, ax);
    for (std::size_t i = 0; i < d.size(); ++i) bg.A[ax][i] += d[i].real();
  }
  return bg;
}

void EMBackground::validate() const {
  if (lattice.dim() == 3) throw PreconditionError("dense D_q in 3 dimensions exceeds the supported scale; use d = 2");
  if (lattice.dim() != 2) throw PreconditionError("the magnetic case requires d = 2");
  for (int ax = 0; ax < 2; ++ax)
    if (lattice.points(ax) > 32) throw PreconditionError("dense D_q supports at most 32 points per axis");
  if (A.size() != 2) throw PreconditionError("vector potential must have 2 components");
  for (const auto& a : A)
    if (a.size() != lattice.size()) throw PreconditionError("vector potential grid size mismatch");
  if (phi.size() != lattice.size()) throw PreconditionError("scalar potential grid size mismatch");
  for (double p : phi)
    if (p != 0.0) throw PreconditionError("stationary-magnetic mode requires phi == 0");
  if (!std::isfinite(q)) throw PreconditionError("coupling must be finite");
}

DenseOperator::DenseOperator(Lattice lattice, Eigen::MatrixXcd matrix, double hermiticity_residual)
    : lattice_(std::move(lattice)), matrix_(std::move(matrix)), herm_(hermiticity_residual) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

Eigen::MatrixXcd DenseOperator::function(const std::function<double(double)>& f) const {
  Eigen::VectorXcd d(evals_.size());
  for (Eigen::Index i = 0; i < evals_.size(); ++i) d[i] = f(evals_[i]);
  return evecs_ * d.asDiagonal() * evecs_.adjoint();
}

CGrid DenseOperator::apply(const CGrid& v) const {
  if (v.size() != lattice_.size()) throw PreconditionError("DenseOperator::apply: size mismatch");
  return to_grid_vec(matrix_ * to_vec(v));
}

CGrid DenseOperator::apply_function(const std::function<double(double)>& f, const CGrid& v) const {
  if (v.size() != lattice_.size()) throw PreconditionError("DenseOperator::apply_function: size mismatch");
  Eigen::VectorXcd c = evecs_.adjoint() * to_vec(v);
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= f(evals_[i]);
  return to_grid_vec(evecs_ * c);
}

DenseOperator build_Dq(const EMBackground& bg, const ModelParams& params, int workers) {
  bg.validate();
  const Lattice& L = bg.lattice;
  const std::size_t n = L.size();
  const double M2 = params.mass() * params.mass();
  Eigen::MatrixXcd H(n, n);

  auto covariant = [&](const CGrid& v, int ax) {
    CGrid d = grid_derivative(v, L, ax);
    for (std::size_t i = 0; i < n; ++i) d[i] -= I * bg.q * bg.A[ax][i] * v[i];
    return d;
  };
  auto column = [&](std::size_t j) {
    CGrid e(n, 0.0);
    e[j] = 1.0;
    CGrid out(n, 0.0);
    out[j] = M2;
    for (int ax = 0; ax < L.dim(); ++ax) {
      const CGrid b = covariant(covariant(e, ax), ax);
      for (std::size_t i = 0; i < n; ++i) out[i] -= b[i];
    }
    for (std::size_t i = 0; i < n; ++i) H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = out[i];
  };

  unsigned nw = workers > 0 ? static_cast<unsigned>(workers) : std::max(1u, std::thread::hardware_concurrency());
  nw = std::min<unsigned>(nw, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < nw; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t j = w; j < n; j += nw) column(j);
    });
  for (auto& t : pool) t.join();

  const double scale = H.cwiseAbs().maxCoeff();
  const double herm = (H - H.adjoint()).cwiseAbs().maxCoeff() / scale;
  if (herm > 1e-10) throw NumericalError("D_q Hermiticity residual " + std::to_string(herm) + " exceeds 1e-10");
  Eigen::MatrixXcd Hs = 0.5 * (H + H.adjoint());
  DenseOperator op(L, std::move(Hs), herm);
  if (op.eigenvalues().minCoeff() < 0.0) throw NumericalError("D_q has a negative eigenvalue");
  return op;
}

cplx em_inner_a(const DenseOperator& op, const ModelParams& params, const FieldSamples& f1,
                const FieldSamples& f2) {
  const Lattice& L = op.lattice();
  const double M = params.mass();
  const CGrid dpsi = op.apply_function([](double l) { return std::sqrt(l); }, f2.psi);
  const CGrid ddot = op.apply_function([](double l) { return 1.0 / std::sqrt(l); }, f2.psidot);
  cplx sym = 0.0, skew = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    sym += std::conj(f1.psi[i]) * dpsi[i] + std::conj(f1.psidot[i]) * ddot[i];
    skew += std::conj(f1.psi[i]) * f2.psidot[i] - std::conj(f1.psidot[i]) * f2.psi[i];
  }
  return params.kappa() / (2.0 * M) * L.cell_volume() * (sym + I * params.a() * skew);
}

EMEvolution em_inner_and_evolve(const CGrid& psi0, const CGrid& psidot0, const DenseOperator& op,
                                const ModelParams& params, double t) {
  const std::size_t n = op.lattice().size();
  if (psi0.size() != n || psidot0.size() != n)
    throw PreconditionError("em_inner_and_evolve: grid size mismatch");
  const auto& V = op.eigenvectors();
  const auto& lam = op.eigenvalues();
  const Eigen::VectorXcd c = V.adjoint() * to_vec(psi0);
  const Eigen::VectorXcd d = V.adjoint() * to_vec(psidot0);
  Eigen::VectorXcd p(c.size()), pd(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double w = std::sqrt(lam[i]);
    const double cs = std::cos(w * t), sn = std::sin(w * t);
    p[i] = c[i] * cs + d[i] * sn / w;
    pd[i] = -c[i] * w * sn + d[i] * cs;
  }
  EMEvolution out{{to_grid_vec(V * p), to_grid_vec(V * pd)}, 0.0};
  out.inner = em_inner_a(op, params, out.samples, out.samples);
  return out;
}

Jet Jet::variable(double value, int index) {
  Jet j(value);
  j.g[index] = 1.0;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.v + b.v);
  for (int i = 0; i < 4; ++i) {
    r.g[i] = a.g[i] + b.g[i];
    for (int k = 0; k < 4; ++k) r.h[i][k] = a.h[i][k] + b.h[i][k];
  }
  return r;
}

Jet operator-(const Jet& a) {
  Jet r(-a.v);
  for (int i = 0; i < 4; ++i) {
    r.g[i] = -a.g[i];
    for (int k = 0; k < 4; ++k) r.h[i][k] = -a.h[i][k];
  }
  return r;
}

Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.v * b.v);
  for (int i = 0; i < 4; ++i) {
    r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int k = 0; k < 4; ++k)
      r.h[i][k] = a.h[i][k] * b.v + a.v * b.h[i][k] + a.g[i] * b.g[k] + a.g[k] * b.g[i];
  }
  return r;
}

namespace {
Jet chain(const Jet& a, cplx f, cplx f1, cplx f2) {
  Jet r(f);
  for (int i = 0; i < 4; ++i) {
    r.g[i] = f1 * a.g[i];
    for (int k = 0; k < 4; ++k) r.h[i][k] = f1 * a.h[i][k] + f2 * a.g[i] * a.g[k];
  }
  return r;
}
} // namespace

Jet operator/(const Jet& a, const Jet& b) {
  const cplx inv = 1.0 / b.v;
  return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet exp(const Jet& a) {
  const cplx e = std::exp(a.v);
  return chain(a, e, e, e);
}

Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }

Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }

GaugeResidual em_gauge_residual(const EMProfile& prof, const JetFunction& psi_fn,
                                const std::vector<Event>& events) {
  if (prof.dim < 1 || prof.dim > 3) throw PreconditionError("em_gauge_residual: dim must be 1..3");
  if (!prof.phi || !prof.Phi || !psi_fn) throw PreconditionError("em_gauge_residual: missing profile function");
  const double q = prof.q, M2 = prof.mass * prof.mass;
  GaugeResidual r{0.0, 0.0, 0.0, 0.0};
  for (const Event& ev : events) {
    JetEvent x;
    for (int i = 0; i < 4; ++i) x[i] = Jet::variable(ev[i], i);
    const Jet psi = psi_fn(x);
    const Jet phi = prof.phi(x);
    const Jet Phi = prof.Phi(x);
    std::array<Jet, 3> A;
    for (int ax = 0; ax < 3; ++ax) A[ax] = (ax < prof.dim && prof.A[ax]) ? prof.A[ax](x) : Jet(0.0);
    const Jet u = exp(Jet(I * q) * Phi);
    const Jet chi = u * psi;

    auto check = [](cplx v) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalError("em_gauge_residual: non-finite manufactured value");
    };
    check(psi.v);
    check(chi.h[0][0]);
    check(phi.v);

    // -(grad - iqA)^2 f + M^2 f for a jet f and potential a_i (with divergence div).
    auto covariant_op = [&](const Jet& f, const std::array<cplx, 3>& a, cplx div) {
      cplx s = M2 * f.v;
      for (int ax = 0; ax < prof.dim; ++ax) {
        const int i = ax + 1;
        s -= f.h[i][i] - 2.0 * I * q * a[ax] * f.g[i] - q * q * a[ax] * a[ax] * f.v;
      }
      s -= -I * q * div * f.v;
      return s;
    };

    std::array<cplx, 3> a{}, at{};
    cplx div = 0.0, divt = 0.0;
    for (int ax = 0; ax < prof.dim; ++ax) {
      const int i = ax + 1;
      a[ax] = A[ax].v;
      div += A[ax].g[i];
      at[ax] = A[ax].v + Phi.g[i];
      divt += A[ax].g[i] + Phi.h[i][i];
    }

    const cplx phidot = phi.g[0];
    const cplx R = psi.h[0][0] + 2.0 * I * q * phi.v * psi.g[0] + covariant_op(psi, a, div) +
                   I * q * phidot * psi.v - q * q * phi.v * phi.v * psi.v;
    const cplx lhs = chi.h[0][0] + covariant_op(chi, at, divt);
    const double scale = std::max({1.0, std::abs(chi.h[0][0]), std::abs(u.v * R), std::abs(psi.h[0][0])});

    r.transformed = std::max(r.transformed, std::abs(lhs - u.v * R) / scale);
    r.untransformed = std::max(r.untransformed, std::abs(R));
    r.transformed_equation = std::max(r.transformed_equation, std::abs(lhs));
    r.antiderivative = std::max(r.antiderivative, std::abs(Phi.g[0] - phi.v));
  }
  return r;
}

} // namespace kgfield
