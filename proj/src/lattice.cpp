#include "kgfield/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kgfield {

ModelParams::ModelParams(double mass, double kappa, double a)
    : mass_(mass), kappa_(kappa), a_(a) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw PreconditionError("ModelParams: mass must be positive and finite");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw PreconditionError("ModelParams: kappa must be positive and finite");
  if (!(a > -1.0 && a < 1.0))
    throw PreconditionError("ModelParams: a must lie in the open interval (-1, 1)");
}

double max_abs(const CGrid& g) {
  double m = 0.0;
  for (const auto& v : g) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const RGrid& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const CGrid& a, const CGrid& b) {
  if (a.size() != b.size()) throw PreconditionError("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const RGrid& a, const RGrid& b) {
  if (a.size() != b.size()) throw PreconditionError("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Lattice::Lattice(int dim, const std::array<double, 3>& length,
                 const std::array<int, 3>& points)
    : dim_(dim), length_(length), points_(points) {
  if (dim < 1 || dim > 3) throw PreconditionError("Lattice: dimension must be 1, 2 or 3");
  for (int ax = 0; ax < 3; ++ax) {
    if (ax < dim) {
      if (!(length[ax] > 0.0) || !std::isfinite(length[ax]))
        throw PreconditionError("Lattice: box lengths must be positive");
      if (points[ax] < 4 || points[ax] % 2 != 0)
        throw PreconditionError("Lattice: point counts must be even and >= 4");
    } else {
      length_[ax] = 1.0;
      points_[ax] = 1;
    }
  }
  size_ = static_cast<std::size_t>(points_[0]) * points_[1] * points_[2];

  auto k2 = std::make_shared<std::vector<double>>(size_);
  for (std::size_t f = 0; f < size_; ++f) {
    const Vec3 k = wavevector(f);
    (*k2)[f] = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  }
  k2_ = std::move(k2);
}

Lattice Lattice::cube(int dim, double length, int points) {
  return Lattice(dim, {length, length, length}, {points, points, points});
}

double Lattice::cell_volume() const {
  double v = 1.0;
  for (int ax = 0; ax < dim_; ++ax) v *= spacing(ax);
  return v;
}

double Lattice::volume() const {
  double v = 1.0;
  for (int ax = 0; ax < dim_; ++ax) v *= length_[ax];
  return v;
}

int Lattice::mode_number(int axis, int index) const {
  const int n = points_[axis];
  if (n == 1) return 0;
  return index < n / 2 ? index : index - n;
}

double Lattice::wavenumber(int axis, int index) const {
  if (axis >= dim_) return 0.0;
  return 2.0 * kPi * mode_number(axis, index) / length_[axis];
}

std::array<int, 3> Lattice::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{};
  idx[2] = static_cast<int>(flat % points_[2]);
  flat /= points_[2];
  idx[1] = static_cast<int>(flat % points_[1]);
  idx[0] = static_cast<int>(flat / points_[1]);
  return idx;
}

std::size_t Lattice::flatten(const std::array<int, 3>& idx) const {
  return (static_cast<std::size_t>(idx[0]) * points_[1] + idx[1]) * points_[2] + idx[2];
}

Vec3 Lattice::wavevector(std::size_t flat) const {
  const auto idx = unflatten(flat);
  return {wavenumber(0, idx[0]), wavenumber(1, idx[1]), wavenumber(2, idx[2])};
}

Vec3 Lattice::position(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Vec3 x{0.0, 0.0, 0.0};
  for (int ax = 0; ax < dim_; ++ax) x[ax] = -0.5 * length_[ax] + idx[ax] * spacing(ax);
  return x;
}

std::size_t Lattice::negated(std::size_t flat) const {
  auto idx = unflatten(flat);
  for (int ax = 0; ax < 3; ++ax) idx[ax] = (points_[ax] - idx[ax]) % points_[ax];
  return flatten(idx);
}

std::size_t Lattice::node_at(const Vec3& point, double tol) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int ax = 0; ax < dim_; ++ax) {
    const double s = (point[ax] + 0.5 * length_[ax]) / spacing(ax);
    const double r = std::round(s);
    if (std::abs(s - r) > tol || r < 0 || r >= points_[ax]) {
      std::ostringstream msg;
      msg << "point is not a lattice node (axis " << ax << ", coordinate " << point[ax] << ")";
      throw PreconditionError(msg.str());
    }
    idx[ax] = static_cast<int>(r);
  }
  return flatten(idx);
}

Lattice Lattice::refined(int factor) const {
  std::array<int, 3> pts = points_;
  for (int ax = 0; ax < dim_; ++ax) pts[ax] *= factor;
  return Lattice(dim_, length_, pts);
}

std::vector<double> frequencies(const Lattice& lattice, double mass) {
  const auto& k2 = lattice.k_squared();
  std::vector<double> w(k2.size());
  const double m2 = mass * mass;
  for (std::size_t i = 0; i < k2.size(); ++i) w[i] = std::sqrt(k2[i] + m2);
  return w;
}

} // namespace kgfield
