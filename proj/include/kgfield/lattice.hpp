#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "kgfield/core.hpp"

namespace kgfield {

/// Periodic box [-L/2, L/2)^d sampled at N points per axis, together with
/// its momentum lattice k = 2 pi n / L, n in [-N/2, N/2).
///
/// Grids are stored row-major with axis 0 slowest. Mode arrays use FFT
/// ordering: storage index i holds mode number n = i for i < N/2 and
/// n = i - N otherwise. Unused axes (beyond dim) have one point.
class Lattice {
public:
  Lattice(int dim, const std::array<double, 3>& length,
          const std::array<int, 3>& points);

  /// Same edge length and point count on every used axis.
  static Lattice cube(int dim, double length, int points);

  int dim() const { return dim_; }
  double length(int axis) const { return length_[axis]; }
  int points(int axis) const { return points_[axis]; }
  const std::array<int, 3>& shape() const { return points_; }
  std::size_t size() const { return size_; }
  double spacing(int axis) const { return length_[axis] / points_[axis]; }
  double cell_volume() const;
  double volume() const;

  int mode_number(int axis, int index) const;
  double wavenumber(int axis, int index) const;

  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;

  Vec3 wavevector(std::size_t flat) const;
  /// |k|^2 for every stored mode (cached).
  const std::vector<double>& k_squared() const { return *k2_; }
  /// Node coordinate, each component in [-L/2, L/2).
  Vec3 position(std::size_t flat) const;
  /// Storage index of the mode with mode numbers -n (mod N).
  std::size_t negated(std::size_t flat) const;
  /// Index of the node nearest to a point; throws if the point is not on a node.
  std::size_t node_at(const Vec3& point, double tol = 1e-9) const;

  /// Lattice over the same box with factor times as many points per used axis.
  Lattice refined(int factor) const;

  bool operator==(const Lattice& other) const {
    return dim_ == other.dim_ && length_ == other.length_ &&
           points_ == other.points_;
  }

private:
  int dim_;
  std::array<double, 3> length_;
  std::array<int, 3> points_;
  std::size_t size_;
  std::shared_ptr<const std::vector<double>> k2_;
};

/// On-shell frequencies omega_k = sqrt(k^2 + M^2) in mode order.
std::vector<double> frequencies(const Lattice& lattice, double mass);

} // namespace kgfield
