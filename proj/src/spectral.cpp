#include "kgfield/spectral.hpp"

#include <cmath>

namespace kgfield {
namespace {

// Nodes start at -L/2, so e^{ik x_j} = (-1)^n e^{2 pi i n j / N}.
void apply_parity(CGrid& coeffs, const Lattice& lattice) {
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    const auto idx = lattice.unflatten(f);
    int s = 0;
    for (int ax = 0; ax < lattice.dim(); ++ax) s += lattice.mode_number(ax, idx[ax]);
    if (s & 1) coeffs[f] = -coeffs[f];
  }
}

void check_size(const CGrid& g, const Lattice& lattice, const char* what) {
  if (g.size() != lattice.size())
    throw PreconditionError(std::string(what) + ": grid does not match lattice shape");
}

std::size_t remap(const Lattice& from, std::size_t f, const Lattice& to, bool& inside) {
  const auto idx = from.unflatten(f);
  std::array<int, 3> out{0, 0, 0};
  inside = true;
  for (int ax = 0; ax < from.dim(); ++ax) {
    const int n = from.mode_number(ax, idx[ax]);
    const int big = to.points(ax);
    if (n < -big / 2 || n >= big / 2) inside = false;
    out[ax] = ((n % big) + big) % big;
  }
  return to.flatten(out);
}

void check_same_box(const Lattice& a, const Lattice& b) {
  if (a.dim() != b.dim()) throw PreconditionError("lattices differ in dimension");
  for (int ax = 0; ax < a.dim(); ++ax)
    if (a.length(ax) != b.length(ax)) throw PreconditionError("lattices differ in box size");
}

} // namespace

CGrid to_grid(const CGrid& coeffs, const Lattice& lattice) {
  check_size(coeffs, lattice, "to_grid");
  CGrid g = coeffs;
  apply_parity(g, lattice);
  fft_backward(g, lattice.shape());
  return g;
}

CGrid to_coeffs(const CGrid& grid, const Lattice& lattice) {
  check_size(grid, lattice, "to_coeffs");
  CGrid c = grid;
  fft_forward(c, lattice.shape());
  const double inv = 1.0 / static_cast<double>(lattice.size());
  for (auto& v : c) v *= inv;
  apply_parity(c, lattice);
  return c;
}

CGrid pad_coeffs(const CGrid& coeffs, const Lattice& from, const Lattice& to) {
  check_size(coeffs, from, "pad_coeffs");
  check_same_box(from, to);
  CGrid out(to.size(), cplx{});
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    bool inside;
    const std::size_t g = remap(from, f, to, inside);
    if (!inside) throw PreconditionError("pad_coeffs: target lattice is coarser");
    out[g] = coeffs[f];
  }
  return out;
}

CGrid truncate_coeffs(const CGrid& coeffs, const Lattice& from, const Lattice& to) {
  check_size(coeffs, from, "truncate_coeffs");
  check_same_box(from, to);
  CGrid out(to.size(), cplx{});
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    bool inside;
    const std::size_t g = remap(from, f, to, inside);
    if (inside) out[g] = coeffs[f];
  }
  return out;
}

void scale_D_power(CGrid& coeffs, const Lattice& lattice, double mass, double alpha) {
  if (!std::isfinite(alpha)) throw PreconditionError("D power: exponent must be finite");
  check_size(coeffs, lattice, "scale_D_power");
  const auto& k2 = lattice.k_squared();
  const double m2 = mass * mass;
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= std::pow(k2[i] + m2, alpha);
}

CGrid apply_D_power(const CGrid& grid, double alpha, const Lattice& lattice, double mass) {
  if (!std::isfinite(alpha)) throw PreconditionError("apply_D_power: exponent must be finite");
  CGrid c = to_coeffs(grid, lattice);
  scale_D_power(c, lattice, mass, alpha);
  return to_grid(c, lattice);
}

CGrid derivative_coeffs(const CGrid& coeffs, const Lattice& lattice, int axis) {
  check_size(coeffs, lattice, "derivative_coeffs");
  CGrid out(coeffs.size());
  for (std::size_t f = 0; f < coeffs.size(); ++f)
    out[f] = cplx(0.0, lattice.wavevector(f)[axis]) * coeffs[f];
  return out;
}

} // namespace kgfield
