#include "kgfield/random_fields.hpp"

#include <cmath>

namespace kgfield {
namespace {

cplx gauss(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

CGrid random_coeffs(const Lattice& lattice, Rng& rng) {
  CGrid c(lattice.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (in_band(lattice, i)) c[i] = gauss(rng);
  return c;
}

} // namespace

bool in_band(const Lattice& lattice, std::size_t flat) {
  const auto idx = lattice.unflatten(flat);
  for (int ax = 0; ax < lattice.dim(); ++ax)
    if (std::abs(lattice.mode_number(ax, idx[ax])) > lattice.points(ax) / 4) return false;
  return true;
}

LatticeField random_field(const Lattice& lattice, const ModelParams& params, Rng& rng, double t0) {
  CGrid p = random_coeffs(lattice, rng);
  CGrid m = random_coeffs(lattice, rng);
  return {lattice, params, std::move(p), std::move(m), t0};
}

LatticeField random_real_field(const Lattice& lattice, const ModelParams& params, Rng& rng,
                               double t0) {
  auto real_grid = [&] {
    CGrid g = to_grid(random_coeffs(lattice, rng), lattice);
    for (auto& v : g) v = v.real();
    return g;
  };
  const CGrid psi = real_grid();
  const CGrid psidot = real_grid();
  return from_initial_data(psi, psidot, lattice, params, t0);
}

LatticeField random_sector_field(const Lattice& lattice, const ModelParams& params, Rng& rng,
                                 int epsilon, double t0) {
  CGrid c = random_coeffs(lattice, rng);
  CGrid z(lattice.size());
  if (epsilon > 0) return {lattice, params, std::move(c), std::move(z), t0};
  return {lattice, params, std::move(z), std::move(c), t0};
}

LatticeField random_localized_field(const Lattice& lattice, const ModelParams& params, Rng& rng,
                                    double sigma, double t0) {
  // Smooth random field (Gaussian spectral envelope), windowed in space, then
  // cut back to the band; the envelope keeps the cut far below round-off scale.
  double kband = 1e300;
  for (int ax = 0; ax < lattice.dim(); ++ax)
    kband = std::min(kband, 2.0 * kPi * (lattice.points(ax) / 4) / lattice.length(ax));
  const double kc = 0.1 * kband;
  const auto& k2 = lattice.k_squared();
  auto windowed = [&] {
    CGrid c0 = random_coeffs(lattice, rng);
    for (std::size_t i = 0; i < c0.size(); ++i) c0[i] *= std::exp(-0.5 * k2[i] / (kc * kc));
    CGrid g = to_grid(c0, lattice);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vec3 x = lattice.position(i);
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      g[i] *= std::exp(-0.5 * r2 / (sigma * sigma));
    }
    CGrid c = to_coeffs(g, lattice);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!in_band(lattice, i)) c[i] = 0.0;
    return c;
  };
  CGrid p = windowed();
  CGrid m = windowed();
  return {lattice, params, std::move(p), std::move(m), t0};
}

CGrid gaussian_profile(const Lattice& lattice, const PacketSpec& spec) {
  if (!(spec.sigma > 0.0)) throw PreconditionError("gaussian packet: sigma must be positive");
  CGrid g(lattice.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = lattice.position(i);
    double r2 = 0.0, phase = 0.0;
    for (int ax = 0; ax < lattice.dim(); ++ax) {
      // Minimum-image displacement keeps packets near the boundary smooth.
      double dx = x[ax] - spec.center[ax];
      const double L = lattice.length(ax);
      dx -= L * std::round(dx / L);
      r2 += dx * dx;
      phase += spec.k0[ax] * dx;
    }
    g[i] = spec.amplitude * std::exp(-0.5 * r2 / (spec.sigma * spec.sigma)) * std::polar(1.0, phase);
  }
  return g;
}

LatticeField gaussian_packet(const Lattice& lattice, const ModelParams& params,
                             const PacketSpec& spec, int epsilon, double t0) {
  CGrid c = to_coeffs(gaussian_profile(lattice, spec), lattice);
  CGrid z(lattice.size());
  if (epsilon > 0) return {lattice, params, std::move(c), std::move(z), t0};
  return {lattice, params, std::move(z), std::move(c), t0};
}

LatticeField nonrelativistic_packet(const Lattice& lattice, const ModelParams& params,
                                    const PacketSpec& spec, double t0) {
  const CGrid psi = gaussian_profile(lattice, spec);
  CGrid psidot(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) psidot[i] = cplx(0.0, -params.mass()) * psi[i];
  return from_initial_data(psi, psidot, lattice, params, t0);
}

LatticeField plane_mode(const Lattice& lattice, const ModelParams& params, std::size_t mode,
                        int epsilon, cplx c, double t0) {
  if (mode >= lattice.size()) throw PreconditionError("plane_mode: mode index out of range");
  CGrid p(lattice.size()), m(lattice.size());
  (epsilon > 0 ? p : m)[mode] = c;
  return {lattice, params, std::move(p), std::move(m), t0};
}

} // namespace kgfield
