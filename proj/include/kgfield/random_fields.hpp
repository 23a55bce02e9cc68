#pragma once

#include <cstdint>
#include <random>

#include "kgfield/field.hpp"

namespace kgfield {

using Rng = std::mt19937_64;

/// Modes with |n| <= N/4 on every axis; higher modes and the Nyquist row are zero.
bool in_band(const Lattice& lattice, std::size_t flat);

/// Independent Gaussian coefficients in both sectors on the band-limited modes.
LatticeField random_field(const Lattice& lattice, const ModelParams& params, Rng& rng,
                          double t0 = 0.0);

/// Field built from real band-limited initial data (psi, psidot real at t0).
LatticeField random_real_field(const Lattice& lattice, const ModelParams& params, Rng& rng,
                               double t0 = 0.0);

/// Random field restricted to one energy sector (+1 or -1).
LatticeField random_sector_field(const Lattice& lattice, const ModelParams& params, Rng& rng,
                                 int epsilon, double t0 = 0.0);

/// Smooth random field whose node samples decay like a Gaussian of width
/// sigma about the box centre: a random band-limited field windowed in space.
LatticeField random_localized_field(const Lattice& lattice, const ModelParams& params, Rng& rng,
                                    double sigma, double t0 = 0.0);

struct PacketSpec {
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 k0{0.0, 0.0, 0.0};
  double sigma = 1.0;
  cplx amplitude{1.0, 0.0};
};

/// Spatial profile A exp(-|x-c|^2/(2 sigma^2) + i k0.(x-c)) at the nodes.
CGrid gaussian_profile(const Lattice& lattice, const PacketSpec& spec);

/// Packet with the Gaussian profile projected onto one energy sector.
LatticeField gaussian_packet(const Lattice& lattice, const ModelParams& params,
                             const PacketSpec& spec, int epsilon, double t0 = 0.0);

/// Packet with initial data (profile, -iM profile): the nonrelativistic
/// preparation, containing a small negative-frequency admixture.
LatticeField nonrelativistic_packet(const Lattice& lattice, const ModelParams& params,
                                    const PacketSpec& spec, double t0 = 0.0);

/// Single lattice mode e^{ik.x} with coefficient c in sector epsilon.
LatticeField plane_mode(const Lattice& lattice, const ModelParams& params, std::size_t mode,
                        int epsilon, cplx c = {1.0, 0.0}, double t0 = 0.0);

} // namespace kgfield
