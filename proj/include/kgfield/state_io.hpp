#pragma once

#include <iosfwd>
#include <string>

#include "kgfield/field.hpp"
#include "kgfield/planewave.hpp"

namespace kgfield {

/// Lattice field file: a text header starting "kgfield-state-v1", terminated
/// by a line "data", then phi+ and phi- as little-endian (re, im) doubles.
void write_state(std::ostream& out, const LatticeField& field);
LatticeField read_state(std::istream& in);
void save_state(const std::string& path, const LatticeField& field);
LatticeField load_state(const std::string& path);

/// Plane-wave superposition as text: header "kgfield-planewaves-v1", a line
/// "params M kappa a dim", then one "mode eps kx ky kz re im" line per mode.
void write_planewaves(std::ostream& out, const PlaneWaveField& field);
PlaneWaveField read_planewaves(std::istream& in);

/// Human-readable summary of a state file (either format) as JSON text.
std::string inspect_state(const std::string& path);

} // namespace kgfield
