#pragma once

#include "rphd/types.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace rphd {

/// Decimal with 6 significant digits ("%.6g"), locale-independent.
std::string format_real(double value);

/// Particle snapshot as column text, one particle per line:
/// `step px vx py vy weight`, preceded by a header line. Values are written
/// with 17 significant digits so that read_particles() restores them exactly.
void write_particles(std::ostream& os, const ParticleSet& set);
ParticleSet read_particles(std::istream& is);

}  // namespace rphd
