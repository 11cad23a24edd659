#pragma once

#include "fsiga/assembly.hpp"

namespace fsiga {

/// Discrete state at time level n.
///
/// First-order paths (monolithic, segregated) carry φ and η; the reduced path
/// carries φ and the surface coefficients of φ_t, with η = -φ_t / g implied.
struct WaveState {
  Vector phi;    // volume coefficients
  Vector eta;    // surface coefficients (empty on the reduced path)
  Vector phi_t;  // surface coefficients (reduced path only)
  double t = 0;
  long step = 0;

  bool second_order() const { return phi_t.size() > 0 && eta.size() == 0; }
};

/// Surface elevation coefficients for either state layout.
inline Vector surface_elevation(const WaveState& s, double g) {
  return s.second_order() ? Vector(-s.phi_t / g) : s.eta;
}

}  // namespace fsiga
