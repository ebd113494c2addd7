#pragma once

// Lossless two-port beam splitter and the single-photon entangled source.
//
// Mode convention: the splitter maps input modes (a, b) to output modes
// (a', b') with
//
//   a' =  sqrt(R) a + sqrt(1-R) b
//   b' = -sqrt(1-R) a + sqrt(R) b
//
// where `port_a` is the face whose transmitted beam picks up the sign flip.
// Output mode a' is stored in the slot of port_a, b' in the slot of port_b.
// The state is transformed by substituting creation operators,
//
//   a^dag -> sqrt(R) a'^dag - sqrt(1-R) b'^dag
//   b^dag -> sqrt(1-R) a'^dag + sqrt(R) b'^dag,
//
// and expanding the resulting polynomial back onto number states.

#include "srq/fock.hpp"

namespace srq {

struct BeamSplitter {
  double reflectivity = 0.5;
  ModeIndex port_a{0};
  ModeIndex port_b{1};
};

void validate(const BeamSplitter& bs);

// Splitter realizing the inverse mode matrix (ports exchanged).
BeamSplitter inverse(const BeamSplitter& bs);

// The 2x2 mode matrix acting on (a, b).
std::array<std::array<double, 2>, 2> mode_matrix(const BeamSplitter& bs);

StateVector apply_beam_splitter(const StateVector& state, const BeamSplitter& bs);

// Source photon in the sign-flip port of a 50/50 splitter:
// (|1,0> - |0,1>)/sqrt(2) over modes (A, B).
StateVector make_source_state(int n_max = 2);

inline constexpr ModeIndex kModeA{0};
inline constexpr ModeIndex kModeB{1};

}  // namespace srq
