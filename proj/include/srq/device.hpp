#pragma once

// Nondeterministic projective measurement of vacuum/one-photon superpositions.
//
// The measured arm is mixed with a probe gamma|0> + delta|1> on a 50/50 splitter
// (probe on the sign-flip port). Detector D_a watches the probe-side output,
// D_b the arm-side output. Counts (1,0) herald Plus, (0,1) Minus, anything
// else is Inconclusive. Expanding the output amplitudes gives the effects on
// the arm's {|0>,|1>} span:
//
//   E_plus  = 1/2 |pi+><pi+|,  pi+ =  conj(delta)|0> + conj(gamma)|1>
//   E_minus = 1/2 |pi-><pi-|,  pi- = -conj(delta)|0> + conj(gamma)|1>
//   E_inc   = diag(|gamma|^2, |delta|^2)
//
// so a probe (gamma, delta) projects onto the *swapped* conjugate coefficients.
// probe_for_direction performs that swap.

#include <array>
#include <map>
#include <utility>

#include "srq/fock.hpp"
#include "srq/rng.hpp"

namespace srq {

// c0|0> + c1|1>, normalized.
struct SuperpositionCoeffs {
  Amplitude c0{1.0, 0.0};
  Amplitude c1{0.0, 0.0};
};

// gamma|0> + delta|1>, normalized.
struct ProbeState {
  Amplitude g0{1.0, 0.0};
  Amplitude g1{0.0, 0.0};
};

void validate(const SuperpositionCoeffs& u, double tol = 1e-12);
void validate(const ProbeState& p, double tol = 1e-12);

// Orthogonal complement (conj c1, -conj c0).
SuperpositionCoeffs orthogonal(const SuperpositionCoeffs& u);

// |u><u| on the {|0>,|1>} span.
Matrix2 projector(const SuperpositionCoeffs& u);

// Fixes the global phase so the first nonzero component is real positive.
SuperpositionCoeffs canonical_phase(const SuperpositionCoeffs& u);

enum class DeviceTag { Plus, Minus, Inconclusive };

struct DetectorCounts {
  int da = 0;
  int db = 0;
  friend auto operator<=>(const DetectorCounts&, const DetectorCounts&) = default;
};

struct DeviceOutcome {
  DeviceTag tag = DeviceTag::Inconclusive;
  DetectorCounts counts;
};

DeviceTag classify(DetectorCounts counts);

struct DevicePOVM {
  Matrix2 plus;
  Matrix2 minus;
  Matrix2 inconclusive;
};

ProbeState probe_for_direction(const SuperpositionCoeffs& u);
DevicePOVM device_povm(const ProbeState& probe);

// tr(E rho) for a pure arm state.
double effect_probability(const Matrix2& effect, const SuperpositionCoeffs& arm);

// Full Fock simulation of the device: appends the probe as the last mode and
// mixes it with `arm` at R = 1/2. D_a is the appended mode, D_b is `arm`.
StateVector device_output(const StateVector& state, ModeIndex arm,
                          const ProbeState& probe);

// Exact detector-pattern distribution from device_output.
std::map<DetectorCounts, double> device_pattern_distribution(
    const StateVector& state, ModeIndex arm, const ProbeState& probe);

// Born-rule sample of the device. The returned state keeps the input's modes,
// with the measured arm left empty (its photons were absorbed) and the other
// modes collapsed onto the heralded branch.
std::pair<DeviceOutcome, StateVector> measure_device(const StateVector& state,
                                                     ModeIndex arm,
                                                     const ProbeState& probe,
                                                     SeededRng& rng);

// Photon counting on a subset of modes. Outcomes are scanned in lexicographic
// order, so a given uniform draw always maps to the same occupation.
std::pair<Occupation, StateVector> sample_number_measurement(
    const StateVector& state, std::span<const ModeIndex> modes, SeededRng& rng);

// Marginal photon-number distribution of `modes`.
std::map<Occupation, double> number_distribution(const StateVector& state,
                                                 std::span<const ModeIndex> modes);

}  // namespace srq
