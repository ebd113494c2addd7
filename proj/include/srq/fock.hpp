#pragma once

// Truncated multimode Fock-space state vectors.
//
// A StateVector holds complex amplitudes over every occupation pattern of
// `mode_count` bosonic modes with at most `n_max` quanta per mode. Storage is
// dense in mixed radix (n_max + 1) with mode 0 most significant, so iterating
// over the storage visits occupations in lexicographic order. All operations
// are pure: they return new values and never mutate their arguments.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace srq {

using Amplitude = std::complex<double>;
using Occupation = std::vector<int>;

// 2x2 operator on the {|0>, |1>} span of one mode, row-major.
using Matrix2 = std::array<std::array<Amplitude, 2>, 2>;

// Amplitudes with magnitude below this are stored as exact zeros.
inline constexpr double kPruneThreshold = 1e-15;

struct ModeIndex {
  std::size_t value;
  friend bool operator==(ModeIndex, ModeIndex) = default;
};

class TruncationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class StateVector {
 public:
  // Zero vector; use make_vacuum or from_terms for physical states.
  StateVector(std::size_t mode_count, int n_max);

  static StateVector from_terms(
      std::size_t mode_count, int n_max,
      const std::vector<std::pair<Occupation, Amplitude>>& terms);

  std::size_t mode_count() const { return mode_count_; }
  int n_max() const { return n_max_; }
  std::size_t dimension() const { return amps_.size(); }

  Amplitude amplitude(const Occupation& occ) const;
  Amplitude amplitude_at(std::size_t index) const { return amps_[index]; }
  std::span<const Amplitude> dense() const { return amps_; }

  // Nonzero entries in lexicographic occupation order.
  std::vector<std::pair<Occupation, Amplitude>> terms() const;

  double norm_squared() const;

  std::size_t index_of(const Occupation& occ) const;
  Occupation occupation_of(std::size_t index) const;
  int occupation_of(std::size_t index, ModeIndex m) const;
  std::size_t stride(ModeIndex m) const;

  void check_mode(ModeIndex m) const;

  // Creates a zero state of the given shape, lets `fill(amps, shape)` write
  // the dense amplitudes (`shape` answers index queries), then prunes.
  template <class Fill>
  static StateVector build(std::size_t mode_count, int n_max, Fill&& fill) {
    StateVector s(mode_count, n_max);
    fill(std::span<Amplitude>(s.amps_), static_cast<const StateVector&>(s));
    s.prune();
    return s;
  }

 private:
  std::size_t mode_count_;
  int n_max_;
  std::vector<Amplitude> amps_;
  std::vector<std::size_t> strides_;

  void prune();
};

StateVector make_vacuum(std::size_t mode_count, int n_max = 2);

// a_m^dagger; not renormalized. Throws TruncationOverflow at the cap.
StateVector apply_creation(const StateVector& state, ModeIndex m);
StateVector apply_annihilation(const StateVector& state, ModeIndex m);

// Conjugate-linear in x.
Amplitude inner_product(const StateVector& x, const StateVector& y);
StateVector tensor(const StateVector& x, const StateVector& y);
StateVector normalize(const StateVector& x);
StateVector scale(const StateVector& x, Amplitude factor);
StateVector add(const StateVector& x, const StateVector& y);
double norm(const StateVector& x);
double fidelity(const StateVector& x, const StateVector& y);

// Equality up to global phase: fidelity >= 1 - tol.
bool same_state(const StateVector& x, const StateVector& y, double tol = 1e-10);

// Applies `op` on the {|0>,|1>} span of mode m. Components with two or more
// quanta in m are multiplied by `beyond` (0 for a projector, 1 for identity
// extension).
StateVector apply_qubit_operator(const StateVector& state, ModeIndex m,
                                 const Matrix2& op, Amplitude beyond = 0.0);

// Keeps only components whose listed modes carry `pattern`, then removes those
// modes. The result is unnormalized; its squared norm is the Born weight.
StateVector condition_on(const StateVector& state,
                         std::span<const ModeIndex> modes,
                         std::span<const int> pattern);

// Inserts a vacuum mode so that it ends up at position `at`.
StateVector insert_vacuum_mode(const StateVector& state, ModeIndex at);

// Total quanta of one basis occupation.
int total_quanta(const Occupation& occ);

std::string to_string(const Occupation& occ);

}  // namespace srq
