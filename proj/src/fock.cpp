#include "srq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace srq {

namespace {

void require_same_shape(const StateVector& x, const StateVector& y,
                        const char* what) {
  if (x.mode_count() != y.mode_count() || x.n_max() != y.n_max()) {
    throw ShapeMismatch(std::string(what) + ": states have different shapes");
  }
}

}  // namespace

StateVector::StateVector(std::size_t mode_count, int n_max)
    : mode_count_(mode_count), n_max_(n_max) {
  if (mode_count < 1 || n_max < 1) {
    throw std::invalid_argument("StateVector: need mode_count >= 1 and n_max >= 1");
  }
  const std::size_t radix = static_cast<std::size_t>(n_max) + 1;
  strides_.assign(mode_count, 1);
  for (std::size_t m = mode_count - 1; m > 0; --m) {
    strides_[m - 1] = strides_[m] * radix;
  }
  amps_.assign(strides_[0] * radix, Amplitude{0.0, 0.0});
}

StateVector StateVector::from_terms(
    std::size_t mode_count, int n_max,
    const std::vector<std::pair<Occupation, Amplitude>>& terms) {
  return build(mode_count, n_max, [&](std::span<Amplitude> w, const StateVector& s) {
    for (const auto& [occ, amp] : terms) {
      if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
        throw std::invalid_argument("StateVector: non-finite amplitude");
      }
      w[s.index_of(occ)] += amp;
    }
  });
}

std::size_t StateVector::index_of(const Occupation& occ) const {
  if (occ.size() != mode_count_) {
    throw ShapeMismatch("occupation length " + std::to_string(occ.size()) +
                        " does not match mode count " +
                        std::to_string(mode_count_));
  }
  std::size_t idx = 0;
  for (std::size_t m = 0; m < mode_count_; ++m) {
    if (occ[m] < 0 || occ[m] > n_max_) {
      throw TruncationOverflow("occupation " + to_string(occ) +
                               " exceeds n_max=" + std::to_string(n_max_));
    }
    idx += static_cast<std::size_t>(occ[m]) * strides_[m];
  }
  return idx;
}

Occupation StateVector::occupation_of(std::size_t index) const {
  Occupation occ(mode_count_);
  for (std::size_t m = 0; m < mode_count_; ++m) {
    occ[m] = static_cast<int>(index / strides_[m]);
    index %= strides_[m];
  }
  return occ;
}

int StateVector::occupation_of(std::size_t index, ModeIndex m) const {
  return static_cast<int>((index / strides_[m.value]) %
                          (static_cast<std::size_t>(n_max_) + 1));
}

std::size_t StateVector::stride(ModeIndex m) const {
  check_mode(m);
  return strides_[m.value];
}

void StateVector::check_mode(ModeIndex m) const {
  if (m.value >= mode_count_) {
    throw std::out_of_range("mode " + std::to_string(m.value) +
                            " out of range for " + std::to_string(mode_count_) +
                            " modes");
  }
}

Amplitude StateVector::amplitude(const Occupation& occ) const {
  return amps_[index_of(occ)];
}

std::vector<std::pair<Occupation, Amplitude>> StateVector::terms() const {
  std::vector<std::pair<Occupation, Amplitude>> out;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (amps_[i] != Amplitude{0.0, 0.0}) out.emplace_back(occupation_of(i), amps_[i]);
  }
  return out;
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

void StateVector::prune() {
  for (auto& a : amps_) {
    if (std::abs(a) < kPruneThreshold) a = Amplitude{0.0, 0.0};
  }
}

StateVector make_vacuum(std::size_t mode_count, int n_max) {
  return StateVector::build(mode_count, n_max,
                            [](std::span<Amplitude> w, const StateVector&) { w[0] = 1.0; });
}

StateVector apply_creation(const StateVector& state, ModeIndex m) {
  state.check_mode(m);
  const std::size_t st = state.stride(m);
  return StateVector::build(state.mode_count(), state.n_max(), [&](std::span<Amplitude> w, const StateVector&) {
    for (std::size_t i = 0; i < state.dimension(); ++i) {
      const Amplitude a = state.amplitude_at(i);
      if (a == Amplitude{0.0, 0.0}) continue;
      const int n = state.occupation_of(i, m);
      if (n == state.n_max()) {
        throw TruncationOverflow("creation on mode " + std::to_string(m.value) +
                                 " exceeds n_max=" + std::to_string(state.n_max()));
      }
      w[i + st] += a * std::sqrt(static_cast<double>(n + 1));
    }
  });
}

StateVector apply_annihilation(const StateVector& state, ModeIndex m) {
  state.check_mode(m);
  const std::size_t st = state.stride(m);
  return StateVector::build(state.mode_count(), state.n_max(), [&](std::span<Amplitude> w, const StateVector&) {
    for (std::size_t i = 0; i < state.dimension(); ++i) {
      const Amplitude a = state.amplitude_at(i);
      const int n = state.occupation_of(i, m);
      if (a == Amplitude{0.0, 0.0} || n == 0) continue;
      w[i - st] += a * std::sqrt(static_cast<double>(n));
    }
  });
}

Amplitude inner_product(const StateVector& x, const StateVector& y) {
  require_same_shape(x, y, "inner_product");
  Amplitude acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.dimension(); ++i) {
    acc += std::conj(x.amplitude_at(i)) * y.amplitude_at(i);
  }
  return acc;
}

StateVector tensor(const StateVector& x, const StateVector& y) {
  if (x.n_max() != y.n_max()) {
    throw ShapeMismatch("tensor: states have different n_max");
  }
  return StateVector::build(x.mode_count() + y.mode_count(), x.n_max(), [&](std::span<Amplitude> w, const StateVector&) {
    const std::size_t dy = y.dimension();
    for (std::size_t i = 0; i < x.dimension(); ++i) {
      const Amplitude a = x.amplitude_at(i);
      if (a == Amplitude{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < dy; ++j) w[i * dy + j] = a * y.amplitude_at(j);
    }
  });
}

StateVector scale(const StateVector& x, Amplitude factor) {
  return StateVector::build(x.mode_count(), x.n_max(), [&](std::span<Amplitude> w, const StateVector&) {
    for (std::size_t i = 0; i < x.dimension(); ++i) w[i] = factor * x.amplitude_at(i);
  });
}

StateVector add(const StateVector& x, const StateVector& y) {
  require_same_shape(x, y, "add");
  return StateVector::build(x.mode_count(), x.n_max(), [&](std::span<Amplitude> w, const StateVector&) {
    for (std::size_t i = 0; i < x.dimension(); ++i) {
      w[i] = x.amplitude_at(i) + y.amplitude_at(i);
    }
  });
}

double norm(const StateVector& x) { return std::sqrt(x.norm_squared()); }

StateVector normalize(const StateVector& x) {
  const double n = norm(x);
  if (n == 0.0) throw std::domain_error("normalize: zero vector");
  return scale(x, 1.0 / n);
}

double fidelity(const StateVector& x, const StateVector& y) {
  const double nx = x.norm_squared();
  const double ny = y.norm_squared();
  if (nx == 0.0 || ny == 0.0) throw std::domain_error("fidelity: zero vector");
  return std::norm(inner_product(x, y)) / (nx * ny);
}

bool same_state(const StateVector& x, const StateVector& y, double tol) {
  return fidelity(x, y) >= 1.0 - tol;
}

StateVector apply_qubit_operator(const StateVector& state, ModeIndex m,
                                 const Matrix2& op, Amplitude beyond) {
  const std::size_t st = state.stride(m);
  return StateVector::build(state.mode_count(), state.n_max(), [&](std::span<Amplitude> w, const StateVector&) {
    for (std::size_t i = 0; i < state.dimension(); ++i) {
      const Amplitude a = state.amplitude_at(i);
      if (a == Amplitude{0.0, 0.0}) continue;
      const int n = state.occupation_of(i, m);
      if (n >= 2) {
        w[i] += beyond * a;
        continue;
      }
      const std::size_t base = i - static_cast<std::size_t>(n) * st;
      w[base] += op[0][n] * a;
      w[base + st] += op[1][n] * a;
    }
  });
}

StateVector condition_on(const StateVector& state,
                         std::span<const ModeIndex> modes,
                         std::span<const int> pattern) {
  if (modes.size() != pattern.size()) {
    throw ShapeMismatch("condition_on: modes and pattern differ in length");
  }
  if (modes.size() >= state.mode_count()) {
    throw ShapeMismatch("condition_on: at least one mode must remain");
  }
  std::vector<bool> removed(state.mode_count(), false);
  for (auto m : modes) {
    state.check_mode(m);
    if (removed[m.value]) throw std::invalid_argument("condition_on: repeated mode");
    removed[m.value] = true;
  }
  return StateVector::build(state.mode_count() - modes.size(), state.n_max(), [&](std::span<Amplitude> w, const StateVector& out) {
    for (std::size_t i = 0; i < state.dimension(); ++i) {
      const Amplitude a = state.amplitude_at(i);
      if (a == Amplitude{0.0, 0.0}) continue;
      bool match = true;
      for (std::size_t k = 0; k < modes.size() && match; ++k) {
        match = state.occupation_of(i, modes[k]) == pattern[k];
      }
      if (!match) continue;
      std::size_t j = 0;
      std::size_t pos = 0;
      for (std::size_t m = 0; m < state.mode_count(); ++m) {
        if (removed[m]) continue;
        j += static_cast<std::size_t>(state.occupation_of(i, ModeIndex{m})) *
             out.stride(ModeIndex{pos});
        ++pos;
      }
      w[j] += a;
    }
  });
}

StateVector insert_vacuum_mode(const StateVector& state, ModeIndex at) {
  if (at.value > state.mode_count()) {
    throw std::out_of_range("insert_vacuum_mode: position out of range");
  }
  return StateVector::build(state.mode_count() + 1, state.n_max(), [&](std::span<Amplitude> w, const StateVector& out) {
    for (std::size_t i = 0; i < state.dimension(); ++i) {
      const Amplitude a = state.amplitude_at(i);
      if (a == Amplitude{0.0, 0.0}) continue;
      std::size_t j = 0;
      for (std::size_t m = 0; m < state.mode_count(); ++m) {
        const std::size_t target = m < at.value ? m : m + 1;
        j += static_cast<std::size_t>(state.occupation_of(i, ModeIndex{m})) *
             out.stride(ModeIndex{target});
      }
      w[j] = a;
    }
  });
}

int total_quanta(const Occupation& occ) {
  return std::accumulate(occ.begin(), occ.end(), 0);
}

std::string to_string(const Occupation& occ) {
  std::ostringstream os;
  os << '|';
  for (std::size_t m = 0; m < occ.size(); ++m) {
    if (m) os << ',';
    os << occ[m];
  }
  os << '>';
  return os.str();
}

}  // namespace srq
