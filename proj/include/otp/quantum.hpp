#pragma once

// Dense statevector simulation for at most kMaxQubits qubits.
//
// Basis index convention: qubit q is bit q of the basis index. A register of
// width w at offset o holds the value (index >> o) & (2^w - 1), and bit j of
// that value is position j of the corresponding gf2::BitVector.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "otp/errors.hpp"
#include "otp/gf2.hpp"
#include "otp/rng.hpp"

namespace otp::qsim {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 20;
inline constexpr double kTolerance = 1e-9;

class StateVector {
 public:
  // |0...0> on `num_qubits` qubits.
  explicit StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    check_capacity(num_qubits);
    amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static StateVector basis(std::size_t num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dimension()) throw DomainError("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  static StateVector from_amplitudes(std::vector<Amplitude> amps) {
    if (amps.empty() || !std::has_single_bit(amps.size())) {
      throw DimensionMismatch("amplitude count must be a power of two");
    }
    StateVector s(static_cast<std::size_t>(std::countr_zero(amps.size())));
    s.amps_ = std::move(amps);
    if (std::abs(s.norm_squared() - 1.0) > kTolerance) throw ParameterError("state is not normalized");
    return s;
  }

  static void check_capacity(std::size_t num_qubits) {
    if (num_qubits > kMaxQubits) {
      throw CapacityError(std::to_string(num_qubits) + " qubits exceeds simulator capacity of " +
                          std::to_string(kMaxQubits));
    }
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  Amplitude amplitude(std::uint64_t index) const { return amps_.at(index); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  std::span<Amplitude> amplitudes() { return amps_; }

  double norm_squared() const {
    double n = 0.0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
  }

  // `high` occupies the qubits above this state's qubits.
  StateVector tensor(const StateVector& high) const {
    StateVector out(num_qubits_ + high.num_qubits_);
    for (std::size_t h = 0; h < high.dimension(); ++h) {
      for (std::size_t l = 0; l < dimension(); ++l) {
        out.amps_[(h << num_qubits_) | l] = high.amps_[h] * amps_[l];
      }
    }
    return out;
  }

  double max_abs_difference(const StateVector& other) const {
    if (other.dimension() != dimension()) throw DimensionMismatch("state dimensions differ");
    double m = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) m = std::max(m, std::abs(amps_[i] - other.amps_[i]));
    return m;
  }

  bool approx_equal(const StateVector& other, double tol = kTolerance) const {
    return other.dimension() == dimension() && max_abs_difference(other) <= tol;
  }

 private:
  std::size_t num_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

struct Register {
  std::size_t offset = 0;
  std::size_t width = 0;

  std::uint64_t mask() const { return ((std::uint64_t{1} << width) - 1) << offset; }
  std::uint64_t extract(std::uint64_t index) const { return (index >> offset) & ((std::uint64_t{1} << width) - 1); }
  std::uint64_t with(std::uint64_t index, std::uint64_t value) const {
    return (index & ~mask()) | (value << offset);
  }
  std::size_t end() const { return offset + width; }

  friend bool operator==(const Register&, const Register&) = default;
};

inline bool overlaps(const Register& a, const Register& b) {
  return a.offset < b.end() && b.offset < a.end();
}

// Named, disjoint, contiguous qubit ranges allocated bottom-up.
class RegisterLayout {
 public:
  Register add(const std::string& name, std::size_t width) {
    if (width == 0) throw LayoutError("register '" + name + "' has zero width");
    if (registers_.count(name) != 0) throw LayoutError("register '" + name + "' already defined");
    Register r{total_, width};
    StateVector::check_capacity(total_ + width);
    registers_.emplace(name, r);
    order_.push_back(name);
    total_ += width;
    return r;
  }

  const Register& at(std::string_view name) const {
    auto it = registers_.find(std::string(name));
    if (it == registers_.end()) throw LayoutError("unknown register '" + std::string(name) + "'");
    return it->second;
  }

  bool has(std::string_view name) const { return registers_.count(std::string(name)) != 0; }

  // Two adjacent registers viewed as one (low register first).
  Register join(std::string_view low, std::string_view high) const {
    const Register& a = at(low);
    const Register& b = at(high);
    if (a.end() != b.offset) {
      throw LayoutError("registers '" + std::string(low) + "' and '" + std::string(high) + "' are not adjacent");
    }
    return Register{a.offset, a.width + b.width};
  }

  std::size_t num_qubits() const { return total_; }
  const std::vector<std::string>& names() const { return order_; }

 private:
  std::map<std::string, Register, std::less<>> registers_;
  std::vector<std::string> order_;
  std::size_t total_ = 0;
};

namespace detail {

inline void check_register(const StateVector& s, const Register& r) {
  if (r.width == 0 || r.end() > s.num_qubits()) throw LayoutError("register outside the state");
}

inline void hadamard_qubit(std::span<Amplitude> amps, std::size_t qubit, std::uint64_t control_mask) {
  const double inv = 1.0 / std::sqrt(2.0);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if ((i & bit) != 0 || (i & control_mask) != control_mask) continue;
    const Amplitude a = amps[i];
    const Amplitude b = amps[i | bit];
    amps[i] = (a + b) * inv;
    amps[i | bit] = (a - b) * inv;
  }
}

}  // namespace detail

// |A> = 2^{-d/2} Σ_{a∈A} |a>, on A.ambient() qubits.
inline StateVector prepare_subspace_state(const gf2::SubspaceBasis& a) {
  StateVector s(a.ambient());
  s.amplitudes()[0] = 0.0;
  const double amp = std::pow(2.0, -static_cast<double>(a.dim()) / 2.0);
  for (const auto& v : gf2::enumerate_elements(a)) s.amplitudes()[v.to_uint()] = amp;
  return s;
}

// Hadamard on every qubit of `reg`; when `control` is set, only on basis
// states where that qubit is 1.
inline StateVector apply_hadamard(StateVector state, const Register& reg,
                                  std::optional<std::size_t> control = std::nullopt) {
  detail::check_register(state, reg);
  std::uint64_t cmask = 0;
  if (control) {
    if (*control >= state.num_qubits() || (reg.mask() >> *control) & 1u) {
      throw LayoutError("control qubit must lie outside the target register");
    }
    cmask = std::uint64_t{1} << *control;
  }
  for (std::size_t q = reg.offset; q < reg.end(); ++q) detail::hadamard_qubit(state.amplitudes(), q, cmask);
  return state;
}

inline StateVector apply_hadamard_all(StateVector state) {
  const Register all{0, state.num_qubits()};
  return apply_hadamard(std::move(state), all);
}

// X on the qubits of `reg` selected by `bits`.
inline StateVector apply_x(StateVector state, const Register& reg, std::uint64_t bits) {
  detail::check_register(state, reg);
  const std::uint64_t flip = (bits << reg.offset) & reg.mask();
  if (flip == 0) return state;
  auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    const std::uint64_t j = i ^ flip;
    if (i < j) std::swap(amps[i], amps[j]);
  }
  return state;
}

using ClassicalFunction = std::function<std::uint64_t(std::uint64_t)>;

// |a>|b> -> |a>|b XOR fn(a)>.
inline StateVector apply_function_oracle(StateVector state, const Register& in, const Register& out,
                                         const ClassicalFunction& fn) {
  detail::check_register(state, in);
  detail::check_register(state, out);
  if (overlaps(in, out)) throw LayoutError("oracle input and output registers overlap");
  const std::uint64_t in_size = std::uint64_t{1} << in.width;
  std::vector<std::uint64_t> table(in_size);
  for (std::uint64_t a = 0; a < in_size; ++a) {
    table[a] = fn(a);
    if (out.width < 64 && (table[a] >> out.width) != 0) {
      throw DomainError("oracle output does not fit the output register");
    }
  }
  auto src = state.amplitudes();
  std::vector<Amplitude> dst(src.size());
  for (std::uint64_t i = 0; i < src.size(); ++i) {
    const std::uint64_t b = out.extract(i) ^ table[in.extract(i)];
    dst[out.with(i, b)] = src[i];
  }
  std::copy(dst.begin(), dst.end(), src.begin());
  return state;
}

inline StateVector apply_function_oracle(StateVector state, const RegisterLayout& layout, std::string_view in,
                                         std::string_view out, const ClassicalFunction& fn) {
  return apply_function_oracle(std::move(state), layout.at(in), layout.at(out), fn);
}

// Born-rule marginal distribution of `reg`.
inline std::vector<double> register_distribution(const StateVector& state, const Register& reg) {
  detail::check_register(state, reg);
  std::vector<double> p(std::size_t{1} << reg.width, 0.0);
  auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) p[reg.extract(i)] += std::norm(amps[i]);
  return p;
}

struct Projection {
  double probability = 0.0;
  std::optional<StateVector> post_state;  // empty when probability is zero
};

inline Projection project_register(const StateVector& state, const Register& reg, std::uint64_t value) {
  detail::check_register(state, reg);
  StateVector out = state;
  auto amps = out.amplitudes();
  double p = 0.0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (reg.extract(i) == value) {
      p += std::norm(amps[i]);
    } else {
      amps[i] = 0.0;
    }
  }
  if (p <= 0.0) return {0.0, std::nullopt};
  const double scale = 1.0 / std::sqrt(p);
  for (auto& a : amps) a *= scale;
  return {p, std::move(out)};
}

struct Measurement {
  gf2::BitVector outcome;
  StateVector post_state;
};

inline Measurement measure_register(const StateVector& state, const Register& reg, Rng& rng) {
  const auto p = register_distribution(state, reg);
  double total = 0.0;
  for (double x : p) total += x;
  double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  std::uint64_t outcome = 0;
  for (; outcome + 1 < p.size(); ++outcome) {
    if (p[outcome] > 0.0 && u < p[outcome]) break;
    u -= p[outcome];
  }
  // Guard against landing on a zero-weight tail entry through rounding.
  while (p[outcome] <= 0.0 && outcome > 0) --outcome;
  auto proj = project_register(state, reg, outcome);
  return {gf2::BitVector::from_uint(outcome, reg.width), std::move(*proj.post_state)};
}

inline Measurement measure_register(const StateVector& state, const RegisterLayout& layout, std::string_view reg,
                                    Rng& rng) {
  return measure_register(state, layout.at(reg), rng);
}

// Invertible circuit operations the games use. std::monostate is the
// "no operation recorded" value and cannot be applied or inverted.
struct HadamardLayer {
  Register target;
  std::optional<std::size_t> control;
};

struct XorOracle {
  Register in;
  Register out;
  ClassicalFunction fn;
};

struct PauliX {
  Register target;
  std::uint64_t bits = 0;
};

using Op = std::variant<std::monostate, HadamardLayer, XorOracle, PauliX>;

inline StateVector apply(StateVector state, const Op& op) {
  return std::visit(
      [&](const auto& o) -> StateVector {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          throw ParameterError("unknown circuit operation");
        } else if constexpr (std::is_same_v<T, HadamardLayer>) {
          return apply_hadamard(std::move(state), o.target, o.control);
        } else if constexpr (std::is_same_v<T, XorOracle>) {
          return apply_function_oracle(std::move(state), o.in, o.out, o.fn);
        } else {
          return apply_x(std::move(state), o.target, o.bits);
        }
      },
      op);
}

// Every supported operation is an involution.
inline StateVector apply_inverse(StateVector state, const Op& op) { return apply(std::move(state), op); }

using Circuit = std::vector<Op>;

inline StateVector run_circuit(StateVector state, const Circuit& c) {
  for (const auto& op : c) state = apply(std::move(state), op);
  return state;
}

inline StateVector uncompute(StateVector state, const Circuit& c) {
  for (auto it = c.rbegin(); it != c.rend(); ++it) state = apply_inverse(std::move(state), *it);
  return state;
}

class DensityMatrix {
 public:
  using Matrix = Eigen::MatrixXcd;

  explicit DensityMatrix(Matrix m) : m_(std::move(m)) { validate(); }

  static DensityMatrix pure(const StateVector& s) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dimension()));
    for (std::size_t i = 0; i < s.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = s.amplitude(i);
    return DensityMatrix(v * v.adjoint());
  }

  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Amplitude operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  // Diagonal part only: the state after a computational-basis measurement.
  DensityMatrix dephased() const {
    Matrix d = Matrix::Zero(m_.rows(), m_.cols());
    d.diagonal() = m_.diagonal();
    return DensityMatrix(std::move(d));
  }

 private:
  void validate() const {
    if (m_.rows() != m_.cols() || m_.rows() == 0) throw DimensionMismatch("density matrix must be square");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) throw ParameterError("density matrix not Hermitian");
    if (std::abs(m_.trace() - Amplitude(1.0)) > kTolerance) throw ParameterError("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTolerance) throw ParameterError("density matrix is not PSD");
  }

  Matrix m_;
};

inline DensityMatrix density_from_ensemble(std::span<const std::pair<double, StateVector>> branches) {
  if (branches.empty()) throw ParameterError("empty ensemble");
  const auto dim = static_cast<Eigen::Index>(branches.front().second.dimension());
  DensityMatrix::Matrix m = DensityMatrix::Matrix::Zero(dim, dim);
  double total = 0.0;
  for (const auto& [p, s] : branches) {
    if (p < 0.0) throw ParameterError("negative branch probability");
    if (static_cast<Eigen::Index>(s.dimension()) != dim) throw DimensionMismatch("ensemble states differ in size");
    total += p;
    Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(), dim);
    m += p * (v * v.adjoint());
  }
  if (std::abs(total - 1.0) > kTolerance) throw ParameterError("branch probabilities do not sum to 1");
  return DensityMatrix(std::move(m));
}

// ½ Σ |eigenvalues of ρ0 − ρ1|.
inline double trace_distance(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dimension() != rho1.dimension()) throw DimensionMismatch("density matrices differ in dimension");
  Eigen::SelfAdjointEigenSolver<DensityMatrix::Matrix> es(rho0.matrix() - rho1.matrix(), Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

// Reduced state of `keep` after tracing out every other qubit.
inline DensityMatrix partial_trace(const StateVector& state, const Register& keep) {
  detail::check_register(state, keep);
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << keep.width);
  DensityMatrix::Matrix m = DensityMatrix::Matrix::Zero(dim, dim);
  auto amps = state.amplitudes();
  const std::uint64_t rest_mask = ~keep.mask() & ((std::uint64_t{1} << state.num_qubits()) - 1);
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, Amplitude>>> by_rest;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (amps[i] != Amplitude(0.0)) by_rest[i & rest_mask].emplace_back(keep.extract(i), amps[i]);
  }
  for (const auto& [rest, entries] : by_rest) {
    for (const auto& [a, x] : entries) {
      for (const auto& [b, y] : entries) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += x * std::conj(y);
      }
    }
  }
  return DensityMatrix(std::move(m));
}

// One "index real imag" line per nonzero amplitude.
inline std::string dump_state(const StateVector& s, double cutoff = 1e-15) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "qubits " << s.num_qubits() << '\n';
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    const Amplitude a = s.amplitude(i);
    if (std::abs(a) <= cutoff) continue;
    os << i << ' ' << a.real() << ' ' << a.imag() << '\n';
  }
  return os.str();
}

}  // namespace otp::qsim
