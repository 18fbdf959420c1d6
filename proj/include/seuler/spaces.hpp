#pragma once

// Weighted Fourier sequence spaces E_{-1} ⊃ E_0 ⊃ E_1 on the d-torus and the
// Galerkin projectors onto cube truncations |k|_inf <= m.

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "seuler/rng.hpp"

namespace seuler {

using Complex = std::complex<double>;
using Wavevector = std::array<int, 3>;

/// Raised for inconsistent configurations: mismatched mode sets, invalid
/// parameters, assumptions that cannot be satisfied.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ModeSet;

/// Index table of all triads p + q = k with p, q, k retained. Built once per
/// mode set and read-only afterwards.
struct TriadTable {
  std::vector<std::size_t> offsets;  // size modes + 1, CSR layout over k
  std::vector<std::uint32_t> p;
  std::vector<std::uint32_t> q;
};

/// Integer wavevectors 0 < |k|_inf <= n in lexicographic order.
class ModeSet {
 public:
  ModeSet(int dimension, int truncation);
  ModeSet(const ModeSet&) = delete;
  ModeSet& operator=(const ModeSet&) = delete;

  static std::shared_ptr<const ModeSet> make(int dimension, int truncation) {
    return std::make_shared<const ModeSet>(dimension, truncation);
  }

  int dimension() const { return dim_; }
  int truncation() const { return n_; }
  std::size_t size() const { return modes_.size(); }

  const Wavevector& operator[](std::size_t i) const { return modes_[i]; }
  std::span<const Wavevector> modes() const { return modes_; }

  /// |k|^2 (Euclidean).
  int norm2(std::size_t i) const { return norm2_[i]; }
  /// |k|_inf.
  int sup_norm(std::size_t i) const { return supnorm_[i]; }

  /// Index of k in this set, or npos when k is not retained.
  std::size_t index_of(const Wavevector& k) const;
  /// Index of -k.
  std::size_t negative(std::size_t i) const { return neg_[i]; }

  const TriadTable& triads() const;

  bool same_as(const ModeSet& other) const {
    return this == &other || (dim_ == other.dim_ && n_ == other.n_);
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t dense_index(const Wavevector& k) const;

  int dim_;
  int n_;
  std::vector<Wavevector> modes_;
  std::vector<int> norm2_;
  std::vector<int> supnorm_;
  std::vector<std::size_t> neg_;
  std::vector<std::size_t> dense_;

  mutable std::once_flag triad_once_;
  mutable std::unique_ptr<TriadTable> triads_;
};

using ModeSetPtr = std::shared_ptr<const ModeSet>;

/// Vector-valued Fourier coefficients, d complex components per retained
/// wavevector, stored mode-major.
class SpectralState {
 public:
  SpectralState() = default;
  explicit SpectralState(ModeSetPtr modes);
  SpectralState(ModeSetPtr modes, std::vector<Complex> coeffs);

  const ModeSetPtr& mode_set() const { return modes_; }
  int dimension() const { return modes_->dimension(); }
  std::size_t mode_count() const { return modes_->size(); }

  Complex& at(std::size_t mode, int comp) { return c_[mode * stride() + comp]; }
  const Complex& at(std::size_t mode, int comp) const { return c_[mode * stride() + comp]; }

  std::span<Complex> coeffs() { return c_; }
  std::span<const Complex> coeffs() const { return c_; }

  bool is_zero() const;
  bool is_finite() const;
  /// max |c(-k) - conj(c(k))| over all coefficients.
  double hermitian_defect() const;
  /// max |k . c(k)| / max(|k| |c(k)|) over modes, 0 for the zero state.
  double divergence_defect() const;

  SpectralState& operator+=(const SpectralState& o);
  SpectralState& operator-=(const SpectralState& o);
  SpectralState& operator*=(double a);
  /// this += a * o
  void axpy(double a, const SpectralState& o);

  friend SpectralState operator+(SpectralState a, const SpectralState& b) { return a += b; }
  friend SpectralState operator-(SpectralState a, const SpectralState& b) { return a -= b; }
  friend SpectralState operator*(double s, SpectralState a) { return a *= s; }

  bool operator==(const SpectralState& o) const;

 private:
  std::size_t stride() const { return static_cast<std::size_t>(modes_->dimension()); }
  void require_same(const SpectralState& o) const;

  ModeSetPtr modes_;
  std::vector<Complex> c_;
};

enum class Level : int { minus_one = -1, zero = 0, plus_one = 1 };

/// Weight family w_r(k) = (1 + |k|^2)^r for r in {s-1, s, s+1}.
/// Interpolation ‖v‖_0 <= ‖v‖_1^{1/2} ‖v‖_{-1}^{1/2} holds with M = 1.
class SpaceTriple {
 public:
  SpaceTriple(int dimension, int sobolev_order);

  int dimension() const { return dim_; }
  int sobolev_order() const { return s_; }
  static constexpr double theta = 0.5;
  static constexpr double interpolation_constant = 1.0;

  int exponent(Level level) const { return s_ + static_cast<int>(level); }
  double weight(const Wavevector& k, Level level) const;

  double norm(const SpectralState& x, Level level) const;
  double norm_squared(const SpectralState& x, Level level) const;
  double inner_product(const SpectralState& x, const SpectralState& y, Level level) const;

 private:
  void require_compatible(const SpectralState& x) const;

  int dim_;
  int s_;
};

/// Weighted pairing Re Σ (1+|k|^2)^r conj(x_k)·y_k for an arbitrary integer
/// exponent r; r = 0 is the flat L² pairing.
double weighted_inner(const SpectralState& x, const SpectralState& y, int exponent);
double weighted_norm(const SpectralState& x, int exponent);

/// Zero every coefficient with |k|_inf > m.
SpectralState project(const SpectralState& x, int m);

/// Copy coefficients onto another mode set of the same dimension; modes absent
/// from the target are dropped, new modes are zero.
SpectralState transfer(const SpectralState& x, const ModeSetPtr& target);

/// Random Hermitian-symmetric state with coefficient scale |k|^{-decay}.
SpectralState random_state(const ModeSetPtr& modes, Rng& rng, double decay = 0.0);

/// Integer power by repeated squaring; weights are evaluated through this.
constexpr double ipow(double base, int e) {
  double r = 1.0;
  bool inv = e < 0;
  unsigned u = static_cast<unsigned>(inv ? -e : e);
  while (u) {
    if (u & 1U) r *= base;
    base *= base;
    u >>= 1U;
  }
  return inv ? 1.0 / r : r;
}

}  // namespace seuler
