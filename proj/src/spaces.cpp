#include "seuler/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seuler {

ModeSet::ModeSet(int dimension, int truncation) : dim_(dimension), n_(truncation) {
  if (dim_ != 2 && dim_ != 3) throw ConfigError("mode set dimension must be 2 or 3");
  if (n_ < 1) throw ConfigError("truncation must be >= 1");
  const int side = 2 * n_ + 1;
  std::size_t dense_size = 1;
  for (int i = 0; i < dim_; ++i) dense_size *= static_cast<std::size_t>(side);
  dense_.assign(dense_size, npos);

  Wavevector k{0, 0, 0};
  auto emit = [&] {
    if (k[0] == 0 && k[1] == 0 && k[2] == 0) return;
    dense_[dense_index(k)] = modes_.size();
    modes_.push_back(k);
    norm2_.push_back(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    supnorm_.push_back(std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])}));
  };
  for (k[0] = -n_; k[0] <= n_; ++k[0]) {
    for (k[1] = -n_; k[1] <= n_; ++k[1]) {
      if (dim_ == 2) {
        k[2] = 0;
        emit();
      } else {
        for (k[2] = -n_; k[2] <= n_; ++k[2]) emit();
      }
    }
  }
  neg_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    neg_[i] = index_of({-m[0], -m[1], -m[2]});
  }
}

std::size_t ModeSet::dense_index(const Wavevector& k) const {
  const std::size_t side = static_cast<std::size_t>(2 * n_ + 1);
  std::size_t idx = 0;
  for (int i = 0; i < dim_; ++i) idx = idx * side + static_cast<std::size_t>(k[i] + n_);
  return idx;
}

std::size_t ModeSet::index_of(const Wavevector& k) const {
  for (int i = 0; i < dim_; ++i)
    if (k[i] < -n_ || k[i] > n_) return npos;
  if (dim_ == 2 && k[2] != 0) return npos;
  return dense_[dense_index(k)];
}

const TriadTable& ModeSet::triads() const {
  std::call_once(triad_once_, [this] {
    auto t = std::make_unique<TriadTable>();
    t->offsets.reserve(modes_.size() + 1);
    t->offsets.push_back(0);
    for (const auto& k : modes_) {
      for (std::size_t ip = 0; ip < modes_.size(); ++ip) {
        const auto& p = modes_[ip];
        const std::size_t iq = index_of({k[0] - p[0], k[1] - p[1], k[2] - p[2]});
        if (iq == npos) continue;
        t->p.push_back(static_cast<std::uint32_t>(ip));
        t->q.push_back(static_cast<std::uint32_t>(iq));
      }
      t->offsets.push_back(t->p.size());
    }
    triads_ = std::move(t);
  });
  return *triads_;
}

SpectralState::SpectralState(ModeSetPtr modes) : modes_(std::move(modes)) {
  c_.assign(modes_->size() * stride(), Complex{});
}

SpectralState::SpectralState(ModeSetPtr modes, std::vector<Complex> coeffs)
    : modes_(std::move(modes)), c_(std::move(coeffs)) {
  if (c_.size() != modes_->size() * stride())
    throw ConfigError("coefficient count " + std::to_string(c_.size()) +
                      " does not match mode set (" + std::to_string(modes_->size() * stride()) + ")");
}

bool SpectralState::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](Complex z) { return z == Complex{}; });
}

bool SpectralState::is_finite() const {
  return std::all_of(c_.begin(), c_.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double SpectralState::hermitian_defect() const {
  double worst = 0.0;
  const int d = dimension();
  for (std::size_t i = 0; i < mode_count(); ++i) {
    const std::size_t j = modes_->negative(i);
    for (int c = 0; c < d; ++c) worst = std::max(worst, std::abs(at(j, c) - std::conj(at(i, c))));
  }
  return worst;
}

double SpectralState::divergence_defect() const {
  double worst = 0.0;
  double scale = 0.0;
  const int d = dimension();
  for (std::size_t i = 0; i < mode_count(); ++i) {
    const auto& k = (*modes_)[i];
    Complex div{};
    double mag2 = 0.0;
    for (int c = 0; c < d; ++c) {
      div += static_cast<double>(k[c]) * at(i, c);
      mag2 += std::norm(at(i, c));
    }
    worst = std::max(worst, std::abs(div));
    scale = std::max(scale, std::sqrt(mag2 * modes_->norm2(i)));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

void SpectralState::require_same(const SpectralState& o) const {
  if (!modes_ || !o.modes_ || !modes_->same_as(*o.modes_))
    throw ConfigError("spectral states live on different mode sets");
}

SpectralState& SpectralState::operator+=(const SpectralState& o) {
  require_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralState& SpectralState::operator-=(const SpectralState& o) {
  require_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralState& SpectralState::operator*=(double a) {
  for (auto& z : c_) z *= a;
  return *this;
}

void SpectralState::axpy(double a, const SpectralState& o) {
  require_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * o.c_[i];
}

bool SpectralState::operator==(const SpectralState& o) const {
  return modes_ && o.modes_ && modes_->same_as(*o.modes_) && c_ == o.c_;
}

SpaceTriple::SpaceTriple(int dimension, int sobolev_order) : dim_(dimension), s_(sobolev_order) {
  if (dim_ != 2 && dim_ != 3) throw ConfigError("space dimension must be 2 or 3");
  if (s_ < 1) throw ConfigError("Sobolev order must be >= 1");
}

double SpaceTriple::weight(const Wavevector& k, Level level) const {
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  return ipow(1.0 + k2, exponent(level));
}

void SpaceTriple::require_compatible(const SpectralState& x) const {
  if (!x.mode_set() || x.dimension() != dim_)
    throw ConfigError("state dimension does not match the space triple");
}

double weighted_inner(const SpectralState& x, const SpectralState& y, int exponent) {
  if (!x.mode_set() || !y.mode_set() || !x.mode_set()->same_as(*y.mode_set()))
    throw ConfigError("inner product of states on different mode sets");
  const auto& ms = *x.mode_set();
  const int d = ms.dimension();
  double acc = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    double term = 0.0;
    for (int c = 0; c < d; ++c) {
      const Complex a = x.at(i, c);
      const Complex b = y.at(i, c);
      term += a.real() * b.real() + a.imag() * b.imag();
    }
    acc += ipow(1.0 + ms.norm2(i), exponent) * term;
  }
  return acc;
}

double weighted_norm(const SpectralState& x, int exponent) {
  return std::sqrt(weighted_inner(x, x, exponent));
}

double SpaceTriple::norm_squared(const SpectralState& x, Level level) const {
  require_compatible(x);
  return weighted_inner(x, x, exponent(level));
}

double SpaceTriple::norm(const SpectralState& x, Level level) const {
  return std::sqrt(norm_squared(x, level));
}

double SpaceTriple::inner_product(const SpectralState& x, const SpectralState& y,
                                  Level level) const {
  require_compatible(x);
  require_compatible(y);
  return weighted_inner(x, y, exponent(level));
}

SpectralState project(const SpectralState& x, int m) {
  if (m < 1) throw ConfigError("projection order must be >= 1");
  SpectralState out = x;
  const auto& ms = *x.mode_set();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms.sup_norm(i) <= m) continue;
    for (int c = 0; c < ms.dimension(); ++c) out.at(i, c) = Complex{};
  }
  return out;
}

SpectralState transfer(const SpectralState& x, const ModeSetPtr& target) {
  if (target->dimension() != x.dimension())
    throw ConfigError("transfer between mode sets of different dimension");
  SpectralState out(target);
  const auto& src = *x.mode_set();
  for (std::size_t i = 0; i < target->size(); ++i) {
    const std::size_t j = src.index_of((*target)[i]);
    if (j == ModeSet::npos) continue;
    for (int c = 0; c < target->dimension(); ++c) out.at(i, c) = x.at(j, c);
  }
  return out;
}

SpectralState random_state(const ModeSetPtr& modes, Rng& rng, double decay) {
  SpectralState out(modes);
  const int d = modes->dimension();
  for (std::size_t i = 0; i < modes->size(); ++i) {
    const std::size_t j = modes->negative(i);
    if (j < i) continue;  // filled from its partner
    const double scale = std::pow(static_cast<double>(modes->norm2(i)), -0.5 * decay);
    for (int c = 0; c < d; ++c) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      out.at(i, c) = scale * Complex{re, im};
      out.at(j, c) = std::conj(out.at(i, c));
    }
  }
  return out;
}

}  // namespace seuler
