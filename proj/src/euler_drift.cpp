#include "seuler/euler_drift.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>
#include <mutex>

namespace seuler {

SpectralState leray_project(const SpectralState& v) {
  SpectralState out = v;
  const auto& ms = *v.mode_set();
  const int d = ms.dimension();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& k = ms[i];
    Complex kv{};
    for (int c = 0; c < d; ++c) kv += static_cast<double>(k[c]) * v.at(i, c);
    const Complex s = kv / static_cast<double>(ms.norm2(i));
    for (int c = 0; c < d; ++c) out.at(i, c) -= static_cast<double>(k[c]) * s;
  }
  return out;
}

SpectralState advection_triads(const SpectralState& u) {
  const auto& ms = *u.mode_set();
  const auto& tri = ms.triads();
  const int d = ms.dimension();
  SpectralState out(u.mode_set());
  const Complex* c = u.coeffs().data();
  for (std::size_t k = 0; k < ms.size(); ++k) {
    Complex acc[3] = {};
    for (std::size_t t = tri.offsets[k]; t < tri.offsets[k + 1]; ++t) {
      const std::size_t p = tri.p[t];
      const std::size_t q = tri.q[t];
      const auto& qv = ms[q];
      const Complex* up = c + p * d;
      const Complex* uq = c + q * d;
      Complex dot = up[0] * static_cast<double>(qv[0]) + up[1] * static_cast<double>(qv[1]);
      if (d == 3) dot += up[2] * static_cast<double>(qv[2]);
      for (int j = 0; j < d; ++j) acc[j] += dot * uq[j];
    }
    // i (û(p)·q) û(q)
    for (int j = 0; j < d; ++j) out.at(k, j) = Complex{-acc[j].imag(), acc[j].real()};
  }
  return out;
}

namespace {

struct GridPlan {
  fftw_plan plan = nullptr;
  std::size_t points = 0;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans assume SIMD alignment: every buffer comes from Grid below and every
// grid has an even number of points, so field offsets stay aligned.
std::mutex plan_mutex;

const GridPlan& plan_for(int d, int side, int sign) {
  static std::map<std::tuple<int, int, int>, GridPlan> plans;
  std::lock_guard lock(plan_mutex);
  auto& entry = plans[{d, side, sign}];
  if (!entry.plan) {
    std::size_t points = 1;
    int dims[3];
    for (int i = 0; i < d; ++i) {
      dims[i] = side;
      points *= static_cast<std::size_t>(side);
    }
    auto* buf = fftw_alloc_complex(points);
    entry.plan = fftw_plan_dft(d, dims, buf, buf, sign, FFTW_ESTIMATE);
    fftw_free(buf);
    entry.points = points;
  }
  return entry;
}

// Zeroed, FFTW-aligned storage for `fields` grids of `points` values each.
class Grid {
 public:
  Grid(std::size_t fields, std::size_t points)
      : data_(reinterpret_cast<Complex*>(fftw_alloc_complex(fields * points))), points_(points) {
    std::fill_n(data_, fields * points, Complex{});
  }
  ~Grid() { fftw_free(data_); }
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;
  Complex* field(std::size_t f) { return data_ + f * points_; }
  Complex& operator[](std::size_t i) { return data_[i]; }

 private:
  Complex* data_;
  std::size_t points_;
};

void execute(const GridPlan& plan, Complex* data) {
  fftw_execute_dft(plan.plan, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

std::size_t grid_index(const Wavevector& k, int d, int side) {
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) idx = idx * side + static_cast<std::size_t>((k[i] + side) % side);
  return idx;
}

}  // namespace

SpectralState advection(const SpectralState& u) {
  const auto& ms = *u.mode_set();
  const int d = ms.dimension();
  // Products of retained modes reach |k|_inf <= 2n; with more than 3n points
  // per side none of them aliases back onto a retained mode.
  const int side = 3 * ms.truncation() + 2 - (3 * ms.truncation()) % 2;
  const auto& inv = plan_for(d, side, FFTW_BACKWARD);
  const auto& fwd = plan_for(d, side, FFTW_FORWARD);
  const std::size_t P = inv.points;

  Grid vel(d, P), grad(d * d, P);
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const std::size_t x = grid_index(ms[m], d, side);
    for (int j = 0; j < d; ++j) {
      const Complex c = u.at(m, j);
      vel[j * P + x] = c;
      for (int i = 0; i < d; ++i) grad[(i * d + j) * P + x] = Complex{0.0, static_cast<double>(ms[m][i])} * c;
    }
  }
  for (int f = 0; f < d; ++f) execute(inv, vel.field(f));
  for (int f = 0; f < d * d; ++f) execute(inv, grad.field(f));

  Grid prod(d, P);
  for (int j = 0; j < d; ++j) {
    Complex* out = prod.field(j);
    for (int i = 0; i < d; ++i) {
      const Complex* a = vel.field(i);
      const Complex* b = grad.field(i * d + j);
      for (std::size_t x = 0; x < P; ++x) out[x] += a[x] * b[x];
    }
    execute(fwd, out);
  }
  SpectralState out(u.mode_set());
  const double scale = 1.0 / static_cast<double>(P);
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const std::size_t x = grid_index(ms[m], d, side);
    for (int j = 0; j < d; ++j) out.at(m, j) = scale * prod[j * P + x];
  }
  return out;
}

SpectralState nonlinearity(const SpectralState& u) {
  SpectralState b = leray_project(advection(u));
  b *= -1.0;
  return b;
}

GridExtrema grid_extrema(const SpectralState& u, int oversampling) {
  if (oversampling < 2) throw ConfigError("grid oversampling must be >= 2");
  const auto& ms = *u.mode_set();
  const int d = ms.dimension();
  const int side = 2 * oversampling * ms.truncation();
  const auto& plan = plan_for(d, side, FFTW_BACKWARD);
  const std::size_t P = plan.points;

  // Fields 0..d-1 are u_j, field d + i*d + j is ∂_i u_j. The fields are real,
  // so two of them share one transform: field f goes to the real (f even) or
  // imaginary (f odd) part of buffer f/2.
  const int nfields = d + d * d;
  const int nbufs = (nfields + 1) / 2;
  Grid buf(nbufs, P);
  auto add = [&](int f, std::size_t x, Complex c) {
    buf[(f / 2) * P + x] += (f % 2) ? Complex{-c.imag(), c.real()} : c;
  };
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const auto& k = ms[m];
    const std::size_t x = grid_index(k, d, side);
    for (int j = 0; j < d; ++j) {
      const Complex c = u.at(m, j);
      add(j, x, c);
      for (int i = 0; i < d; ++i) add(d + i * d + j, x, Complex{0.0, static_cast<double>(k[i])} * c);
    }
  }
  for (int b = 0; b < nbufs; ++b) execute(plan, buf.field(b));

  auto value = [&](int f, std::size_t x) {
    const Complex v = buf[(f / 2) * P + x];
    return (f % 2) ? v.imag() : v.real();
  };
  double v2max = 0.0, gmax = 0.0;
  for (std::size_t x = 0; x < P; ++x) {
    double v2 = 0.0;
    for (int j = 0; j < d; ++j) v2 += value(j, x) * value(j, x);
    v2max = std::max(v2max, v2);
    for (int f = d; f < nfields; ++f) gmax = std::max(gmax, std::abs(value(f, x)));
  }
  return {std::sqrt(v2max), gmax};
}

double winf_norm(const SpectralState& u, int oversampling) {
  const auto e = grid_extrema(u, oversampling);
  return std::max(e.sup_velocity, e.sup_gradient);
}

double g_of(const SpectralState& u, const DriftConfig& cfg) {
  return cfg.ctilde * winf_norm(u, cfg.oversampling);
}

double drift_pairing(const SpectralState& u, const SpaceTriple& space) {
  return space.inner_product(nonlinearity(u), u, Level::plus_one);
}

SpectralState random_velocity(const ModeSetPtr& modes, Rng& rng, double decay) {
  return leray_project(random_state(modes, rng, decay));
}

SpectralState sample_velocity(const ModeSetPtr& modes, Rng& rng) {
  const double decay = 6.0 * uniform01(rng);
  SpectralState u = random_velocity(modes, rng, decay);
  if (uniform01(rng) < 1.0 / 3.0) {
    const double keep = 0.05 + 0.45 * uniform01(rng);
    for (std::size_t i = 0; i < modes->size(); ++i) {
      const std::size_t j = modes->negative(i);
      if (j < i) continue;
      if (uniform01(rng) < keep) continue;
      for (int c = 0; c < modes->dimension(); ++c) u.at(i, c) = u.at(j, c) = Complex{};
    }
  }
  return u;
}

double drift_ratio(const SpectralState& u, const SpaceTriple& space, int oversampling) {
  const double w = winf_norm(u, oversampling);
  const double e1 = space.norm_squared(u, Level::plus_one);
  if (w == 0.0 || e1 == 0.0) return std::nan("");
  return std::abs(drift_pairing(u, space)) / (w * e1);
}

Calibration calibrate_ctilde(std::span<const SpectralState> samples, const SpaceTriple& space,
                             int oversampling) {
  Calibration cal;
  for (const auto& u : samples) {
    const double r = drift_ratio(u, space, oversampling);
    if (std::isnan(r)) {
      ++cal.skipped;
      continue;
    }
    ++cal.used;
    cal.max_ratio = std::max(cal.max_ratio, r);
  }
  if (cal.used == 0) throw ConfigError("C~ calibration: every sample is degenerate");
  cal.ctilde = ctilde_safety_factor * cal.max_ratio;
  if (!(cal.ctilde > 0.0)) throw ConfigError("C~ calibration: drift pairing vanished on all samples");
  return cal;
}

Calibration calibrate_ctilde(std::span<const ModeSetPtr> mode_sets, const SpaceTriple& space,
                             int oversampling, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 100) throw ConfigError("C~ calibration needs at least 100 samples");
  if (mode_sets.empty()) throw ConfigError("C~ calibration needs at least one mode set");
  std::vector<SpectralState> samples;
  samples.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    Rng rng(derive_seed(seed, {0xCA11B, i}));
    samples.push_back(sample_velocity(mode_sets[i % mode_sets.size()], rng));
  }
  return calibrate_ctilde(samples, space, oversampling);
}

}  // namespace seuler
