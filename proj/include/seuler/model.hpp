#pragma once

// Galerkin SDE dX = b_n(X) dt + σ_n(X) dW with radial noise σ(x) = f(x) x.
// A model supplies b_n, the drift-growth function g and the noise factor f.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "seuler/euler_drift.hpp"
#include "seuler/noise.hpp"
#include "seuler/spaces.hpp"

namespace seuler {

struct Evaluation {
  SpectralState drift;  // b_n(x)
  double g = 0.0;       // drift-growth function
  double f = 0.0;       // σ_n(x) = f x
};

class Model {
 public:
  explicit Model(SpaceTriple space) : space_(space) {}
  virtual ~Model() = default;

  const SpaceTriple& space() const { return space_; }
  virtual Evaluation evaluate(const SpectralState& x) const = 0;
  /// g(x) alone; cheaper than evaluate() where the drift is expensive.
  virtual double growth(const SpectralState& x) const { return evaluate(x).g; }
  /// Projection back onto the model's state manifold after a step.
  virtual void constrain(SpectralState& /*x*/) const {}
  /// Noise constants, when the noise is on and they have been derived.
  virtual const NoiseConfig* noise() const { return nullptr; }
  virtual std::string name() const = 0;

  SpectralState diffusion(const SpectralState& x, double f) const { return f * x; }

 private:
  SpaceTriple space_;
};

/// Spectral Euler drift with g = C~ ‖u‖_{W^{1,∞}} and f = c(1 + ‖u‖²_{W^{1,∞}})^{β/2}.
class EulerModel final : public Model {
 public:
  EulerModel(SpaceTriple space, DriftConfig drift, std::optional<NoiseConfig> noise,
             bool drift_on = true);

  Evaluation evaluate(const SpectralState& x) const override;
  double growth(const SpectralState& x) const override;
  void constrain(SpectralState& x) const override;
  const NoiseConfig* noise() const override { return noise_ ? &*noise_ : nullptr; }
  std::string name() const override { return "euler"; }
  const DriftConfig& drift_config() const { return drift_; }

 private:
  DriftConfig drift_;
  std::optional<NoiseConfig> noise_;
  bool drift_on_;
};

/// dX = ‖X‖_{E_1} X dt + c(1 + ‖X‖²_{E_1})^{β/2} X dW; g = ‖x‖_{E_1}, so C~ = 1.
/// In the noise-free case ‖X_t‖ = r0 / (1 - r0 t).
class ToyModel final : public Model {
 public:
  ToyModel(SpaceTriple space, std::optional<NoiseConfig> noise);

  Evaluation evaluate(const SpectralState& x) const override;
  double growth(const SpectralState& x) const override { return space().norm(x, Level::plus_one); }
  const NoiseConfig* noise() const override { return noise_ ? &*noise_ : nullptr; }
  std::string name() const override { return "toy_superlinear"; }

 private:
  std::optional<NoiseConfig> noise_;
};

/// Model assembled from a callable; used for linear and degenerate cases.
class CustomModel final : public Model {
 public:
  using Fn = std::function<Evaluation(const SpectralState&)>;
  CustomModel(SpaceTriple space, Fn fn, std::string label = "custom")
      : Model(space), fn_(std::move(fn)), label_(std::move(label)) {}

  Evaluation evaluate(const SpectralState& x) const override { return fn_(x); }
  std::string name() const override { return label_; }

 private:
  Fn fn_;
  std::string label_;
};

/// b ≡ 0 and σ(x) = f x with constant f (f = 0 switches the noise off).
std::unique_ptr<Model> make_linear_noise_model(SpaceTriple space, double f);

/// The toy model's canonical state space: the 2D mode set with n = 1.
ModeSetPtr toy_mode_set();
/// Divergence-free real unit vector (in E_1) on modes ±(1,0).
SpectralState toy_unit_state(const SpaceTriple& space);

}  // namespace seuler
