#include "seuler/model.hpp"

namespace seuler {

EulerModel::EulerModel(SpaceTriple space, DriftConfig drift, std::optional<NoiseConfig> noise,
                       bool drift_on)
    : Model(space), drift_(drift), noise_(std::move(noise)), drift_on_(drift_on) {
  drift_.validate();
  if (noise_) noise_->ctilde = drift_.ctilde;
}

Evaluation EulerModel::evaluate(const SpectralState& x) const {
  const double w = winf_norm(x, drift_.oversampling);
  Evaluation e;
  e.drift = drift_on_ ? nonlinearity(x) : SpectralState(x.mode_set());
  e.g = drift_.ctilde * w;
  e.f = noise_ ? noise_factor(*noise_, w) : 0.0;
  return e;
}

double EulerModel::growth(const SpectralState& x) const {
  return drift_.ctilde * winf_norm(x, drift_.oversampling);
}

void EulerModel::constrain(SpectralState& x) const { x = leray_project(x); }

ToyModel::ToyModel(SpaceTriple space, std::optional<NoiseConfig> noise)
    : Model(space), noise_(std::move(noise)) {
  if (noise_) noise_->ctilde = 1.0;
}

Evaluation ToyModel::evaluate(const SpectralState& x) const {
  const double r = space().norm(x, Level::plus_one);
  Evaluation e;
  e.drift = r * x;
  e.g = r;
  e.f = noise_ ? noise_factor(*noise_, r) : 0.0;
  return e;
}

std::unique_ptr<Model> make_linear_noise_model(SpaceTriple space, double f) {
  return std::make_unique<CustomModel>(
      space,
      [f](const SpectralState& x) { return Evaluation{SpectralState(x.mode_set()), 0.0, f}; },
      "linear_noise");
}

ModeSetPtr toy_mode_set() {
  static const ModeSetPtr ms = ModeSet::make(2, 1);
  return ms;
}

SpectralState toy_unit_state(const SpaceTriple& space) {
  const auto ms = toy_mode_set();
  SpectralState x(ms);
  // û(±(1,0)) = (0, α): divergence-free, Hermitian.
  x.at(ms->index_of({1, 0, 0}), 1) = 1.0;
  x.at(ms->index_of({-1, 0, 0}), 1) = 1.0;
  x *= 1.0 / space.norm(x, Level::plus_one);
  return x;
}

}  // namespace seuler
