#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "richards4/grid.hpp"

namespace richards4 {

/// Named initial profiles in the transformed variable u. Every profile
/// vanishes together with its slope at both walls.
struct InitialCondition {
  enum class Kind { Zero, GaussianLens, Infiltration, RandomSmooth, Custom };

  Kind kind = Kind::GaussianLens;
  double center = 0.5;  ///< lens centre as a fraction of L
  double width = 0.25;  ///< lens / front width as a fraction of L
  double depth = 0.1;   ///< magnitude of the (negative) excursion in u
  std::vector<std::pair<double, double>> table;  ///< (z, u) pairs for Custom

  static InitialCondition zero() { return {Kind::Zero, 0.5, 0.25, 0.0, {}}; }
  static InitialCondition gaussian_lens(double center, double width, double depth) {
    return {Kind::GaussianLens, center, width, depth, {}};
  }
  static InitialCondition infiltration(double width, double depth) {
    return {Kind::Infiltration, 0.5, width, depth, {}};
  }
  static InitialCondition random_smooth(double depth) {
    return {Kind::RandomSmooth, 0.5, 0.25, depth, {}};
  }
};

std::string to_string(InitialCondition::Kind kind);

/// Clamped window 16 z^2 (L - z)^2 / L^4, equal to 1 at mid-column.
double clamped_window(double z, double length);

/// Pointwise sampling of the profile on the interior nodes (the discrete
/// projection). `seed` only affects RandomSmooth.
Field project_initial_condition(const InitialCondition& ic, const Column& column,
                                std::uint64_t seed = 0);

}  // namespace richards4
