#pragma once

/**
 * @file config.hpp
 * @brief Run configuration: JSON key tree, defaults and validation.
 *
 * Schema (every key optional, defaults in brackets):
 *
 *     constitutive: alpha_vg [2], n_vg [2], s_res [0.05], p_reg [-40],
 *                   a_min [1e-4], k_floor [1e-4]
 *     grid:         length [1], n_cells [200], gravity_sign [1]
 *     stepping:     h [0.01], gamma [0.1], t_end [1], newton_tol [1e-6],
 *                   newton_max_iter [30], damping [0.5], lag_gravity [false]
 *     ic:           profile [gaussian_lens] (zero | gaussian_lens |
 *                   infiltration | random_smooth | custom), center [0.5],
 *                   width [0.25], depth [0.1], table [[z, u], ...]
 *     output:       directory ["out"], stride [1]
 *     seed:         [0]
 */

#include <cstdint>
#include <string>

#include "richards4/constitutive.hpp"
#include "richards4/grid.hpp"
#include "richards4/initial_conditions.hpp"
#include "richards4/stepper.hpp"

namespace richards4 {

/// Parse or validation failure; key() is the dotted path of the offending entry.
class ConfigError : public InvalidParameter {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : InvalidParameter(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct GridConfig {
  double length = 1.0;
  int n_cells = 200;
  int gravity_sign = 1;
};

struct OutputConfig {
  std::string directory = "out";
  int stride = 1;
};

struct RunConfig {
  VanGenuchtenParams constitutive;
  GridConfig grid;
  StepConfig stepping;
  InitialCondition ic;
  OutputConfig output;
  std::uint64_t seed = 0;

  Column column() const { return {grid.length, grid.n_cells, grid.gravity_sign}; }
};

/// Parses a JSON document, fills defaults and validates every constraint.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical JSON dump of the fully resolved configuration.
std::string to_json(const RunConfig& cfg);
/// FNV-1a hash (hex) of to_json(cfg), ignoring output.directory.
std::string config_hash(const RunConfig& cfg);

}  // namespace richards4
