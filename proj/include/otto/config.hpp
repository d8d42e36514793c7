// config.hpp: JSON experiment configuration.
//
// Schema (all keys optional; unknown keys are rejected):
//   beta_H, beta_C          inverse temperatures
//   hot, cold               rate models, {"model": kind, ...parameters}
//                           constant: k; fermi_power: k, n; bose_power: k, n, eps_floor;
//                           lorentzian: gamma, sigma, eps_bar; gaussian_x: k, x_bar
//   mode                    "E", "R", "A" or "H"
//   box                     {eps_min, eps_max, accelerator_feasibility}
//   seed, threads
//   simulate, sweep_emp, sweep_cmp, sweep_finite_time, sweep_quench,
//   expansion, verify       per-command sections, see default_config()
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "otto/thermal.hpp"

namespace otto::config {

using Json = nlohmann::ordered_json;

Json default_config();

// Parses JSON text; syntax errors raise ConfigError with line and column.
Json parse_text(const std::string& text, const std::string& source);

// Reads and parses a file.
Json load_file(const std::string& path);

// Merges a user document over the defaults. Unknown keys and type mismatches
// raise ConfigError naming the dotted key path.
Json resolve(const Json& user);

// Applies "dotted.key=value" to a resolved document. The value is parsed as
// JSON when possible and taken as a string otherwise.
void apply_override(Json& resolved, const std::string& assignment);

// file (may be empty) + overrides -> validated, resolved document.
Json build(const std::string& path, const std::vector<std::string>& overrides);

RateModel rate_model_from_json(const Json& j, const std::string& where);
// "F0".."F9", "B0".."B9" shorthand or a model object.
RateModel rate_model_from_tag_or_json(const Json& j, const std::string& where);
Json rate_model_to_json(const RateModel& model);

BathPair baths(const Json& cfg);
ConstraintBox box(const Json& cfg);
OperatingMode mode(const Json& cfg);

}  // namespace otto::config
