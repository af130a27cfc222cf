#pragma once

#include "darkmeter/attenuation.hpp"
#include "darkmeter/evidence.hpp"
#include "darkmeter/simulator.hpp"
#include "darkmeter/sweep.hpp"

#include <json.hpp>

#include <string>

namespace darkmeter {

using Json = nlohmann::ordered_json;

/*
 * Parses a SimConfig document. Every field is optional and defaults to the
 * SimConfig defaults; unknown keys and wrongly typed values are rejected with
 * an InputError carrying the line and dotted field path.
 */
SimConfig sim_config_from_json_text(const std::string& text, bool* seed_given = nullptr);
Json to_json(const SimConfig& config);

Json to_json(const PriorSpec& prior);
Json to_json(const PosteriorSummary& summary);
Json to_json(const SamplerDiagnostics& diagnostics);
Json to_json(const LsSolution& solution);
Json to_json(const GaussianEstimate& estimate);
Json to_json(const PowerLawFit& fit);

} // namespace darkmeter
