// JSON documents for ensembles, protocols, success reports and search results.
//
// Ensemble:
//   {"dims": [2, 2], "ownership": ["A", "B"],
//    "states": [[1, 0, 0, 0], ...], "priors": [0.25, ...], "labels": [...]}
// Protocol:
//   {"resource": {"kind": "none" | "nmes" | "mes", "a": .., "b": .., "parties": ["A", "B"]},
//    "copies": 1,
//    "steps": [[{"party": "A", "subsystems": [0, 2], "dims": [2, 2],
//                "outcomes": [[[v...]], [[v...], [v...]], ...]}, ...], ...],
//    "comm": {"kind": "none"} | {"kind": "one-cbit", "sender": "A", "sender_step": 0,
//             "message": [0, 1, 0, 1], "conditional": [measurement, measurement]}}
// Each outcome is the list of orthonormal real vectors spanning its projector.

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "lpdiscrim/engine.hpp"
#include "lpdiscrim/ensemble.hpp"
#include "lpdiscrim/protocol.hpp"
#include "lpdiscrim/search.hpp"

namespace lpdiscrim {

using Json = nlohmann::json;

// Rounds to 15 significant digits for report output.
double round15(double x);

Json to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const Json& doc);
Ensemble load_ensemble(const std::filesystem::path& path);

Json to_json(const LocalMeasurement& m);
LocalMeasurement measurement_from_json(const Json& doc);
Json to_json(const Protocol& protocol);
Protocol protocol_from_json(const Json& doc);
Protocol load_protocol(const std::filesystem::path& path);

// Sparse table (entries >= 1e-12), decoding map, success with 15 digits.
Json to_json(const SuccessReport& report);

Json to_json(const SearchConfig& config);
Json to_json(const GridSearchResult& result, const SearchConfig& config);
Json to_json(const IctpSearchResult& result, const SearchConfig& config);
Json to_json(const ScheduleResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace lpdiscrim
