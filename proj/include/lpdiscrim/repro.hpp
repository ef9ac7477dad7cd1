// Reproduction cases: each case runs library operations at given parameters
// and checks the resulting numbers against closed-form or claimed values.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpdiscrim/serialize.hpp"

namespace lpdiscrim {

struct ReproOptions {
    std::string case_id;
    std::optional<double> a2;          // a^2 of the resource or family coefficient
    std::optional<double> ab;          // resource product ab (alternative to a2)
    std::optional<double> c2;          // c^2 for eq8
    std::optional<double> alpha;
    std::optional<double> alpha_prime;
    std::optional<int> copies;
    std::optional<double> resolution;
    std::optional<std::vector<int>> triple;  // zero-based indices into eq8
    std::optional<std::string> basis;        // ensemble file
    std::optional<std::string> protocol;     // protocol file (evaluate case)
    bool allow_coincident = false;
    std::uint64_t seed = 0;
};

struct ClaimRow {
    std::string case_id;
    std::string claim;
    double paper_value = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double seconds = 0.0;
};

struct CaseReport {
    std::vector<ClaimRow> rows;
    Json details = Json::object();

    bool passed() const;
};

// Case ids accepted by run_case, in claim-matrix order.
const std::vector<std::string>& case_ids();

// Throws std::invalid_argument for unknown ids or invalid parameters.
CaseReport run_case(const ReproOptions& options);
// Every case at default parameters.
CaseReport emit_claim_matrix(std::uint64_t seed = 0);

std::string render_json(const CaseReport& report, double seconds);
std::string render_csv(const CaseReport& report);

}  // namespace lpdiscrim
