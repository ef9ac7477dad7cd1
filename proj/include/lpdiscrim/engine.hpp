// Exact evaluation of a protocol against an ensemble.
//
// Every transcript (all outcome indices of all copies, plus the communicated
// bit) is enumerated with Born-rule probabilities for each hypothesis; a
// transcript is decoded to the state maximizing prior * Pr(t | state).

#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "lpdiscrim/ensemble.hpp"
#include "lpdiscrim/protocol.hpp"

namespace lpdiscrim {

inline constexpr double kPerfectTol = 1e-9;

struct Transcript {
    // copies[c] lists the outcome of each copy-c step in execution order; on
    // copy 0 of a one-cbit protocol the receiver's conditional outcome is last.
    std::vector<std::vector<int>> copies;
    std::optional<int> bit;

    auto operator<=>(const Transcript&) const = default;
    std::string to_string() const;
};

struct SuccessReport {
    std::vector<std::string> labels;
    std::vector<double> priors;
    std::vector<Transcript> transcripts;
    // table[t][i] = Pr(transcript t | state i)
    std::vector<std::vector<double>> table;
    std::vector<int> decoding;
    std::vector<double> per_state_success;
    double success = 0.0;
    bool perfect = false;

    // sum_t max_i prior_i Pr(t|i), recomputed from the table.
    double recompute_success() const;
    // Transcripts with nonzero probability under two or more states.
    std::size_t ambiguous_transcripts() const;
};

SuccessReport evaluate(const Ensemble& ensemble, const Protocol& protocol);

// Plain LP over identical copies: no resource, no communication.
SuccessReport evaluate_multicopy(const Ensemble& ensemble, const Schedule& schedule);

// 1/2 [sin^2((alpha + alpha')/2) + cos^2((alpha - alpha')/2)]
double eq5_formula(double alpha, double alpha_prime);
// cos^2(alpha / 4)
double lp_baseline_formula(double alpha);

}  // namespace lpdiscrim
