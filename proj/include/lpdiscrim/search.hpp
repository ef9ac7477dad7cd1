// Protocol search: exhaustive angle grids over real qubit bases, multi-copy
// schedule construction for product bases, one-bit teleportation protocols
// and a probe of local protocols with an entangled resource.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpdiscrim/engine.hpp"
#include "lpdiscrim/ensemble.hpp"
#include "lpdiscrim/protocol.hpp"

namespace lpdiscrim {

struct DimensionProfile {
    std::vector<int> dims;  // local dimension per party

    void validate() const;
    static DimensionProfile of(const Ensemble& ensemble);
};

struct SearchConfig {
    double resolution = 1e-3;        // angle step for qubit grids (radians)
    double probe_resolution = 0.0;   // 4-angle probe grids; 0 picks pi/40
    int max_copies = 8;
    std::uint64_t seed = 0;          // only permutes the order in which chunks are visited
    double budget_seconds = 600.0;
    int random_probes = 400;
    std::vector<Vector> extra_candidates;

    void validate() const;
    // Caps the budget with LPDISCRIM_BUDGET_SECS when set.
    SearchConfig with_env_budget() const;
};

// Raised when a constructive search exhausts its pool or budget.
class SearchFailure : public std::runtime_error {
public:
    SearchFailure(const std::string& what, std::vector<std::string> frontier)
        : std::runtime_error(what), frontier_(std::move(frontier)) {}
    const std::vector<std::string>& frontier() const { return frontier_; }

private:
    std::vector<std::string> frontier_;
};

// Copies sufficient for an orthogonal product basis: x + 1 with
// x = ceil((prod d_i - sum (d_i - 1)) / m).
int copy_bound(const DimensionProfile& profile);

struct GridSearchResult {
    Protocol protocol;
    std::vector<std::vector<double>> angles;  // [copy][party]
    double success = 0.0;      // engine value of `protocol`
    double scan_value = 0.0;   // kernel value at the same grid point
    std::size_t grid_size = 0;  // angle samples per party
    std::uint64_t points = 0;  // protocols scored
    bool complete = false;     // whole grid covered within budget
    double seconds = 0.0;
};

// Exhaustive grid over one real rotation angle per (copy, party) on an
// ensemble with exactly one qubit per party. Copies are interchangeable, so
// multi-copy grids run over multisets of per-copy settings.
GridSearchResult grid_search_lp(const Ensemble& ensemble, int copies, const SearchConfig& config);

struct ScheduleResult {
    Schedule schedule;
    int copies = 0;
    int bound = 0;
    SuccessReport report;
};

// Builds a fixed multi-copy schedule that perfectly distinguishes a complete
// orthogonal product basis, verified by the engine. Throws SearchFailure if
// no schedule within the copy bound is found.
ScheduleResult construct_multicopy_schedule(const Ensemble& basis, const SearchConfig& config);

struct IctpSearchResult {
    Protocol protocol;
    double success = 0.0;
    bool perfect = false;
    std::vector<int> partition;
    std::size_t candidates = 0;  // distinct conditional bases tried per bit
    // Best value reached per balanced partition, for failure reports.
    std::vector<std::string> frontier;
};

// Searches the message partition and both conditional bases for Bob in the
// one-bit teleportation setting on two-qubit states.
IctpSearchResult find_ictp_protocol(const Ensemble& ensemble, const SearchConfig& config);

struct LpseProbeResult {
    double paper_value = 0.0;     // 2/3 + 2/3 ab for three states, 1/2 + ab for four
    double achieved = 0.0;        // parity-then-Bell protocol
    double probe_max = 0.0;       // best probed LP protocol
    std::uint64_t probes = 0;
    Protocol best_probe;
};

LpseProbeResult lpse_optimality_probe(const Ensemble& bell_states, const ResourceSpec& resource,
                                      const SearchConfig& config);

// Completes orthonormal vectors to a full basis (Gram-Schmidt over e_0..e_{n-1}).
std::vector<Vector> complete_basis(const std::vector<Vector>& vectors, Eigen::Index dim);

}  // namespace lpdiscrim
