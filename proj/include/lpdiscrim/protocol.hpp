// Discrimination protocols: who measures what on which copy, and the optional
// one-bit message of the incomplete teleportation protocol.
//
// Layout convention: copy 1 carries the ensemble subsystems followed by the
// two resource qubits (if any); later copies carry the ensemble subsystems
// only. For a two-qubit ensemble with a resource this is
// (A state, B state, A resource, B resource).

#pragma once

#include <string>
#include <vector>

#include "lpdiscrim/ensemble.hpp"
#include "lpdiscrim/tensor.hpp"

namespace lpdiscrim {

struct LocalMeasurement {
    std::string party;
    std::vector<int> subsystems;
    std::vector<Projector> outcomes;

    // One rank-1 outcome per orthonormal vector.
    static LocalMeasurement from_basis(std::string party, std::vector<int> subsystems, Dims dims,
                                       const std::vector<Vector>& basis);

    std::size_t outcome_count() const { return outcomes.size(); }
    // Pairwise orthogonality and completeness within 1e-9.
    void validate() const;
};

struct Schedule {
    int copies = 1;
    // steps[c] holds copy c's measurements in execution order; an empty list
    // means nobody measures that copy.
    std::vector<std::vector<LocalMeasurement>> steps;
};

struct CommPlan {
    enum class Kind { None, OneCbit };

    Kind kind = Kind::None;
    std::string sender;
    // Index into steps[0] of the sender's measurement whose outcome is encoded.
    int sender_step = 0;
    // Sender outcome index -> bit.
    std::vector<int> message;
    // Receiver measurement applied after all copy-1 steps, indexed by bit.
    std::vector<LocalMeasurement> conditional;
};

struct Protocol {
    ResourceSpec resource;
    Schedule schedule;
    CommPlan comm;

    // Structural checks only (no layout): measurement validity, copy count,
    // one-bit message totality.
    void validate() const;
    // Full check against an ensemble layout: subsystem ranges, dims and
    // party ownership for every copy.
    void validate_layout(const Dims& dims, const Ownership& ownership) const;
    std::size_t cbits() const { return comm.kind == CommPlan::Kind::OneCbit ? 1 : 0; }
};

// Layout (dims, ownership) of a given copy after the resource is appended.
std::pair<Dims, Ownership> copy_layout(const Dims& dims, const Ownership& ownership,
                                       const ResourceSpec& resource, int copy);

// Two-qubit real vectors in (|00>, |01>, |10>, |11>) order.
std::vector<Vector> bell_vectors();  // phi+, phi-, psi+, psi-
Projector parity_even();             // |00><00| + |11><11|
Projector parity_odd();              // |01><01| + |10><10|
// Maps a Bell outcome index to its parity label (0 even, 1 odd).
int bell_parity(int bell_outcome);

// Alice {|00>, |01>, |10>+|11>, |10>-|11>}, Bob Bell, no communication.
Protocol build_groisman_protocol(const ResourceSpec& resource = ResourceSpec::mes());

// Alice as above; Bob in the alpha'-rotated entangled basis built on the
// {|theta>, |theta'>} frame.
Protocol build_alpha_prime_protocol(double alpha_prime, double theta,
                                    const ResourceSpec& resource = ResourceSpec::mes());

// Each party: {P_even, P_odd} then a Bell measurement on (state, resource).
Protocol build_parity_then_bell(const ResourceSpec& resource);
// Each party: a single Bell measurement on (state, resource).
Protocol build_bell_bell(const ResourceSpec& resource);

// Sign partition: {phi+, psi+} -> 0, {phi-, psi-} -> 1.
std::vector<int> sign_partition();
// The three balanced 2-colorings of the four Bell outcomes (outcome 0 -> bit 0).
std::vector<std::vector<int>> balanced_partitions();
bool is_balanced(const std::vector<int>& message);

// Alice Bell-measures (state, resource); one bit reaches Bob, who measures his
// (state, resource) pair with the measurement selected by that bit.
Protocol build_ictp(const std::vector<int>& message, LocalMeasurement bob_bit0,
                    LocalMeasurement bob_bit1, bool allow_unbalanced = false);

// Two-copy product-basis schedule: Alice {|0>, |1>} on copy 1; Bob
// {|theta>, |theta'>} on copy 1 and the alpha/2-rotated frame on copy 2.
Schedule build_two_copy_schedule(double alpha, double theta);

// LP protocol from one real rotation angle per (copy, party): party p on copy c
// measures its single qubit in {cos t|0> + sin t|1>, -sin t|0> + cos t|1>}.
Protocol build_qubit_lp(const Ensemble& ensemble, const std::vector<std::vector<double>>& angles);

}  // namespace lpdiscrim
