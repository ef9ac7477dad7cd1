#include "lpdiscrim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lpdiscrim {

namespace {

Vector ket(std::initializer_list<double> amps) {
    Vector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index k = 0;
    for (double x : amps) v[k++] = x;
    return v;
}

Vector kron(const Vector& lhs, const Vector& rhs) {
    Vector out(lhs.size() * rhs.size());
    for (Eigen::Index i = 0; i < lhs.size(); ++i) out.segment(i * rhs.size(), rhs.size()) = lhs[i] * rhs;
    return out;
}

// State qubit of `party` paired with its resource qubit: (0, 2) for A, (1, 3) for B.
constexpr int kAliceState = 0, kBobState = 1, kAliceResource = 2, kBobResource = 3;

std::vector<Vector> alice_bell_basis() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {ket({1, 0, 0, 0}), ket({0, 1, 0, 0}), ket({0, 0, r, r}), ket({0, 0, r, -r})};
}

void check_two_party_two_qubit_resource(const ResourceSpec& resource) {
    resource.validate();
    if (resource.first_party != "A" || resource.second_party != "B") {
        throw std::invalid_argument("builder expects the resource shared as (A, B)");
    }
}

Protocol single_copy(ResourceSpec resource, std::vector<LocalMeasurement> steps) {
    Protocol p;
    p.resource = std::move(resource);
    p.schedule.copies = 1;
    p.schedule.steps = {std::move(steps)};
    p.validate();
    return p;
}

}  // namespace

// ---------------------------------------------------------------- measurements

LocalMeasurement LocalMeasurement::from_basis(std::string party, std::vector<int> subsystems, Dims dims,
                                              const std::vector<Vector>& basis) {
    LocalMeasurement m;
    m.party = std::move(party);
    m.subsystems = std::move(subsystems);
    for (const auto& v : basis) m.outcomes.push_back(Projector::from_vectors(dims, {v}));
    m.validate();
    return m;
}

void LocalMeasurement::validate() const {
    if (party.empty()) throw std::invalid_argument("measurement has no party");
    if (subsystems.empty()) throw std::invalid_argument("measurement acts on no subsystems");
    if (outcomes.empty()) throw std::invalid_argument("measurement has no outcomes");
    const auto& dims = outcomes.front().dims();
    if (dims.size() != subsystems.size()) {
        throw std::invalid_argument("measurement dims do not match its subsystem list");
    }
    const auto n = static_cast<Eigen::Index>(outcomes.front().dim());
    Matrix total = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < outcomes.size(); ++j) {
        if (outcomes[j].dims() != dims) throw std::invalid_argument("measurement outcomes disagree on dims");
        for (std::size_t k = 0; k < j; ++k) {
            if ((outcomes[j].matrix() * outcomes[k].matrix()).cwiseAbs().maxCoeff() > kNormTol) {
                throw std::invalid_argument("measurement projectors are not pairwise orthogonal");
            }
        }
        total += outcomes[j].matrix();
    }
    if ((total - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > kNormTol) {
        throw std::invalid_argument("measurement projectors do not sum to the identity");
    }
}

// ---------------------------------------------------------------- protocol

void Protocol::validate() const {
    resource.validate();
    if (schedule.copies < 1) throw std::invalid_argument("schedule needs at least one copy");
    if (schedule.steps.size() > static_cast<std::size_t>(schedule.copies)) {
        throw std::invalid_argument("schedule lists more copies than it declares");
    }
    for (const auto& copy : schedule.steps) {
        for (const auto& m : copy) m.validate();
    }
    if (comm.kind == CommPlan::Kind::None) return;

    if (schedule.copies != 1) throw std::invalid_argument("one-cbit protocols are single-copy");
    if (schedule.steps.empty() || comm.sender_step < 0 ||
        static_cast<std::size_t>(comm.sender_step) >= schedule.steps.front().size()) {
        throw std::invalid_argument("one-cbit sender step is out of range");
    }
    const auto& sent = schedule.steps.front()[static_cast<std::size_t>(comm.sender_step)];
    if (sent.party != comm.sender) throw std::invalid_argument("sender step is not the sender's measurement");
    if (comm.message.size() != sent.outcome_count()) {
        throw std::invalid_argument("message map must cover every sender outcome");
    }
    for (int bit : comm.message) {
        if (bit != 0 && bit != 1) throw std::invalid_argument("message map values must be single bits");
    }
    if (comm.conditional.size() != 2) throw std::invalid_argument("one-cbit plan needs exactly two conditional measurements");
    const auto& receiver = comm.conditional.front().party;
    for (const auto& m : comm.conditional) {
        m.validate();
        if (m.party != receiver) throw std::invalid_argument("conditional measurements must belong to one receiver");
    }
    if (receiver == comm.sender) throw std::invalid_argument("sender and receiver must differ");
}

std::pair<Dims, Ownership> copy_layout(const Dims& dims, const Ownership& ownership,
                                       const ResourceSpec& resource, int copy) {
    Dims d = dims;
    Ownership o = ownership;
    if (copy == 0 && resource.kind != ResourceSpec::Kind::None) {
        d.insert(d.end(), {2, 2});
        o.push_back(resource.first_party);
        o.push_back(resource.second_party);
    }
    return {d, o};
}

void Protocol::validate_layout(const Dims& dims, const Ownership& ownership) const {
    validate();
    auto check = [](const LocalMeasurement& m, const Dims& d, const Ownership& o) {
        Dims selected;
        for (int s : m.subsystems) {
            if (s < 0 || static_cast<std::size_t>(s) >= d.size()) {
                throw std::out_of_range("measurement subsystem index out of range");
            }
            if (o[static_cast<std::size_t>(s)] != m.party) {
                throw std::invalid_argument("party " + m.party + " measures subsystem " + std::to_string(s) +
                                            " owned by " + o[static_cast<std::size_t>(s)]);
            }
            selected.push_back(d[static_cast<std::size_t>(s)]);
        }
        if (selected != m.outcomes.front().dims()) {
            throw std::invalid_argument("measurement dims do not match the layout");
        }
    };
    for (std::size_t c = 0; c < schedule.steps.size(); ++c) {
        const auto [d, o] = copy_layout(dims, ownership, resource, static_cast<int>(c));
        for (const auto& m : schedule.steps[c]) check(m, d, o);
    }
    if (comm.kind == CommPlan::Kind::OneCbit) {
        const auto [d, o] = copy_layout(dims, ownership, resource, 0);
        for (const auto& m : comm.conditional) check(m, d, o);
    }
}

// ---------------------------------------------------------------- standard pieces

std::vector<Vector> bell_vectors() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {ket({r, 0, 0, r}), ket({r, 0, 0, -r}), ket({0, r, r, 0}), ket({0, r, -r, 0})};
}

Projector parity_even() { return Projector::from_real_vectors({2, 2}, {{1, 0, 0, 0}, {0, 0, 0, 1}}); }
Projector parity_odd() { return Projector::from_real_vectors({2, 2}, {{0, 1, 0, 0}, {0, 0, 1, 0}}); }

int bell_parity(int bell_outcome) {
    if (bell_outcome < 0 || bell_outcome > 3) throw std::out_of_range("Bell outcome index out of range");
    return bell_outcome < 2 ? 0 : 1;
}

Protocol build_groisman_protocol(const ResourceSpec& resource) {
    check_two_party_two_qubit_resource(resource);
    if (resource.kind == ResourceSpec::Kind::None) throw std::invalid_argument("protocol requires a resource");
    return single_copy(resource, {
        LocalMeasurement::from_basis("A", {kAliceState, kAliceResource}, {2, 2}, alice_bell_basis()),
        LocalMeasurement::from_basis("B", {kBobState, kBobResource}, {2, 2}, bell_vectors()),
    });
}

Protocol build_alpha_prime_protocol(double alpha_prime, double theta, const ResourceSpec& resource) {
    if (!(alpha_prime >= -1e-12 && alpha_prime <= std::numbers::pi / 2 + 1e-12)) {
        throw std::invalid_argument("alpha' must lie in [0, pi/2]");
    }
    check_two_party_two_qubit_resource(resource);
    if (resource.kind == ResourceSpec::Kind::None) throw std::invalid_argument("protocol requires a resource");
    const Vector t = theta_ket(theta), tp = theta_perp_ket(theta);
    const Vector zero = ket({1, 0}), one = ket({0, 1});
    const double c = std::cos(alpha_prime / 2), s = std::sin(alpha_prime / 2);
    const std::vector<Vector> bob = {
        c * kron(t, zero) + s * kron(tp, one),
        s * kron(t, zero) - c * kron(tp, one),
        c * kron(t, one) + s * kron(tp, zero),
        s * kron(t, one) - c * kron(tp, zero),
    };
    return single_copy(resource, {
        LocalMeasurement::from_basis("A", {kAliceState, kAliceResource}, {2, 2}, alice_bell_basis()),
        LocalMeasurement::from_basis("B", {kBobState, kBobResource}, {2, 2}, bob),
    });
}

Protocol build_parity_then_bell(const ResourceSpec& resource) {
    check_two_party_two_qubit_resource(resource);
    if (resource.kind == ResourceSpec::Kind::None) throw std::invalid_argument("protocol requires a resource");
    auto parity = [](std::string party, std::vector<int> subsystems) {
        LocalMeasurement m;
        m.party = std::move(party);
        m.subsystems = std::move(subsystems);
        m.outcomes = {parity_even(), parity_odd()};
        m.validate();
        return m;
    };
    return single_copy(resource, {
        parity("A", {kAliceState, kAliceResource}),
        LocalMeasurement::from_basis("A", {kAliceState, kAliceResource}, {2, 2}, bell_vectors()),
        parity("B", {kBobState, kBobResource}),
        LocalMeasurement::from_basis("B", {kBobState, kBobResource}, {2, 2}, bell_vectors()),
    });
}

Protocol build_bell_bell(const ResourceSpec& resource) {
    check_two_party_two_qubit_resource(resource);
    if (resource.kind == ResourceSpec::Kind::None) throw std::invalid_argument("protocol requires a resource");
    return single_copy(resource, {
        LocalMeasurement::from_basis("A", {kAliceState, kAliceResource}, {2, 2}, bell_vectors()),
        LocalMeasurement::from_basis("B", {kBobState, kBobResource}, {2, 2}, bell_vectors()),
    });
}

std::vector<int> sign_partition() { return {0, 1, 0, 1}; }

std::vector<std::vector<int>> balanced_partitions() {
    return {{0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 0}};
}

bool is_balanced(const std::vector<int>& message) {
    return std::count(message.begin(), message.end(), 0) * 2 == static_cast<long>(message.size());
}

Protocol build_ictp(const std::vector<int>& message, LocalMeasurement bob_bit0, LocalMeasurement bob_bit1,
                    bool allow_unbalanced) {
    if (message.size() != 4) throw std::invalid_argument("message map must cover all four Bell outcomes");
    if (!allow_unbalanced && !is_balanced(message)) {
        throw std::invalid_argument("unbalanced message partition (pass allow_unbalanced to accept)");
    }
    for (const auto* m : {&bob_bit0, &bob_bit1}) {
        if (m->party != "B") throw std::invalid_argument("conditional measurements belong to B");
    }
    Protocol p;
    p.resource = ResourceSpec::mes();
    p.schedule.copies = 1;
    p.schedule.steps = {{LocalMeasurement::from_basis("A", {kAliceState, kAliceResource}, {2, 2}, bell_vectors())}};
    p.comm.kind = CommPlan::Kind::OneCbit;
    p.comm.sender = "A";
    p.comm.sender_step = 0;
    p.comm.message = message;
    p.comm.conditional = {std::move(bob_bit0), std::move(bob_bit1)};
    p.validate();
    return p;
}

Schedule build_two_copy_schedule(double alpha, double theta) {
    const Vector t = theta_ket(theta);
    const Vector tp = theta_perp_ket(theta);
    const double c = std::cos(alpha / 2), s = std::sin(alpha / 2);
    const Vector e0 = theta_ket(0.0), e1 = theta_perp_ket(0.0);
    Schedule schedule;
    schedule.copies = 2;
    schedule.steps.push_back({LocalMeasurement::from_basis("A", {0}, {2}, {e0, e1}),
                              LocalMeasurement::from_basis("B", {1}, {2}, {t, tp})});
    schedule.steps.push_back({LocalMeasurement::from_basis("B", {1}, {2}, {Vector(c * t + s * tp),
                                                                            Vector(s * t - c * tp)})});
    return schedule;
}

Protocol build_qubit_lp(const Ensemble& ensemble, const std::vector<std::vector<double>>& angles) {
    const auto& probe = ensemble.states().front();
    const auto parties = probe.parties();
    std::vector<int> qubit_of;
    for (const auto& party : parties) {
        const auto subs = probe.subsystems_of(party);
        if (subs.size() != 1 || probe.dims()[static_cast<std::size_t>(subs[0])] != 2) {
            throw std::invalid_argument("unsupported configuration: qubit LP search needs one qubit per party");
        }
        qubit_of.push_back(subs[0]);
    }
    Protocol p;
    p.schedule.copies = static_cast<int>(angles.size());
    for (const auto& copy_angles : angles) {
        if (copy_angles.size() != parties.size()) throw std::invalid_argument("need one angle per party per copy");
        std::vector<LocalMeasurement> steps;
        for (std::size_t k = 0; k < parties.size(); ++k) {
            const double t = copy_angles[k];
            steps.push_back(LocalMeasurement::from_basis(parties[k], {qubit_of[k]}, {2},
                                                         {theta_ket(t), theta_perp_ket(t)}));
        }
        p.schedule.steps.push_back(std::move(steps));
    }
    p.validate();
    return p;
}

}  // namespace lpdiscrim
