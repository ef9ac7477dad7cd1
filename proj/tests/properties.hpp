// Randomized invariant checks shared by the unit and acceptance suites. Each
// returns the number of violating inputs out of `trials`.

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <random>

#include "lpdiscrim/engine.hpp"
#include "support.hpp"

namespace testing {

struct RandomCase {
    Ensemble ensemble;
    Protocol protocol;
};

// Cycles through plain LP (qubits and qutrits), two-copy LP, a resource with
// two-stage measurements, and a one-bit protocol.
inline RandomCase random_case(std::mt19937_64& rng, int kind, bool complex, bool random_priors) {
    std::uniform_int_distribution<std::size_t> count(1, 4);
    switch (kind % 5) {
        case 0: {
            auto e = random_ensemble(rng, {2, 2}, {"A", "B"}, count(rng), complex, random_priors);
            Protocol p;
            p.schedule.steps = {{random_measurement(rng, "A", {0}, {2}, complex),
                                 random_measurement(rng, "B", {1}, {2}, complex)}};
            return {std::move(e), std::move(p)};
        }
        case 1: {
            auto e = random_ensemble(rng, {2, 3}, {"A", "B"}, count(rng) + 2, complex, random_priors);
            Protocol p;
            p.schedule.steps = {{random_measurement(rng, "A", {0}, {2}, complex),
                                 random_measurement(rng, "B", {1}, {3}, complex)}};
            return {std::move(e), std::move(p)};
        }
        case 2: {
            auto e = random_ensemble(rng, {2, 2}, {"A", "B"}, count(rng), complex, random_priors);
            Protocol p;
            p.schedule.copies = 2;
            p.schedule.steps = {{random_measurement(rng, "A", {0}, {2}, complex),
                                 random_measurement(rng, "B", {1}, {2}, complex)},
                                {random_measurement(rng, "B", {1}, {2}, complex),
                                 random_measurement(rng, "A", {0}, {2}, complex)}};
            return {std::move(e), std::move(p)};
        }
        case 3: {
            auto e = random_ensemble(rng, {2, 2}, {"A", "B"}, count(rng), complex, random_priors);
            Protocol p;
            p.resource = ResourceSpec::nmes(std::uniform_real_distribution<double>(0.75, 0.99)(rng));
            p.schedule.steps = {{random_measurement(rng, "A", {0, 2}, {2, 2}, complex),
                                 random_measurement(rng, "A", {0, 2}, {2, 2}, complex),
                                 random_measurement(rng, "B", {1, 3}, {2, 2}, complex)}};
            return {std::move(e), std::move(p)};
        }
        default: {
            auto e = random_ensemble(rng, {2, 2}, {"A", "B"}, count(rng), complex, random_priors);
            const auto bob0 = random_measurement(rng, "B", {1, 3}, {2, 2}, complex);
            const auto bob1 = random_measurement(rng, "B", {1, 3}, {2, 2}, complex);
            const auto& parts = balanced_partitions();
            auto p = build_ictp(parts[std::uniform_int_distribution<std::size_t>(0, 2)(rng)], bob0, bob1);
            p.schedule.steps[0][0] = random_measurement(rng, "A", {0, 2}, {2, 2}, complex);
            std::vector<int> message;
            for (std::size_t k = 0; k < p.schedule.steps[0][0].outcome_count(); ++k) message.push_back(static_cast<int>(k % 2));
            p.comm.message = message;
            return {std::move(e), std::move(p)};
        }
    }
}

inline std::map<Transcript, std::vector<double>> table_of(const SuccessReport& r) {
    std::map<Transcript, std::vector<double>> out;
    for (std::size_t t = 0; t < r.transcripts.size(); ++t) out[r.transcripts[t]] = r.table[t];
    return out;
}

inline bool tables_match(const std::map<Transcript, std::vector<double>>& lhs,
                         const std::map<Transcript, std::vector<double>>& rhs, std::size_t n, double tol) {
    auto covered = [&](const auto& a, const auto& b) {
        for (const auto& [t, row] : a) {
            auto it = b.find(t);
            for (std::size_t i = 0; i < n; ++i) {
                const double other = it == b.end() ? 0.0 : it->second[i];
                if (std::abs(row[i] - other) > tol) return false;
            }
        }
        return true;
    };
    return covered(lhs, rhs) && covered(rhs, lhs);
}

inline int row_stochasticity_violations(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int k = 0; k < trials; ++k) {
        const auto c = random_case(rng, k, k % 2 == 1, true);
        const auto r = evaluate(c.ensemble, c.protocol);
        for (std::size_t i = 0; i < c.ensemble.size(); ++i) {
            double total = 0.0;
            for (const auto& row : r.table) total += row[i];
            if (std::abs(total - 1.0) > 1e-9) {
                ++bad;
                break;
            }
        }
    }
    return bad;
}

inline int completeness_violations(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    const std::vector<Dims> shapes{{2}, {3}, {2, 2}, {2, 3}, {3, 3}};
    for (int k = 0; k < trials; ++k) {
        const Dims local = shapes[static_cast<std::size_t>(k) % shapes.size()];
        std::vector<int> subs(local.size());
        for (std::size_t s = 0; s < subs.size(); ++s) subs[s] = static_cast<int>(s);
        const auto m = random_measurement(rng, "A", subs, local, k % 2 == 1);
        const auto n = static_cast<Eigen::Index>(product(local));
        Matrix total = Matrix::Zero(n, n);
        for (const auto& p : m.outcomes) total += p.matrix();
        bool ok = (total - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-9;
        try {
            m.validate();
        } catch (const std::exception&) {
            ok = false;
        }
        Dims full = local;
        full.push_back(2);
        Ownership owners(full.size(), "A");
        owners.back() = "B";
        const auto state = random_ensemble(rng, full, owners, 1, k % 2 == 1, false).states()[0];
        double prob = 0.0;
        for (const auto& p : m.outcomes) prob += apply_local_projector(state, p, subs).probability;
        if (std::abs(prob - 1.0) > 1e-9) ok = false;
        bad += !ok;
    }
    return bad;
}

inline LocalMeasurement conjugated(const LocalMeasurement& m, const Matrix& u) {
    LocalMeasurement out = m;
    for (auto& p : out.outcomes) {
        std::vector<Vector> vs;
        for (const auto& v : p.basis()) vs.push_back(u * v);
        p = Projector::from_vectors(p.dims(), vs);
    }
    return out;
}

// U acts on the party's ensemble qubit; measurements that also cover the
// resource qubit see U (x) I with the ensemble qubit most significant.
inline int covariance_violations(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int k = 0; k < trials; ++k) {
        const int kind = std::array<int, 4>{0, 1, 3, 4}[static_cast<std::size_t>(k) % 4];
        const auto c = random_case(rng, kind, true, true);
        const auto& dims = c.ensemble.dims();
        const Matrix ua = random_unitary(rng, dims[0], true);
        const Matrix ub = random_unitary(rng, dims[1], true);
        std::vector<PureState> states;
        for (const auto& s : c.ensemble.states()) {
            states.push_back(apply_local_operator(apply_local_operator(s, ua, {0}), ub, {1}));
        }
        const Ensemble moved(states, c.ensemble.priors(), c.ensemble.labels());
        auto lift = [&](const LocalMeasurement& m) {
            const Matrix& u = m.party == "A" ? ua : ub;
            if (m.subsystems.size() == 1) return conjugated(m, u);
            Matrix big = Matrix::Zero(2 * u.rows(), 2 * u.cols());
            for (Eigen::Index i = 0; i < u.rows(); ++i) {
                for (Eigen::Index j = 0; j < u.cols(); ++j) big.block(2 * i, 2 * j, 2, 2) = u(i, j) * Matrix::Identity(2, 2);
            }
            return conjugated(m, big);
        };
        Protocol p = c.protocol;
        for (auto& copy : p.schedule.steps) {
            for (auto& m : copy) m = lift(m);
        }
        for (auto& m : p.comm.conditional) m = lift(m);
        const auto before = evaluate(c.ensemble, c.protocol);
        const auto after = evaluate(moved, p);
        bad += !tables_match(table_of(before), table_of(after), c.ensemble.size(), 1e-9);
    }
    return bad;
}

inline int order_violations(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int k = 0; k < trials; ++k) {
        const int kind = std::array<int, 3>{0, 1, 2}[static_cast<std::size_t>(k) % 3];
        const auto c = random_case(rng, kind, k % 2 == 1, true);
        Protocol swapped = c.protocol;
        for (auto& copy : swapped.schedule.steps) std::reverse(copy.begin(), copy.end());
        const auto lhs = evaluate(c.ensemble, c.protocol);
        std::map<Transcript, std::vector<double>> rhs;
        const auto r = evaluate(c.ensemble, swapped);
        for (std::size_t t = 0; t < r.transcripts.size(); ++t) {
            Transcript key = r.transcripts[t];
            for (auto& outcomes : key.copies) std::reverse(outcomes.begin(), outcomes.end());
            rhs[key] = r.table[t];
        }
        bad += !tables_match(table_of(lhs), rhs, c.ensemble.size(), 1e-9);
    }
    return bad;
}

inline int map_dominance_violations(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int k = 0; k < trials; ++k) {
        const auto c = random_case(rng, k, k % 2 == 0, true);
        const auto r = evaluate(c.ensemble, c.protocol);
        const double top = *std::max_element(c.ensemble.priors().begin(), c.ensemble.priors().end());
        bad += r.success < top - 1e-12 || std::abs(r.recompute_success() - r.success) > 1e-12;
    }
    return bad;
}

}  // namespace testing
