#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "lpdiscrim/engine.hpp"
#include "lpdiscrim/ensemble.hpp"
#include "lpdiscrim/protocol.hpp"

namespace testing {

using namespace lpdiscrim;

inline Vector real_vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double x : xs) v[k++] = x;
    return v;
}

// Columns form a Haar-ish random orthogonal (real) or unitary (complex) matrix.
inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index n, bool complex) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), complex ? g(rng) : 0.0);
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(n, n);
}

inline std::vector<Vector> columns(const Matrix& m) {
    std::vector<Vector> out;
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m.col(j));
    return out;
}

// Random measurement: a random basis grouped into 1..n outcomes of rank >= 1.
inline LocalMeasurement random_measurement(std::mt19937_64& rng, const std::string& party,
                                           const std::vector<int>& subsystems, const Dims& local_dims,
                                           bool complex) {
    const auto n = static_cast<Eigen::Index>(product(local_dims));
    const auto basis = columns(random_unitary(rng, n, complex));
    std::uniform_int_distribution<int> groups(1, static_cast<int>(n));
    const int k = groups(rng);
    std::vector<std::vector<Vector>> parts(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto slot = j < k ? static_cast<std::size_t>(j)
                                : std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(k - 1))(rng);
        parts[slot].push_back(basis[static_cast<std::size_t>(j)]);
    }
    LocalMeasurement m;
    m.party = party;
    m.subsystems = subsystems;
    for (const auto& p : parts) m.outcomes.push_back(Projector::from_vectors(local_dims, p));
    return m;
}

inline Ensemble random_ensemble(std::mt19937_64& rng, const Dims& dims, const Ownership& owners, std::size_t count,
                                bool complex, bool random_priors) {
    const auto n = static_cast<Eigen::Index>(product(dims));
    const auto u = random_unitary(rng, n, complex);
    std::vector<PureState> states;
    for (std::size_t i = 0; i < count; ++i) states.emplace_back(dims, u.col(static_cast<Eigen::Index>(i)), owners);
    std::vector<double> priors;
    if (random_priors) {
        std::uniform_real_distribution<double> w(0.05, 1.0);
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) total += priors.emplace_back(w(rng));
        for (auto& p : priors) p /= total;
        double rest = 1.0;
        for (std::size_t i = 0; i + 1 < count; ++i) rest -= priors[i];
        priors.back() = rest;
    }
    return Ensemble(std::move(states), priors);
}

// Full-space matrix of `op` acting on `subsystems` (listed order = local digit
// significance), identity elsewhere; built entry by entry from digit strings.
inline Matrix embed(const Dims& dims, const std::vector<int>& subsystems, const Matrix& op) {
    const std::size_t total = product(dims);
    auto digits = [&](std::size_t index) {
        std::vector<int> d(dims.size());
        for (std::size_t k = dims.size(); k-- > 0;) {
            d[k] = static_cast<int>(index % static_cast<std::size_t>(dims[k]));
            index /= static_cast<std::size_t>(dims[k]);
        }
        return d;
    };
    auto local = [&](const std::vector<int>& d) {
        std::size_t idx = 0;
        for (int s : subsystems) idx = idx * static_cast<std::size_t>(dims[static_cast<std::size_t>(s)]) +
                                       static_cast<std::size_t>(d[static_cast<std::size_t>(s)]);
        return static_cast<Eigen::Index>(idx);
    };
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < total; ++i) {
        const auto di = digits(i);
        for (std::size_t j = 0; j < total; ++j) {
            const auto dj = digits(j);
            bool rest_equal = true;
            for (std::size_t k = 0; k < dims.size() && rest_equal; ++k) {
                const bool selected =
                    std::find(subsystems.begin(), subsystems.end(), static_cast<int>(k)) != subsystems.end();
                if (!selected && di[k] != dj[k]) rest_equal = false;
            }
            if (rest_equal) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = op(local(di), local(dj));
        }
    }
    return out;
}

// Brute-force single-copy evaluation without communication: every combination
// of step outcomes, probability = |P_last ... P_first psi|^2 with explicit
// full-space matrices, MAP over the resulting table.
inline double brute_force_success(const Ensemble& ensemble, const Protocol& protocol) {
    const auto& steps = protocol.schedule.steps.front();
    std::vector<Vector> states;
    Dims dims = ensemble.dims();
    for (const auto& s : ensemble.states()) states.push_back(with_resource(s, protocol.resource).amps());
    if (protocol.resource.kind != ResourceSpec::Kind::None) {
        dims.push_back(2);
        dims.push_back(2);
    }
    std::vector<std::vector<Matrix>> ops;
    for (const auto& m : steps) {
        std::vector<Matrix> row;
        for (const auto& p : m.outcomes) row.push_back(embed(dims, m.subsystems, p.matrix()));
        ops.push_back(row);
    }
    double success = 0.0;
    std::vector<std::size_t> idx(ops.size(), 0);
    while (true) {
        double best = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            Vector v = states[i];
            for (std::size_t k = 0; k < ops.size(); ++k) v = ops[k][idx[k]] * v;
            best = std::max(best, ensemble.priors()[i] * v.squaredNorm());
        }
        success += best;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == ops[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return success;
}

// Brute-force one-bit protocol: Alice's outcome k fixes the bit, which picks
// Bob's measurement; transcripts are the pairs (k, j).
inline double brute_force_one_bit(const Ensemble& ensemble, const Protocol& protocol) {
    const Dims dims{2, 2, 2, 2};
    const auto& alice = protocol.schedule.steps.front().front();
    double success = 0.0;
    for (std::size_t k = 0; k < alice.outcomes.size(); ++k) {
        const Matrix pa = embed(dims, alice.subsystems, alice.outcomes[k].matrix());
        const auto& bob = protocol.comm.conditional[static_cast<std::size_t>(protocol.comm.message[k])];
        for (const auto& o : bob.outcomes) {
            const Matrix pb = embed(dims, bob.subsystems, o.matrix());
            double best = 0.0;
            for (std::size_t i = 0; i < ensemble.size(); ++i) {
                const Vector v = pb * (pa * with_resource(ensemble.states()[i], protocol.resource).amps());
                best = std::max(best, ensemble.priors()[i] * v.squaredNorm());
            }
            success += best;
        }
    }
    return success;
}

}  // namespace testing
