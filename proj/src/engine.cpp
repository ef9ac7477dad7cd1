#include "lpdiscrim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lpdiscrim {

namespace {

struct CompiledStep {
    LocalIndexMap map;
    std::vector<Matrix> projectors;
};

CompiledStep compile(const LocalMeasurement& m, const Dims& dims) {
    CompiledStep step{LocalIndexMap(dims, m.subsystems), {}};
    for (const auto& p : m.outcomes) step.projectors.push_back(p.matrix());
    return step;
}

struct CopyPlan {
    std::vector<CompiledStep> steps;
    // Only on copy 0 of a one-cbit protocol.
    std::vector<CompiledStep> conditional;
    std::vector<int> message;
    int sender_step = -1;
};

struct Leaf {
    std::vector<int> outcomes;
    std::optional<int> bit;
    double probability;
};

class CopyEnumerator {
public:
    CopyEnumerator(const CopyPlan& plan, std::vector<Leaf>& leaves) : plan_(plan), leaves_(leaves) {}

    void run(const Vector& initial) {
        path_.clear();
        descend(initial, 0);
    }

private:
    void descend(const Vector& v, std::size_t depth) {
        if (depth == plan_.steps.size()) {
            if (plan_.sender_step < 0) {
                leaves_.push_back({path_, std::nullopt, v.squaredNorm()});
                return;
            }
            const int bit = plan_.message[static_cast<std::size_t>(path_[static_cast<std::size_t>(plan_.sender_step)])];
            const auto& cond = plan_.conditional[static_cast<std::size_t>(bit)];
            for (std::size_t k = 0; k < cond.projectors.size(); ++k) {
                Vector w;
                apply_local(cond.map, cond.projectors[k], v, w);
                const double p = w.squaredNorm();
                if (p < kZeroProb) continue;
                path_.push_back(static_cast<int>(k));
                leaves_.push_back({path_, bit, p});
                path_.pop_back();
            }
            return;
        }
        const auto& step = plan_.steps[depth];
        for (std::size_t k = 0; k < step.projectors.size(); ++k) {
            Vector w;
            apply_local(step.map, step.projectors[k], v, w);
            if (w.squaredNorm() < kZeroProb) continue;
            path_.push_back(static_cast<int>(k));
            descend(w, depth + 1);
            path_.pop_back();
        }
    }

    const CopyPlan& plan_;
    std::vector<Leaf>& leaves_;
    std::vector<int> path_;
};

using CopyTable = std::map<std::pair<std::vector<int>, std::optional<int>>, std::vector<double>>;

}  // namespace

std::string Transcript::to_string() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < copies.size(); ++c) {
        if (c) out << '|';
        for (std::size_t k = 0; k < copies[c].size(); ++k) {
            if (k) out << ',';
            out << copies[c][k];
        }
    }
    if (bit) out << ";bit=" << *bit;
    return out.str();
}

double SuccessReport::recompute_success() const {
    double total = 0.0;
    for (const auto& row : table) {
        double best = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) best = std::max(best, priors[i] * row[i]);
        total += best;
    }
    return total;
}

std::size_t SuccessReport::ambiguous_transcripts() const {
    std::size_t count = 0;
    for (const auto& row : table) {
        const auto live = std::count_if(row.begin(), row.end(), [](double p) { return p >= kZeroProb; });
        if (live > 1) ++count;
    }
    return count;
}

SuccessReport evaluate(const Ensemble& ensemble, const Protocol& protocol) {
    protocol.validate_layout(ensemble.dims(), ensemble.ownership());
    const std::size_t n = ensemble.size();
    const int copies = protocol.schedule.copies;

    std::vector<CopyTable> per_copy(static_cast<std::size_t>(copies));
    for (int c = 0; c < copies; ++c) {
        const auto [dims, owners] = copy_layout(ensemble.dims(), ensemble.ownership(), protocol.resource, c);
        CopyPlan plan;
        if (static_cast<std::size_t>(c) < protocol.schedule.steps.size()) {
            for (const auto& m : protocol.schedule.steps[static_cast<std::size_t>(c)]) plan.steps.push_back(compile(m, dims));
        }
        if (c == 0 && protocol.comm.kind == CommPlan::Kind::OneCbit) {
            for (const auto& m : protocol.comm.conditional) plan.conditional.push_back(compile(m, dims));
            plan.message = protocol.comm.message;
            plan.sender_step = protocol.comm.sender_step;
        }
        auto& table = per_copy[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < n; ++i) {
            const PureState initial = c == 0 ? with_resource(ensemble.states()[i], protocol.resource)
                                             : ensemble.states()[i];
            std::vector<Leaf> leaves;
            CopyEnumerator(plan, leaves).run(initial.amps());
            for (auto& leaf : leaves) {
                auto& row = table[{std::move(leaf.outcomes), leaf.bit}];
                row.resize(n, 0.0);
                row[i] += leaf.probability;
            }
        }
    }

    // Copies are independent given the hypothesis: multiply per-copy rows.
    std::map<Transcript, std::vector<double>> joint;
    joint[Transcript{}] = std::vector<double>(n, 1.0);
    for (const auto& table : per_copy) {
        std::map<Transcript, std::vector<double>> next;
        for (const auto& [prefix, prefix_row] : joint) {
            for (const auto& [key, row] : table) {
                std::vector<double> prod(n);
                double top = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    prod[i] = prefix_row[i] * row[i];
                    top = std::max(top, prod[i]);
                }
                if (top < kZeroProb) continue;
                Transcript t = prefix;
                t.copies.push_back(key.first);
                if (key.second) t.bit = key.second;
                next.emplace(std::move(t), std::move(prod));
            }
        }
        joint = std::move(next);
    }

    SuccessReport report;
    report.labels = ensemble.labels();
    report.priors = ensemble.priors();
    report.per_state_success.assign(n, 0.0);
    std::vector<double> mass(n, 0.0);
    for (auto& [t, row] : joint) {
        int best = 0;
        double best_weight = report.priors[0] * row[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double w = report.priors[i] * row[i];
            if (w > best_weight) {
                best_weight = w;
                best = static_cast<int>(i);
            }
        }
        for (std::size_t i = 0; i < n; ++i) mass[i] += row[i];
        report.success += best_weight;
        report.per_state_success[static_cast<std::size_t>(best)] += row[static_cast<std::size_t>(best)];
        report.transcripts.push_back(t);
        report.decoding.push_back(best);
        report.table.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(mass[i] - 1.0) > kNormTol) {
            std::ostringstream msg;
            msg << "transcript probability mass for state " << report.labels[i] << " is " << mass[i]
                << " (broken measurement)";
            throw std::runtime_error(msg.str());
        }
    }
    report.perfect = report.success >= 1.0 - kPerfectTol;
    return report;
}

SuccessReport evaluate_multicopy(const Ensemble& ensemble, const Schedule& schedule) {
    Protocol p;
    p.schedule = schedule;
    return evaluate(ensemble, p);
}

double eq5_formula(double alpha, double alpha_prime) {
    const double s = std::sin((alpha + alpha_prime) / 2);
    const double c = std::cos((alpha - alpha_prime) / 2);
    return 0.5 * (s * s + c * c);
}

double lp_baseline_formula(double alpha) {
    const double c = std::cos(alpha / 4);
    return c * c;
}

}  // namespace lpdiscrim
