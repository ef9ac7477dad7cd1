#include "lpdiscrim/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace lpdiscrim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs fn(chunk) for chunk in [0, count) on all hardware threads. Chunks are
// visited in a seed-dependent order; callers reduce deterministically.
void for_each_chunk(std::size_t count, std::uint64_t seed, const std::function<void(std::size_t)>& fn) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    if (seed != 0) std::shuffle(order.begin(), order.end(), std::mt19937_64(seed));
    const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < count;) fn(order[k]);
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// Best (value, index) with ties resolved toward the smaller index.
struct Best {
    double value = -1.0;
    std::uint64_t index = ~std::uint64_t{0};

    void offer(double v, std::uint64_t i) {
        if (v > value || (v == value && i < index)) {
            value = v;
            index = i;
        }
    }
};

std::size_t grid_points(double resolution) {
    return static_cast<std::size_t>(std::ceil(std::numbers::pi / 2 / resolution - 1e-9));
}

bool is_ray_of(const Vector& u, const Vector& v) { return std::abs(std::abs(u.dot(v)) - 1.0) <= kNormTol; }
bool orthogonal(const Vector& u, const Vector& v) { return std::abs(u.dot(v)) <= kNormTol; }

void dedupe_rays(std::vector<Vector>& rays) {
    std::vector<Vector> out;
    for (auto& v : rays) {
        if (std::none_of(out.begin(), out.end(), [&](const Vector& u) { return is_ray_of(u, v); })) {
            out.push_back(v);
        }
    }
    rays = std::move(out);
}

// Maximal sets of mutually orthogonal vectors (Bron-Kerbosch with pivoting).
std::vector<std::vector<int>> maximal_orthogonal_sets(const std::vector<Vector>& rays) {
    const int n = static_cast<int>(rays.size());
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                i != j && orthogonal(rays[static_cast<std::size_t>(i)], rays[static_cast<std::size_t>(j)]);
        }
    }
    std::vector<std::vector<int>> cliques;
    std::function<void(std::vector<int>, std::vector<int>, std::vector<int>)> expand =
        [&](std::vector<int> r, std::vector<int> p, std::vector<int> x) {
            if (p.empty() && x.empty()) {
                std::sort(r.begin(), r.end());
                cliques.push_back(r);
                return;
            }
            int pivot = p.empty() ? x.front() : p.front();
            const auto candidates = p;
            for (int v : candidates) {
                if (adj[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(v)]) continue;
                std::vector<int> r2 = r, p2, x2;
                r2.push_back(v);
                for (int w : p) {
                    if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]) p2.push_back(w);
                }
                for (int w : x) {
                    if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]) x2.push_back(w);
                }
                expand(r2, p2, x2);
                p.erase(std::find(p.begin(), p.end(), v));
                x.push_back(v);
            }
        };
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    if (n > 0) expand({}, all, {});
    std::sort(cliques.begin(), cliques.end());
    return cliques;
}

}  // namespace

// ---------------------------------------------------------------- config

void DimensionProfile::validate() const {
    if (dims.size() < 2) throw std::invalid_argument("dimension profile needs at least two parties");
    for (int d : dims) {
        if (d < 2) throw std::invalid_argument("every party dimension must be >= 2");
    }
}

DimensionProfile DimensionProfile::of(const Ensemble& ensemble) {
    const auto& probe = ensemble.states().front();
    DimensionProfile profile;
    for (const auto& party : probe.parties()) {
        int d = 1;
        for (int s : probe.subsystems_of(party)) d *= probe.dims()[static_cast<std::size_t>(s)];
        profile.dims.push_back(d);
    }
    profile.validate();
    return profile;
}

void SearchConfig::validate() const {
    if (!(resolution > 0.0)) throw std::invalid_argument("search resolution must be positive");
    if (probe_resolution < 0.0) throw std::invalid_argument("probe resolution must be nonnegative");
    if (!(budget_seconds > 0.0)) throw std::invalid_argument("search budget must be positive");
    if (max_copies < 1) throw std::invalid_argument("max copies must be at least 1");
    if (random_probes < 0) throw std::invalid_argument("random probe count must be nonnegative");
}

SearchConfig SearchConfig::with_env_budget() const {
    SearchConfig out = *this;
    if (const char* env = std::getenv("LPDISCRIM_BUDGET_SECS")) {
        char* end = nullptr;
        const double cap = std::strtod(env, &end);
        if (end == env || !(cap > 0.0)) throw std::invalid_argument("LPDISCRIM_BUDGET_SECS must be a positive number");
        out.budget_seconds = std::min(out.budget_seconds, cap);
    }
    return out;
}

int copy_bound(const DimensionProfile& profile) {
    profile.validate();
    long long prod = 1, eliminated = 0;
    for (int d : profile.dims) {
        prod *= d;
        eliminated += d - 1;
    }
    const long long m = static_cast<long long>(profile.dims.size());
    const long long remaining = prod - eliminated;
    const long long x = remaining <= 0 ? 0 : (remaining + m - 1) / m;
    return static_cast<int>(x + 1);
}

std::vector<Vector> complete_basis(const std::vector<Vector>& vectors, Eigen::Index dim) {
    std::vector<Vector> basis;
    auto add = [&](Vector v) {
        for (const auto& b : basis) v -= b.dot(v) * b;
        if (v.norm() > 1e-6) {
            // second pass keeps the completion orthogonal to ~1e-16
            v.normalize();
            for (const auto& b : basis) v -= b.dot(v) * b;
            basis.push_back(v.normalized());
        }
    };
    for (const auto& v : vectors) add(v);
    for (Eigen::Index k = 0; k < dim && static_cast<Eigen::Index>(basis.size()) < dim; ++k) {
        add(Vector::Unit(dim, k));
    }
    return basis;
}

// ---------------------------------------------------------------- LP grid search

namespace {

struct QubitGridKernel {
    std::size_t states;
    std::size_t parties;
    std::size_t outcomes;  // 2^parties
    std::vector<int> qubit_of;
    std::vector<Vector> amps;
    std::vector<double> priors;
    std::vector<double> cosines, sines;
    std::size_t grid;

    // Rotates `v` so that the digit of `qubit` holds the outcome amplitudes of
    // the basis {(c, s), (-s, c)} (real, so conjugation is trivial).
    static void measure_qubit(const Vector& in, Vector& out, int qubit, std::size_t nqubits, double c, double s) {
        const std::size_t stride = std::size_t{1} << (nqubits - 1 - static_cast<std::size_t>(qubit));
        out.resize(in.size());
        for (Eigen::Index base = 0; base < in.size(); ++base) {
            if (static_cast<std::size_t>(base) & stride) continue;
            const Complex x0 = in[base], x1 = in[base + static_cast<Eigen::Index>(stride)];
            out[base] = c * x0 + s * x1;
            out[base + static_cast<Eigen::Index>(stride)] = -s * x0 + c * x1;
        }
    }

    // probs[o * states + i] for setting index `config` (party 0 most significant).
    void fill(std::uint64_t config, std::vector<double>& probs, std::vector<Vector>& scratch) const {
        std::vector<std::size_t> g(parties);
        for (std::size_t k = parties; k-- > 0;) {
            g[k] = config % grid;
            config /= grid;
        }
        probs.assign(outcomes * states, 0.0);
        scratch.resize(2);
        for (std::size_t i = 0; i < states; ++i) {
            scratch[0] = amps[i];
            for (std::size_t k = 0; k < parties; ++k) {
                measure_qubit(scratch[0], scratch[1], qubit_of[k], parties, cosines[g[k]], sines[g[k]]);
                std::swap(scratch[0], scratch[1]);
            }
            // outcome index ordered by party, amplitude index ordered by qubit
            for (std::size_t o = 0; o < outcomes; ++o) {
                std::size_t idx = 0;
                for (std::size_t k = 0; k < parties; ++k) {
                    const std::size_t bit = (o >> (parties - 1 - k)) & 1u;
                    idx |= bit << (parties - 1 - static_cast<std::size_t>(qubit_of[k]));
                }
                probs[o * states + i] = std::norm(scratch[0][static_cast<Eigen::Index>(idx)]);
            }
        }
    }

    double single_copy_value(const std::vector<double>& probs) const {
        double total = 0.0;
        for (std::size_t o = 0; o < outcomes; ++o) {
            double best = 0.0;
            for (std::size_t i = 0; i < states; ++i) best = std::max(best, priors[i] * probs[o * states + i]);
            total += best;
        }
        return total;
    }
};

}  // namespace

GridSearchResult grid_search_lp(const Ensemble& ensemble, int copies, const SearchConfig& config) {
    config.validate();
    if (copies < 1) throw std::invalid_argument("copies must be at least 1");
    const auto start = Clock::now();
    const auto& probe = ensemble.states().front();
    const auto parties = probe.parties();

    QubitGridKernel kernel;
    kernel.states = ensemble.size();
    kernel.parties = parties.size();
    kernel.outcomes = std::size_t{1} << parties.size();
    for (const auto& party : parties) {
        const auto subs = probe.subsystems_of(party);
        if (subs.size() != 1 || probe.dims()[static_cast<std::size_t>(subs[0])] != 2) {
            throw std::invalid_argument("unsupported configuration: qubit LP search needs exactly one qubit per party");
        }
        kernel.qubit_of.push_back(subs[0]);
    }
    if (probe.subsystem_count() != parties.size()) {
        throw std::invalid_argument("unsupported configuration: every subsystem must belong to a distinct party");
    }
    for (const auto& s : ensemble.states()) kernel.amps.push_back(s.amps());
    kernel.priors = ensemble.priors();
    kernel.grid = grid_points(config.resolution);
    for (std::size_t g = 0; g < kernel.grid; ++g) {
        const double t = static_cast<double>(g) * config.resolution;
        kernel.cosines.push_back(std::cos(t));
        kernel.sines.push_back(std::sin(t));
    }
    std::uint64_t settings = 1;
    for (std::size_t k = 0; k < kernel.parties; ++k) settings *= kernel.grid;

    const double deadline = config.budget_seconds;
    std::atomic<bool> out_of_time{false};
    std::mutex merge;
    Best best;
    std::vector<std::uint64_t> best_tuple;
    std::uint64_t points = 0;

    if (copies == 1) {
        // Chunk by the leading party's angle.
        const std::uint64_t per_chunk = settings / kernel.grid;
        for_each_chunk(kernel.grid, config.seed, [&](std::size_t chunk) {
            if (out_of_time || seconds_since(start) > deadline) {
                out_of_time = true;
                return;
            }
            Best local;
            std::vector<double> probs;
            std::vector<Vector> scratch;
            for (std::uint64_t k = 0; k < per_chunk; ++k) {
                const std::uint64_t cfg = chunk * per_chunk + k;
                kernel.fill(cfg, probs, scratch);
                local.offer(kernel.single_copy_value(probs), cfg);
            }
            std::lock_guard lock(merge);
            best.offer(local.value, local.index);
            points += per_chunk;
        });
        best_tuple = {best.index};
    } else {
        const std::size_t cell = kernel.outcomes * kernel.states;
        const double table_entries = static_cast<double>(settings) * static_cast<double>(cell);
        if (table_entries > 6e7) {
            throw std::invalid_argument("unsupported configuration: multi-copy grid too fine (coarsen the resolution)");
        }
        std::vector<double> table(settings * cell);
        {
            std::vector<double> probs;
            std::vector<Vector> scratch;
            for (std::uint64_t cfg = 0; cfg < settings; ++cfg) {
                kernel.fill(cfg, probs, scratch);
                for (std::size_t o = 0; o < kernel.outcomes; ++o) {
                    for (std::size_t i = 0; i < kernel.states; ++i) {
                        table[cfg * cell + o * kernel.states + i] = probs[o * kernel.states + i];
                    }
                }
            }
        }
        const std::size_t n = kernel.states;
        const std::size_t outs = kernel.outcomes;

        // Nondecreasing tuples c_1 <= ... <= c_k, encoded base `settings` so that
        // code order is lexicographic order.
        auto encode = [&](const std::vector<std::uint64_t>& tuple) {
            std::uint64_t code = 0;
            for (auto c : tuple) code = code * settings + c;
            return code;
        };

        for_each_chunk(settings, config.seed, [&](std::size_t first) {
            if (out_of_time || seconds_since(start) > deadline) {
                out_of_time = true;
                return;
            }
            Best local;
            std::uint64_t scored = 0;
            std::vector<std::uint64_t> tuple(static_cast<std::size_t>(copies), first);
            // rows[d] holds prior-weighted joint probabilities after d+1 copies.
            std::vector<std::vector<double>> rows(static_cast<std::size_t>(copies));
            rows[0].assign(table.begin() + static_cast<std::ptrdiff_t>(first * cell),
                           table.begin() + static_cast<std::ptrdiff_t>((first + 1) * cell));
            for (std::size_t k = 0; k < cell; ++k) rows[0][k] *= kernel.priors[k % n];

            std::function<void(std::size_t)> extend = [&](std::size_t depth) {
                const auto& prev = rows[depth - 1];
                const std::size_t prev_outcomes = prev.size() / n;
                const bool last = depth + 1 == static_cast<std::size_t>(copies);
                for (std::uint64_t c = tuple[depth - 1]; c < settings; ++c) {
                    tuple[depth] = c;
                    const double* next = table.data() + c * cell;
                    if (last) {
                        double total = 0.0;
                        if (n == 2) {
                            for (std::size_t a = 0; a < prev_outcomes; ++a) {
                                const double x0 = prev[a * 2], x1 = prev[a * 2 + 1];
                                for (std::size_t b = 0; b < outs; ++b) {
                                    total += std::max(x0 * next[b * 2], x1 * next[b * 2 + 1]);
                                }
                            }
                        } else {
                            for (std::size_t a = 0; a < prev_outcomes; ++a) {
                                for (std::size_t b = 0; b < outs; ++b) {
                                    double top = 0.0;
                                    for (std::size_t i = 0; i < n; ++i) {
                                        top = std::max(top, prev[a * n + i] * next[b * n + i]);
                                    }
                                    total += top;
                                }
                            }
                        }
                        ++scored;
                        local.offer(total, encode(tuple));
                    } else {
                        auto& row = rows[depth];
                        row.assign(prev_outcomes * outs * n, 0.0);
                        for (std::size_t a = 0; a < prev_outcomes; ++a) {
                            for (std::size_t b = 0; b < outs; ++b) {
                                for (std::size_t i = 0; i < n; ++i) {
                                    row[(a * outs + b) * n + i] = prev[a * n + i] * next[b * n + i];
                                }
                            }
                        }
                        extend(depth + 1);
                    }
                }
            };
            extend(1);
            std::lock_guard lock(merge);
            best.offer(local.value, local.index);
            points += scored;
        });
        std::uint64_t code = best.index;
        best_tuple.assign(static_cast<std::size_t>(copies), 0);
        for (std::size_t c = best_tuple.size(); c-- > 0;) {
            best_tuple[c] = code % settings;
            code /= settings;
        }
    }

    GridSearchResult result;
    result.grid_size = kernel.grid;
    result.points = points;
    result.complete = !out_of_time;
    result.scan_value = best.value;
    if (best.value < 0.0) throw SearchFailure("grid search budget exhausted before any point was scored", {});
    for (auto cfg : best_tuple) {
        std::vector<double> angles(kernel.parties);
        for (std::size_t k = kernel.parties; k-- > 0;) {
            angles[k] = static_cast<double>(cfg % kernel.grid) * config.resolution;
            cfg /= kernel.grid;
        }
        result.angles.push_back(std::move(angles));
    }
    result.protocol = build_qubit_lp(ensemble, result.angles);
    result.success = evaluate(ensemble, result.protocol).success;
    result.seconds = seconds_since(start);
    return result;
}

// ---------------------------------------------------------------- multi-copy schedules

namespace {

class PairSet {
public:
    explicit PairSet(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}
    void set(std::size_t k) { words_[k / 64] |= std::uint64_t{1} << (k % 64); }
    PairSet& operator|=(const PairSet& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
        return *this;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool subset_of(const PairSet& o) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] & ~o.words_[w]) return false;
        }
        return true;
    }
    bool operator==(const PairSet&) const = default;

private:
    std::vector<std::uint64_t> words_;
};

struct PartyCandidates {
    std::string party;
    std::vector<int> subsystems;
    Dims dims;
    std::vector<std::vector<Vector>> bases;
    std::vector<PairSet> separates;
};

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    // i < j
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

ScheduleResult construct_multicopy_schedule(const Ensemble& basis, const SearchConfig& config) {
    config.validate();
    const auto start = Clock::now();
    const std::size_t n = basis.size();
    const auto& probe = basis.states().front();
    if (n != probe.size()) throw std::invalid_argument("schedule construction needs a complete basis");
    const auto profile = DimensionProfile::of(basis);
    const int bound = copy_bound(profile);
    const std::size_t pairs = n * (n - 1) / 2;

    std::vector<PartyCandidates> parties;
    for (const auto& party : probe.parties()) {
        PartyCandidates pc;
        pc.party = party;
        pc.subsystems = probe.subsystems_of(party);
        for (int s : pc.subsystems) pc.dims.push_back(probe.dims()[static_cast<std::size_t>(s)]);
        const auto local_dim = static_cast<Eigen::Index>(product(pc.dims));

        std::vector<Vector> marginals;
        for (const auto& state : basis.states()) {
            auto factor = local_factor(state, pc.subsystems);
            if (!factor) throw std::invalid_argument("schedule construction needs a product basis");
            marginals.push_back(*factor);
        }
        std::vector<Vector> rays = marginals;
        for (const auto& extra : config.extra_candidates) {
            if (extra.size() == local_dim) rays.push_back(extra.normalized());
        }
        dedupe_rays(rays);
        for (const auto& clique : maximal_orthogonal_sets(rays)) {
            std::vector<Vector> chosen;
            for (int k : clique) chosen.push_back(rays[static_cast<std::size_t>(k)]);
            pc.bases.push_back(complete_basis(chosen, local_dim));
        }
        for (const auto& b : pc.bases) {
            std::vector<std::vector<bool>> support(n, std::vector<bool>(b.size(), false));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < b.size(); ++k) support[i][k] = std::norm(b[k].dot(marginals[i])) > kZeroProb;
            }
            PairSet sep(pairs);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    bool disjoint = true;
                    for (std::size_t k = 0; k < b.size() && disjoint; ++k) disjoint = !(support[i][k] && support[j][k]);
                    if (disjoint) sep.set(pair_index(i, j, n));
                }
            }
            pc.separates.push_back(std::move(sep));
        }
        parties.push_back(std::move(pc));
    }

    // Per-copy settings: one candidate basis per party.
    struct Setting {
        std::vector<std::size_t> choice;
        PairSet covers;
    };
    std::vector<Setting> settings;
    {
        std::vector<std::size_t> choice(parties.size(), 0);
        while (true) {
            PairSet covers(pairs);
            for (std::size_t p = 0; p < parties.size(); ++p) covers |= parties[p].separates[choice[p]];
            settings.push_back({choice, covers});
            if (settings.size() > 200000) throw SearchFailure("too many per-copy settings to enumerate", {});
            std::size_t p = parties.size();
            while (p-- > 0) {
                if (++choice[p] < parties[p].bases.size()) break;
                choice[p] = 0;
            }
            if (p == static_cast<std::size_t>(-1)) break;
        }
    }
    // Drop settings whose coverage is contained in an earlier-or-larger one.
    std::vector<Setting> useful;
    if (settings.size() > 5000) useful = settings;
    for (std::size_t a = 0; a < settings.size() && settings.size() <= 5000; ++a) {
        bool dominated = false;
        for (std::size_t b = 0; b < settings.size() && !dominated; ++b) {
            if (a == b || !settings[a].covers.subset_of(settings[b].covers)) continue;
            dominated = !(settings[a].covers == settings[b].covers) || b < a;
        }
        if (!dominated) useful.push_back(settings[a]);
    }
    std::size_t max_cover = 0;
    for (const auto& s : useful) max_cover = std::max(max_cover, s.covers.count());

    const int limit = std::min(bound, config.max_copies);
    std::vector<std::size_t> picked;
    bool out_of_time = false;
    std::function<bool(std::size_t, const PairSet&, int)> dfs = [&](std::size_t from, const PairSet& covered,
                                                                    int remaining) {
        const std::size_t missing = pairs - covered.count();
        if (missing == 0) return true;
        if (remaining == 0 || missing > static_cast<std::size_t>(remaining) * max_cover) return false;
        if (seconds_since(start) > config.budget_seconds) {
            out_of_time = true;
            return false;
        }
        for (std::size_t s = from; s < useful.size(); ++s) {
            PairSet next = covered;
            next |= useful[s].covers;
            if (next == covered) continue;
            picked.push_back(s);
            if (dfs(s, next, remaining - 1)) return true;
            picked.pop_back();
            if (out_of_time) return false;
        }
        return false;
    };

    bool found = false;
    for (int k = 1; k <= limit && !found && !out_of_time; ++k) {
        picked.clear();
        found = dfs(0, PairSet(pairs), k);
    }
    if (!found) {
        std::vector<std::string> frontier;
        std::vector<std::size_t> order(useful.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return useful[a].covers.count() > useful[b].covers.count();
        });
        for (std::size_t k = 0; k < std::min<std::size_t>(order.size(), 5); ++k) {
            std::ostringstream row;
            row << "setting " << order[k] << " separates " << useful[order[k]].covers.count() << "/" << pairs << " pairs";
            frontier.push_back(row.str());
        }
        throw SearchFailure(out_of_time ? "schedule search budget exhausted"
                                        : "no schedule within the copy bound separates every pair",
                            std::move(frontier));
    }

    ScheduleResult result;
    result.bound = bound;
    result.copies = static_cast<int>(picked.size());
    result.schedule.copies = result.copies;
    // Drop measurements whose separations are already covered elsewhere, last copy first.
    std::vector<std::vector<bool>> keep(picked.size(), std::vector<bool>(parties.size(), true));
    auto still_complete = [&] {
        PairSet covered(pairs);
        for (std::size_t c = 0; c < picked.size(); ++c) {
            for (std::size_t p = 0; p < parties.size(); ++p) {
                if (keep[c][p]) covered |= parties[p].separates[useful[picked[c]].choice[p]];
            }
        }
        return covered.count() == pairs;
    };
    for (std::size_t c = picked.size(); c-- > 0;) {
        for (std::size_t p = parties.size(); p-- > 0;) {
            if (std::count(keep[c].begin(), keep[c].end(), true) == 1) break;
            keep[c][p] = false;
            if (!still_complete()) keep[c][p] = true;
        }
    }
    for (std::size_t c = 0; c < picked.size(); ++c) {
        std::vector<LocalMeasurement> steps;
        for (std::size_t p = 0; p < parties.size(); ++p) {
            if (!keep[c][p]) continue;
            const auto& pc = parties[p];
            steps.push_back(LocalMeasurement::from_basis(pc.party, pc.subsystems, pc.dims,
                                                         pc.bases[useful[picked[c]].choice[p]]));
        }
        result.schedule.steps.push_back(std::move(steps));
    }
    result.report = evaluate_multicopy(basis, result.schedule);
    if (!result.report.perfect || result.report.ambiguous_transcripts() != 0) {
        throw SearchFailure("constructed schedule failed engine verification", {});
    }
    return result;
}

// ---------------------------------------------------------------- one-bit teleportation

namespace {

constexpr int kBobState = 1, kBobResource = 3;

Matrix real2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// Bob's (state, resource) vector after Alice's qubit is teleported onto his
// resource qubit up to `pauli`: v[2y + z] = sum_x pauli[z][x] phi[2x + y].
Vector teleported(const Vector& phi, const Matrix& pauli) {
    Vector v = Vector::Zero(4);
    for (int y = 0; y < 2; ++y) {
        for (int z = 0; z < 2; ++z) {
            for (int x = 0; x < 2; ++x) v[2 * y + z] += pauli(z, x) * phi[2 * x + y];
        }
    }
    return v;
}

double bit_success(const SuccessReport& report, int bit) {
    double total = 0.0;
    for (std::size_t t = 0; t < report.transcripts.size(); ++t) {
        if (report.transcripts[t].bit != bit) continue;
        double best = 0.0;
        for (std::size_t i = 0; i < report.priors.size(); ++i) best = std::max(best, report.priors[i] * report.table[t][i]);
        total += best;
    }
    return total;
}

}  // namespace

IctpSearchResult find_ictp_protocol(const Ensemble& ensemble, const SearchConfig& config) {
    config.validate();
    const auto start = Clock::now();
    if (ensemble.dims() != Dims{2, 2} || ensemble.ownership() != Ownership{"A", "B"}) {
        throw std::invalid_argument("one-bit teleportation search expects two-qubit states shared as (A, B)");
    }
    if (ensemble.size() < 2 || ensemble.size() > 4) throw std::invalid_argument("expects two to four states");

    const std::vector<Matrix> paulis = {real2(1, 0, 0, 1), real2(0, 1, 1, 0), real2(1, 0, 0, -1), real2(0, -1, 1, 0)};
    std::vector<Vector> pool;
    for (const auto& s : ensemble.states()) {
        for (const auto& p : paulis) pool.push_back(teleported(s.amps(), p));
    }
    for (const auto& extra : config.extra_candidates) {
        if (extra.size() == 4) pool.push_back(extra.normalized());
    }
    dedupe_rays(pool);
    std::vector<std::vector<Vector>> bases;
    for (const auto& clique : maximal_orthogonal_sets(pool)) {
        std::vector<Vector> chosen;
        for (int k : clique) chosen.push_back(pool[static_cast<std::size_t>(k)]);
        auto b = complete_basis(chosen, 4);
        const bool seen = std::any_of(bases.begin(), bases.end(), [&](const std::vector<Vector>& other) {
            return std::all_of(b.begin(), b.end(), [&](const Vector& v) {
                return std::any_of(other.begin(), other.end(), [&](const Vector& u) { return is_ray_of(u, v); });
            });
        });
        if (!seen) bases.push_back(std::move(b));
    }

    auto bob = [](const std::vector<Vector>& b) {
        return LocalMeasurement::from_basis("B", {kBobState, kBobResource}, {2, 2}, b);
    };

    IctpSearchResult result;
    result.candidates = bases.size();
    bool have = false;
    for (const auto& partition : balanced_partitions()) {
        std::size_t best_index[2] = {0, 0};
        double best_value[2] = {-1.0, -1.0};
        for (std::size_t k = 0; k < bases.size(); ++k) {
            if (seconds_since(start) > config.budget_seconds) break;
            const auto report = evaluate(ensemble, build_ictp(partition, bob(bases[k]), bob(bases[k])));
            for (int bit = 0; bit < 2; ++bit) {
                const double v = bit_success(report, bit);
                if (v > best_value[bit]) {
                    best_value[bit] = v;
                    best_index[bit] = k;
                }
            }
        }
        if (best_value[0] < 0.0) break;
        Protocol protocol = build_ictp(partition, bob(bases[best_index[0]]), bob(bases[best_index[1]]));
        const double value = evaluate(ensemble, protocol).success;
        std::ostringstream row;
        row << "partition " << partition[0] << partition[1] << partition[2] << partition[3] << " -> " << value;
        result.frontier.push_back(row.str());
        if (!have || value > result.success) {
            have = true;
            result.success = value;
            result.protocol = std::move(protocol);
            result.partition = partition;
        }
    }
    if (!have) throw SearchFailure("one-bit protocol search budget exhausted", result.frontier);
    result.perfect = result.success >= 1.0 - kPerfectTol;
    return result;
}

// ---------------------------------------------------------------- LPSE probe

namespace {

// Real orthonormal bases of a party's (state, resource) pair, as 4x4 matrices
// whose rows are basis vectors.
using Basis4 = Eigen::Matrix4d;

Basis4 bell_like(double t, double s) {
    Basis4 b;
    b << std::cos(t), 0, 0, std::sin(t),
         std::sin(t), 0, 0, -std::cos(t),
         0, std::cos(s), std::sin(s), 0,
         0, std::sin(s), -std::cos(s), 0;
    return b;
}

Basis4 rotated_product(double t1, double t2) {
    Eigen::Matrix2d u1, u2;
    u1 << std::cos(t1), std::sin(t1), -std::sin(t1), std::cos(t1);
    u2 << std::cos(t2), std::sin(t2), -std::sin(t2), std::cos(t2);
    Basis4 b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) b(2 * i + k, 2 * j + l) = u1(i, j) * u2(k, l);
    return b;
}

// Cayley transform of a random antisymmetric generator: an orthogonal matrix
// at distance ~scale from the identity.
Eigen::Matrix4d random_rotation(std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            k(i, j) = scale * gauss(rng);
            k(j, i) = -k(i, j);
        }
    }
    const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
    return (id - k).inverse() * (id + k);
}

std::vector<Vector> rows_of(const Basis4& b) {
    std::vector<Vector> out;
    for (int r = 0; r < 4; ++r) out.push_back(b.row(r).transpose().cast<Complex>());
    return out;
}

}  // namespace

LpseProbeResult lpse_optimality_probe(const Ensemble& bell_states, const ResourceSpec& resource,
                                      const SearchConfig& config) {
    config.validate();
    const auto start = Clock::now();
    if (bell_states.dims() != Dims{2, 2} || bell_states.ownership() != Ownership{"A", "B"}) {
        throw std::invalid_argument("probe expects two-qubit states shared as (A, B)");
    }
    if (resource.kind == ResourceSpec::Kind::None) throw std::invalid_argument("probe needs a resource state");
    const std::size_t n = bell_states.size();
    if (n != 3 && n != 4) throw std::invalid_argument("probe expects three or four Bell states");
    const auto bell = build_family({Family::Bell, {}, {}, false});
    for (const auto& s : bell_states.states()) {
        if (std::none_of(bell.states().begin(), bell.states().end(), [&](const PureState& b) { return same_ray(s, b); })) {
            throw std::invalid_argument("probe ensemble must consist of Bell states");
        }
    }

    const double ab = resource.entanglement_product();
    LpseProbeResult result;
    result.paper_value = n == 3 ? 2.0 / 3.0 + 2.0 / 3.0 * ab : 0.5 + ab;
    result.achieved = evaluate(bell_states, build_parity_then_bell(resource)).success;

    // psi[i] on (A state, B state, A res, B res); real for Bell ensembles.
    std::vector<Eigen::Matrix4d> coeff;  // coeff[i](alice_local, bob_local)
    for (const auto& s : bell_states.states()) {
        const auto full = with_resource(s, resource);
        Eigen::Matrix4d m;
        for (int x0 = 0; x0 < 2; ++x0)
            for (int x1 = 0; x1 < 2; ++x1)
                for (int x2 = 0; x2 < 2; ++x2)
                    for (int x3 = 0; x3 < 2; ++x3)
                        m(2 * x0 + x2, 2 * x1 + x3) = full.amps()[8 * x0 + 4 * x1 + 2 * x2 + x3].real();
        coeff.push_back(m);
    }
    const auto& priors = bell_states.priors();

    std::vector<Basis4> pool;
    const double res = config.probe_resolution > 0.0 ? config.probe_resolution : std::numbers::pi / 40;
    const std::size_t g = grid_points(res);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            const double t = static_cast<double>(i) * res, s = static_cast<double>(j) * res;
            pool.push_back(bell_like(t, s));
            pool.push_back(rotated_product(t, s));
        }
    }
    std::mt19937_64 rng(config.seed);
    const double scales[] = {0.01, 0.05, 0.2, 1.0, 5.0};
    const Basis4 bell_basis = bell_like(std::numbers::pi / 4, std::numbers::pi / 4);
    for (int k = 0; k < config.random_probes; ++k) {
        pool.push_back(bell_basis * random_rotation(rng, scales[k % 5]).transpose());
    }

    // Per Alice basis: amplitudes w[i](j, :) = a_j^T coeff[i].
    Best best;
    std::uint64_t probes = 0;
    std::vector<Eigen::Matrix4d> w(n);
    for (std::size_t a = 0; a < pool.size(); ++a) {
        if (seconds_since(start) > config.budget_seconds) break;
        for (std::size_t i = 0; i < n; ++i) w[i] = pool[a] * coeff[i];
        for (std::size_t b = 0; b < pool.size(); ++b) {
            double total = 0.0;
            std::array<Eigen::Matrix4d, 4> amps;
            for (std::size_t i = 0; i < n; ++i) amps[i] = w[i] * pool[b].transpose();
            for (int j = 0; j < 4; ++j) {
                for (int k = 0; k < 4; ++k) {
                    double top = 0.0;
                    for (std::size_t i = 0; i < n; ++i) top = std::max(top, priors[i] * amps[i](j, k) * amps[i](j, k));
                    total += top;
                }
            }
            ++probes;
            best.offer(total, a * pool.size() + b);
        }
    }
    result.probes = probes;
    const std::size_t a = static_cast<std::size_t>(best.index / pool.size());
    const std::size_t b = static_cast<std::size_t>(best.index % pool.size());
    Protocol p;
    p.resource = resource;
    p.schedule.copies = 1;
    p.schedule.steps = {{LocalMeasurement::from_basis("A", {0, 2}, {2, 2}, rows_of(pool[a])),
                         LocalMeasurement::from_basis("B", {1, 3}, {2, 2}, rows_of(pool[b]))}};
    p.validate();
    result.best_probe = p;
    result.probe_max = std::max(best.value, evaluate(bell_states, p).success);
    return result;
}

}  // namespace lpdiscrim
