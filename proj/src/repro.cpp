#include "lpdiscrim/repro.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lpdiscrim {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;
const double kLpOptimum = 0.5 + 1.0 / (2.0 * std::numbers::sqrt2);

class Timer {
public:
    double lap() {
        const auto now = Clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    Clock::time_point start_ = Clock::now();
};

void add(CaseReport& report, const std::string& id, std::string claim, double paper, double computed,
         double tolerance, bool pass, double seconds) {
    report.rows.push_back({id, std::move(claim), paper, computed, tolerance, pass, seconds});
}

void add_close(CaseReport& report, const std::string& id, std::string claim, double paper, double computed,
               double tolerance, double seconds) {
    add(report, id, std::move(claim), paper, computed, tolerance, std::abs(computed - paper) <= tolerance,
        seconds);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

ResourceSpec resource_from(const ReproOptions& o, double default_ab) {
    if (o.ab) return ResourceSpec::from_ab(*o.ab);
    if (o.a2) {
        if (std::abs(*o.a2 - 0.5) <= 1e-12) return ResourceSpec::mes();
        return ResourceSpec::nmes(std::sqrt(*o.a2));
    }
    return ResourceSpec::from_ab(default_ab);
}

SearchConfig config_from(const ReproOptions& o, double default_resolution) {
    SearchConfig config;
    config.resolution = o.resolution.value_or(default_resolution);
    config.seed = o.seed;
    config.validate();
    return config.with_env_budget();
}

Ensemble family(Family f, std::map<std::string, double> params = {}, bool allow_coincident = false) {
    FamilySpec spec;
    spec.family = f;
    spec.params = std::move(params);
    spec.allow_coincident_coefficients = allow_coincident;
    return build_family(spec);
}

Ensemble with_optional_basis(const ReproOptions& o, Ensemble fallback) {
    return o.basis ? load_ensemble(*o.basis) : std::move(fallback);
}

// ---------------------------------------------------------------- cases

CaseReport case_eq1_lp(const ReproOptions& o) {
    CaseReport r;
    Timer timer;
    const int copies = o.copies.value_or(1);
    const auto ensemble = with_optional_basis(o, family(Family::Eq1));
    const auto config = config_from(o, copies == 1 ? 1e-3 : 5e-3);
    const auto result = grid_search_lp(ensemble, copies, config);
    r.details = to_json(result, config);
    add(r, "eq1-lp", "LP grid maximum reaches 1/2 + 1/(2 sqrt 2)", kLpOptimum, result.success, 1e-3,
        result.complete && std::abs(result.success - kLpOptimum) <= 1e-3, timer.lap());
    return r;
}

CaseReport case_eq3(const ReproOptions& o) {
    CaseReport r;
    Timer timer;
    const auto resource = resource_from(o, 0.4);
    const double ab = resource.entanglement_product();
    const auto report = evaluate(family(Family::Eq1), build_groisman_protocol(resource));
    const double paper = 0.75 + ab / 2.0;
    r.details = {{"ab", round15(ab)}, {"paper", round15(paper)}, {"engine", round15(report.success)},
                 {"match", std::abs(report.success - paper) <= 1e-9}, {"report", to_json(report)}};
    add_close(r, "eq3", "entangled resource success equals 3/4 + ab/2", paper, report.success, 1e-9, timer.lap());
    const double threshold = (2.0 - std::numbers::sqrt2) / (2.0 * std::numbers::sqrt2);
    const bool improves = report.success > kLpOptimum;
    add(r, "eq3", "improves on the LP optimum exactly when ab exceeds (2 - sqrt 2)/(2 sqrt 2)", threshold, ab, 0.0,
        improves == (ab > threshold), timer.lap());
    return r;
}

CaseReport case_eq5(const ReproOptions& o) {
    CaseReport r;
    Timer timer;
    const double alpha = o.alpha.value_or(kPi / 2);
    const double alpha_prime = o.alpha_prime.value_or(kPi / 2);
    if (alpha_prime < 0.0 || alpha_prime > kPi / 2 + 1e-9) throw std::invalid_argument("alphaprime must lie in [0, pi/2]");
    const auto report = evaluate(family(Family::Eq4, {{"alpha", alpha}}), build_alpha_prime_protocol(alpha_prime, 0.0));
    const double formula = eq5_formula(alpha, alpha_prime);
    r.details = {{"alpha", alpha},
                 {"alpha_prime", alpha_prime},
                 {"formula", round15(formula)},
                 {"engine", round15(report.success)},
                 {"discrepancy", round15(report.success - formula)},
                 {"report", to_json(report)}};
    add(r, "eq5", "MAP success is at least the closed form", formula, report.success, 1e-9,
        report.success >= formula - 1e-9, timer.lap());
    if (std::abs(alpha - kPi / 2) <= 1e-6 && std::abs(alpha_prime - kPi / 2) <= 1e-6) {
        add_close(r, "eq5", "perfect discrimination at alpha = alpha' = pi/2", 1.0, report.success, 1e-9, timer.lap());
    }
    const double crossing = eq5_formula(kPi / 3, kPi / 2);
    add(r, "eq5", "closed form at (pi/3, pi/2) meets the LP baseline cos^2(pi/12)", lp_baseline_formula(kPi / 3),
        crossing, 1e-12,
        std::abs(crossing - lp_baseline_formula(kPi / 3)) <= 1e-12 &&
            std::abs(crossing - std::pow(std::cos(kPi / 12), 2)) <= 1e-12,
        timer.lap());
    return r;
}

CaseReport case_thm2(const ReproOptions& o) {
    CaseReport r;
    Timer timer;
    std::vector<double> alphas;
    if (o.alpha) {
        alphas = {*o.alpha};
    } else {
        alphas = {kPi / 6, kPi / 4, kPi / 3, kPi / 2};
    }
    const auto config = config_from(o, 1e-3);
    Json details = Json::array();
    for (double alpha : alphas) {
        const auto ensemble = family(Family::Eq4, {{"alpha", alpha}});
        const auto two = evaluate_multicopy(ensemble, build_two_copy_schedule(alpha, 0.0));
        add_close(r, "thm2", "two copies distinguish the product basis at alpha = " + fmt(alpha), 1.0, two.success,
                  1e-9, timer.lap());
        const auto single = grid_search_lp(ensemble, 1, config);
        if (alpha > 1e-12) {
            add(r, "thm2", "single-copy LP stays below 1 - 1e-3 at alpha = " + fmt(alpha), 1.0, single.success,
                1e-3, single.complete && single.success < 1.0 - 1e-3, timer.lap());
        }
        details.push_back({{"alpha", alpha},
                           {"two_copy_success", round15(two.success)},
                           {"single_copy_max", round15(single.success)},
                           {"single_copy_angles", single.angles}});
    }
    r.details = {{"points", details}};
    return r;
}

CaseReport case_bell(const ReproOptions& o, int count) {
    CaseReport r;
    Timer timer;
    const std::string id = count == 3 ? "bell3" : "bell4";
    const auto resource = resource_from(o, 0.3);
    const double ab = resource.entanglement_product();
    const auto bell = family(Family::Bell);
    const auto states = count == 3 ? subset(bell, {0, 1, 2}) : bell;
    auto config = config_from(o, 1e-3);
    config.probe_resolution = o.resolution.value_or(0.0);
    const auto probe = lpse_optimality_probe(states, resource, config);
    r.details = {{"ab", round15(ab)},
                 {"paper", round15(probe.paper_value)},
                 {"achieved", round15(probe.achieved)},
                 {"probe_max", round15(probe.probe_max)},
                 {"probes", probe.probes},
                 {"best_probe", to_json(probe.best_probe)}};
    const std::string formula = count == 3 ? "2/3 + 2ab/3" : "1/2 + ab";
    add_close(r, id, "parity-then-Bell achieves " + formula, probe.paper_value, probe.achieved, 1e-9, timer.lap());
    add(r, id, "no probed LP protocol exceeds " + formula, probe.paper_value, probe.probe_max, 1e-9,
        probe.probe_max <= probe.paper_value + 1e-9, 0.0);
    return r;
}

CaseReport case_thm4(const ReproOptions& o) {
    CaseReport r;
    Timer timer;
    std::vector<double> a2s;
    if (o.a2) {
        a2s = {*o.a2};
    } else {
        for (int k = 0; k < 10; ++k) a2s.push_back(0.52 + 0.045 * k);
    }
    const auto protocol = build_bell_bell(ResourceSpec::mes());
    Json details = Json::object();
    for (Family f : {Family::BellPhiPair, Family::BellPsiPair, Family::BellMixedPair}) {
        double worst = 1.0;
        Json values = Json::array();
        for (double a2 : a2s) {
            const double a = std::sqrt(a2);
            const auto report = evaluate(family(f, {{"a", a}}), protocol);
            worst = std::min(worst, report.success);
            values.push_back({{"a2", a2}, {"success", round15(report.success)}});
        }
        const std::string id(family_id(f));
        details[id] = values;
        add_close(r, "thm4", "Bell measurements with a maximally entangled resource distinguish " + id, 1.0, worst,
                  1e-9, timer.lap());
    }
    r.details = details;
    return r;
}

CaseReport case_ictp(const ReproOptions& o) {
    CaseReport r;
    Timer timer;
    const auto config = config_from(o, 1e-3);
    Json details = Json::array();
    auto run = [&](const Ensemble& states, const std::string& what, bool claim_perfect) {
        const auto result = find_ictp_protocol(states, config);
        details.push_back({{"states", states.labels()}, {"what", what}, {"result", to_json(result, config)}});
        if (claim_perfect) {
            add_close(r, "ictp", "one cbit distinguishes " + what, 1.0, result.success, 1e-9, timer.lap());
        } else {
            add(r, "ictp", "best one-cbit value for " + what + " (open)", 1.0, result.success, 0.0, true, timer.lap());
        }
    };
    auto eq8 = [&](double a2, double c2, bool coincident) {
        return family(Family::Eq8, {{"a", std::sqrt(a2)}, {"c", std::sqrt(c2)}}, coincident);
    };
    auto label = [](double a2, double c2, const std::vector<int>& idx) {
        std::string s = "eq8(a^2=" + fmt(a2) + ", c^2=" + fmt(c2) + ") {";
        for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + std::string("phi") + std::to_string(idx[k] + 1);
        return s + "}";
    };

    if (o.a2 || o.c2 || o.triple) {
        const double a2 = o.a2.value_or(0.8), c2 = o.c2.value_or(0.9);
        const auto full = eq8(a2, c2, o.allow_coincident);
        if (o.triple) {
            if (o.triple->size() != 3) throw std::invalid_argument("--triple needs three indices");
            run(subset(full, *o.triple), label(a2, c2, *o.triple), true);
        } else {
            const bool equal = std::abs(a2 - c2) <= 1e-12;
            run(full, label(a2, c2, {0, 1, 2, 3}), equal);
        }
    } else {
        const std::vector<std::vector<int>> triples = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
        for (auto [a2, c2] : {std::pair{0.8, 0.9}, std::pair{0.7, 0.6}}) {
            const auto full = eq8(a2, c2, false);
            for (const auto& t : triples) run(subset(full, t), label(a2, c2, t), true);
        }
        run(eq8(0.8, 0.8, true), label(0.8, 0.8, {0, 1, 2, 3}), true);
        run(eq8(0.8, 0.9, false), label(0.8, 0.9, {0, 1, 2, 3}), false);
    }
    r.details = {{"searches", details}};
    return r;
}

CaseReport case_thm5(const ReproOptions& o) {
    CaseReport r;
    Timer timer;
    auto config = config_from(o, 1e-3);
    if (o.copies) config.max_copies = *o.copies;
    Json details = Json::array();
    auto construct = [&](const Ensemble& basis, const std::string& what, std::optional<int> expected_copies) {
        const auto result = construct_multicopy_schedule(basis, config);
        details.push_back({{"basis", what}, {"result", to_json(result)}});
        const bool within = result.copies <= result.bound &&
                            (!expected_copies || result.copies == *expected_copies);
        add(r, "thm5", "verified perfect schedule for " + what + " within " + std::to_string(result.bound) + " copies",
            1.0, result.report.success, 1e-9, within && result.report.perfect, timer.lap());
    };
    if (o.basis) {
        construct(load_ensemble(*o.basis), *o.basis, std::nullopt);
    } else {
        for (auto [dims, expected] : {std::pair{std::vector<int>{2, 2}, 2}, std::pair{std::vector<int>{3, 3}, 4},
                                      std::pair{std::vector<int>{2, 2, 2}, 3}}) {
            const int bound = copy_bound({dims});
            std::string what = "copy bound for (";
            for (std::size_t k = 0; k < dims.size(); ++k) what += (k ? "," : "") + std::to_string(dims[k]);
            add(r, "thm5", what + ")", expected, bound, 0.0, bound == expected, timer.lap());
        }
        construct(family(Family::Eq1), "eq1", std::nullopt);
        construct(family(Family::Eq4, {{"alpha", kPi / 3}, {"theta", 0.3}}), "eq4(alpha=pi/3, theta=0.3)",
                  std::nullopt);
        construct(computational_basis({2, 2}, {"A", "B"}), "2x2 computational basis", 1);
        construct(domino_basis(), "3x3 domino basis", std::nullopt);
    }
    r.details = {{"constructions", details}};
    return r;
}

CaseReport case_eq9(const ReproOptions& o) {
    CaseReport r;
    Timer timer;
    std::vector<double> a2s = o.a2 ? std::vector<double>{*o.a2} : std::vector<double>{0.6, 0.8};
    std::vector<int> copies = o.copies ? std::vector<int>{*o.copies} : std::vector<int>{1, 2};
    Json details = Json::array();
    for (double a2 : a2s) {
        const auto ensemble = family(Family::Eq9, {{"a", std::sqrt(a2)}});
        for (int c : copies) {
            const auto config = config_from(o, c == 1 ? 1e-3 : 5e-3);
            const auto result = grid_search_lp(ensemble, c, config);
            details.push_back({{"a2", a2}, {"copies", c}, {"result", to_json(result, config)}});
            add(r, "eq9-search",
                std::to_string(c) + "-copy LP grid stays below 1 - 1e-3 at a^2 = " + fmt(a2), 1.0, result.success,
                1e-3, result.complete && result.success < 1.0 - 1e-3, timer.lap());
        }
    }
    r.details = {{"searches", details}};
    return r;
}

CaseReport case_evaluate(const ReproOptions& o) {
    if (!o.basis || !o.protocol) throw std::invalid_argument("evaluate needs --basis and --protocol");
    const auto ensemble = load_ensemble(*o.basis);
    const auto protocol = load_protocol(*o.protocol);
    CaseReport r;
    const auto report = protocol.schedule.copies > 1 && protocol.resource.kind == ResourceSpec::Kind::None &&
                                protocol.comm.kind == CommPlan::Kind::None
                            ? evaluate_multicopy(ensemble, protocol.schedule)
                            : evaluate(ensemble, protocol);
    r.details = to_json(report);
    return r;
}

using CaseFn = std::function<CaseReport(const ReproOptions&)>;

const std::vector<std::pair<std::string, CaseFn>>& registry() {
    static const std::vector<std::pair<std::string, CaseFn>> cases = {
        {"eq1-lp", case_eq1_lp},
        {"eq3", case_eq3},
        {"eq5", case_eq5},
        {"thm2", case_thm2},
        {"bell3", [](const ReproOptions& o) { return case_bell(o, 3); }},
        {"bell4", [](const ReproOptions& o) { return case_bell(o, 4); }},
        {"thm4", case_thm4},
        {"ictp", case_ictp},
        {"thm5", case_thm5},
        {"eq9-search", case_eq9},
    };
    return cases;
}

}  // namespace

bool CaseReport::passed() const {
    for (const auto& row : rows) {
        if (!row.pass) return false;
    }
    return true;
}

const std::vector<std::string>& case_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& [id, fn] : registry()) out.push_back(id);
        return out;
    }();
    return ids;
}

CaseReport run_case(const ReproOptions& options) {
    if (options.case_id == "evaluate") return case_evaluate(options);
    if (options.case_id == "all") return emit_claim_matrix(options.seed);
    for (const auto& [id, fn] : registry()) {
        if (id == options.case_id) return fn(options);
    }
    throw std::invalid_argument("unknown case id: " + options.case_id);
}

CaseReport emit_claim_matrix(std::uint64_t seed) {
    CaseReport all;
    Json details = Json::object();
    for (const auto& [id, fn] : registry()) {
        ReproOptions o;
        o.case_id = id;
        o.seed = seed;
        auto r = fn(o);
        all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
        details[id] = std::move(r.details);
    }
    all.details = std::move(details);
    return all;
}

std::string render_json(const CaseReport& report, double seconds) {
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"case", row.case_id},
                        {"claim", row.claim},
                        {"paper_value", round15(row.paper_value)},
                        {"computed", round15(row.computed)},
                        {"tolerance", row.tolerance},
                        {"pass", row.pass}});
    }
    Json timings = Json::array();
    for (const auto& row : report.rows) timings.push_back(row.seconds);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    Json doc = {{"rows", rows},
                {"pass", report.passed()},
                {"details", report.details},
                {"metadata", {{"timestamp", stamp}, {"seconds", seconds}, {"row_seconds", timings}}}};
    return doc.dump(2) + "\n";
}

std::string render_csv(const CaseReport& report) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s) {
            if (ch == '"') out += '"';
            out += ch;
        }
        return out + "\"";
    };
    std::ostringstream out;
    out << "case,claim,paper_value,computed,tolerance,pass,seconds\n";
    for (const auto& row : report.rows) {
        out << row.case_id << ',' << quote(row.claim) << ',' << fmt(row.paper_value) << ',' << fmt(row.computed)
            << ',' << fmt(row.tolerance) << ',' << (row.pass ? "true" : "false") << ',' << fmt(row.seconds) << '\n';
    }
    return out.str();
}

}  // namespace lpdiscrim
