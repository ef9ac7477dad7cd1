#include "lpdiscrim/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace lpdiscrim {

namespace {

constexpr double kParamTol = 1e-9;

const Ownership kTwoParty{"A", "B"};

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

PureState two_qubit(const Vector& amps) {
    return PureState::normalized({2, 2}, amps, kTwoParty);
}

PureState product_state(const Dims& dims, const Vector& alice, const Vector& bob) {
    return PureState::normalized(dims, kron(alice, bob), kTwoParty);
}

[[noreturn]] void violated(const std::string& what) {
    throw std::invalid_argument("parameter constraint violated: " + what);
}

class Params {
public:
    explicit Params(const std::map<std::string, double>& values) : values_(values) {}

    std::optional<double> get(const std::string& name) const {
        auto it = values_.find(name);
        if (it == values_.end()) return std::nullopt;
        if (!std::isfinite(it->second)) violated(name + " must be finite");
        return it->second;
    }

    double require(const std::string& name) const {
        auto v = get(name);
        if (!v) violated("missing parameter " + name);
        return *v;
    }

    double get_or(const std::string& name, double fallback) const { return get(name).value_or(fallback); }

    double alpha() const {
        const double alpha = get_or("alpha", std::numbers::pi / 2);
        if (alpha < -kParamTol || alpha > std::numbers::pi / 2 + kParamTol) violated("0 <= alpha <= pi/2");
        return alpha;
    }

    // (x, y) with x^2 + y^2 = 1 and both positive; y derived when absent.
    std::pair<double, double> unit_pair(const std::string& x_name, const std::string& y_name) const {
        const double x = require(x_name);
        const auto y_given = get(y_name);
        if (x <= 0.0 || x >= 1.0) violated("0 < " + x_name + " < 1");
        const double y = y_given.value_or(std::sqrt(1.0 - x * x));
        if (y <= 0.0) violated(y_name + " > 0");
        if (std::abs(x * x + y * y - 1.0) > kParamTol) violated(x_name + "^2 + " + y_name + "^2 = 1");
        return {x, y};
    }

private:
    const std::map<std::string, double>& values_;
};

// |0>|t>, |0>|t'>, |1>(cos(a/2)|t> + sin(a/2)|t'>), |1>(sin(a/2)|t> - cos(a/2)|t'>)
struct ProductFrame {
    Vector t, tp, tilde, tilde_perp;

    ProductFrame(double alpha, double theta)
        : t(theta_ket(theta)), tp(theta_perp_ket(theta)),
          tilde(std::cos(alpha / 2) * t + std::sin(alpha / 2) * tp),
          tilde_perp(std::sin(alpha / 2) * t - std::cos(alpha / 2) * tp) {}
};

}  // namespace

// ---------------------------------------------------------------- Ensemble

Ensemble::Ensemble(std::vector<PureState> states, std::vector<double> priors,
                   std::vector<std::string> labels)
    : states_(std::move(states)), priors_(std::move(priors)), labels_(std::move(labels)) {
    if (states_.empty()) throw std::invalid_argument("ensemble has no states");
    const auto& dims = states_.front().dims();
    const auto& owners = states_.front().ownership();
    for (const auto& s : states_) {
        if (s.dims() != dims || s.ownership() != owners) {
            throw std::invalid_argument("ensemble states must share dims and ownership");
        }
    }
    for (std::size_t i = 0; i < states_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(inner(states_[i], states_[j])) > kNormTol) {
                throw std::invalid_argument("ensemble states are not pairwise orthogonal");
            }
        }
    }
    if (priors_.empty()) priors_.assign(states_.size(), 1.0 / static_cast<double>(states_.size()));
    if (priors_.size() != states_.size()) throw std::invalid_argument("prior count does not match state count");
    double total = 0.0;
    for (double p : priors_) {
        if (!(p >= 0.0)) throw std::invalid_argument("priors must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("priors must sum to 1");
    if (labels_.empty()) {
        for (std::size_t i = 0; i < states_.size(); ++i) labels_.push_back("s" + std::to_string(i + 1));
    }
    if (labels_.size() != states_.size()) throw std::invalid_argument("label count does not match state count");
}

// ---------------------------------------------------------------- families

Family parse_family(std::string_view id) {
    static const std::pair<std::string_view, Family> table[] = {
        {"eq1", Family::Eq1},
        {"eq4", Family::Eq4},
        {"eq6", Family::Eq6},
        {"eq7", Family::Eq7},
        {"eq8", Family::Eq8},
        {"eq9", Family::Eq9},
        {"bell", Family::Bell},
        {"domino-3x3", Family::Domino3x3},
        {"bell-phi-pair", Family::BellPhiPair},
        {"bell-psi-pair", Family::BellPsiPair},
        {"bell-mixed-pair", Family::BellMixedPair},
    };
    for (const auto& [name, family] : table) {
        if (name == id) return family;
    }
    throw std::invalid_argument("unknown family id: " + std::string(id));
}

std::string_view family_id(Family family) {
    switch (family) {
        case Family::Eq1: return "eq1";
        case Family::Eq4: return "eq4";
        case Family::Eq6: return "eq6";
        case Family::Eq7: return "eq7";
        case Family::Eq8: return "eq8";
        case Family::Eq9: return "eq9";
        case Family::Bell: return "bell";
        case Family::Domino3x3: return "domino-3x3";
        case Family::BellPhiPair: return "bell-phi-pair";
        case Family::BellPsiPair: return "bell-psi-pair";
        case Family::BellMixedPair: return "bell-mixed-pair";
    }
    return "unknown";
}

Vector theta_ket(double theta) { return ket({std::cos(theta), std::sin(theta)}); }
Vector theta_perp_ket(double theta) { return ket({-std::sin(theta), std::cos(theta)}); }

Ensemble build_family(const FamilySpec& spec) {
    const Params p(spec.params);
    const double r = 1.0 / std::numbers::sqrt2;
    const Vector zero = ket({1, 0}), one = ket({0, 1});
    std::vector<PureState> states;
    std::vector<std::string> labels;

    switch (spec.family) {
        case Family::Eq1: {
            const Vector plus = ket({r, r}), minus = ket({r, -r});
            states = {product_state({2, 2}, zero, zero), product_state({2, 2}, zero, one),
                      product_state({2, 2}, one, plus), product_state({2, 2}, one, minus)};
            labels = {"psi1", "psi2", "psi3", "psi4"};
            break;
        }
        case Family::Eq4: {
            const ProductFrame f(p.alpha(), p.get_or("theta", 0.0));
            states = {product_state({2, 2}, zero, f.t), product_state({2, 2}, zero, f.tp),
                      product_state({2, 2}, one, f.tilde), product_state({2, 2}, one, f.tilde_perp)};
            labels = {"psi1", "psi2", "psi3", "psi4"};
            break;
        }
        case Family::Eq6: {
            const ProductFrame f(p.alpha(), p.get_or("theta", 0.0));
            const auto [a1, a2] = p.unit_pair("a1", "a2");
            const auto [a3, a4] = p.unit_pair("a3", "a4");
            states = {two_qubit(a1 * kron(zero, f.t) + a2 * kron(one, f.tilde)),
                      two_qubit(a3 * kron(zero, f.tp) + a4 * kron(one, f.tilde_perp))};
            labels = {"psibar1", "psibar2"};
            break;
        }
        case Family::Eq7: {
            const ProductFrame f(p.alpha(), p.get_or("theta", 0.0));
            const auto [a1, a2] = p.unit_pair("a1", "a2");
            states = {two_qubit(a1 * kron(zero, f.t) + a2 * kron(one, f.tilde)),
                      product_state({2, 2}, zero, f.tp), product_state({2, 2}, one, f.tilde_perp)};
            labels = {"psibar1", "psi2", "psi4"};
            break;
        }
        case Family::Eq8: {
            const auto [a, b] = p.unit_pair("a", "b");
            const auto [c, d] = p.unit_pair("c", "d");
            if (!(a > b)) violated("a > b");
            if (!(c > d)) violated("c > d");
            if (!spec.allow_coincident_coefficients) {
                if (std::abs(a - c) <= kParamTol) violated("a != c");
                if (std::abs(a - d) <= kParamTol) violated("a != d");
                if (std::abs(c - d) <= kParamTol) violated("c != d");
            }
            states = {two_qubit(ket({a, 0, 0, b})), two_qubit(ket({b, 0, 0, -a})),
                      two_qubit(ket({0, c, d, 0})), two_qubit(ket({0, d, -c, 0}))};
            labels = {"phi1", "phi2", "phi3", "phi4"};
            break;
        }
        case Family::Eq9: {
            const auto [a, b] = p.unit_pair("a", "b");
            if (!(a > b)) violated("a > b");
            states = {two_qubit(ket({a, 0, 0, b})), two_qubit(ket({b, 0, 0, -a}))};
            labels = {"chi1", "chi2"};
            break;
        }
        case Family::Bell:
            states = {two_qubit(ket({r, 0, 0, r})), two_qubit(ket({r, 0, 0, -r})),
                      two_qubit(ket({0, r, r, 0})), two_qubit(ket({0, r, -r, 0}))};
            labels = {"phi+", "phi-", "psi+", "psi-"};
            break;
        case Family::Domino3x3:
            return domino_basis();
        case Family::BellPhiPair: {
            const auto [a, b] = p.unit_pair("a", "b");
            states = {two_qubit(ket({r, 0, 0, r})), two_qubit(ket({r, 0, 0, -r})),
                      two_qubit(ket({0, a, b, 0}))};
            labels = {"phi+", "phi-", "chi"};
            break;
        }
        case Family::BellPsiPair: {
            const auto [a, b] = p.unit_pair("a", "b");
            states = {two_qubit(ket({0, r, r, 0})), two_qubit(ket({0, r, -r, 0})),
                      two_qubit(ket({a, 0, 0, b}))};
            labels = {"psi+", "psi-", "chi"};
            break;
        }
        case Family::BellMixedPair: {
            const auto [a, b] = p.unit_pair("a", "b");
            states = {two_qubit(ket({r, 0, 0, r})), two_qubit(ket({0, r, r, 0})),
                      two_qubit(ket({a * r, b * r, -b * r, -a * r}))};
            labels = {"phi+", "psi+", "chi"};
            break;
        }
    }
    return Ensemble(std::move(states), spec.priors, std::move(labels));
}

Ensemble subset(const Ensemble& ensemble, const std::vector<int>& indices) {
    if (indices.empty()) throw std::invalid_argument("empty selection");
    std::vector<PureState> states;
    std::vector<std::string> labels;
    std::vector<bool> used(ensemble.size(), false);
    for (int i : indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= ensemble.size()) {
            throw std::out_of_range("subset index out of range");
        }
        if (used[static_cast<std::size_t>(i)]) throw std::invalid_argument("subset indices must be distinct");
        used[static_cast<std::size_t>(i)] = true;
        states.push_back(ensemble.states()[static_cast<std::size_t>(i)]);
        labels.push_back(ensemble.labels()[static_cast<std::size_t>(i)]);
    }
    return Ensemble(std::move(states), {}, std::move(labels));
}

Ensemble domino_basis() {
    const double r = 1.0 / std::numbers::sqrt2;
    const Vector k0 = ket({1, 0, 0}), k1 = ket({0, 1, 0}), k2 = ket({0, 0, 1});
    const Dims dims{3, 3};
    std::vector<PureState> states = {
        product_state(dims, k1, k1),
        product_state(dims, k0, r * (k0 + k1)),
        product_state(dims, k0, r * (k0 - k1)),
        product_state(dims, k2, r * (k1 + k2)),
        product_state(dims, k2, r * (k1 - k2)),
        product_state(dims, r * (k1 + k2), k0),
        product_state(dims, r * (k1 - k2), k0),
        product_state(dims, r * (k0 + k1), k2),
        product_state(dims, r * (k0 - k1), k2),
    };
    return Ensemble(std::move(states), {},
                    {"d1", "d2+", "d2-", "d3+", "d3-", "d4+", "d4-", "d5+", "d5-"});
}

Ensemble computational_basis(const Dims& dims, const Ownership& ownership) {
    const std::size_t n = product(dims);
    if (n > kMaxAmplitudes) throw std::invalid_argument("state exceeds the amplitude cap");
    std::vector<PureState> states;
    for (std::size_t i = 0; i < n; ++i) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
        v[static_cast<Eigen::Index>(i)] = 1.0;
        states.emplace_back(dims, std::move(v), ownership);
    }
    return Ensemble(std::move(states));
}

// ---------------------------------------------------------------- resources

ResourceSpec ResourceSpec::none() { return ResourceSpec{}; }

ResourceSpec ResourceSpec::mes() {
    ResourceSpec r;
    r.kind = Kind::Mes;
    r.a = r.b = 1.0 / std::numbers::sqrt2;
    return r;
}

ResourceSpec ResourceSpec::nmes(double a) {
    ResourceSpec r;
    r.kind = Kind::Nmes;
    r.a = a;
    r.b = std::sqrt(std::max(0.0, 1.0 - a * a));
    r.validate();
    return r;
}

ResourceSpec ResourceSpec::from_ab(double ab) {
    if (!(ab > 0.0) || ab > 0.5 + kParamTol) throw std::invalid_argument("resource requires 0 < ab <= 1/2");
    if (std::abs(ab - 0.5) <= kParamTol) return mes();
    // a^2 b^2 = ab^2 with a^2 + b^2 = 1
    const double a2 = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * ab * ab));
    return nmes(std::sqrt(a2));
}

void ResourceSpec::validate() const {
    if (first_party.empty() || second_party.empty()) throw std::invalid_argument("resource party label is empty");
    switch (kind) {
        case Kind::None:
            return;
        case Kind::Mes:
            if (std::abs(a - 1.0 / std::numbers::sqrt2) > kParamTol || std::abs(b - a) > kParamTol) {
                throw std::invalid_argument("maximally entangled resource requires a = b = 1/sqrt(2)");
            }
            return;
        case Kind::Nmes:
            if (!(a > b && b > 0.0)) violated("resource a > b > 0");
            if (std::abs(a * a + b * b - 1.0) > kParamTol) violated("resource a^2 + b^2 = 1");
            return;
    }
}

PureState ResourceSpec::state() const {
    validate();
    if (kind == Kind::None) throw std::logic_error("no resource state");
    return PureState::normalized({2, 2}, ket({a, 0, 0, b}), {first_party, second_party});
}

PureState with_resource(const PureState& state, const ResourceSpec& resource) {
    if (resource.kind == ResourceSpec::Kind::None) return state;
    return tensor({state, resource.state()});
}

}  // namespace lpdiscrim
