// State families, resource states and ensembles of orthonormal states.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lpdiscrim/tensor.hpp"

namespace lpdiscrim {

// Orthonormal pure states on a common layout with prior probabilities.
class Ensemble {
public:
    // Empty `priors` means uniform. Empty `labels` yields "s1".."sN".
    explicit Ensemble(std::vector<PureState> states, std::vector<double> priors = {},
                      std::vector<std::string> labels = {});

    const std::vector<PureState>& states() const { return states_; }
    const std::vector<double>& priors() const { return priors_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t size() const { return states_.size(); }
    const Dims& dims() const { return states_.front().dims(); }
    const Ownership& ownership() const { return states_.front().ownership(); }

private:
    std::vector<PureState> states_;
    std::vector<double> priors_;
    std::vector<std::string> labels_;
};

enum class Family {
    Eq1,            // semilocal 2x2 product basis
    Eq4,            // general 2x2 product basis (alpha, theta)
    Eq6,            // two orthogonal entangled states (alpha, theta, a1..a4)
    Eq7,            // one entangled plus two product states (alpha, theta, a1, a2)
    Eq8,            // four unequally entangled states (a, c)
    Eq9,            // a|00>+b|11>, b|00>-a|11>
    Bell,           // phi+, phi-, psi+, psi-
    Domino3x3,      // nine-state 3x3 product basis
    BellPhiPair,    // phi+, phi-, a|01>+b|10>
    BellPsiPair,    // psi+, psi-, a|00>+b|11>
    BellMixedPair,  // phi+, psi+, a phi- + b psi-
};

Family parse_family(std::string_view id);
std::string_view family_id(Family family);

struct FamilySpec {
    Family family = Family::Eq1;
    std::map<std::string, double> params;
    std::vector<double> priors;
    // Relaxes the pairwise-distinct requirement on the Eq8 coefficients a, c, d.
    bool allow_coincident_coefficients = false;
};

Ensemble build_family(const FamilySpec& spec);
Ensemble subset(const Ensemble& ensemble, const std::vector<int>& indices);
Ensemble domino_basis();
Ensemble computational_basis(const Dims& dims, const Ownership& ownership);

// Single-qubit real vectors |theta> = cos t|0> + sin t|1>, |theta'> orthogonal.
Vector theta_ket(double theta);
Vector theta_perp_ket(double theta);

struct ResourceSpec {
    enum class Kind { None, Nmes, Mes };

    Kind kind = Kind::None;
    double a = 0.0;
    double b = 0.0;
    std::string first_party = "A";
    std::string second_party = "B";

    static ResourceSpec none();
    static ResourceSpec mes();
    // a > b > 0, b = sqrt(1 - a^2).
    static ResourceSpec nmes(double a);
    // Picks a >= b with a*b = ab; ab = 1/2 yields the maximally entangled state.
    static ResourceSpec from_ab(double ab);

    void validate() const;
    double entanglement_product() const { return a * b; }
    // a|00> + b|11> on two qubits owned by (first_party, second_party).
    PureState state() const;
};

// |psi> (x) resource, resource qubits appended after the existing subsystems.
PureState with_resource(const PureState& state, const ResourceSpec& resource);

}  // namespace lpdiscrim
