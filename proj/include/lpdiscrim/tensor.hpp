// Dense tensor-product state algebra for small multipartite systems.
//
// Subsystem 0 is the most significant digit of the flat amplitude index, so a
// two-qubit vector is laid out as (|00>, |01>, |10>, |11>). Party ownership is
// metadata attached to each subsystem and never reorders storage.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lpdiscrim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-9;
inline constexpr double kZeroProb = 1e-12;
inline constexpr std::size_t kMaxAmplitudes = 4096;

using Dims = std::vector<int>;
using Ownership = std::vector<std::string>;

std::size_t product(const Dims& dims);

class PureState {
public:
    PureState(Dims dims, Vector amps, Ownership ownership);

    // Normalizes `amps` before validation. Zero vectors are rejected.
    static PureState normalized(Dims dims, Vector amps, Ownership ownership);

    // Real-amplitude convenience constructor (normalizes).
    static PureState from_real(Dims dims, const std::vector<double>& amps, Ownership ownership);

    const Dims& dims() const { return dims_; }
    const Vector& amps() const { return amps_; }
    const Ownership& ownership() const { return ownership_; }
    std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
    std::size_t subsystem_count() const { return dims_.size(); }

    // Subsystem indices owned by `party`, ascending.
    std::vector<int> subsystems_of(const std::string& party) const;
    // Party labels in order of first appearance.
    std::vector<std::string> parties() const;

    bool is_real(double tol = kNormTol) const;

private:
    Dims dims_;
    Vector amps_;
    Ownership ownership_;
};

// Same physical state up to a global phase.
bool same_ray(const PureState& lhs, const PureState& rhs, double tol = kNormTol);
Complex inner(const PureState& lhs, const PureState& rhs);

class Projector {
public:
    // Orthogonal projector onto span(vectors); vectors must be orthonormal.
    static Projector from_vectors(Dims dims, const std::vector<Vector>& vectors);
    static Projector from_real_vectors(Dims dims, const std::vector<std::vector<double>>& vectors);
    // Validates idempotence, hermiticity and integral trace.
    static Projector from_matrix(Dims dims, Matrix matrix);

    const Dims& dims() const { return dims_; }
    const Matrix& matrix() const { return matrix_; }
    int rank() const { return rank_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    // Orthonormal generating set of the range.
    const std::vector<Vector>& basis() const { return basis_; }

private:
    Projector(Dims dims, Matrix matrix, std::vector<Vector> basis);

    Dims dims_;
    Matrix matrix_;
    std::vector<Vector> basis_;
    int rank_;
};

struct BipartitionSplit {
    std::set<int> left;
    std::set<int> right;

    // `left` plus the complement over `subsystems` indices.
    static BipartitionSplit of(std::set<int> left, std::size_t subsystems);
    void validate(std::size_t subsystems) const;
};

// Offsets that address the digits of a chosen subsystem list inside a flat
// vector. base + offset[k] runs over the local basis (in the listed subsystem
// order) for every fixed assignment of the remaining digits.
struct LocalIndexMap {
    std::vector<std::size_t> bases;
    std::vector<std::size_t> offsets;

    LocalIndexMap(const Dims& dims, const std::vector<int>& subsystems);
    std::size_t local_dim() const { return offsets.size(); }
};

// out = (op on `subsystems`, identity elsewhere) * in. `op` must be square
// with size equal to the product of the selected dims.
void apply_local(const LocalIndexMap& map, const Matrix& op, const Vector& in, Vector& out);

PureState tensor(const std::vector<PureState>& states);

struct ProjectionOutcome {
    double probability = 0.0;
    // Renormalized post-measurement state; absent when probability <= 1e-12.
    std::optional<PureState> post_state;
    // Projected vector before renormalization.
    Vector unnormalized;
};

ProjectionOutcome apply_local_projector(const PureState& state, const Projector& proj,
                                        const std::vector<int>& subsystems);

// Applies an arbitrary local operator (e.g. a unitary) and renormalizes.
PureState apply_local_operator(const PureState& state, const Matrix& op,
                               const std::vector<int>& subsystems);

// Coefficient matrix Psi[l][r] for the split, left and right digits each in
// ascending subsystem order.
Matrix coefficient_matrix(const PureState& state, const BipartitionSplit& split);

std::vector<double> schmidt_coefficients(const PureState& state, const BipartitionSplit& split);

// Sum of |negative eigenvalues| of the partial transpose of |psi><psi|.
double negativity(const PureState& state, const BipartitionSplit& split);

// Normalized local factor on `subsystems` when the state is a product across
// that cut; std::nullopt if the Schmidt rank exceeds one.
std::optional<Vector> local_factor(const PureState& state, const std::vector<int>& subsystems,
                                   double tol = kNormTol);

}  // namespace lpdiscrim
