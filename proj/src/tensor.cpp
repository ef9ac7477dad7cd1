#include "lpdiscrim/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpdiscrim {

namespace {

std::vector<std::size_t> strides_of(const Dims& dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) {
        strides[k - 1] = strides[k] * static_cast<std::size_t>(dims[k]);
    }
    return strides;
}

void check_dims(const Dims& dims) {
    if (dims.empty()) throw std::invalid_argument("state has no subsystems");
    for (int d : dims) {
        if (d < 2) throw std::invalid_argument("subsystem dimension must be >= 2");
    }
}

// Digits of `index` for each subsystem (most significant first).
std::vector<int> digits_of(std::size_t index, const Dims& dims) {
    std::vector<int> digits(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = static_cast<int>(index % static_cast<std::size_t>(dims[k]));
        index /= static_cast<std::size_t>(dims[k]);
    }
    return digits;
}

}  // namespace

std::size_t product(const Dims& dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

// ---------------------------------------------------------------- PureState

PureState::PureState(Dims dims, Vector amps, Ownership ownership)
    : dims_(std::move(dims)), amps_(std::move(amps)), ownership_(std::move(ownership)) {
    check_dims(dims_);
    const std::size_t n = product(dims_);
    if (n > kMaxAmplitudes) throw std::invalid_argument("state exceeds the amplitude cap");
    if (static_cast<std::size_t>(amps_.size()) != n) {
        throw std::invalid_argument("amplitude count does not match product of dims");
    }
    if (ownership_.size() != dims_.size()) {
        throw std::invalid_argument("ownership must label every subsystem exactly once");
    }
    for (const auto& label : ownership_) {
        if (label.empty()) throw std::invalid_argument("empty party label");
    }
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTol) {
        throw std::invalid_argument("state is not normalized");
    }
}

PureState PureState::normalized(Dims dims, Vector amps, Ownership ownership) {
    const double norm = amps.norm();
    if (norm < 1e-300) throw std::invalid_argument("cannot normalize a zero vector");
    amps /= norm;
    return PureState(std::move(dims), std::move(amps), std::move(ownership));
}

PureState PureState::from_real(Dims dims, const std::vector<double>& amps, Ownership ownership) {
    Vector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t k = 0; k < amps.size(); ++k) v[static_cast<Eigen::Index>(k)] = amps[k];
    return normalized(std::move(dims), std::move(v), std::move(ownership));
}

std::vector<int> PureState::subsystems_of(const std::string& party) const {
    std::vector<int> out;
    for (std::size_t k = 0; k < ownership_.size(); ++k) {
        if (ownership_[k] == party) out.push_back(static_cast<int>(k));
    }
    return out;
}

std::vector<std::string> PureState::parties() const {
    std::vector<std::string> out;
    for (const auto& label : ownership_) {
        if (std::find(out.begin(), out.end(), label) == out.end()) out.push_back(label);
    }
    return out;
}

bool PureState::is_real(double tol) const {
    return amps_.imag().cwiseAbs().maxCoeff() <= tol;
}

Complex inner(const PureState& lhs, const PureState& rhs) {
    if (lhs.dims() != rhs.dims()) throw std::invalid_argument("inner product of mismatched dims");
    return lhs.amps().dot(rhs.amps());
}

bool same_ray(const PureState& lhs, const PureState& rhs, double tol) {
    if (lhs.dims() != rhs.dims()) return false;
    return std::abs(std::abs(inner(lhs, rhs)) - 1.0) <= tol;
}

// ---------------------------------------------------------------- Projector

Projector::Projector(Dims dims, Matrix matrix, std::vector<Vector> basis)
    : dims_(std::move(dims)), matrix_(std::move(matrix)), basis_(std::move(basis)),
      rank_(static_cast<int>(basis_.size())) {}

Projector Projector::from_vectors(Dims dims, const std::vector<Vector>& vectors) {
    check_dims(dims);
    const auto n = static_cast<Eigen::Index>(product(dims));
    if (vectors.empty()) throw std::invalid_argument("projector needs at least one vector");
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != n) throw std::invalid_argument("projector vector has wrong length");
        if (std::abs(vectors[j].squaredNorm() - 1.0) > kNormTol) {
            throw std::invalid_argument("projector vectors must be normalized");
        }
        for (std::size_t k = 0; k < j; ++k) {
            if (std::abs(vectors[k].dot(vectors[j])) > kNormTol) {
                throw std::invalid_argument("projector vectors must be orthogonal");
            }
        }
        m += vectors[j] * vectors[j].adjoint();
    }
    return Projector(std::move(dims), std::move(m), vectors);
}

Projector Projector::from_real_vectors(Dims dims, const std::vector<std::vector<double>>& vectors) {
    std::vector<Vector> vs;
    vs.reserve(vectors.size());
    for (const auto& v : vectors) {
        Vector c(static_cast<Eigen::Index>(v.size()));
        for (std::size_t k = 0; k < v.size(); ++k) c[static_cast<Eigen::Index>(k)] = v[k];
        vs.push_back(c.normalized());
    }
    return from_vectors(std::move(dims), vs);
}

Projector Projector::from_matrix(Dims dims, Matrix matrix) {
    check_dims(dims);
    const auto n = static_cast<Eigen::Index>(product(dims));
    if (matrix.rows() != n || matrix.cols() != n) {
        throw std::invalid_argument("projector matrix size does not match dims");
    }
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kNormTol) {
        throw std::invalid_argument("projector is not Hermitian");
    }
    if ((matrix * matrix - matrix).cwiseAbs().maxCoeff() > kNormTol) {
        throw std::invalid_argument("projector is not idempotent");
    }
    const double trace = matrix.trace().real();
    const double rank = std::round(trace);
    if (std::abs(trace - rank) > kNormTol || rank < 1.0) {
        throw std::invalid_argument("projector trace is not a positive integer");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(matrix);
    std::vector<Vector> basis;
    for (Eigen::Index k = n - static_cast<Eigen::Index>(rank); k < n; ++k) {
        basis.push_back(eig.eigenvectors().col(k));
    }
    return Projector(std::move(dims), std::move(matrix), std::move(basis));
}

// ---------------------------------------------------------------- splits

BipartitionSplit BipartitionSplit::of(std::set<int> left, std::size_t subsystems) {
    BipartitionSplit split;
    for (std::size_t k = 0; k < subsystems; ++k) {
        if (!left.count(static_cast<int>(k))) split.right.insert(static_cast<int>(k));
    }
    split.left = std::move(left);
    split.validate(subsystems);
    return split;
}

void BipartitionSplit::validate(std::size_t subsystems) const {
    if (left.empty() || right.empty()) throw std::invalid_argument("bipartition side is empty");
    if (left.size() + right.size() != subsystems) {
        throw std::invalid_argument("bipartition does not cover all subsystems");
    }
    for (int k : left) {
        if (k < 0 || static_cast<std::size_t>(k) >= subsystems) {
            throw std::invalid_argument("bipartition index out of range");
        }
        if (right.count(k)) throw std::invalid_argument("bipartition sides overlap");
    }
    for (int k : right) {
        if (k < 0 || static_cast<std::size_t>(k) >= subsystems) {
            throw std::invalid_argument("bipartition index out of range");
        }
    }
}

// ---------------------------------------------------------------- local maps

LocalIndexMap::LocalIndexMap(const Dims& dims, const std::vector<int>& subsystems) {
    if (subsystems.empty()) throw std::invalid_argument("no subsystems selected");
    std::vector<bool> selected(dims.size(), false);
    for (int s : subsystems) {
        if (s < 0 || static_cast<std::size_t>(s) >= dims.size()) {
            throw std::out_of_range("subsystem index out of range");
        }
        if (selected[static_cast<std::size_t>(s)]) throw std::invalid_argument("duplicate subsystem index");
        selected[static_cast<std::size_t>(s)] = true;
    }
    const auto strides = strides_of(dims);

    offsets.assign(1, 0);
    for (int s : subsystems) {
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * static_cast<std::size_t>(dims[static_cast<std::size_t>(s)]));
        for (std::size_t off : offsets) {
            for (int digit = 0; digit < dims[static_cast<std::size_t>(s)]; ++digit) {
                next.push_back(off + static_cast<std::size_t>(digit) * strides[static_cast<std::size_t>(s)]);
            }
        }
        offsets = std::move(next);
    }

    bases.assign(1, 0);
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (selected[k]) continue;
        std::vector<std::size_t> next;
        next.reserve(bases.size() * static_cast<std::size_t>(dims[k]));
        for (std::size_t b : bases) {
            for (int digit = 0; digit < dims[k]; ++digit) {
                next.push_back(b + static_cast<std::size_t>(digit) * strides[k]);
            }
        }
        bases = std::move(next);
    }
}

void apply_local(const LocalIndexMap& map, const Matrix& op, const Vector& in, Vector& out) {
    const auto d = static_cast<Eigen::Index>(map.local_dim());
    if (op.rows() != d || op.cols() != d) throw std::invalid_argument("local operator dims mismatch");
    out.resize(in.size());
    Vector local(d);
    for (std::size_t base : map.bases) {
        for (Eigen::Index c = 0; c < d; ++c) local[c] = in[static_cast<Eigen::Index>(base + map.offsets[static_cast<std::size_t>(c)])];
        for (Eigen::Index r = 0; r < d; ++r) {
            Complex acc = 0.0;
            for (Eigen::Index c = 0; c < d; ++c) acc += op(r, c) * local[c];
            out[static_cast<Eigen::Index>(base + map.offsets[static_cast<std::size_t>(r)])] = acc;
        }
    }
}

namespace {

Dims selected_dims(const Dims& dims, const std::vector<int>& subsystems) {
    Dims out;
    for (int s : subsystems) {
        if (s < 0 || static_cast<std::size_t>(s) >= dims.size()) {
            throw std::out_of_range("subsystem index out of range");
        }
        out.push_back(dims[static_cast<std::size_t>(s)]);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- operations

PureState tensor(const std::vector<PureState>& states) {
    if (states.empty()) throw std::invalid_argument("no factors");
    Dims dims;
    Ownership owners;
    Vector amps = Vector::Ones(1);
    for (const auto& s : states) {
        dims.insert(dims.end(), s.dims().begin(), s.dims().end());
        owners.insert(owners.end(), s.ownership().begin(), s.ownership().end());
        if (product(dims) > kMaxAmplitudes) throw std::invalid_argument("state exceeds the amplitude cap");
        Vector next(amps.size() * s.amps().size());
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            next.segment(i * s.amps().size(), s.amps().size()) = amps[i] * s.amps();
        }
        amps = std::move(next);
    }
    return PureState::normalized(std::move(dims), std::move(amps), std::move(owners));
}

ProjectionOutcome apply_local_projector(const PureState& state, const Projector& proj,
                                        const std::vector<int>& subsystems) {
    if (selected_dims(state.dims(), subsystems) != proj.dims()) {
        throw std::invalid_argument("projector dims do not match the selected subsystems");
    }
    const LocalIndexMap map(state.dims(), subsystems);
    ProjectionOutcome outcome;
    apply_local(map, proj.matrix(), state.amps(), outcome.unnormalized);
    outcome.probability = outcome.unnormalized.squaredNorm();
    if (outcome.probability > kZeroProb) {
        outcome.post_state = PureState::normalized(state.dims(), outcome.unnormalized, state.ownership());
    }
    return outcome;
}

PureState apply_local_operator(const PureState& state, const Matrix& op,
                               const std::vector<int>& subsystems) {
    const auto sel = selected_dims(state.dims(), subsystems);
    if (static_cast<std::size_t>(op.rows()) != product(sel)) {
        throw std::invalid_argument("operator dims do not match the selected subsystems");
    }
    const LocalIndexMap map(state.dims(), subsystems);
    Vector out;
    apply_local(map, op, state.amps(), out);
    return PureState::normalized(state.dims(), std::move(out), state.ownership());
}

Matrix coefficient_matrix(const PureState& state, const BipartitionSplit& split) {
    split.validate(state.subsystem_count());
    const auto& dims = state.dims();
    Eigen::Index rows = 1, cols = 1;
    for (int k : split.left) rows *= dims[static_cast<std::size_t>(k)];
    for (int k : split.right) cols *= dims[static_cast<std::size_t>(k)];
    Matrix psi(rows, cols);
    for (std::size_t i = 0; i < state.size(); ++i) {
        const auto digits = digits_of(i, dims);
        Eigen::Index l = 0, r = 0;
        for (int k : split.left) l = l * dims[static_cast<std::size_t>(k)] + digits[static_cast<std::size_t>(k)];
        for (int k : split.right) r = r * dims[static_cast<std::size_t>(k)] + digits[static_cast<std::size_t>(k)];
        psi(l, r) = state.amps()[static_cast<Eigen::Index>(i)];
    }
    return psi;
}

std::vector<double> schmidt_coefficients(const PureState& state, const BipartitionSplit& split) {
    const Matrix psi = coefficient_matrix(state, split);
    Eigen::JacobiSVD<Matrix> svd(psi);
    const auto& sv = svd.singularValues();
    std::vector<double> out(sv.data(), sv.data() + sv.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double negativity(const PureState& state, const BipartitionSplit& split) {
    const Matrix psi = coefficient_matrix(state, split);
    const Eigen::Index dl = psi.rows(), dr = psi.cols();
    // (rho^{T_R})_{(l,r),(l',r')} = psi(l, r') * conj(psi(l', r))
    Matrix pt(dl * dr, dl * dr);
    for (Eigen::Index l = 0; l < dl; ++l) {
        for (Eigen::Index r = 0; r < dr; ++r) {
            for (Eigen::Index lp = 0; lp < dl; ++lp) {
                for (Eigen::Index rp = 0; rp < dr; ++rp) {
                    pt(l * dr + r, lp * dr + rp) = psi(l, rp) * std::conj(psi(lp, r));
                }
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(pt, Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double ev = eig.eigenvalues()[k];
        if (ev < 0.0) sum -= ev;
    }
    // Round-off on exactly-product states shows up as ~1e-17 negatives.
    return sum < 1e-14 ? 0.0 : sum;
}

std::optional<Vector> local_factor(const PureState& state, const std::vector<int>& subsystems,
                                   double tol) {
    const auto split = BipartitionSplit::of(std::set<int>(subsystems.begin(), subsystems.end()),
                                            state.subsystem_count());
    const Matrix psi = coefficient_matrix(state, split);
    Eigen::JacobiSVD<Matrix> svd(psi, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() > 1 && sv[1] > tol) return std::nullopt;
    Vector u = svd.matrixU().col(0);
    Eigen::Index pivot = 0;
    u.cwiseAbs().maxCoeff(&pivot);
    u *= std::conj(u[pivot]) / std::abs(u[pivot]);
    return u;
}

}  // namespace lpdiscrim
