// Symmetric operator families for the reduced optimization problems: the
// 9-element cloning basis, the 6-element transpose-cloning basis, and the
// Eggeling-Werner R-operators, each with its objective coefficients c and
// trace-constraint coefficients a.
#pragma once

#include "qclone/core.hpp"
#include "qclone/symmetry.hpp"

#include <Eigen/QR>

namespace qclone {

enum class BasisName { CLONER9, TRANSPOSE6, EW_R };

inline const char* to_string(BasisName n) {
    switch (n) {
        case BasisName::CLONER9: return "CLONER9";
        case BasisName::TRANSPOSE6: return "TRANSPOSE6";
        case BasisName::EW_R: return "EW_R";
    }
    return "?";
}

struct BasisFamily {
    BasisName name;
    int d = 0;
    std::vector<DenseOperator> elements;
    RVector c;  // objective coefficients: obj(x) = c.x
    RVector a;  // trace-constraint coefficients: a.x = 1

    int size() const { return static_cast<int>(elements.size()); }
};

/// X(x) = sum_i x_i X_i.
struct ReducedPoint {
    BasisName family;
    int d = 0;
    RVector x;
};

inline DenseOperator assemble(const BasisFamily& fam, const RVector& x) {
    if (x.size() != fam.size())
        throw std::invalid_argument("assemble: coefficient length mismatch");
    const int side = fam.elements.front().shape.side();
    Matrix m = Matrix::Zero(side, side);
    for (int i = 0; i < fam.size(); ++i) m += x(i) * fam.elements[i].mat;
    return {fam.elements.front().shape, std::move(m)};
}

inline DenseOperator assemble(const BasisFamily& fam, const ReducedPoint& p) {
    if (p.family != fam.name || p.d != fam.d)
        throw std::invalid_argument("assemble: point does not belong to family");
    return assemble(fam, p.x);
}

namespace detail {

inline void check_dim(int d) {
    if (d < 2 || d > kMaxQuditDim)
        throw std::invalid_argument("basis: dimension out of range [2,12]");
}

inline void add_term(Matrix& m, const SystemShape& s, std::array<int, 3> row,
                     std::array<int, 3> col, double v = 1.0) {
    m(s.ravel(row.data()), s.ravel(col.data())) += v;
}

}  // namespace detail

/// The nine-element basis of operators invariant under the cloner averaging
/// (phase twirl + basis permutations + swap of the two output factors).
/// For d = 2 the triple-distinct-index elements X6..X9 are zero operators.
inline BasisFamily build_cloner9(int d) {
    detail::check_dim(d);
    SystemShape s({d, d, d});
    const int side = s.side();
    std::vector<Matrix> x(9, Matrix::Zero(side, side));
    using detail::add_term;
    for (int i = 0; i < d; ++i) {
        add_term(x[0], s, {i, i, i}, {i, i, i});
        for (int k = 0; k < d; ++k) {
            if (k == i) continue;
            add_term(x[1], s, {i, i, k}, {i, i, k});
            add_term(x[1], s, {i, k, i}, {i, k, i});
            add_term(x[2], s, {k, i, i}, {k, i, i});
            add_term(x[3], s, {k, i, k}, {i, i, i});
            add_term(x[3], s, {i, i, i}, {k, i, k});
            add_term(x[3], s, {k, k, i}, {i, i, i});
            add_term(x[3], s, {i, i, i}, {k, k, i});
            add_term(x[4], s, {i, i, k}, {i, k, i});
            add_term(x[4], s, {i, k, i}, {i, i, k});
            for (int l = 0; l < d; ++l) {
                if (l == i || l == k) continue;
                add_term(x[5], s, {i, k, l}, {i, k, l});
                add_term(x[6], s, {k, k, l}, {i, l, i});
                add_term(x[6], s, {l, k, l}, {i, i, k});
                add_term(x[7], s, {k, k, l}, {i, i, l});
                add_term(x[7], s, {l, k, l}, {i, k, i});
                add_term(x[8], s, {i, k, l}, {i, l, k});
            }
        }
    }
    BasisFamily fam{BasisName::CLONER9, d, {}, RVector(9), RVector(9)};
    for (auto& m : x) fam.elements.emplace_back(s, std::move(m));
    const double dd = static_cast<double>(d);
    const double e1 = dd - 1.0, e2 = (dd - 1.0) * (dd - 2.0);
    fam.c << 1.0, 2.0 * e1, e1, 4.0 * e1, 2.0 * e1, e2, 2.0 * e2, 2.0 * e2, e2;
    fam.c /= dd * dd;
    fam.a << 1.0, 2.0 * e1, e1, 0.0, 0.0, e2, 0.0, 0.0, 0.0;
    return fam;
}

/// The six-element basis invariant under the transpose-cloner averaging
/// (phase twirl with equal signs + basis permutations + all of S_3).
inline BasisFamily build_transpose6(int d) {
    detail::check_dim(d);
    SystemShape s({d, d, d});
    const int side = s.side();
    std::vector<Matrix> x(6, Matrix::Zero(side, side));
    using detail::add_term;
    for (int i = 0; i < d; ++i) {
        add_term(x[0], s, {i, i, i}, {i, i, i});
        for (int k = 0; k < d; ++k) {
            if (k == i) continue;
            add_term(x[1], s, {i, i, k}, {i, i, k});
            add_term(x[1], s, {i, k, i}, {i, k, i});
            add_term(x[1], s, {k, i, i}, {k, i, i});
            // all six off-diagonal pattern pairs among {iik, iki, kii}
            add_term(x[2], s, {i, i, k}, {k, i, i});
            add_term(x[2], s, {k, i, i}, {i, i, k});
            add_term(x[2], s, {k, i, i}, {i, k, i});
            add_term(x[2], s, {i, k, i}, {k, i, i});
            add_term(x[2], s, {i, i, k}, {i, k, i});
            add_term(x[2], s, {i, k, i}, {i, i, k});
            for (int l = 0; l < d; ++l) {
                if (l == i || l == k) continue;
                add_term(x[3], s, {i, k, l}, {i, k, l});
                add_term(x[4], s, {i, k, l}, {k, l, i});
                add_term(x[4], s, {i, k, l}, {l, i, k});
                add_term(x[5], s, {i, k, l}, {k, i, l});
                add_term(x[5], s, {i, k, l}, {l, k, i});
                add_term(x[5], s, {i, k, l}, {i, l, k});
            }
        }
    }
    BasisFamily fam{BasisName::TRANSPOSE6, d, {}, RVector(6), RVector(6)};
    for (auto& m : x) fam.elements.emplace_back(s, std::move(m));
    const double dd = static_cast<double>(d);
    const double e1 = dd - 1.0, e2 = (dd - 1.0) * (dd - 2.0);
    fam.c << 1.0, 3.0 * e1, 6.0 * e1, e2, 2.0 * e2, 3.0 * e2;
    fam.c /= dd * dd;
    fam.a << 1.0, 3.0 * e1, 0.0, e2, 0.0, 0.0;
    return fam;
}

/// Eggeling-Werner operators R+, R-, R0, R1, R2, R3 spanning the
/// U^{(x)3}-invariant Hermitian operators. Objective coefficients are taken
/// against |000><000| (only R+ contributes); the trace constraint encodes
/// tr X = d using the actual operator traces.
inline BasisFamily build_ew_r(int d) {
    detail::check_dim(d);
    auto v = [d](std::vector<int> sigma) { return subsystem_permutation(sigma, d).mat; };
    Matrix one = Matrix::Identity(d * d * d, d * d * d);
    Matrix v12 = v({1, 0, 2}), v23 = v({0, 2, 1}), v31 = v({2, 1, 0});
    Matrix v123 = v({1, 2, 0});   // cyclic 1->2->3->1
    Matrix v132 = v({2, 0, 1});   // inverse cycle (= V_(321))
    SystemShape s({d, d, d});
    std::vector<Matrix> r(6);
    r[0] = (one + v12 + v23 + v31 + v123 + v132) / 6.0;
    r[1] = (one - v12 - v23 - v31 + v123 + v132) / 6.0;
    r[2] = (2.0 * one - v123 - v132) / 3.0;
    r[3] = (2.0 * one - v31 - v12) / 3.0;
    r[4] = (v12 - v31) / std::sqrt(3.0);
    r[5] = Complex(0.0, 1.0) * (v123 - v132) / std::sqrt(3.0);
    BasisFamily fam{BasisName::EW_R, d, {}, RVector(6), RVector(6)};
    for (auto& m : r) fam.elements.emplace_back(s, std::move(m));
    fam.c << 1.0, 0.0, 0.0, 0.0, 0.0, 0.0;
    for (int i = 0; i < 6; ++i)
        fam.a(i) = fam.elements[i].mat.trace().real() / static_cast<double>(d);
    return fam;
}

inline BasisFamily build_family(BasisName name, int d) {
    switch (name) {
        case BasisName::CLONER9: return build_cloner9(d);
        case BasisName::TRANSPOSE6: return build_transpose6(d);
        case BasisName::EW_R: return build_ew_r(d);
    }
    throw std::invalid_argument("build_family: unknown family");
}

/// Gram matrix G_ij = tr(X_i^dag X_j); real for these families.
inline Eigen::MatrixXd gram_matrix(const BasisFamily& fam) {
    const int n = fam.size();
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = (fam.elements[i].mat.adjoint() * fam.elements[j].mat).trace().real();
    return g;
}

/// Least-squares coefficients of X in the family's span; also returns the
/// residual max-norm of X - sum x_i X_i.
inline std::pair<RVector, double> project_onto_span(const BasisFamily& fam,
                                                    const DenseOperator& x) {
    const int n = fam.size();
    Eigen::MatrixXd g = gram_matrix(fam);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i)
        rhs(i) = (fam.elements[i].mat.adjoint() * x.mat).trace().real();
    Eigen::VectorXd coeff = g.completeOrthogonalDecomposition().solve(rhs);
    Matrix recon = assemble(fam, coeff).mat;
    double resid = (x.mat - recon).cwiseAbs().maxCoeff();
    return {coeff, resid};
}

}  // namespace qclone
