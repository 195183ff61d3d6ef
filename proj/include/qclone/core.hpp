// Dense complex linear algebra and quantum primitives: kets, density
// matrices, tensor products, partial trace/transpose, fidelity, and
// Choi-matrix channel application.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qclone {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr int kMaxQuditDim = 12;
inline constexpr int kMaxSide = kMaxQuditDim * kMaxQuditDim * kMaxQuditDim;

/// Ordered list of subsystem dimensions; order = tensor-factor order.
struct SystemShape {
    std::vector<int> dims;

    SystemShape() = default;
    explicit SystemShape(std::vector<int> d) : dims(std::move(d)) {
        long long side = 1;
        for (int v : dims) {
            if (v < 2 || v > kMaxQuditDim)
                throw std::invalid_argument("SystemShape: each dim must be in [2," +
                                            std::to_string(kMaxQuditDim) + "], got " +
                                            std::to_string(v));
            side *= v;
            if (side > kMaxSide)
                throw std::invalid_argument("SystemShape: operator side exceeds cap " +
                                            std::to_string(kMaxSide));
        }
        if (dims.empty()) throw std::invalid_argument("SystemShape: no subsystems");
    }

    int num_factors() const { return static_cast<int>(dims.size()); }
    int side() const {
        return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    }
    bool operator==(const SystemShape& o) const { return dims == o.dims; }

    // Row-major ravel: factor 0 is the most significant index.
    void unravel(int flat, int* idx) const {
        for (int f = num_factors() - 1; f >= 0; --f) {
            idx[f] = flat % dims[f];
            flat /= dims[f];
        }
    }
    int ravel(const int* idx) const {
        int flat = 0;
        for (int f = 0; f < num_factors(); ++f) flat = flat * dims[f] + idx[f];
        return flat;
    }
};

/// Complex square matrix on a tensor-product space.
struct DenseOperator {
    SystemShape shape;
    Matrix mat;

    DenseOperator() = default;
    DenseOperator(SystemShape s, Matrix m) : shape(std::move(s)), mat(std::move(m)) {
        if (mat.rows() != shape.side() || mat.cols() != shape.side())
            throw std::invalid_argument("DenseOperator: matrix side does not match shape");
    }

    Complex trace() const { return mat.trace(); }
    bool is_hermitian(double rel_tol = 1e-12) const {
        double scale = mat.cwiseAbs().maxCoeff();
        if (scale == 0.0) return true;
        return (mat - mat.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
    }
    DenseOperator adjoint() const { return {shape, mat.adjoint()}; }
};

/// Unit vector on a tensor-product space.
struct Ket {
    SystemShape shape;
    Vector amplitudes;

    Ket() = default;
    Ket(SystemShape s, Vector a) : shape(std::move(s)), amplitudes(std::move(a)) {
        if (amplitudes.size() != shape.side())
            throw std::invalid_argument("Ket: amplitude size does not match shape");
        if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("Ket: amplitudes not normalized");
    }

    DenseOperator projector() const {
        return {shape, amplitudes * amplitudes.adjoint()};
    }
};

inline DenseOperator identity_op(const SystemShape& s) {
    return {s, Matrix::Identity(s.side(), s.side())};
}

inline SystemShape concat(const SystemShape& a, const SystemShape& b) {
    std::vector<int> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    return SystemShape(dims);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
    return {concat(a.shape, b.shape), kron(a.mat, b.mat)};
}

inline Ket tensor(const Ket& a, const Ket& b) {
    Vector v(a.amplitudes.size() * b.amplitudes.size());
    for (Eigen::Index i = 0; i < a.amplitudes.size(); ++i)
        v.segment(i * b.amplitudes.size(), b.amplitudes.size()) =
            a.amplitudes(i) * b.amplitudes;
    return {concat(a.shape, b.shape), v};
}

inline Ket basis_ket(int d, int k) {
    Vector v = Vector::Zero(d);
    v(k) = 1.0;
    return {SystemShape({d}), v};
}

/// |theta> = (1/sqrt d) sum_k e^{i theta_k} |k>.
inline Ket phase_state(const std::vector<double>& theta) {
    const int d = static_cast<int>(theta.size());
    if (d < 2) throw std::invalid_argument("phase_state: need at least 2 angles");
    Vector v(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) v(k) = norm * std::exp(Complex(0.0, theta[k]));
    return {SystemShape({d}), v};
}

/// |phi^+_d> = (1/sqrt d) sum_k |k>.
inline Ket max_coherent_state(int d) {
    return phase_state(std::vector<double>(d, 0.0));
}

/// Partial trace keeping the listed factors (0-based, ascending output order).
inline DenseOperator partial_trace(const DenseOperator& x, const std::vector<int>& keep) {
    const int nf = x.shape.num_factors();
    if (keep.empty())
        throw std::invalid_argument("partial_trace: empty keep set; use trace() instead");
    std::vector<bool> kept(nf, false);
    for (int f : keep) {
        if (f < 0 || f >= nf) throw std::invalid_argument("partial_trace: factor out of range");
        if (kept[f]) throw std::invalid_argument("partial_trace: duplicate factor");
        kept[f] = true;
    }
    std::vector<int> keep_sorted, traced;
    std::vector<int> keep_dims, trace_dims;
    for (int f = 0; f < nf; ++f) {
        if (kept[f]) { keep_sorted.push_back(f); keep_dims.push_back(x.shape.dims[f]); }
        else { traced.push_back(f); trace_dims.push_back(x.shape.dims[f]); }
    }
    if (traced.empty()) return x;

    const int out_side = std::accumulate(keep_dims.begin(), keep_dims.end(), 1,
                                         std::multiplies<int>());
    const int tr_side = std::accumulate(trace_dims.begin(), trace_dims.end(), 1,
                                        std::multiplies<int>());
    Matrix out = Matrix::Zero(out_side, out_side);
    std::vector<int> full_r(nf), full_c(nf);
    std::vector<int> kr(keep_sorted.size()), kc(keep_sorted.size()), tr(traced.size());
    SystemShape out_shape(keep_dims);
    SystemShape tr_shape(trace_dims);
    for (int r = 0; r < out_side; ++r) {
        out_shape.unravel(r, kr.data());
        for (int c = 0; c < out_side; ++c) {
            out_shape.unravel(c, kc.data());
            Complex acc = 0.0;
            for (int t = 0; t < tr_side; ++t) {
                tr_shape.unravel(t, tr.data());
                for (size_t f = 0; f < keep_sorted.size(); ++f) {
                    full_r[keep_sorted[f]] = kr[f];
                    full_c[keep_sorted[f]] = kc[f];
                }
                for (size_t f = 0; f < traced.size(); ++f) {
                    full_r[traced[f]] = tr[f];
                    full_c[traced[f]] = tr[f];
                }
                acc += x.mat(x.shape.ravel(full_r.data()), x.shape.ravel(full_c.data()));
            }
            out(r, c) = acc;
        }
    }
    return {out_shape, std::move(out)};
}

/// Transpose a single tensor factor in place.
inline DenseOperator partial_transpose(const DenseOperator& x, int factor) {
    const int nf = x.shape.num_factors();
    if (factor < 0 || factor >= nf)
        throw std::invalid_argument("partial_transpose: factor out of range");
    const int side = x.shape.side();
    Matrix out(side, side);
    std::vector<int> r(nf), c(nf);
    for (int i = 0; i < side; ++i) {
        x.shape.unravel(i, r.data());
        for (int j = 0; j < side; ++j) {
            x.shape.unravel(j, c.data());
            std::swap(r[factor], c[factor]);
            out(x.shape.ravel(r.data()), x.shape.ravel(c.data())) = x.mat(i, j);
            std::swap(r[factor], c[factor]);
        }
    }
    return {x.shape, std::move(out)};
}

/// Reorder tensor factors: new factor f is old factor perm[f].
inline DenseOperator permute_factors(const DenseOperator& x, const std::vector<int>& perm) {
    const int nf = x.shape.num_factors();
    if (static_cast<int>(perm.size()) != nf)
        throw std::invalid_argument("permute_factors: permutation length mismatch");
    std::vector<int> nd(nf);
    for (int f = 0; f < nf; ++f) nd[f] = x.shape.dims[perm[f]];
    SystemShape ns(nd);
    const int side = x.shape.side();
    Matrix out(side, side);
    std::vector<int> r(nf), c(nf), nr(nf), nc(nf);
    for (int i = 0; i < side; ++i) {
        x.shape.unravel(i, r.data());
        for (int j = 0; j < side; ++j) {
            x.shape.unravel(j, c.data());
            for (int f = 0; f < nf; ++f) { nr[f] = r[perm[f]]; nc[f] = c[perm[f]]; }
            out(ns.ravel(nr.data()), ns.ravel(nc.data())) = x.mat(i, j);
        }
    }
    return {ns, std::move(out)};
}

/// Eigenvalues of a Hermitian operator, ascending.
inline RVector hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double min_eigenvalue(const Matrix& m) {
    return hermitian_eigenvalues(m).minCoeff();
}

// PSD square root with negative eigenvalues clamped to 0 when they are within
// -rel_tol * lambda_max of zero; anything more negative is rejected.
inline Matrix psd_sqrt(const Matrix& m, double rel_tol = 1e-9) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    RVector ev = es.eigenvalues();
    const double lmax = std::max(ev.maxCoeff(), 0.0);
    RVector s(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -rel_tol * std::max(lmax, 1.0))
            throw std::domain_error("psd_sqrt: operator is not positive semidefinite");
        s(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

/// Uhlmann fidelity F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const DenseOperator& rho, const DenseOperator& sigma) {
    if (!(rho.shape == sigma.shape))
        throw std::invalid_argument("fidelity: shape mismatch");
    Matrix sr = psd_sqrt(rho.mat);
    Matrix inner = sr * sigma.mat * sr;
    inner = 0.5 * (inner + inner.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
    RVector ev = es.eigenvalues();
    const double lmax = std::max(ev.maxCoeff(), 0.0);
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-9 * std::max(lmax, 1.0))
            throw std::domain_error("fidelity: inner operator not PSD");
        s += std::sqrt(std::max(ev(i), 0.0));
    }
    return s * s;
}

}  // namespace qclone
