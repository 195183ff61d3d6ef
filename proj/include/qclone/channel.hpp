// Choi-matrix representation of quantum channels.
//
// Convention: J(E) = sum_{ij} |i><j| (x) E(|i><j|), so the Choi matrix lives
// on input (x) outputs with the input as factor 0, and tr J = d_in.
#pragma once

#include "qclone/core.hpp"

namespace qclone {

struct ChannelCheck {
    double min_eig = 0.0;           // lambda_min of J
    double trace_out_residual = 0.0;  // max |tr_outputs(J) - I|
    double trace_residual = 0.0;      // |tr J - d_in|
    bool ok = false;
};

/// A CPTP map d_in -> (x) d_out, carried as its Choi matrix.
struct ChannelChoi {
    int d_in = 0;
    SystemShape d_out;
    DenseOperator J;  // on [d_in, d_out...]

    static ChannelCheck check(int d_in, const SystemShape& d_out, const DenseOperator& j,
                              double psd_tol = 1e-9, double trace_tol = 1e-9) {
        ChannelCheck c;
        RVector ev = hermitian_eigenvalues(j.mat);
        const double lmax = std::max(ev.maxCoeff(), 0.0);
        c.min_eig = ev.minCoeff();
        std::vector<int> keep = {0};
        DenseOperator marg = partial_trace(j, keep);
        c.trace_out_residual =
            (marg.mat - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
        c.trace_residual = std::abs(j.mat.trace() - Complex(d_in, 0.0));
        c.ok = c.min_eig >= -psd_tol * std::max(lmax, 1.0) &&
               c.trace_out_residual <= trace_tol && c.trace_residual <= trace_tol;
        return c;
    }

    ChannelChoi() = default;
    ChannelChoi(int din, SystemShape dout, DenseOperator j, bool validate = true)
        : d_in(din), d_out(std::move(dout)), J(std::move(j)) {
        std::vector<int> dims = {d_in};
        dims.insert(dims.end(), d_out.dims.begin(), d_out.dims.end());
        if (!(J.shape == SystemShape(dims)))
            throw std::invalid_argument("ChannelChoi: Choi shape mismatch");
        if (validate) {
            ChannelCheck c = check(d_in, d_out, J);
            if (!c.ok)
                throw std::invalid_argument(
                    "ChannelChoi: CPTP contract violated (min_eig=" +
                    std::to_string(c.min_eig) +
                    ", tr_out residual=" + std::to_string(c.trace_out_residual) +
                    ", tr residual=" + std::to_string(c.trace_residual) + ")");
        }
    }

    int num_outputs() const { return d_out.num_factors(); }
    std::vector<int> output_factors() const {
        std::vector<int> f(num_outputs());
        for (int i = 0; i < num_outputs(); ++i) f[i] = i + 1;
        return f;
    }
};

/// E(rho) = tr_in[ J (rho^T (x) 1) ].
inline DenseOperator apply_channel(const ChannelChoi& e, const DenseOperator& rho) {
    if (rho.shape.side() != e.d_in)
        throw std::invalid_argument("apply_channel: input dimension mismatch");
    DenseOperator arg = tensor(DenseOperator(SystemShape({e.d_in}), rho.mat.transpose()),
                               identity_op(e.d_out));
    DenseOperator prod(e.J.shape, e.J.mat * arg.mat);
    return partial_trace(prod, e.output_factors());
}

/// Choi matrix from a trace-preserving Kraus family {K_k} : d_in -> d_out.
inline ChannelChoi choi_from_kraus(const std::vector<Matrix>& kraus,
                                   const SystemShape& d_out) {
    if (kraus.empty()) throw std::invalid_argument("choi_from_kraus: empty Kraus set");
    const int dout = d_out.side();
    const int din = static_cast<int>(kraus.front().cols());
    Matrix tp = Matrix::Zero(din, din);
    for (const Matrix& k : kraus) {
        if (k.cols() != din || k.rows() != dout)
            throw std::invalid_argument("choi_from_kraus: inconsistent Kraus shapes");
        tp += k.adjoint() * k;
    }
    if ((tp - Matrix::Identity(din, din)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("choi_from_kraus: Kraus set is not trace preserving");

    std::vector<int> dims = {din};
    dims.insert(dims.end(), d_out.dims.begin(), d_out.dims.end());
    Matrix j = Matrix::Zero(din * dout, din * dout);
    for (const Matrix& k : kraus)
        for (int i = 0; i < din; ++i)
            for (int jj = 0; jj < din; ++jj)
                j.block(i * dout, jj * dout, dout, dout) += k.col(i) * k.col(jj).adjoint();
    return {din, d_out, DenseOperator(SystemShape(dims), std::move(j))};
}

/// Choi of the identity channel on d.
inline ChannelChoi identity_channel(int d) {
    return choi_from_kraus({Matrix::Identity(d, d)}, SystemShape({d}));
}

}  // namespace qclone
