// Modular channel composition via the link product on Choi matrices: a second
// channel is applied to one output wire of a 1->2 channel.
#pragma once

#include "qclone/cloners.hpp"

namespace qclone {

/// first: A -> W0 (x) W1; second acts on output wire `intermediate` (0 or 1)
/// and its output takes over that wire's slot.
struct WiringSpec {
    ChannelChoi first;
    ChannelChoi second;
    int intermediate = 1;
};

namespace detail {

/// Embed an operator acting on the listed factors (in that order) into the
/// full space, identity elsewhere.
inline DenseOperator embed(const DenseOperator& op, const SystemShape& full,
                           const std::vector<int>& factors) {
    const int nf = full.num_factors();
    const int side = full.side();
    Matrix out = Matrix::Zero(side, side);
    std::vector<int> r(nf), c(nf), fr(factors.size()), fc(factors.size());
    for (int i = 0; i < side; ++i) {
        full.unravel(i, r.data());
        for (int j = 0; j < side; ++j) {
            full.unravel(j, c.data());
            bool diag_elsewhere = true;
            for (int f = 0; f < nf; ++f) {
                bool in_sub = false;
                for (int s : factors)
                    if (s == f) { in_sub = true; break; }
                if (!in_sub && r[f] != c[f]) { diag_elsewhere = false; break; }
            }
            if (!diag_elsewhere) continue;
            for (size_t f = 0; f < factors.size(); ++f) {
                fr[f] = r[factors[f]];
                fc[f] = c[factors[f]];
            }
            out(i, j) = op.mat(op.shape.ravel(fr.data()), op.shape.ravel(fc.data()));
        }
    }
    return {full, std::move(out)};
}

}  // namespace detail

/// Link product on the consumed wire W:
///   J_out = tr_W[ (J_first^{T_W} (x) 1_new)(1_else (x) J_second^{(W,new)}) ].
inline ChannelChoi compose(const WiringSpec& w) {
    if (w.first.num_outputs() != 2)
        throw std::invalid_argument("compose: first channel must be 1->2");
    if (w.second.num_outputs() != 1)
        throw std::invalid_argument("compose: second channel must be 1->1");
    if (w.intermediate != 0 && w.intermediate != 1)
        throw std::invalid_argument("compose: intermediate must be output 0 or 1");
    const int mid = 1 + w.intermediate;  // factor index of the consumed wire
    const int dmid = w.first.J.shape.dims[mid];
    if (w.second.d_in != dmid)
        throw std::invalid_argument("compose: intermediate wire dimension mismatch");
    const int dnew = w.second.d_out.dims[0];

    // Full space: (A, W0, W1, Wnew).
    std::vector<int> dims = w.first.J.shape.dims;
    dims.push_back(dnew);
    SystemShape full(dims);

    DenseOperator lhs = detail::embed(partial_transpose(w.first.J, mid), full, {0, 1, 2});
    DenseOperator rhs = detail::embed(w.second.J, full, {mid, 3});
    DenseOperator prod(full, lhs.mat * rhs.mat);
    std::vector<int> keep;
    for (int f = 0; f < 4; ++f)
        if (f != mid) keep.push_back(f);
    DenseOperator jout = partial_trace(prod, keep);  // (A, Wother, Wnew)
    if (w.intermediate == 0) jout = permute_factors(jout, {0, 2, 1});
    return {w.first.d_in, SystemShape({jout.shape.dims[1], jout.shape.dims[2]}),
            std::move(jout)};
}

/// Composite cloner: optimal hybrid channel, then the optimal phase-covariant
/// transpose on the conjugate wire (output 1); approximates the cloner.
inline ChannelChoi modular_cloner(int d) {
    return compose({optimal_channel({MapKind::HYBRID, d}),
                    optimal_channel({MapKind::PHASE_TRANSPOSE, d}), 1});
}

/// Composite transpose-cloner: optimal hybrid channel, then the optimal
/// transpose on the plain wire (output 0); approximates the transpose cloner.
inline ChannelChoi modular_transpose_cloner(int d) {
    return compose({optimal_channel({MapKind::HYBRID, d}),
                    optimal_channel({MapKind::PHASE_TRANSPOSE, d}), 0});
}

/// Closed-form fidelity reached by both modular composites.
inline double modular_fidelity_formula(int d) {
    const double dd = d;
    return (3.0 * dd - 4.0) / (dd * (dd - 1.0) * (2.0 * dd - 1.0));
}

}  // namespace qclone
