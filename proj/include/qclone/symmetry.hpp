// Group actions and twirls: diagonal phase unitaries U(theta), basis
// permutations U_pi, subsystem permutations V_sigma, the analytic phase-twirl
// projector, and the average-Choi constructions.
#pragma once

#include "qclone/core.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>

namespace qclone {

/// U(theta) = sum_k e^{i theta_k} |k><k|.
inline DenseOperator phase_unitary(const std::vector<double>& theta) {
    const int d = static_cast<int>(theta.size());
    if (d < 2) throw std::invalid_argument("phase_unitary: need at least 2 angles");
    Matrix u = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) u(k, k) = std::exp(Complex(0.0, theta[k]));
    return {SystemShape({d}), std::move(u)};
}

/// U_pi = sum_k |pi(k)><k|.
inline DenseOperator basis_permutation_unitary(const std::vector<int>& pi) {
    const int d = static_cast<int>(pi.size());
    std::vector<bool> seen(d, false);
    for (int v : pi) {
        if (v < 0 || v >= d || seen[v])
            throw std::invalid_argument("basis_permutation_unitary: not a bijection");
        seen[v] = true;
    }
    Matrix u = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) u(pi[k], k) = 1.0;
    return {SystemShape({d}), std::move(u)};
}

/// V_sigma acting on n equal d-dimensional factors:
/// V |k_1 ... k_n> = |k_{sigma^{-1}(1)} ... k_{sigma^{-1}(n)}>, i.e. the ket
/// originally in slot f moves to slot sigma(f).
inline DenseOperator subsystem_permutation(const std::vector<int>& sigma, int d) {
    const int n = static_cast<int>(sigma.size());
    SystemShape shape(std::vector<int>(n, d));
    const int side = shape.side();
    Matrix v = Matrix::Zero(side, side);
    std::vector<int> in(n), out(n);
    for (int c = 0; c < side; ++c) {
        shape.unravel(c, in.data());
        for (int f = 0; f < n; ++f) out[sigma[f]] = in[f];
        v(shape.ravel(out.data()), c) = 1.0;
    }
    return {shape, std::move(v)};
}

/// Per-factor sign of the phase action: the twirl conjugates by
/// (x)_f U(s_f * theta). Length matches the number of tensor factors.
struct PhaseSignature {
    std::vector<int> signs;
    explicit PhaseSignature(std::vector<int> s) : signs(std::move(s)) {
        for (int v : signs)
            if (v != 1 && v != -1)
                throw std::invalid_argument("PhaseSignature: signs must be +-1");
    }
};

// Cloner twirl T(X) = int U(theta) (x) U(-theta)^{(x)2} X U(-theta) (x) U(theta)^{(x)2};
// recorded as per-factor sign labels (the survival condition is sign-global).
inline PhaseSignature cloner_signature() { return PhaseSignature({-1, 1, 1}); }
inline PhaseSignature transpose_cloner_signature() { return PhaseSignature({1, 1, 1}); }
inline PhaseSignature hybrid_signature() { return PhaseSignature({-1, 1, -1}); }

/// Analytic phase twirl: entry (r_1..r_n),(c_1..c_n) survives iff
/// sum_f s_f (e_{r_f} - e_{c_f}) = 0 in Z^d; all other entries are zeroed.
inline DenseOperator phase_twirl(const DenseOperator& x, const PhaseSignature& sig) {
    const int nf = x.shape.num_factors();
    if (static_cast<int>(sig.signs.size()) != nf)
        throw std::invalid_argument("phase_twirl: signature length mismatch");
    const int d = x.shape.dims[0];
    for (int v : x.shape.dims)
        if (v != d) throw std::invalid_argument("phase_twirl: factors must share dimension");
    const int side = x.shape.side();
    Matrix out = Matrix::Zero(side, side);
    std::vector<int> r(nf), c(nf), counts(d);
    for (int i = 0; i < side; ++i) {
        x.shape.unravel(i, r.data());
        for (int j = 0; j < side; ++j) {
            x.shape.unravel(j, c.data());
            std::fill(counts.begin(), counts.end(), 0);
            for (int f = 0; f < nf; ++f) {
                counts[r[f]] += sig.signs[f];
                counts[c[f]] -= sig.signs[f];
            }
            bool survives = true;
            for (int k = 0; k < d; ++k)
                if (counts[k] != 0) { survives = false; break; }
            if (survives) out(i, j) = x.mat(i, j);
        }
    }
    return {x.shape, std::move(out)};
}

namespace detail {

// Canonical key of an index tuple under simultaneous relabeling of values:
// each value is replaced by its order of first appearance. Two tuples share a
// key iff they lie in the same S_d orbit.
inline std::uint64_t pattern_key(const int* idx, int n) {
    int label[24];
    int next = 0;
    std::uint64_t key = 0;
    int seen_val[24];
    for (int i = 0; i < n; ++i) {
        int lbl = -1;
        for (int j = 0; j < next; ++j)
            if (seen_val[j] == idx[i]) { lbl = j; break; }
        if (lbl < 0) { lbl = next; seen_val[next++] = idx[i]; }
        key = key * 24 + static_cast<std::uint64_t>(lbl);
    }
    return key;
}

}  // namespace detail

/// Exact average over U_pi^{(x)n} conjugation, pi in S_d. Each matrix entry is
/// replaced by the mean of its S_d orbit (entries whose combined row/column
/// index tuple has the same equality pattern), which equals the group average
/// without enumerating d! permutations.
inline DenseOperator basis_permutation_average(const DenseOperator& x) {
    const int nf = x.shape.num_factors();
    const int side = x.shape.side();
    const int d = x.shape.dims[0];
    for (int v : x.shape.dims)
        if (v != d)
            throw std::invalid_argument("basis_permutation_average: factors must share dimension");

    std::unordered_map<std::uint64_t, std::pair<Complex, long long>> classes;
    std::vector<int> idx(2 * nf);
    for (int i = 0; i < side; ++i) {
        x.shape.unravel(i, idx.data());
        for (int j = 0; j < side; ++j) {
            x.shape.unravel(j, idx.data() + nf);
            auto& slot = classes[detail::pattern_key(idx.data(), 2 * nf)];
            slot.first += x.mat(i, j);
            slot.second += 1;
        }
    }
    Matrix out(side, side);
    for (int i = 0; i < side; ++i) {
        x.shape.unravel(i, idx.data());
        for (int j = 0; j < side; ++j) {
            x.shape.unravel(j, idx.data() + nf);
            const auto& slot = classes.at(detail::pattern_key(idx.data(), 2 * nf));
            out(i, j) = slot.first / static_cast<double>(slot.second);
        }
    }
    return {x.shape, std::move(out)};
}

/// Average over V_sigma conjugation for the listed subsystem permutations.
inline DenseOperator subsystem_average(const DenseOperator& x,
                                       const std::vector<std::vector<int>>& group) {
    if (group.empty()) throw std::invalid_argument("subsystem_average: empty group");
    const int nf = x.shape.num_factors();
    const int side = x.shape.side();
    Matrix acc = Matrix::Zero(side, side);
    std::vector<int> r(nf), c(nf), pr(nf), pc(nf);
    for (const auto& sigma : group) {
        if (static_cast<int>(sigma.size()) != nf)
            throw std::invalid_argument("subsystem_average: permutation length mismatch");
        // (V X V^dag)_{r,c} = X_{sigma^{-1} r, sigma^{-1} c}: slot f of the
        // preimage is slot sigma(f) of the image.
        for (int i = 0; i < side; ++i) {
            x.shape.unravel(i, r.data());
            for (int j = 0; j < side; ++j) {
                x.shape.unravel(j, c.data());
                for (int f = 0; f < nf; ++f) { pr[f] = r[sigma[f]]; pc[f] = c[sigma[f]]; }
                acc(x.shape.ravel(pr.data()), x.shape.ravel(pc.data())) += x.mat(i, j);
            }
        }
    }
    return {x.shape, acc / static_cast<double>(group.size())};
}

inline std::vector<std::vector<int>> s3_full() {
    return {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
}
inline std::vector<std::vector<int>> s3_id_and_swap23() {
    return {{0, 1, 2}, {0, 2, 1}};
}

/// Which symmetry group a Choi matrix is averaged over.
struct AveragingSpec {
    PhaseSignature signature;
    std::vector<std::vector<int>> subsystem_group;
};

// Cloner average: phase twirl, S_d basis average, {id,(23)} output swap.
inline AveragingSpec cloner_averaging_spec() {
    return {cloner_signature(), s3_id_and_swap23()};
}
// Transpose-cloner average: same with U(theta)^{(x)3} twirl, all of S_3.
inline AveragingSpec transpose_cloner_averaging_spec() {
    return {transpose_cloner_signature(), s3_full()};
}

/// J~ = average of V_sigma U_pi^{(x)3} T(J) U_pi^{dag (x)3} V_sigma^dag over
/// the listed groups.
inline DenseOperator average_choi(const DenseOperator& j, const AveragingSpec& spec) {
    DenseOperator t = phase_twirl(j, spec.signature);
    DenseOperator p = basis_permutation_average(t);
    return subsystem_average(p, spec.subsystem_group);
}

}  // namespace qclone
