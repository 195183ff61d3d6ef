// Optimal channels for the phase-covariant cloning family, their closed-form
// process fidelities, the analytic fidelity evaluator for arbitrary channels,
// and the Monte Carlo single-qudit fidelity.
#pragma once

#include "qclone/channel.hpp"
#include "qclone/rng.hpp"
#include "qclone/sdp.hpp"

namespace qclone {

enum class MapKind {
    PHASE_CLONER,               // |th><th| -> |th><th| (x) |th><th|
    PHASE_TRANSPOSE,            // |th><th| -> |-th><-th|
    PHASE_TRANSPOSE_CLONER,     // |th><th| -> |-th><-th|^{(x)2}
    HYBRID,                     // |th><th| -> |th><th| (x) |-th><-th|
    UNIVERSAL_TRANSPOSE_CLONER  // rho -> rho^T (x) rho^T over all pure states
};

inline const char* to_string(MapKind k) {
    switch (k) {
        case MapKind::PHASE_CLONER: return "phase-cloner";
        case MapKind::PHASE_TRANSPOSE: return "phase-transpose";
        case MapKind::PHASE_TRANSPOSE_CLONER: return "transpose-cloner";
        case MapKind::HYBRID: return "hybrid";
        case MapKind::UNIVERSAL_TRANSPOSE_CLONER: return "universal-transpose-cloner";
    }
    return "?";
}

struct IdealMap {
    MapKind kind;
    int d;
};

inline int num_output_factors(MapKind k) {
    return k == MapKind::PHASE_TRANSPOSE ? 1 : 2;
}

inline double closed_form_fidelity(const IdealMap& m) {
    const double d = m.d;
    switch (m.kind) {
        case MapKind::PHASE_CLONER: return (2.0 * d - 1.0) / (d * d);
        case MapKind::PHASE_TRANSPOSE: return 2.0 / d;
        case MapKind::PHASE_TRANSPOSE_CLONER:
            return m.d == 2 ? 0.75 : 6.0 / (d * d);
        case MapKind::HYBRID: return (2.0 * d - 1.0) / (d * d);
        case MapKind::UNIVERSAL_TRANSPOSE_CLONER: return 6.0 / (d * d + 3.0 * d + 2.0);
    }
    throw std::invalid_argument("closed_form_fidelity: unknown kind");
}

/// Choi of the optimal phase-covariant transposition channel:
/// J = 1/(d-1) sum_{i != j} (|ij><ij| + |ij><ji|).
inline ChannelChoi optimal_transpose_channel(int d) {
    detail::check_dim(d);
    SystemShape s({d, d});
    Matrix j = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            if (k == i) continue;
            j(i * d + k, i * d + k) += 1.0;
            j(i * d + k, k * d + i) += 1.0;
        }
    j /= static_cast<double>(d - 1);
    return {d, SystemShape({d}), DenseOperator(s, std::move(j))};
}

/// Builds the optimal channel of each kind from the certified closed-form
/// points (never from solver output).
inline ChannelChoi optimal_channel(const IdealMap& m) {
    const int d = m.d;
    detail::check_dim(d);
    switch (m.kind) {
        case MapKind::PHASE_CLONER: {
            BasisFamily fam = build_cloner9(d);
            DenseOperator j = assemble(fam, cloner_optimal_point(d));
            return {d, SystemShape({d, d}), std::move(j)};
        }
        case MapKind::PHASE_TRANSPOSE:
            return optimal_transpose_channel(d);
        case MapKind::PHASE_TRANSPOSE_CLONER: {
            BasisFamily fam = build_transpose6(d);
            DenseOperator j = assemble(fam, transpose_cloner_certificates(d).first);
            return {d, SystemShape({d, d}), std::move(j)};
        }
        case MapKind::HYBRID: {
            ChannelChoi cloner = optimal_channel({MapKind::PHASE_CLONER, d});
            Matrix v13 = subsystem_permutation({2, 1, 0}, d).mat;
            Matrix j = v13 * cloner.J.mat * v13;
            return {d, SystemShape({d, d}), DenseOperator(cloner.J.shape, std::move(j))};
        }
        case MapKind::UNIVERSAL_TRANSPOSE_CLONER: {
            BasisFamily fam = build_ew_r(d);
            EwSolution ew = ew_linear_program(d);
            DenseOperator j = assemble(fam, ew.coefficients);
            return {d, SystemShape({d, d}), std::move(j)};
        }
    }
    throw std::invalid_argument("optimal_channel: unknown kind");
}

namespace detail {

// Phase signature of int rho_th^T (x) E_ideal(rho_th) dmu(th): factor signs
// -1 for each conjugated copy (the Choi input is always transposed).
inline PhaseSignature fidelity_signature(MapKind k) {
    switch (k) {
        case MapKind::PHASE_CLONER: return PhaseSignature({-1, 1, 1});
        case MapKind::PHASE_TRANSPOSE: return PhaseSignature({-1, -1});
        case MapKind::PHASE_TRANSPOSE_CLONER: return PhaseSignature({-1, -1, -1});
        case MapKind::HYBRID: return PhaseSignature({-1, 1, -1});
        default: throw std::invalid_argument("not a phase-covariant kind");
    }
}

}  // namespace detail

/// Process fidelity of an arbitrary channel against an ideal map, computed
/// analytically: for phase-covariant kinds via the exact phase twirl of
/// phi+^{(x)n}; for the universal kind via projection onto the EW span.
inline double process_fidelity_analytic(const ChannelChoi& e, const IdealMap& m) {
    const int d = m.d;
    if (e.d_in != d || e.num_outputs() != num_output_factors(m.kind))
        throw std::invalid_argument("process_fidelity_analytic: channel/kind shape mismatch");
    for (int v : e.d_out.dims)
        if (v != d)
            throw std::invalid_argument("process_fidelity_analytic: output dimension mismatch");
    if (m.kind == MapKind::UNIVERSAL_TRANSPOSE_CLONER) {
        BasisFamily fam = build_ew_r(d);
        auto [coeff, resid] = project_onto_span(fam, e.J);
        // Projection is exact for the invariant part; the residual is the
        // non-invariant component and does not contribute to the fidelity.
        DenseOperator jt = assemble(fam, coeff);
        return jt.mat(0, 0).real();  // <0..0| J~ |0..0>
    }
    DenseOperator phi = max_coherent_state(d).projector();
    DenseOperator ideal = phi;
    for (int f = 1; f < e.J.shape.num_factors(); ++f) ideal = tensor(ideal, phi);
    DenseOperator twirled = phase_twirl(ideal, detail::fidelity_signature(m.kind));
    return (e.J.mat * twirled.mat).trace().real();
}

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long long samples = 0;
};

namespace detail {

inline McEstimate summarize(const std::vector<double>& vals) {
    const std::size_t n = vals.size();
    McEstimate est;
    est.samples = static_cast<long long>(n);
    est.mean = pairwise_sum(vals.data(), n) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dv = vals[i] - est.mean;
        sq[i] = dv * dv;
    }
    const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
    est.stderr_ = std::sqrt(var / static_cast<double>(n));
    return est;
}

inline std::vector<double> draw_angles(StreamRng& rng, int d) {
    std::vector<double> theta(d);
    for (int k = 0; k < d; ++k)
        theta[k] = 6.283185307179586476925286766559 * rng.uniform();
    return theta;
}

}  // namespace detail

/// Monte Carlo average over uniform theta of the mean marginal fidelity
/// (1/2)[F(rho, tr_2 E(rho)) + F(rho, tr_1 E(rho))].
inline McEstimate single_qudit_fidelity(const ChannelChoi& e, int samples,
                                        std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("single_qudit_fidelity: samples < 2");
    if (e.num_outputs() != 2)
        throw std::invalid_argument("single_qudit_fidelity: channel is not 1->2");
    const int d = e.d_in;
    std::vector<double> vals(samples);
    for (int i = 0; i < samples; ++i) {
        StreamRng rng(seed, static_cast<std::uint64_t>(i));
        Ket psi = phase_state(detail::draw_angles(rng, d));
        DenseOperator rho = psi.projector();
        DenseOperator out = apply_channel(e, rho);
        DenseOperator m1 = partial_trace(out, {0});
        DenseOperator m2 = partial_trace(out, {1});
        // pure reference: F(|psi>, sigma) = <psi| sigma |psi>
        const double f1 = (psi.amplitudes.adjoint() * m1.mat * psi.amplitudes)(0).real();
        const double f2 = (psi.amplitudes.adjoint() * m2.mat * psi.amplitudes)(0).real();
        vals[i] = 0.5 * (f1 + f2);
    }
    return detail::summarize(vals);
}

/// One reference-table row: a formula evaluated at d, tagged by provenance.
struct ReferenceConstant {
    std::string label;
    std::string formula;
    int d = 0;
    double value = 0.0;
    bool computed = false;  // false = cited constant, true = computed here
    std::string citation;
};

inline std::vector<ReferenceConstant> reference_table(const std::vector<int>& d_values) {
    std::vector<ReferenceConstant> rows;
    for (int d : d_values) {
        detail::check_dim(d);
        const double dd = d;
        rows.push_back({"universal single-qudit", "(d+3)/(2d+2)", d,
                        (dd + 3.0) / (2.0 * dd + 2.0), false, "Buzek-Hillery/Werner"});
        rows.push_back({"universal process", "2/(d+1)", d, 2.0 / (dd + 1.0), false,
                        "Werner"});
        rows.push_back({"phase-covariant single-qudit",
                        "1/d + (d-2+sqrt(d^2+4d-4))/(4d)", d,
                        1.0 / dd + (dd - 2.0 + std::sqrt(dd * dd + 4.0 * dd - 4.0)) /
                                       (4.0 * dd),
                        false, "Fan et al."});
        rows.push_back({"phase-covariant process", "(2d-1)/d^2", d,
                        closed_form_fidelity({MapKind::PHASE_CLONER, d}), true,
                        "this work"});
    }
    return rows;
}

}  // namespace qclone
