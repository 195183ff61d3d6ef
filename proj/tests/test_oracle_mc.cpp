#include "doctest.h"
#include "qclone/compose.hpp"
#include "qclone/oracle_mc.hpp"

#include <algorithm>

using namespace qclone;

TEST_CASE("mc estimates are bit-identical for equal seeds") {
    ChannelChoi e = optimal_channel({MapKind::PHASE_CLONER, 3});
    SamplerConfig cfg{123, 2000, SamplerMode::PHASE_TORUS};
    McEstimate a = mc_process_fidelity(e, {MapKind::PHASE_CLONER, 3}, cfg);
    McEstimate b = mc_process_fidelity(e, {MapKind::PHASE_CLONER, 3}, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);
    cfg.seed = 124;
    McEstimate c = mc_process_fidelity(e, {MapKind::PHASE_CLONER, 3}, cfg);
    CHECK(a.mean != c.mean);
}

TEST_CASE("haar samples are unitary") {
    StreamRng rng(5, 0);
    for (int d : {2, 3, 5}) {
        DenseOperator u = haar_unitary(d, rng);
        Matrix delta = u.mat.adjoint() * u.mat - Matrix::Identity(d, d);
        CHECK(delta.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("haar moments: E|<0|U|0>|^2 = 1/d") {
    for (int d : {2, 4}) {
        const int n = 20000;
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i) {
            StreamRng rng(99, static_cast<std::uint64_t>(i));
            DenseOperator u = haar_unitary(d, rng);
            vals[i] = std::norm(u.mat(0, 0));
        }
        McEstimate est = detail::summarize(vals);
        CHECK(std::abs(est.mean - 1.0 / d) < 4 * est.stderr_);
    }
}

TEST_CASE("haar left invariance (two-sample KS at the 1% level)") {
    const int d = 3, n = 10000;
    StreamRng vr(77, 0);
    Matrix v = haar_unitary(d, vr).mat;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        StreamRng ra(101, static_cast<std::uint64_t>(i));
        StreamRng rb(202, static_cast<std::uint64_t>(i));
        a[i] = std::norm(haar_unitary(d, ra).mat(0, 0));
        b[i] = std::norm((v * haar_unitary(d, rb).mat)(0, 0));
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // two-sample Kolmogorov-Smirnov statistic
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i; else ++j;
        ks = std::max(ks, std::abs(static_cast<double>(i) / n -
                                   static_cast<double>(j) / n));
    }
    const double crit = 1.628 * std::sqrt(2.0 / n);  // alpha = 0.01
    CHECK(ks < crit);
}

TEST_CASE("quadrature twirl is exact at 8 points per angle (d=2)") {
    StreamRng rng(11, 0);
    const int d = 2;
    SystemShape s({d, d, d});
    Matrix g(s.side(), s.side());
    for (int i = 0; i < s.side(); ++i)
        for (int j = 0; j < s.side(); ++j)
            g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    DenseOperator x(s, g + g.adjoint());
    for (const PhaseSignature& sig : {cloner_signature(), transpose_cloner_signature()}) {
        DenseOperator exact = phase_twirl(x, sig);
        DenseOperator quad = quadrature_twirl_check(x, sig, 8);
        CHECK((exact.mat - quad.mat).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("R+ is a fixed point of the transpose-cloner average") {
    for (int d : {2, 3}) {
        BasisFamily fam = build_ew_r(d);
        const DenseOperator& rp = fam.elements[0];
        DenseOperator avg = average_choi(rp, transpose_cloner_averaging_spec());
        CHECK((avg.mat - rp.mat).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("monte carlo matches the closed forms within 3 standard errors") {
    const int samples = 40000;
    for (int d : {2, 3}) {
        for (MapKind k : {MapKind::PHASE_CLONER, MapKind::PHASE_TRANSPOSE,
                          MapKind::PHASE_TRANSPOSE_CLONER, MapKind::HYBRID,
                          MapKind::UNIVERSAL_TRANSPOSE_CLONER}) {
            CAPTURE(d);
            CAPTURE(to_string(k));
            ChannelChoi e = optimal_channel({k, d});
            SamplerMode mode = k == MapKind::UNIVERSAL_TRANSPOSE_CLONER
                                   ? SamplerMode::HAAR_UNITARY
                                   : SamplerMode::PHASE_TORUS;
            McEstimate est = mc_process_fidelity(e, {k, d}, {42, samples, mode});
            const double f = closed_form_fidelity({k, d});
            CHECK(std::abs(est.mean - f) <= 3 * est.stderr_ + 1e-12);
        }
    }
}

TEST_CASE("sampler mode must match the map kind") {
    ChannelChoi e = optimal_channel({MapKind::PHASE_CLONER, 2});
    CHECK_THROWS_AS(
        mc_process_fidelity(e, {MapKind::PHASE_CLONER, 2},
                            {42, 100, SamplerMode::HAAR_UNITARY}),
        std::invalid_argument);
    ChannelChoi u = optimal_channel({MapKind::UNIVERSAL_TRANSPOSE_CLONER, 2});
    CHECK_THROWS_AS(
        mc_process_fidelity(u, {MapKind::UNIVERSAL_TRANSPOSE_CLONER, 2},
                            {42, 100, SamplerMode::PHASE_TORUS}),
        std::invalid_argument);
}

TEST_CASE("random cptp channels are valid and honest fixtures") {
    StreamRng rng(8, 0);
    for (int d : {2, 3}) {
        ChannelChoi e = random_cptp(d, SystemShape({d, d}), 2, rng);
        CHECK(ChannelChoi::check(e.d_in, e.d_out, e.J).ok);
        // modular composite mc cross-check: analytic and sampled fidelity agree
        McEstimate est = mc_process_fidelity(
            e, {MapKind::PHASE_CLONER, d}, {7, 20000, SamplerMode::PHASE_TORUS});
        const double f = process_fidelity_analytic(e, {MapKind::PHASE_CLONER, d});
        CHECK(std::abs(est.mean - f) <= 4 * est.stderr_ + 1e-12);
    }
}
