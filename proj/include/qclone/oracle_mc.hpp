// Independent verification oracles: Monte Carlo process-fidelity estimation
// over phase states and Haar-random unitaries, Haar sampling, and the
// quadrature form of the phase twirl.
#pragma once

#include "qclone/cloners.hpp"
#include "qclone/rng.hpp"

#include <Eigen/QR>

namespace qclone {

enum class SamplerMode { PHASE_TORUS, HAAR_UNITARY };

struct SamplerConfig {
    std::uint64_t seed = 42;
    int samples = 100000;
    SamplerMode mode = SamplerMode::PHASE_TORUS;
};

/// Haar-distributed unitary: complex Ginibre matrix, QR factorization, and
/// phase correction of R's diagonal (plain QR is not measure-correct).
inline DenseOperator haar_unitary(int d, StreamRng& rng) {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        Complex rjj = r(j, j);
        Complex phase = std::abs(rjj) > 0 ? rjj / std::abs(rjj) : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return {SystemShape({d}), std::move(q)};
}

namespace detail {

// For pure ideal output |psi>, F(E_ideal(rho), E(rho)) = <v| J |v> with
// v = |conj(theta)-state> (x) |psi> (the Choi input enters transposed).
inline double sample_fidelity(const ChannelChoi& e, const Ket& input_conj,
                              const Ket& ideal_out) {
    Vector v = tensor(input_conj, ideal_out).amplitudes;
    return (v.adjoint() * e.J.mat * v)(0).real();
}

inline Ket conjugate_ket(const Ket& k) {
    return {k.shape, k.amplitudes.conjugate()};
}

}  // namespace detail

/// Unbiased Monte Carlo estimate of the process fidelity of a channel against
/// an ideal map; deterministic given the seed.
inline McEstimate mc_process_fidelity(const ChannelChoi& e, const IdealMap& m,
                                      const SamplerConfig& cfg) {
    if (cfg.samples < 2) throw std::invalid_argument("mc_process_fidelity: samples < 2");
    const bool universal = m.kind == MapKind::UNIVERSAL_TRANSPOSE_CLONER;
    if (universal != (cfg.mode == SamplerMode::HAAR_UNITARY))
        throw std::invalid_argument("mc_process_fidelity: sampler mode does not match kind");
    const int d = m.d;
    std::vector<double> vals(cfg.samples);
    for (int i = 0; i < cfg.samples; ++i) {
        StreamRng rng(cfg.seed, static_cast<std::uint64_t>(i));
        Ket psi = universal
                      ? Ket{SystemShape({d}),
                            haar_unitary(d, rng).mat.col(0)}
                      : phase_state(detail::draw_angles(rng, d));
        Ket psi_conj = detail::conjugate_ket(psi);
        Ket ideal = [&] {
            switch (m.kind) {
                case MapKind::PHASE_CLONER: return tensor(psi, psi);
                case MapKind::PHASE_TRANSPOSE: return psi_conj;
                case MapKind::PHASE_TRANSPOSE_CLONER: return tensor(psi_conj, psi_conj);
                case MapKind::HYBRID: return tensor(psi, psi_conj);
                case MapKind::UNIVERSAL_TRANSPOSE_CLONER:
                    return tensor(psi_conj, psi_conj);
            }
            throw std::invalid_argument("unknown kind");
        }();
        vals[i] = detail::sample_fidelity(e, psi_conj, ideal);
    }
    return detail::summarize(vals);
}

/// Product trapezoid-rule form of the phase twirl; exact once the point count
/// exceeds the trigonometric degree of the integrand. Cost (points)^d.
inline DenseOperator quadrature_twirl_check(const DenseOperator& x,
                                            const PhaseSignature& sig,
                                            int points_per_angle) {
    const int nf = x.shape.num_factors();
    const int d = x.shape.dims[0];
    if (d > 3) throw std::invalid_argument("quadrature_twirl_check: d too large");
    if (static_cast<int>(sig.signs.size()) != nf)
        throw std::invalid_argument("quadrature_twirl_check: signature length mismatch");
    const int side = x.shape.side();
    Matrix acc = Matrix::Zero(side, side);
    std::vector<int> grid(d, 0);
    const double step = 6.283185307179586476925286766559 / points_per_angle;
    long long total = 1;
    for (int k = 0; k < d; ++k) total *= points_per_angle;
    std::vector<int> r(nf), c(nf);
    for (long long g = 0; g < total; ++g) {
        long long t = g;
        for (int k = 0; k < d; ++k) {
            grid[k] = static_cast<int>(t % points_per_angle);
            t /= points_per_angle;
        }
        Matrix term(side, side);
        for (int i = 0; i < side; ++i) {
            x.shape.unravel(i, r.data());
            for (int j = 0; j < side; ++j) {
                x.shape.unravel(j, c.data());
                double phase = 0.0;
                for (int f = 0; f < nf; ++f)
                    phase += sig.signs[f] * step * (grid[r[f]] - grid[c[f]]);
                term(i, j) = x.mat(i, j) * std::exp(Complex(0.0, phase));
            }
        }
        acc += term;
    }
    return {x.shape, acc / static_cast<double>(total)};
}

/// Random CPTP channel d_in -> d_out via a Haar isometry into
/// d_out (x) environment; standard test fixture.
inline ChannelChoi random_cptp(int d_in, const SystemShape& d_out, int env_dim,
                               StreamRng& rng) {
    const int dout = d_out.side();
    const int big = dout * env_dim;
    if (big < d_in) throw std::invalid_argument("random_cptp: environment too small");
    DenseOperator u = haar_unitary(big, rng);
    Matrix iso = u.mat.leftCols(d_in);  // big x d_in isometry
    std::vector<Matrix> kraus(env_dim, Matrix::Zero(dout, d_in));
    for (int e = 0; e < env_dim; ++e)
        for (int o = 0; o < dout; ++o)
            kraus[e].row(o) = iso.row(o * env_dim + e);
    return choi_from_kraus(kraus, d_out);
}

}  // namespace qclone
