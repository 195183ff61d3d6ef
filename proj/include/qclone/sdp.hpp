// Symmetry-reduced SDP solving and certificate verification.
//
// The reduced problems are tiny (at most 9 variables): maximize c.x subject
// to a.x = 1 and X(x) = sum_i x_i X_i >= 0. The equality constraint is
// eliminated by an affine parameterization and the cone constraint handled by
// a log-det barrier with Newton steps.
#pragma once

#include "qclone/bases.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace qclone {

struct SdpProblem {
    BasisFamily family;
};

inline SdpProblem make_problem(BasisName name, int d) { return {build_family(name, d)}; }

struct PrimalSolution {
    ReducedPoint x;
    double objective = 0.0;
    double barrier_gap = 0.0;  // mu * #eigenvalues at termination
    int newton_steps = 0;
};

enum class Verdict { OPTIMAL, PRIMAL_INFEASIBLE, DUAL_INFEASIBLE, GAP_TOO_LARGE };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::OPTIMAL: return "OPTIMAL";
        case Verdict::PRIMAL_INFEASIBLE: return "PRIMAL_INFEASIBLE";
        case Verdict::DUAL_INFEASIBLE: return "DUAL_INFEASIBLE";
        case Verdict::GAP_TOO_LARGE: return "GAP_TOO_LARGE";
    }
    return "?";
}

struct SdpCertificate {
    ReducedPoint primal_x;
    ReducedPoint dual_b;
    double dual_z = 0.0;
    double primal_value = 0.0;
    double dual_value = 0.0;
    double gap = 0.0;
    double primal_min_eig = 0.0;
    double dual_min_eig = 0.0;
    double primal_trace_residual = 0.0;   // |a.x - 1|
    double dual_constraint_residual = 0.0;  // max_i |tr(X_i Z^) - a_i z + c_i|
    Verdict verdict = Verdict::GAP_TOO_LARGE;
    std::string detail;
};

namespace detail {

// Indices of the diagonal-type elements used for the strictly feasible start.
inline std::vector<int> diagonal_support(BasisName name) {
    switch (name) {
        case BasisName::CLONER9: return {0, 1, 2, 5};
        case BasisName::TRANSPOSE6: return {0, 1, 3};
        case BasisName::EW_R: return {0, 1, 2};  // R+ + R- + R0 = 1
    }
    return {};
}

struct ReducedSpace {
    std::vector<int> live;     // indices of nonzero basis elements
    Eigen::VectorXd c, a;      // restricted coefficient vectors
    std::vector<const Matrix*> ops;
    int side = 0;
};

inline ReducedSpace live_subspace(const BasisFamily& fam) {
    ReducedSpace r;
    r.side = fam.elements.front().shape.side();
    for (int i = 0; i < fam.size(); ++i)
        if (fam.elements[i].mat.cwiseAbs().maxCoeff() > 0.0) r.live.push_back(i);
    const int n = static_cast<int>(r.live.size());
    r.c.resize(n);
    r.a.resize(n);
    for (int k = 0; k < n; ++k) {
        r.c(k) = fam.c(r.live[k]);
        r.a(k) = fam.a(r.live[k]);
        r.ops.push_back(&fam.elements[r.live[k]].mat);
    }
    return r;
}

}  // namespace detail

/// Interior-point maximization of c.x over {a.x = 1, X(x) >= 0}.
/// Deterministic; accuracy controlled by tol (target duality gap).
inline PrimalSolution solve_primal(const SdpProblem& problem, double tol = 1e-8) {
    const BasisFamily& fam = problem.family;
    detail::ReducedSpace sp = detail::live_subspace(fam);
    const int n = static_cast<int>(sp.live.size());
    const int side = sp.side;

    // Strictly feasible start on the diagonal-type elements.
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    {
        std::vector<int> supp = detail::diagonal_support(fam.name);
        double anorm = 0.0;
        for (int i : supp)
            for (int k = 0; k < n; ++k)
                if (sp.live[k] == i) anorm += sp.a(k);
        if (anorm <= 0.0) throw std::runtime_error("solve_primal: no feasible start");
        for (int i : supp)
            for (int k = 0; k < n; ++k)
                if (sp.live[k] == i) x0(k) = 1.0 / anorm;
    }

    // Nullspace of a^T: x = x0 + N y keeps a.x = 1.
    Eigen::MatrixXd at = sp.a.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(at);
    Eigen::MatrixXd nullsp = lu.kernel();
    const int m = static_cast<int>(nullsp.cols());

    auto assemble_x = [&](const Eigen::VectorXd& x) {
        Matrix acc = Matrix::Zero(side, side);
        for (int k = 0; k < n; ++k) acc += x(k) * (*sp.ops[k]);
        return acc;
    };
    auto min_eig = [&](const Eigen::VectorXd& x) { return min_eigenvalue(assemble_x(x)); };

    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    if (min_eig(x0) <= 0.0) throw std::runtime_error("solve_primal: start not interior");

    PrimalSolution sol;
    double mu = 1.0;
    const double mu_min = std::max(tol / (4.0 * side), 1e-14);
    Eigen::VectorXd x = x0;
    while (true) {
        // Newton iterations on f(y) = -c.x - mu log det X(x).
        for (int it = 0; it < 60; ++it) {
            x = x0 + nullsp * y;
            Matrix xm = assemble_x(x);
            Eigen::SelfAdjointEigenSolver<Matrix> es(xm);
            if (es.eigenvalues().minCoeff() <= 0.0)
                throw std::runtime_error("solve_primal: lost interior point");
            Matrix xinv = es.eigenvectors() *
                          es.eigenvalues().cwiseInverse().asDiagonal() *
                          es.eigenvectors().adjoint();
            // grad_x(-mu log det X) = -mu tr(X^-1 X_k)
            Eigen::VectorXd gx(n);
            std::vector<Matrix> xinv_ops(n);
            for (int k = 0; k < n; ++k) {
                xinv_ops[k] = xinv * (*sp.ops[k]);
                gx(k) = -sp.c(k) - mu * xinv_ops[k].trace().real();
            }
            Eigen::VectorXd g = nullsp.transpose() * gx;
            // Hessian: mu tr(X^-1 X_j X^-1 X_k)
            Eigen::MatrixXd hx(n, n);
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    double v = mu * (xinv_ops[j] * xinv_ops[k]).trace().real();
                    hx(j, k) = v;
                    hx(k, j) = v;
                }
            Eigen::MatrixXd h = nullsp.transpose() * hx * nullsp;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(h +
                                              1e-12 * Eigen::MatrixXd::Identity(m, m));
            Eigen::VectorXd step = ldlt.solve(-g);
            double decrement = -g.dot(step);
            if (!(decrement > 0)) break;
            // Armijo backtracking, keeping X(x) positive definite.
            double t = 1.0;
            double f0 = -sp.c.dot(x);
            for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e)
                f0 -= mu * std::log(es.eigenvalues()(e));
            bool moved = false;
            for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
                Eigen::VectorXd ytrial = y + t * step;
                Eigen::VectorXd xtrial = x0 + nullsp * ytrial;
                Matrix xt = assemble_x(xtrial);
                RVector ev = hermitian_eigenvalues(xt);
                if (ev.minCoeff() <= 0.0) continue;
                double f = -sp.c.dot(xtrial);
                for (Eigen::Index e = 0; e < ev.size(); ++e) f -= mu * std::log(ev(e));
                if (f <= f0 - 1e-4 * t * decrement) {
                    y = ytrial;
                    moved = true;
                    break;
                }
            }
            ++sol.newton_steps;
            if (!moved) break;
            if (decrement < 1e-13 * (1.0 + std::abs(f0))) break;
        }
        if (mu <= mu_min) break;
        mu *= 0.5;
    }

    x = x0 + nullsp * y;
    RVector full = RVector::Zero(fam.size());
    for (int k = 0; k < n; ++k) full(sp.live[k]) = x(k);
    sol.x = {fam.name, fam.d, full};
    sol.objective = fam.c.dot(full);
    sol.barrier_gap = mu * side;
    return sol;
}

/// Closed-form optimal cloner point: x = k_d (1,1,0,1,1,0,1,1,0), k_d = 1/(2d-1).
inline ReducedPoint cloner_optimal_point(int d) {
    detail::check_dim(d);
    const double k = 1.0 / (2.0 * d - 1.0);
    RVector x(9);
    x << k, k, 0, k, k, 0, k, k, 0;
    return {BasisName::CLONER9, d, x};
}

struct DualPoint {
    ReducedPoint b;
    double z = 0.0;
};

/// Matching dual certificate: b1=b2=b3=b6=2(d-1)/d^3, the rest -1/d^3,
/// z = (2d-1)/d^2.
inline DualPoint cloner_dual_certificate(int d) {
    detail::check_dim(d);
    const double d3 = static_cast<double>(d) * d * d;
    const double p = 2.0 * (d - 1.0) / d3, q = -1.0 / d3;
    RVector b(9);
    b << p, p, p, q, q, p, q, q, q;
    return {{BasisName::CLONER9, d, b}, (2.0 * d - 1.0) / (static_cast<double>(d) * d)};
}

/// Closed-form primal/dual certificate pair for the phase-covariant
/// transpose cloner; the d=2 point differs from the generic one.
inline std::pair<ReducedPoint, DualPoint> transpose_cloner_certificates(int d) {
    detail::check_dim(d);
    RVector x(6), b(6);
    double z;
    if (d == 2) {
        x << 0, 1.0 / 3.0, 1.0 / 3.0, 0, 0, 0;
        b << 0.25, 0.25, -0.125, 0.25, -0.125, -0.125;
        z = 0.75;
    } else {
        const double k = 1.0 / ((d - 1.0) * (d - 2.0));
        x << 0, 0, 0, k, k, k;
        const double d3 = static_cast<double>(d) * d * d;
        b << 5.0 / d3, 5.0 / d3, -1.0 / d3, 5.0 / d3, -1.0 / d3, -1.0 / d3;
        z = 6.0 / (static_cast<double>(d) * d);
    }
    return {{BasisName::TRANSPOSE6, d, x}, {{BasisName::TRANSPOSE6, d, b}, z}};
}

struct EwSolution {
    RVector coefficients;  // (c+, c-, c0, c1, c2, c3)
    double value = 0.0;    // c+
    double trace_residual = 0.0;
    double min_eig = 0.0;
    double marginal_residual = 0.0;  // max |tr_23(X) - I|
};

/// Linear program over the Eggeling-Werner span: the optimum is
/// c+ = 6/(d^2+3d+2), all other coefficients zero. Returns the closed form
/// and validates the assembled operator as a Choi matrix.
inline EwSolution ew_linear_program(int d) {
    detail::check_dim(d);
    BasisFamily fam = build_ew_r(d);
    EwSolution sol;
    sol.coefficients = RVector::Zero(6);
    sol.coefficients(0) = 6.0 / (static_cast<double>(d) * d + 3.0 * d + 2.0);
    sol.value = sol.coefficients(0);
    DenseOperator x = assemble(fam, sol.coefficients);
    sol.trace_residual = std::abs(fam.a.dot(sol.coefficients) - 1.0);
    sol.min_eig = min_eigenvalue(x.mat);
    DenseOperator marg = partial_trace(x, {0});
    sol.marginal_residual = (marg.mat - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    return sol;
}

/// Checks a primal/dual pair against the SDP of the given family. The dual
/// PSD check is a dense eigensolve of Z^ = sum_i b_i X_i; the linear dual
/// constraints tr(X_i Z^) - a_i z = -c_i are evaluated through the Gram matrix.
inline SdpCertificate verify_certificate(const SdpProblem& problem,
                                         const ReducedPoint& primal,
                                         const DualPoint& dual) {
    const BasisFamily& fam = problem.family;
    if (primal.family != fam.name || dual.b.family != fam.name)
        throw std::invalid_argument("verify_certificate: family mismatch");
    SdpCertificate cert;
    cert.primal_x = primal;
    cert.dual_b = dual.b;
    cert.dual_z = dual.z;

    DenseOperator xp = assemble(fam, primal);
    cert.primal_value = fam.c.dot(primal.x);
    cert.primal_min_eig = min_eigenvalue(xp.mat);
    cert.primal_trace_residual = std::abs(fam.a.dot(primal.x) - 1.0);

    DenseOperator zh = assemble(fam, dual.b);
    cert.dual_value = dual.z;
    cert.dual_min_eig = min_eigenvalue(zh.mat);
    Eigen::MatrixXd g = gram_matrix(fam);
    RVector tr_xi_z = g * dual.b.x;
    cert.dual_constraint_residual =
        (tr_xi_z - dual.z * fam.a + fam.c).cwiseAbs().maxCoeff();

    cert.gap = std::abs(cert.dual_value - cert.primal_value);
    if (cert.primal_trace_residual > 1e-9 || cert.primal_min_eig < -1e-9) {
        cert.verdict = Verdict::PRIMAL_INFEASIBLE;
        cert.detail = cert.primal_trace_residual > 1e-9 ? "a.x != 1" : "X(x) not PSD";
    } else if (cert.dual_constraint_residual > 1e-9 || cert.dual_min_eig < -1e-9) {
        cert.verdict = Verdict::DUAL_INFEASIBLE;
        cert.detail = cert.dual_constraint_residual > 1e-9 ? "tr(F_i Z) != -c_i"
                                                           : "Z^ not PSD";
    } else if (cert.gap > 1e-8) {
        cert.verdict = Verdict::GAP_TOO_LARGE;
        cert.detail = "duality gap above 1e-8";
    } else {
        cert.verdict = Verdict::OPTIMAL;
    }
    return cert;
}

}  // namespace qclone
