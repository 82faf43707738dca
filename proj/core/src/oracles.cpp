#include "pwsharp/oracles.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/QR>

#include "pwsharp/errors.hpp"

namespace pwsharp {

GalerkinResult galerkin_value(const SharpProblem& prob, const GalerkinConfig& cfg) {
    const int ell = prob.ell();
    const int k = prob.k();
    const int N = cfg.N;
    if (N <= ell + 1) {
        throw Error(ErrorKind::DomainError, "Galerkin truncation needs N > ell + 1");
    }
    const SpaceSpec& sp = prob.space();
    if (sp.zero_count() && *sp.zero_count() < N) {
        throw Error(ErrorKind::DomainError, "space has fewer than N zeros");
    }

    // Variables y_n = sqrt(c_n) xi_n^k a_n turn the quotient into
    // sum y^2 / sum y^2 (xi_1/xi_n)^{2k} * xi_1^{2k}; maximize the reciprocal.
    VectorR xi(N), sqc(N), d(N);
    for (int n = 1; n <= N; ++n) {
        xi(n - 1) = sp.zero(n);
        sqc(n - 1) = std::sqrt(sp.weight(n));
    }
    const double xi1 = xi(0);
    for (int n = 0; n < N; ++n) {
        d(n) = std::pow(xi1 / xi(n), 2 * k);
    }

    // The constraint columns are b, x b, ..., x^{l-1} b with x = (xi_1/xi)^2 and
    // b = (xi/xi_1)^{2l-1-k}/sqrt(c). Monomials in x are nearly collinear, so the
    // span is built by Arnoldi with two orthogonalization passes.
    VectorR x(N);
    for (int n = 0; n < N; ++n) {
        x(n) = (xi1 / xi(n)) * (xi1 / xi(n));
    }
    MatrixR C(N, ell);
    for (int j = 0; j < ell; ++j) {
        VectorR u(N);
        if (j == 0) {
            for (int n = 0; n < N; ++n) {
                u(n) = std::pow(xi(n) / xi1, 2 * ell - 1 - k) / sqc(n);
            }
        } else {
            u = x.cwiseProduct(C.col(j - 1));
        }
        const double original = u.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                u -= C.col(i).dot(u) * C.col(i);
            }
        }
        const double remaining = u.norm();
        if (!(remaining > 1e-12 * original)) {
            throw Error(ErrorKind::ConstraintRankDeficient, "constraint matrix lost rank");
        }
        C.col(j) = u / remaining;
    }

    // Orthonormal complement from a Householder QR. Forming Z^T D Z keeps the
    // matrix at the scale of its top eigenvalue, which is tiny for large k;
    // projecting D in place would bury it under rounding.
    MatrixR Z;
    if (ell > 0) {
        Eigen::HouseholderQR<MatrixR> qr(C);
        MatrixR Q = qr.householderQ() * MatrixR::Identity(N, N);
        Z = Q.rightCols(N - ell);
    } else {
        Z = MatrixR::Identity(N, N);
    }
    VectorR sd = d.cwiseSqrt();
    MatrixR SZ = sd.asDiagonal() * Z;
    MatrixR M = SZ.transpose() * SZ;
    SymEig eig = sym_eig(M);
    const double mu = eig.values(M.rows() - 1);

    GalerkinResult out;
    out.value = std::pow(xi1, 2 * k) / mu;
    VectorR y = Z * eig.vectors.col(M.rows() - 1);
    VectorR a(N);
    for (int n = 0; n < N; ++n) {
        a(n) = y(n) * std::pow(xi1 / xi(n), k) / sqc(n);
    }
    a.normalize();
    const double lead_tol = 1e-12 * a.cwiseAbs().maxCoeff();
    for (int n = 0; n < N; ++n) {
        if (std::abs(a(n)) > lead_tol) {
            if (a(n) < 0.0) {
                a = -a;
            }
            break;
        }
    }
    out.a.assign(a.data(), a.data() + N);
    return out;
}

namespace {

double fd_smallest(int n, int m, double radius) {
    // n unknowns with m zero ghost layers per side; the boundary sits at the
    // centroid of each ghost block, so the spacing is 2r/(n+m).
    const double h = 2.0 * radius / (n + m);
    std::vector<double> stencil(m + 1);
    for (int j = 0; j <= m; ++j) {
        double binom = 1.0;
        for (int t = 0; t < j; ++t) {
            binom = binom * (m - t) / (t + 1);
        }
        stencil[j] = ((m - j) % 2 == 0 ? 1.0 : -1.0) * binom / std::pow(h, m);
    }
    MatrixR D = MatrixR::Zero(n + m, n);
    for (int row = 0; row < n + m; ++row) {
        for (int j = 0; j <= m; ++j) {
            int col = row + j - m;
            if (col >= 0 && col < n) {
                D(row, col) = stencil[j];
            }
        }
    }
    MatrixR G = D.transpose() * D;
    return sym_eig(G).values(0);
}

}  // namespace

FDResult fd_poincare_value(const FDConfig& cfg) {
    if (cfg.grid_points < 16 || cfg.order_m < cfg.order_n || cfg.order_n < 0) {
        throw Error(ErrorKind::DomainError, "invalid FDConfig");
    }
    if (cfg.order_n != 0 || cfg.order_m < 1 || cfg.order_m > 2) {
        throw Error(ErrorKind::DomainError, "finite-difference oracle supports n = 0, m in {1, 2}");
    }
    if (!(cfg.radius > 0.0)) {
        throw Error(ErrorKind::DomainError, "radius must be positive");
    }
    const int m = cfg.order_m;
    FDResult out;
    out.coarse = fd_smallest(cfg.grid_points, m, cfg.radius);
    out.fine = fd_smallest(2 * cfg.grid_points + m, m, cfg.radius);
    out.value = (4.0 * out.fine - out.coarse) / 3.0;
    if (std::abs(out.fine - out.coarse) > 0.01 * std::abs(out.value)) {
        std::ostringstream msg;
        msg << "grids disagree: coarse " << out.coarse << ", fine " << out.fine;
        throw Error(ErrorKind::GridTooCoarse, msg.str());
    }
    return out;
}

}  // namespace pwsharp
