#include "pwsharp/linalg.hpp"

#include <cmath>
#include <limits>

#include "pwsharp/errors.hpp"

namespace pwsharp {

std::complex<double> LogDet::value() const {
    if (log_abs == -std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    return phase * std::exp(log_abs);
}

LogDet log_det_complex(const MatrixC& input) {
    if (input.rows() != input.cols()) {
        throw Error(ErrorKind::DomainError, "determinant of a non-square matrix");
    }
    const Eigen::Index n = input.rows();
    MatrixC a = input;
    LogDet out;

    Eigen::VectorXd scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        scale(i) = a.row(i).cwiseAbs().maxCoeff();
        if (scale(i) == 0.0) {
            out.phase = 0.0;
            out.log_abs = -std::numeric_limits<double>::infinity();
            return out;
        }
    }

    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        double best = -1.0;
        for (Eigen::Index r = col; r < n; ++r) {
            double ratio = std::abs(a(r, col)) / scale(r);
            if (ratio > best) {
                best = ratio;
                pivot = r;
            }
        }
        if (a(pivot, col) == std::complex<double>(0.0)) {
            out.phase = 0.0;
            out.log_abs = -std::numeric_limits<double>::infinity();
            return out;
        }
        if (pivot != col) {
            a.row(pivot).swap(a.row(col));
            std::swap(scale(pivot), scale(col));
            out.phase = -out.phase;
        }
        std::complex<double> p = a(col, col);
        double mag = std::abs(p);
        out.phase *= p / mag;
        out.log_abs += std::log(mag);
        for (Eigen::Index r = col + 1; r < n; ++r) {
            std::complex<double> factor = a(r, col) / p;
            if (factor != std::complex<double>(0.0)) {
                a.row(r).tail(n - col - 1) -= factor * a.row(col).tail(n - col - 1);
            }
        }
    }
    return out;
}

std::complex<double> det_complex(const MatrixC& m) {
    const Eigen::Index n = m.rows();
    if (n == 0 && m.cols() == 0) {
        return 1.0;
    }
    if (n == 1 && m.cols() == 1) {
        return m(0, 0);
    }
    return log_det_complex(m).value();
}

LogDet log_bordered_det(const MatrixC& m) {
    const Eigen::Index n = m.rows();
    LogDet out;
    if (n == 0) {
        out.phase = 0.0;
        out.log_abs = -std::numeric_limits<double>::infinity();
        return out;
    }
    MatrixC b(n + 1, n + 1);
    b.topLeftCorner(n, n) = m;
    b.col(n).setOnes();
    b.row(n).setOnes();
    b(n, n) = 0.0;
    out = log_det_complex(b);
    out.phase = -out.phase;
    return out;
}

std::complex<double> bordered_det(const MatrixC& m) { return log_bordered_det(m).value(); }

SymEig sym_eig(const MatrixR& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::DomainError, "sym_eig requires a square matrix");
    }
    Eigen::SelfAdjointEigenSolver<MatrixR> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "symmetric eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

NullVector null_vector(const MatrixR& m) {
    MatrixR gram = m * m.transpose();
    SymEig eig = sym_eig(gram);
    NullVector out;
    out.vector = eig.vectors.col(0);
    out.value = (out.vector.transpose() * m).norm();
    return out;
}

}  // namespace pwsharp
