#ifndef PWSHARP_LINALG_HPP
#define PWSHARP_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

namespace pwsharp {

using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;
using VectorR = Eigen::VectorXd;

/// Determinant as phase times exp(log_abs); log_abs is -inf for a singular matrix.
struct LogDet {
    std::complex<double> phase{1.0, 0.0};
    double log_abs = 0.0;

    std::complex<double> value() const;
};

LogDet log_det_complex(const MatrixC& m);

/// Scaled partial pivoting elimination; the empty matrix has determinant 1.
std::complex<double> det_complex(const MatrixC& m);

/// u^T adj(M) u with u all ones, computed as -det([[M, u], [u^T, 0]]).
std::complex<double> bordered_det(const MatrixC& m);
LogDet log_bordered_det(const MatrixC& m);

struct SymEig {
    VectorR values;   // ascending
    MatrixR vectors;  // columns orthonormal
};

SymEig sym_eig(const MatrixR& m);

struct NullVector {
    VectorR vector;
    double value = 0.0;  // ||v^T M||
};

/// Left singular vector of the smallest singular value, from the eigen-decomposition of M M^T.
NullVector null_vector(const MatrixR& m);

}  // namespace pwsharp

#endif
