#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qheat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using SparseGenerator = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::ptrdiff_t>;

inline constexpr cplx I_unit{0.0, 1.0};

// Thrown when numerical work cannot reach its stated accuracy.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class NonConvergenceError : public NumericalError {
  public:
    NonConvergenceError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

inline bool is_hermitian(const CMatrix& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Column-major vec: vec(A X B) = (B^T kron A) vec(X).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline CMatrix left_superop(const CMatrix& a) {
    return kron(CMatrix::Identity(a.rows(), a.cols()), a);
}

inline CMatrix right_superop(const CMatrix& b) {
    return kron(b.transpose(), CMatrix::Identity(b.rows(), b.cols()));
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace qheat
