#pragma once

// Sum-over-poles representations of the Bose function
//
//   f(x) = 1 / (1 - e^{-x}) ~= 1/x + 1/2 + sum_j 2 eta_j x / (x^2 + xi_j^2).
//
// The [N-1/N] Pade scheme obtains the poles xi_j from the eigenvalues of a
// symmetric tridiagonal matrix and the residues eta_j from a second, reduced
// matrix (Hu, Xu, Yan). The Matsubara scheme is the truncated exact
// expansion (xi_j = 2 pi j, eta_j = 1) and is kept for cross-checking.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qheat {

enum class BoseScheme { pade, matsubara };

inline BoseScheme parse_bose_scheme(std::string_view name) {
    if (name == "pade") return BoseScheme::pade;
    if (name == "matsubara") return BoseScheme::matsubara;
    throw std::invalid_argument("unknown Bose decomposition scheme '" + std::string(name) +
                                "' (expected pade or matsubara)");
}

inline const char* to_string(BoseScheme s) {
    return s == BoseScheme::pade ? "pade" : "matsubara";
}

struct BosePoles {
    std::vector<double> xi;   // pole positions on the imaginary x axis, ascending
    std::vector<double> eta;  // residue weights

    std::size_t size() const noexcept { return xi.size(); }

    // Value of the pole expansion at real x != 0.
    double approximate(double x) const {
        double sum = 1.0 / x + 0.5;
        for (std::size_t j = 0; j < xi.size(); ++j) sum += 2.0 * eta[j] * x / (x * x + xi[j] * xi[j]);
        return sum;
    }
};

namespace detail {

// Positive eigenvalues of the zero-diagonal tridiagonal matrix with
// off-diagonals 1/sqrt(b_m b_{m+1}), b_m = 2(m + offset) + 1, m = 1..n-1.
inline std::vector<double> positive_tridiagonal_eigenvalues(std::size_t n, int offset) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double b1 = 2.0 * (static_cast<double>(i + 1) + offset) + 1.0;
        const double b2 = b1 + 2.0;
        const double v = 1.0 / std::sqrt(b1 * b2);
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = v;
        m(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    std::vector<double> pos;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double e = solver.eigenvalues()(i);
        if (e > 1e-14) pos.push_back(e);
    }
    std::sort(pos.begin(), pos.end());
    return pos;
}

}  // namespace detail

inline BosePoles pade_poles(std::size_t n) {
    BosePoles out;
    if (n == 0) return out;
    const auto lam = detail::positive_tridiagonal_eigenvalues(2 * n, 0);
    const auto lam_reduced = detail::positive_tridiagonal_eigenvalues(2 * n - 1, 1);
    if (lam.size() != n || lam_reduced.size() != n - 1)
        throw std::logic_error("pade_poles: unexpected eigenvalue count");

    for (double l : lam) out.xi.push_back(2.0 / l);
    std::sort(out.xi.begin(), out.xi.end());
    std::vector<double> zeta;
    for (double l : lam_reduced) zeta.push_back(2.0 / l);

    const double nd = static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xj2 = out.xi[j] * out.xi[j];
        double w = nd * (2.0 * nd + 3.0) / 2.0;
        for (double z : zeta) w *= (z * z - xj2);
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) w /= (out.xi[k] * out.xi[k] - xj2);
        out.eta.push_back(w);
    }
    return out;
}

inline BosePoles matsubara_poles(std::size_t n) {
    BosePoles out;
    for (std::size_t j = 1; j <= n; ++j) {
        out.xi.push_back(2.0 * std::numbers::pi * static_cast<double>(j));
        out.eta.push_back(1.0);
    }
    return out;
}

inline BosePoles bose_poles(BoseScheme scheme, std::size_t n) {
    return scheme == BoseScheme::pade ? pade_poles(n) : matsubara_poles(n);
}

}  // namespace qheat
