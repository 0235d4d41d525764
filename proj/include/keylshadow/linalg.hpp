// Copyright 2026 The keylshadow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense complex Hermitian linear algebra shared by all modules: tensor
 * powers, Haar unitaries, Gaussian matrices, norms, and the PSD/trace-1
 * projection. Everything is double precision; Hermiticity is compared at
 * 1e-12 and eigen-solve quantities at 1e-10.
 */

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "keylshadow/errors.hpp"
#include "keylshadow/random.hpp"

namespace keylshadow {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RealMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kEigTol = 1e-10;

/// Default cap on the dimension of any tensor-power matrix (d^t).
inline constexpr std::int64_t kDefaultDimCap = 4096;

/// Frobenius inner product <A, B> = tr(A^dag B).
inline Cplx inner(const Mat &a, const Mat &b) { return (a.adjoint() * b).trace(); }

/// Real part of the Frobenius inner product; exact for Hermitian pairs.
inline double inner_re(const Mat &a, const Mat &b) { return inner(a, b).real(); }

inline bool is_hermitian(const Mat &m, double tol = kHermTol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Hermitian part (A + A^dag)/2; queries symmetrize user input through this.
inline Mat hermitian_part(const Mat &m) { return 0.5 * (m + m.adjoint()); }

/**
 * @brief Trace-1 PSD Hermitian matrix; the states rho, rho', sigma, ... of
 * the estimators.
 *
 * Validated on construction: Hermitian within 1e-12, eigenvalues >= -1e-10,
 * trace 1 within 1e-10.
 */
class DensityMatrix {
  public:
    explicit DensityMatrix(Mat m) : m_(std::move(m)) {
        if (!is_hermitian(m_))
            throw ValidationError("DensityMatrix: not Hermitian within 1e-12");
        if (std::abs(m_.trace().real() - 1.0) > kEigTol || std::abs(m_.trace().imag()) > kEigTol)
            throw ValidationError("DensityMatrix: trace != 1 within 1e-10");
        Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kEigTol)
            throw ValidationError("DensityMatrix: eigenvalue below -1e-10");
    }

    Eigen::Index dim() const { return m_.rows(); }
    const Mat &matrix() const { return m_; }

    /// Maximally mixed state I_d/d.
    static DensityMatrix maximally_mixed(Eigen::Index d) {
        return DensityMatrix(Mat::Identity(d, d) / static_cast<double>(d));
    }

  private:
    Mat m_;
};

/**
 * @brief t-fold Kronecker power of a square matrix.
 *
 * Refuses to materialize anything larger than `dim_cap` (default 4096) rows.
 */
inline Mat tensor_power(const Mat &m, int t, std::int64_t dim_cap = kDefaultDimCap) {
    if (t < 1)
        throw ValidationError("tensor_power: t must be >= 1");
    const std::int64_t d = m.rows();
    std::int64_t dim = 1;
    for (int i = 0; i < t; ++i) {
        dim *= d;
        if (dim > dim_cap)
            throw ResourceError("tensor_power: d^t = " + std::to_string(d) + "^" +
                                std::to_string(t) + " exceeds cap " + std::to_string(dim_cap));
    }
    Mat out = m;
    for (int i = 1; i < t; ++i)
        out = Eigen::kroneckerProduct(out, m).eval();
    return out;
}

/**
 * @brief Haar-random d x d unitary.
 *
 * QR of a complex Ginibre matrix with the diagonal of R rephased to positive
 * reals; this makes the distribution exactly Haar rather than QR-biased.
 */
inline Mat haar_unitary(Eigen::Index d, RandomStream &rng) {
    if (d < 1)
        throw ValidationError("haar_unitary: d must be >= 1");
    Mat g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            g(i, j) = Cplx(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j) {
        Cplx rjj = r(j, j);
        double a = std::abs(rjj);
        q.col(j) *= (a > 0.0) ? rjj / a : Cplx(1.0, 0.0);
    }
    return q;
}

/// rows x cols matrix of i.i.d. real N(0, variance) entries.
inline RealMat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance,
                               RandomStream &rng) {
    if (rows < 1 || cols < 1)
        throw ValidationError("gaussian_matrix: rows, cols must be >= 1");
    if (variance <= 0.0)
        throw ValidationError("gaussian_matrix: variance must be > 0");
    const double sigma = std::sqrt(variance);
    RealMat out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            out(i, j) = sigma * rng.gaussian();
    return out;
}

struct Norms {
    double frobenius;
    double op; // max |eigenvalue|
    double trace;
};

/// Frobenius, operator, and trace norms of a Hermitian matrix.
inline Norms norms(const Mat &m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues();
    return Norms{m.norm(), ev.cwiseAbs().maxCoeff(), ev.cwiseAbs().sum()};
}

inline double frobenius_norm(const Mat &m) { return m.norm(); }
inline double operator_norm(const Mat &m) { return norms(m).op; }

namespace detail {
// Euclidean projection of a real vector onto the probability simplex.
inline std::vector<double> simplex_project(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cum += u[i];
        double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            tau = t;
            k = static_cast<int>(i + 1);
        }
    }
    (void)k;
    for (auto &x : v)
        x = std::max(0.0, x - tau);
    return v;
}
} // namespace detail

/**
 * @brief Nearest (Frobenius) trace-1 PSD matrix.
 *
 * Projects the eigenvalues onto the probability simplex in the eigenbasis of
 * the Hermitian part of m.
 */
inline DensityMatrix psd_project(const Mat &m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m));
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::vector<double> proj = detail::simplex_project(ev);
    Eigen::VectorXd lam = Eigen::Map<Eigen::VectorXd>(proj.data(), static_cast<Eigen::Index>(proj.size()));
    Mat out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    return DensityMatrix(hermitian_part(out));
}

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE-like scaling 1).
inline Mat random_hermitian(Eigen::Index d, RandomStream &rng) {
    Mat g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            g(i, j) = Cplx(rng.gaussian(), rng.gaussian());
    return hermitian_part(g);
}

/// Random density matrix: normalized G G^dag with complex Ginibre G of rank r.
inline DensityMatrix random_density(Eigen::Index d, RandomStream &rng, Eigen::Index rank = 0) {
    if (rank <= 0 || rank > d)
        rank = d;
    Mat g(d, rank);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < rank; ++j)
            g(i, j) = Cplx(rng.gaussian(), rng.gaussian());
    Mat w = g * g.adjoint();
    w /= w.trace().real();
    return DensityMatrix(hermitian_part(w));
}

} // namespace keylshadow
