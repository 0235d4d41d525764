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
 * Perturbation estimator for states near maximally mixed: measure t-copy
 * batches with Keyl's POVM, form the point estimates D_j = U diag(lam/t) U^dag,
 * and rescale the averaged deviation from I/d by t(d^2-1)/(d theta) with
 * theta = E_{SW^t_d}[sum lam_j^2] - t^2/d computed exactly.
 */

#pragma once

#include <cmath>
#include <vector>

#include "keylshadow/errors.hpp"
#include "keylshadow/linalg.hpp"
#include "keylshadow/oracles.hpp"
#include "keylshadow/schur_weyl.hpp"
#include "keylshadow/tableaux.hpp"

namespace keylshadow {

/// Traceless perturbation estimate from m Keyl batches of size t.
struct BalancedEstimate {
    Mat e_hat;   // traceless Hermitian d x d
    int t;       // batch size
    long long m; // number of batches
    double theta;
};

/// Keyl's point estimate U diag(lam_1/t, ..., lam_d/t) U^dag for one outcome.
inline DensityMatrix keyl_point_estimate(const KeylOutcome &out, int t) {
    const int d = static_cast<int>(out.u.rows());
    if (out.lam.rows() > d)
        throw ValidationError("keyl_point_estimate: lam has more than d parts");
    if (out.lam.n() != t)
        throw ValidationError("keyl_point_estimate: lam must partition t");
    Eigen::VectorXd spec(d);
    for (int i = 0; i < d; ++i)
        spec(i) = static_cast<double>(out.lam.part(i)) / t;
    Mat m = out.u * spec.asDiagonal() * out.u.adjoint();
    return DensityMatrix(hermitian_part(m));
}

/**
 * @brief Run the balanced-state estimator: m Keyl batches through the oracle,
 * then E_hat = t(d^2-1)/(d theta) (avg D_j - I/d).
 *
 * theta is evaluated exactly; the result is traceless Hermitian by
 * construction (a residual trace of order machine epsilon is removed).
 */
inline BalancedEstimate estimate_balanced(KeylOracle &oracle, long long m, RandomStream &rng) {
    if (m < 1)
        throw ValidationError("estimate_balanced: need m >= 1 batches");
    const int d = oracle.dim();
    const int t = oracle.batch_size();
    const double th = theta(t, d);
    if (th <= 0.0)
        throw InvariantError("estimate_balanced: theta(t,d) must be positive");
    Mat avg = Mat::Zero(d, d);
    for (long long j = 0; j < m; ++j) {
        const KeylOutcome out = oracle.measure_batch(rng);
        avg += keyl_point_estimate(out, t).matrix();
    }
    avg /= static_cast<double>(m);
    const double scale = t * (static_cast<double>(d) * d - 1.0) / (d * th);
    Mat e_hat = scale * (avg - Mat::Identity(d, d) / static_cast<double>(d));
    e_hat = hermitian_part(e_hat);
    e_hat -= (e_hat.trace() / static_cast<double>(d)) * Mat::Identity(d, d);
    return BalancedEstimate{std::move(e_hat), t, m, th};
}

/**
 * @brief Exact mean of the Keyl point estimate under the linearized state:
 * I/d + (d theta / (t (d^2 - 1))) E for a traceless Hermitian perturbation E.
 */
inline Mat fake_estimator_mean_target(const Mat &e, int t, int d) {
    if (!is_hermitian(e, 1e-9))
        throw ValidationError("fake_estimator_mean_target: E must be Hermitian");
    if (std::abs(e.trace().real()) > 1e-9 * std::max(1.0, e.norm()))
        throw ValidationError("fake_estimator_mean_target: E must be traceless");
    const double coeff = d * theta(t, d) / (t * (static_cast<double>(d) * d - 1.0));
    return Mat::Identity(d, d) / static_cast<double>(d) + coeff * e;
}

/// <O, E_hat>; the observable is symmetrized, and only its traceless part
/// contributes since E_hat is traceless.
inline double query_balanced(const BalancedEstimate &est, const Mat &obs) {
    return inner_re(hermitian_part(obs), est.e_hat);
}

/// Asymptotic parameter schedule t = 0.01 d^2, m = 10^6/(eps^2 d^2) behind
/// the estimator's guarantees. Only meaningful for d >= 10; smaller d gets
/// t < 1.
struct PaperPreset {
    int t;
    long long m;
};

inline PaperPreset paper_preset(int d, double epsilon) {
    const double t_real = 0.01 * d * d;
    if (t_real < 1.0)
        throw ValidationError("paper_preset: t = 0.01 d^2 < 1 at d = " + std::to_string(d) +
                              "; the asymptotic settings need d >= 10");
    const double m_real = 1e6 / (epsilon * epsilon * d * d);
    return PaperPreset{static_cast<int>(t_real), static_cast<long long>(m_real)};
}

} // namespace keylshadow
