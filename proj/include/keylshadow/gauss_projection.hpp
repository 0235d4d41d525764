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
 * Dimension reduction via Gaussian random projections: the off-diagonal
 * sketch M_{V_1..V_k}, the block CPTP channel, the post-selection step, and
 * the wrapper estimator tau = 5 d beta / (k-1) tau'.
 */

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "keylshadow/errors.hpp"
#include "keylshadow/linalg.hpp"
#include "keylshadow/random.hpp"

namespace keylshadow {

/**
 * @brief k rectangular Gaussian matrices V_1..V_k (entries N(0, 1/d)) plus
 * the derived Y = I_d - 0.1 sum V_i V_i^dag.
 *
 * spectral_ok records the acceptance event 0.1 I <= sum V_i V_i^dag <= 10 I;
 * the channel and post-selection refuse rejected ensembles.
 */
struct ProjectionEnsemble {
    int d = 0;
    int k = 0;
    int m = 0; // columns per V; m = round(2d/k) unless overridden
    std::vector<RealMat> v_list;
    Mat y;
    bool spectral_ok = false;
    double gram_min = 0.0; // extreme eigenvalues of sum V_i V_i^dag
    double gram_max = 0.0;
};

/// Draw an ensemble and evaluate its spectral acceptance event.
inline ProjectionEnsemble make_ensemble(int d, int k, RandomStream &rng, int m_override = 0) {
    if (d < 1 || k < 2)
        throw ValidationError("make_ensemble: need d >= 1 and k >= 2");
    ProjectionEnsemble ens;
    ens.d = d;
    ens.k = k;
    ens.m = m_override > 0
                ? m_override
                : std::max(1, static_cast<int>(std::lround(2.0 * d / static_cast<double>(k))));
    ens.v_list.reserve(static_cast<std::size_t>(k));
    RealMat gram = RealMat::Zero(d, d);
    for (int i = 0; i < k; ++i) {
        ens.v_list.push_back(gaussian_matrix(d, ens.m, 1.0 / d, rng));
        gram += ens.v_list.back() * ens.v_list.back().transpose();
    }
    Eigen::SelfAdjointEigenSolver<RealMat> es(gram, Eigen::EigenvaluesOnly);
    ens.gram_min = es.eigenvalues().minCoeff();
    ens.gram_max = es.eigenvalues().maxCoeff();
    ens.spectral_ok = ens.gram_min >= 0.1 && ens.gram_max <= 10.0;
    ens.y = Mat::Identity(d, d) - 0.1 * gram.cast<Cplx>();
    return ens;
}

/**
 * @brief The off-diagonal sketch: k x k matrix with entry (i, j) equal to
 * tr(V_i^dag M V_j) for i != j and 0 on the diagonal. Hermitian with zero
 * diagonal whenever M is Hermitian.
 */
inline Mat sketch(const Mat &m, const ProjectionEnsemble &ens) {
    if (m.rows() != ens.d || m.cols() != ens.d)
        throw ValidationError("sketch: matrix dimension must equal ensemble d");
    std::vector<Mat> mv(static_cast<std::size_t>(ens.k));
    for (int j = 0; j < ens.k; ++j)
        mv[static_cast<std::size_t>(j)] = m * ens.v_list[static_cast<std::size_t>(j)].cast<Cplx>();
    Mat out = Mat::Zero(ens.k, ens.k);
    for (int i = 0; i < ens.k; ++i)
        for (int j = 0; j < ens.k; ++j) {
            if (i == j)
                continue;
            out(i, j) = (ens.v_list[static_cast<std::size_t>(i)].cast<Cplx>().adjoint() *
                         mv[static_cast<std::size_t>(j)])
                            .trace();
        }
    return out;
}

/// Linear extension of the projection channel to arbitrary d x d matrices;
/// used for Choi-matrix tests of complete positivity.
inline Mat projection_channel_matrix(const Mat &m, const ProjectionEnsemble &ens) {
    if (!ens.spectral_ok)
        throw SamplingError("projection_channel: ensemble rejected by the spectral test "
                            "(gram spectrum [" +
                            std::to_string(ens.gram_min) + ", " + std::to_string(ens.gram_max) +
                            "]); resample the ensemble");
    if (m.rows() != ens.d || m.cols() != ens.d)
        throw ValidationError("projection_channel: dimension must equal ensemble d");
    const int d = ens.d, k = ens.k;
    Eigen::SelfAdjointEigenSolver<Mat> es(ens.y);
    Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
    const Mat y_sqrt =
        es.eigenvectors() * clamped.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    Mat out = Mat::Zero(d + k, d + k);
    out.topLeftCorner(d, d) = y_sqrt * m * y_sqrt;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const Mat vi = ens.v_list[static_cast<std::size_t>(i)].cast<Cplx>();
            const Mat vj = ens.v_list[static_cast<std::size_t>(j)].cast<Cplx>();
            out(d + i, d + j) = 0.1 * (vi.adjoint() * m * vj).trace();
        }
    return out;
}

/**
 * @brief The block CPTP channel of the reduction: rho maps to
 * diag(Y^{1/2} rho Y^{1/2}, 0.1 [tr(V_i^dag rho V_j)]_{ij}) on d+k dimensions.
 *
 * Requires an ensemble that passed the spectral acceptance event (otherwise Y
 * need not be PSD); trace preserving by construction.
 */
inline DensityMatrix projection_channel(const DensityMatrix &rho, const ProjectionEnsemble &ens) {
    return DensityMatrix(hermitian_part(projection_channel_matrix(rho.matrix(), ens)));
}

/**
 * @brief Post-selection onto the k x k block: the kept fraction parameter
 * alpha = sum_i tr(V_i^dag rho V_i) (each copy is kept with probability
 * 0.1 alpha) and the post-measurement state
 * rho' = (sketch(rho) + diag(tr V_i^dag rho V_i)) / alpha.
 */
struct PostSelection {
    double alpha;
    DensityMatrix rho_prime;
};

inline PostSelection postselect_fraction(const DensityMatrix &rho, const ProjectionEnsemble &ens) {
    if (!ens.spectral_ok)
        throw SamplingError("postselect_fraction: ensemble rejected by the spectral test");
    if (rho.dim() != ens.d)
        throw ValidationError("postselect_fraction: state dimension must equal ensemble d");
    const int k = ens.k;
    Mat block = sketch(rho.matrix(), ens);
    double alpha = 0.0;
    for (int i = 0; i < k; ++i) {
        const Mat vi = ens.v_list[static_cast<std::size_t>(i)].cast<Cplx>();
        const double diag = (vi.adjoint() * rho.matrix() * vi).trace().real();
        block(i, i) = diag;
        alpha += diag;
    }
    if (alpha < 0.1)
        throw SamplingError("postselect_fraction: alpha = " + std::to_string(alpha) +
                            " < 0.1; the acceptance event was violated");
    return PostSelection{alpha, DensityMatrix(hermitian_part(block / alpha))};
}

/**
 * @brief An inner classical-shadows solver on k dimensions: given the
 * post-selected state and the sketched observable, produce an estimate of
 * <rho', sketch(O)> to the requested accuracy.
 */
using InnerSolver = std::function<double(const DensityMatrix &rho_prime, const Mat &sketched_obs,
                                         double accuracy, RandomStream &rng)>;

/// Exact-oracle inner solver, for identity tests of the wrapper algebra.
inline InnerSolver exact_inner_solver() {
    return [](const DensityMatrix &rho_prime, const Mat &sketched_obs, double /*accuracy*/,
              RandomStream & /*rng*/) { return inner_re(sketched_obs, rho_prime.matrix()); };
}

struct ReduceDimensionConfig {
    double epsilon = 0.5;
    double inner_accuracy_factor = 0.01; // inner accuracy = factor * eps * k / d
    int max_ensemble_resamples = 100;
    long long beta_copies = 100000; // copies used to measure the kept fraction
    bool deterministic_beta = false; // oracle tests only: beta := 0.1 alpha
};

struct ReduceDimensionResult {
    double tau = 0.0;
    double tau_inner = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    int ensembles_tried = 0;
};

/**
 * @brief One run of the dimension-reduction wrapper: draw ensembles until one
 * passes both spectral events (resampling up to the configured cap), push
 * copies through the channel, measure the kept fraction beta, run the inner
 * solver on rho' against sketch(O), and return tau = 5 d beta / (k-1) tau'.
 *
 * The observable must have operator norm at most 1 (rescale before calling).
 */
inline ReduceDimensionResult
reduce_dimension_estimate(const InnerSolver &inner, const DensityMatrix &rho, const Mat &obs,
                          int k, const ReduceDimensionConfig &cfg, RandomStream &rng) {
    const int d = static_cast<int>(rho.dim());
    const Mat o = hermitian_part(obs);
    if (operator_norm(o) > 1.0 + 1e-9)
        throw ValidationError("reduce_dimension_estimate: observable operator norm must be <= 1");

    ReduceDimensionResult res;
    std::optional<ProjectionEnsemble> accepted;
    Mat sketched_obs;
    for (int attempt = 0; attempt < cfg.max_ensemble_resamples; ++attempt) {
        res.ensembles_tried++;
        ProjectionEnsemble ens = make_ensemble(d, k, rng);
        if (!ens.spectral_ok)
            continue;
        sketched_obs = sketch(o, ens);
        if (operator_norm(sketched_obs) > 10.0)
            continue;
        accepted = std::move(ens);
        break;
    }
    if (!accepted)
        throw SamplingError("reduce_dimension_estimate: no ensemble passed the spectral tests in " +
                            std::to_string(cfg.max_ensemble_resamples) + " attempts");

    const PostSelection post = postselect_fraction(rho, *accepted);
    res.alpha = post.alpha;
    if (cfg.deterministic_beta) {
        res.beta = 0.1 * post.alpha;
    } else {
        const double keep_p = std::min(1.0, 0.1 * post.alpha);
        long long kept = 0;
        for (long long i = 0; i < cfg.beta_copies; ++i)
            if (rng.uniform() < keep_p)
                ++kept;
        res.beta = static_cast<double>(kept) / static_cast<double>(cfg.beta_copies);
    }

    const double inner_accuracy = cfg.inner_accuracy_factor * cfg.epsilon * k / d;
    res.tau_inner = inner(post.rho_prime, sketched_obs, inner_accuracy, rng);
    res.tau = 5.0 * d * res.beta / (k - 1.0) * res.tau_inner;
    return res;
}

} // namespace keylshadow
