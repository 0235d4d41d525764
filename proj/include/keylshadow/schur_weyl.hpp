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
 * Exact Schur-Weyl machinery on (C^d)^{tensor t}: the symmetric-group action,
 * Murnaghan-Nakayama characters, central (isotypic) projectors Pi_lambda,
 * weight projectors, Keyl POVM elements, weak Schur sampling, and full Keyl
 * measurement sampling.
 *
 * Two computation routes coexist on purpose. Dense operators on d^t
 * dimensions serve the small-instance verification suite; the samplers use a
 * character/cycle route that never materializes d^t matrices:
 *
 *   tr(Pi_lambda (X_1 x ... x X_t)) expands into cycle traces, and the Keyl
 *   U-density expands into a sum over weight-lambda words and permutations of
 *   entry products of U^dag X_i U.
 *
 * The unit tests assert the two routes agree.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "keylshadow/errors.hpp"
#include "keylshadow/linalg.hpp"
#include "keylshadow/random.hpp"
#include "keylshadow/tableaux.hpp"

namespace keylshadow {

/// Outcome of one Keyl measurement on a t-copy batch.
struct KeylOutcome {
    Partition lam;
    Mat u; // d x d unitary
};

/// Central projector onto the lambda-Schur subspace of (C^d)^{tensor t}.
struct IsotypicProjector {
    Partition lam;
    Mat matrix;
};

namespace detail {

inline std::int64_t pow_dim(int d, int t, std::int64_t cap = kDefaultDimCap) {
    std::int64_t dim = 1;
    for (int i = 0; i < t; ++i) {
        dim *= d;
        if (dim > cap)
            throw ResourceError("d^t = " + std::to_string(d) + "^" + std::to_string(t) +
                                " exceeds cap " + std::to_string(cap));
    }
    return dim;
}

inline void decode_word(std::int64_t index, int d, int t, std::vector<int> &word) {
    word.resize(static_cast<std::size_t>(t));
    for (int p = t - 1; p >= 0; --p) {
        word[static_cast<std::size_t>(p)] = static_cast<int>(index % d);
        index /= d;
    }
}

inline std::int64_t encode_word(const std::vector<int> &word, int d) {
    std::int64_t index = 0;
    for (int w : word)
        index = index * d + w;
    return index;
}

inline Partition cycle_type(const std::vector<int> &perm) {
    const int t = static_cast<int>(perm.size());
    std::vector<bool> seen(static_cast<std::size_t>(t), false);
    std::vector<int> lens;
    for (int i = 0; i < t; ++i) {
        if (seen[static_cast<std::size_t>(i)])
            continue;
        int len = 0, j = i;
        while (!seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = true;
            j = perm[static_cast<std::size_t>(j)];
            ++len;
        }
        lens.push_back(len);
    }
    std::sort(lens.begin(), lens.end(), std::greater<int>());
    return Partition(std::move(lens));
}

/// Cycles of a permutation, each listed as (i, pi(i), pi(pi(i)), ...).
inline std::vector<std::vector<int>> cycles_of(const std::vector<int> &perm) {
    const int t = static_cast<int>(perm.size());
    std::vector<bool> seen(static_cast<std::size_t>(t), false);
    std::vector<std::vector<int>> cycles;
    for (int i = 0; i < t; ++i) {
        if (seen[static_cast<std::size_t>(i)])
            continue;
        std::vector<int> cyc;
        int j = i;
        while (!seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = true;
            cyc.push_back(j);
            j = perm[static_cast<std::size_t>(j)];
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

inline double factorial_d(int t) {
    double f = 1.0;
    for (int i = 2; i <= t; ++i)
        f *= i;
    return f;
}

} // namespace detail

/**
 * @brief The permutation action on (C^d)^{tensor t}: sends the basis tensor
 * e_{i_1...i_t} to e_{i_{pi^-1(1)}...i_{pi^-1(t)}}.
 *
 * pi is given as 0-based images, pi[p] = image of slot p. Satisfies the
 * representation property op(pi o sigma) = op(pi) op(sigma).
 */
inline Mat permutation_operator(const std::vector<int> &pi, int d,
                                std::int64_t dim_cap = kDefaultDimCap) {
    const int t = static_cast<int>(pi.size());
    const std::int64_t dim = detail::pow_dim(d, t, dim_cap);
    Mat out = Mat::Zero(dim, dim);
    std::vector<int> word, moved(static_cast<std::size_t>(t));
    for (std::int64_t col = 0; col < dim; ++col) {
        detail::decode_word(col, d, t, word);
        for (int p = 0; p < t; ++p)
            moved[static_cast<std::size_t>(pi[static_cast<std::size_t>(p)])] =
                word[static_cast<std::size_t>(p)];
        out(detail::encode_word(moved, d), col) = 1.0;
    }
    return out;
}

namespace detail {

using CharKey = std::pair<std::vector<int>, std::vector<int>>;

inline long long mn_character(const std::vector<int> &lam, const std::vector<int> &mu,
                              std::map<CharKey, long long> &memo) {
    if (mu.empty())
        return lam.empty() ? 1 : 0;
    auto it = memo.find({lam, mu});
    if (it != memo.end())
        return it->second;
    const int r = mu[0];
    const std::vector<int> mu_rest(mu.begin() + 1, mu.end());
    // Beta numbers (first-column hook lengths); removing a border strip of
    // size r moves one beta number down by r onto an unoccupied value, with
    // sign (-1)^{number of occupied values crossed}.
    const int rows = static_cast<int>(lam.size());
    std::vector<int> beta(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i)
        beta[static_cast<std::size_t>(i)] = lam[static_cast<std::size_t>(i)] + (rows - 1 - i);
    long long total = 0;
    for (int i = 0; i < rows; ++i) {
        const int target = beta[static_cast<std::size_t>(i)] - r;
        if (target < 0)
            continue;
        bool occupied = false;
        int crossed = 0;
        for (int j = 0; j < rows; ++j) {
            if (j == i)
                continue;
            if (beta[static_cast<std::size_t>(j)] == target)
                occupied = true;
            if (beta[static_cast<std::size_t>(j)] > target &&
                beta[static_cast<std::size_t>(j)] < beta[static_cast<std::size_t>(i)])
                ++crossed;
        }
        if (occupied)
            continue;
        std::vector<int> nbeta = beta;
        nbeta[static_cast<std::size_t>(i)] = target;
        std::sort(nbeta.begin(), nbeta.end(), std::greater<int>());
        std::vector<int> nlam;
        for (int j = 0; j < rows; ++j) {
            const int part = nbeta[static_cast<std::size_t>(j)] - (rows - 1 - j);
            if (part > 0)
                nlam.push_back(part);
            else if (part < 0)
                throw InvariantError("mn_character: malformed beta set");
        }
        const long long sign = (crossed % 2 == 0) ? 1 : -1;
        total += sign * mn_character(nlam, mu_rest, memo);
    }
    memo[{lam, mu}] = total;
    return total;
}

} // namespace detail

/// Symmetric-group character chi^lam at cycle type mu (Murnaghan-Nakayama).
inline long long sym_character(const Partition &lam, const Partition &mu) {
    if (lam.n() != mu.n())
        throw ValidationError("sym_character: lam and mu must partition the same t");
    std::map<detail::CharKey, long long> memo;
    return detail::mn_character(lam.parts, mu.parts, memo);
}

/// chi^lam at every cycle type of S_t, keyed by cycle type.
inline std::map<Partition, long long> character_table_row(const Partition &lam) {
    std::map<Partition, long long> row;
    std::map<detail::CharKey, long long> memo;
    for (const Partition &mu : enumerate_partitions(lam.n(), lam.n()))
        row[mu] = detail::mn_character(lam.parts, mu.parts, memo);
    return row;
}

/// Number of permutations in S_t with cycle type mu: t! / (prod_j m_j! j^m_j).
inline double conjugacy_class_size(const Partition &mu) {
    const int t = mu.n();
    double log_size = std::lgamma(static_cast<double>(t) + 1.0);
    std::map<int, int> mult;
    for (int p : mu.parts)
        mult[p]++;
    for (const auto &[len, m] : mult)
        log_size -= std::lgamma(static_cast<double>(m) + 1.0) + m * std::log(static_cast<double>(len));
    return std::round(std::exp(log_size));
}

/**
 * @brief Central projector Pi_lambda onto the lambda-Schur subspace,
 * built as (dim_sym(lam)/t!) sum_pi chi^lam(type pi) P(pi).
 *
 * Dense; meant for verification at small d^t. Projectors for distinct lambda
 * are mutually orthogonal and sum to the identity.
 */
inline IsotypicProjector isotypic_projector(const Partition &lam, int d, int t,
                                            std::int64_t dim_cap = kDefaultDimCap) {
    if (lam.n() != t)
        throw ValidationError("isotypic_projector: lam must partition t");
    if (t > 6)
        throw ResourceError("isotypic_projector: capped at t <= 6 (t! permutation sum)");
    const std::int64_t dim = detail::pow_dim(d, t, dim_cap);
    const std::map<Partition, long long> chi = character_table_row(lam);
    Mat acc = Mat::Zero(dim, dim);
    std::vector<int> perm(static_cast<std::size_t>(t));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> word, moved(static_cast<std::size_t>(t));
    do {
        const double c = static_cast<double>(chi.at(detail::cycle_type(perm)));
        if (c == 0.0)
            continue;
        for (std::int64_t col = 0; col < dim; ++col) {
            detail::decode_word(col, d, t, word);
            for (int p = 0; p < t; ++p)
                moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])] =
                    word[static_cast<std::size_t>(p)];
            acc(detail::encode_word(moved, d), col) += c;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    acc *= static_cast<double>(dim_sym(lam)) / detail::factorial_d(t);
    return IsotypicProjector{lam, std::move(acc)};
}

/// All isotypic projectors for partitions of t into at most d parts.
inline std::vector<IsotypicProjector> isotypic_projectors(int d, int t,
                                                          std::int64_t dim_cap = kDefaultDimCap) {
    std::vector<IsotypicProjector> out;
    for (const Partition &lam : enumerate_partitions(t, d))
        out.push_back(isotypic_projector(lam, d, t, dim_cap));
    return out;
}

/**
 * @brief Diagonal projector onto basis tensors whose symbol frequencies equal
 * lam (padded with zeros to length d): the weight-lambda subspace.
 */
inline Mat weight_projector(const Partition &lam, int d, int t,
                            std::int64_t dim_cap = kDefaultDimCap) {
    if (lam.n() != t)
        throw ValidationError("weight_projector: lam must partition t");
    if (lam.rows() > d)
        throw ValidationError("weight_projector: lam has more than d parts");
    const std::int64_t dim = detail::pow_dim(d, t, dim_cap);
    Mat out = Mat::Zero(dim, dim);
    std::vector<int> word, freq(static_cast<std::size_t>(d));
    for (std::int64_t b = 0; b < dim; ++b) {
        detail::decode_word(b, d, t, word);
        std::fill(freq.begin(), freq.end(), 0);
        for (int w : word)
            freq[static_cast<std::size_t>(w)]++;
        bool match = true;
        for (int r = 0; r < d; ++r)
            if (freq[static_cast<std::size_t>(r)] != lam.part(r)) {
                match = false;
                break;
            }
        if (match)
            out(b, b) = 1.0;
    }
    return out;
}

/**
 * @brief Dense Keyl POVM element
 * M_{lam,U} = dim_gl(lam,d) U^{tensor t} Pi_lam P_{wt=lam} U^{dag tensor t}.
 *
 * The weight-lambda line inside each multiplicity copy of V_lam is the
 * maximal-weight direction, so this realizes the (lam, U) outcome density.
 * PSD; Haar-averaging and summing over lam recovers the identity.
 */
inline Mat keyl_povm_element(const KeylOutcome &out, int d, int t,
                             std::int64_t dim_cap = kDefaultDimCap) {
    const Mat ut = tensor_power(out.u, t, dim_cap);
    const Mat pi = isotypic_projector(out.lam, d, t, dim_cap).matrix;
    const Mat pw = weight_projector(out.lam, d, t, dim_cap);
    return static_cast<double>(dim_gl(out.lam, d)) * ut * pi * pw * ut.adjoint();
}

// ---------------------------------------------------------------------------
// Character/cycle fast route (no d^t matrices).
// ---------------------------------------------------------------------------

namespace detail {

/// tr(P(pi) (X_0 x ... x X_{t-1})): product over cycles (i, pi(i), ...) of
/// tr(... X_{pi(i)} X_i), factors multiplied against the cycle direction.
inline Cplx permuted_product_trace(const std::vector<int> &perm,
                                   const std::vector<const Mat *> &factors) {
    Cplx total = 1.0;
    for (const auto &cyc : cycles_of(perm)) {
        if (cyc.size() == 1) {
            total *= factors[static_cast<std::size_t>(cyc[0])]->trace();
            continue;
        }
        Mat prod = *factors[static_cast<std::size_t>(cyc.back())];
        for (std::size_t s = cyc.size() - 1; s-- > 0;)
            prod = prod * (*factors[static_cast<std::size_t>(cyc[s])]);
        total *= prod.trace();
    }
    return total;
}

/// All length-t words over [rows(lam)] with symbol r appearing lam_r times.
inline std::vector<std::vector<int>> weight_words(const Partition &lam) {
    std::vector<int> word;
    for (int r = 0; r < lam.rows(); ++r)
        word.insert(word.end(), static_cast<std::size_t>(lam.part(r)), r);
    std::sort(word.begin(), word.end());
    std::vector<std::vector<int>> words;
    do {
        words.push_back(word);
    } while (std::next_permutation(word.begin(), word.end()));
    return words;
}

/// Permutations of S_t with nonzero chi^lam, paired with the character value.
inline std::vector<std::pair<std::vector<int>, double>>
permutation_characters(const Partition &lam) {
    const int t = lam.n();
    const std::map<Partition, long long> chi = character_table_row(lam);
    std::vector<std::pair<std::vector<int>, double>> out;
    std::vector<int> perm(static_cast<std::size_t>(t));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        const long long c = chi.at(cycle_type(perm));
        if (c != 0)
            out.emplace_back(perm, static_cast<double>(c));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace detail

/**
 * @brief Exact weak-Schur-sampling pmf on a product state X_0 x ... x X_{t-1}:
 * P(lam) = tr(Pi_lam (X_0 x ... x X_{t-1})), via the character/cycle route.
 */
inline std::map<Partition, double> weak_schur_pmf_product(const std::vector<const Mat *> &factors,
                                                          int d) {
    const int t = static_cast<int>(factors.size());
    if (t > 6)
        throw ResourceError("weak_schur_pmf_product: capped at t <= 6");
    std::map<Partition, double> pmf;
    double total = 0.0;
    for (const Partition &lam : enumerate_partitions(t, d)) {
        Cplx acc = 0.0;
        for (const auto &[perm, c] : detail::permutation_characters(lam))
            acc += c * detail::permuted_product_trace(perm, factors);
        double p = static_cast<double>(dim_sym(lam)) / detail::factorial_d(t) * acc.real();
        p = std::max(p, 0.0);
        pmf[lam] = p;
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw InvariantError("weak_schur_pmf_product: pmf sums to " + std::to_string(total));
    for (auto &[lam, p] : pmf)
        p /= total;
    return pmf;
}

/**
 * @brief Exact weak-Schur-sampling pmf on rho^{tensor t}: P(lam) =
 * tr(Pi_lam rho^{tensor t}) = (dim_sym/t!) sum_mu |C_mu| chi^lam(mu)
 * prod_r tr(rho^{mu_r}).
 */
inline std::map<Partition, double> weak_schur_pmf(const DensityMatrix &rho, int t) {
    const int d = static_cast<int>(rho.dim());
    if (t > 30)
        throw ResourceError("weak_schur_pmf: capped at t <= 30");
    std::vector<double> power_traces(static_cast<std::size_t>(t) + 1, 0.0);
    Mat p = Mat::Identity(d, d);
    for (int r = 1; r <= t; ++r) {
        p = p * rho.matrix();
        power_traces[static_cast<std::size_t>(r)] = p.trace().real();
    }
    std::map<Partition, double> pmf;
    double total = 0.0;
    for (const Partition &lam : enumerate_partitions(t, d)) {
        const std::map<Partition, long long> chi = character_table_row(lam);
        double acc = 0.0;
        for (const Partition &mu : enumerate_partitions(t, t)) {
            const long long c = chi.at(mu);
            if (c == 0)
                continue;
            double term = static_cast<double>(c) * conjugacy_class_size(mu);
            for (int r : mu.parts)
                term *= power_traces[static_cast<std::size_t>(r)];
            acc += term;
        }
        const double prob =
            std::max(0.0, static_cast<double>(dim_sym(lam)) / detail::factorial_d(t) * acc);
        pmf[lam] = prob;
        total += prob;
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw InvariantError("weak_schur_pmf: pmf sums to " + std::to_string(total));
    for (auto &[lam_, p_] : pmf)
        p_ /= total;
    return pmf;
}

/// Draw a partition according to weak Schur sampling of rho^{tensor t}.
inline Partition weak_schur_sample(const DensityMatrix &rho, int t, RandomStream &rng) {
    const auto pmf = weak_schur_pmf(rho, t);
    std::vector<double> weights;
    std::vector<const Partition *> lams;
    for (const auto &[lam, p] : pmf) {
        lams.push_back(&lam);
        weights.push_back(p);
    }
    return *lams[rng.categorical(weights)];
}

/// Rejection-sampling counters for the Keyl U-stage.
struct RejectionStats {
    long long proposals = 0;
    long long accepts = 0;
};

/**
 * @brief Prepared Keyl-POVM sampler for a fixed t-copy batch state.
 *
 * Precomputes the partition pmf, the weight-lambda word lists, and the
 * character-weighted permutation lists once, so repeated draws cost one Haar
 * proposal plus an O(t! * t) entry-product sum each. Draws are rejection
 * samples against Haar with envelope dim_gl dim_sym prod ||X_i||_op / p(lam);
 * for near-maximally-mixed states the acceptance rate is near 1.
 *
 * The sampler is immutable after construction and safe to share across
 * workers, each with its own RandomStream.
 */
class KeylBatchSampler {
  public:
    /// Batch of t i.i.d. copies of rho.
    KeylBatchSampler(const DensityMatrix &rho, int t)
        : KeylBatchSampler(std::vector<Mat>(static_cast<std::size_t>(t), rho.matrix())) {}

    /// General product batch X_0 x ... x X_{t-1} of d x d density matrices.
    explicit KeylBatchSampler(std::vector<Mat> factors) : factors_(std::move(factors)) {
        if (factors_.empty())
            throw ValidationError("KeylBatchSampler: need at least one factor");
        d_ = static_cast<int>(factors_[0].rows());
        t_ = static_cast<int>(factors_.size());
        std::vector<const Mat *> ptrs;
        for (const Mat &f : factors_)
            ptrs.push_back(&f);
        const auto pmf = weak_schur_pmf_product(ptrs, d_);
        double op_prod = 1.0;
        for (const Mat &f : factors_)
            op_prod *= operator_norm(f);
        for (const auto &[lam, p] : pmf) {
            Arm arm;
            arm.lam = lam;
            arm.prob = p;
            arm.words = detail::weight_words(lam);
            arm.perm_chi = detail::permutation_characters(lam);
            arm.dim_gl_v = static_cast<double>(dim_gl(lam, d_));
            arm.dim_sym_v = static_cast<double>(dim_sym(lam));
            arm.scale = arm.dim_gl_v * arm.dim_sym_v / detail::factorial_d(t_);
            arm.envelope = arm.dim_gl_v * arm.dim_sym_v * op_prod;
            arms_.push_back(std::move(arm));
        }
    }

    int dim() const { return d_; }
    int batch_size() const { return t_; }

    KeylOutcome draw(RandomStream &rng, RejectionStats *stats = nullptr,
                     long long rejection_cap = 1000000) const {
        std::vector<double> weights;
        weights.reserve(arms_.size());
        for (const Arm &a : arms_)
            weights.push_back(a.prob);
        const Arm &arm = arms_[rng.categorical(weights)];
        const int ell = arm.lam.rows();
        std::vector<Mat> h(static_cast<std::size_t>(t_));
        for (long long iter = 0; iter < rejection_cap; ++iter) {
            Mat u = haar_unitary(d_, rng);
            const Mat cols = u.leftCols(ell);
            for (int i = 0; i < t_; ++i)
                h[static_cast<std::size_t>(i)] =
                    cols.adjoint() * factors_[static_cast<std::size_t>(i)] * cols;
            const double g = density_numerator(arm, h);
            if (stats)
                stats->proposals++;
            const double ratio = g / arm.envelope;
            if (ratio > 1.0 + 1e-6)
                throw InvariantError("KeylBatchSampler: density exceeded its envelope (ratio " +
                                     std::to_string(ratio) + ")");
            if (rng.uniform() < ratio) {
                if (stats)
                    stats->accepts++;
                return KeylOutcome{arm.lam, std::move(u)};
            }
        }
        throw SamplingError("KeylBatchSampler: rejection cap exceeded for lam " + arm.lam.str() +
                            "; envelope/p(lam) = " +
                            std::to_string(arm.envelope / std::max(arm.prob, 1e-300)));
    }

    /// Unnormalized outcome density g(U) = dim_gl tr(X U^{x t} Pi P U^{dag x t});
    /// exposed so tests can pit the fast route against the dense POVM element.
    double density(const Partition &lam, const Mat &u) const {
        for (const Arm &arm : arms_) {
            if (!(arm.lam == lam))
                continue;
            const Mat cols = u.leftCols(arm.lam.rows());
            std::vector<Mat> h(static_cast<std::size_t>(t_));
            for (int i = 0; i < t_; ++i)
                h[static_cast<std::size_t>(i)] =
                    cols.adjoint() * factors_[static_cast<std::size_t>(i)] * cols;
            return density_numerator(arm, h);
        }
        throw ValidationError("KeylBatchSampler: unknown partition " + lam.str());
    }

    const std::map<Partition, double> partition_pmf() const {
        std::map<Partition, double> pmf;
        for (const Arm &a : arms_)
            pmf[a.lam] = a.prob;
        return pmf;
    }

  private:
    struct Arm {
        Partition lam;
        double prob;
        std::vector<std::vector<int>> words;
        std::vector<std::pair<std::vector<int>, double>> perm_chi;
        double dim_gl_v;
        double dim_sym_v;
        double scale;    // dim_gl dim_sym / t!
        double envelope; // dim_gl dim_sym prod ||X_i||_op
    };

    double density_numerator(const Arm &arm, const std::vector<Mat> &h) const {
        // g(U) = dim_gl (dim_sym/t!) sum_{w: freq lam} sum_pi chi(pi)
        //        prod_i h_i[w_i, w_{pi(i)}]
        // (summing pi over the whole group makes pi and pi^-1 interchangeable).
        Cplx acc = 0.0;
        for (const auto &w : arm.words) {
            for (const auto &[perm, c] : arm.perm_chi) {
                Cplx prod = c;
                for (int i = 0; i < t_; ++i)
                    prod *= h[static_cast<std::size_t>(i)](
                        w[static_cast<std::size_t>(i)],
                        w[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
                acc += prod;
            }
        }
        return arm.scale * acc.real();
    }

    std::vector<Mat> factors_;
    std::vector<Arm> arms_;
    int d_ = 0;
    int t_ = 0;
};

/// One Keyl measurement of the product state X_0 x ... x X_{t-1}.
inline KeylOutcome keyl_sample_product(const std::vector<Mat> &factors, RandomStream &rng,
                                       RejectionStats *stats = nullptr,
                                       long long rejection_cap = 1000000) {
    return KeylBatchSampler(factors).draw(rng, stats, rejection_cap);
}

/// One Keyl measurement of rho^{tensor t}.
inline KeylOutcome keyl_sample(const DensityMatrix &rho, int t, RandomStream &rng,
                               RejectionStats *stats = nullptr, long long rejection_cap = 1000000) {
    return KeylBatchSampler(rho, t).draw(rng, stats, rejection_cap);
}

} // namespace keylshadow
