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
 * Partition combinatorics and the Schur-Weyl distribution: hook-length and
 * hook-content dimension formulas, partition enumeration, RSK row insertion,
 * the exact pmf (uniform alpha via dimension ratios, general alpha via Schur
 * polynomials), an RSK-based sampler, and the spectral statistic
 * theta(t, d) = E[sum lambda_j^2] - t^2/d.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "keylshadow/errors.hpp"
#include "keylshadow/random.hpp"

namespace keylshadow {

/// Weakly decreasing tuple of positive integers; indexes irreps and Keyl outcomes.
struct Partition {
    std::vector<int> parts;

    Partition() = default;
    explicit Partition(std::vector<int> p) : parts(std::move(p)) {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i] <= 0)
                throw ValidationError("Partition: parts must be strictly positive");
            if (i > 0 && parts[i] > parts[i - 1])
                throw ValidationError("Partition: parts must be weakly decreasing");
        }
    }

    int n() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int rows() const { return static_cast<int>(parts.size()); }
    int part(int i) const { return i < rows() ? parts[static_cast<std::size_t>(i)] : 0; }

    /// sum_j lambda_j^2, the statistic entering theta and the typicality claims.
    long long sum_squares() const {
        long long s = 0;
        for (int p : parts)
            s += static_cast<long long>(p) * p;
        return s;
    }

    /// Conjugate (transposed) partition.
    Partition conjugate() const {
        if (parts.empty())
            return Partition{};
        std::vector<int> c(static_cast<std::size_t>(parts[0]), 0);
        for (int p : parts)
            for (int j = 0; j < p; ++j)
                c[static_cast<std::size_t>(j)]++;
        return Partition(std::move(c));
    }

    bool operator==(const Partition &o) const { return parts == o.parts; }
    bool operator<(const Partition &o) const { return parts < o.parts; }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts.size(); ++i)
            s += (i ? "," : "") + std::to_string(parts[i]);
        return s + ")";
    }
};

/// All partitions of n into at most max_parts parts, first part descending.
inline std::vector<Partition> enumerate_partitions(int n, int max_parts) {
    if (n < 0 || max_parts < 1)
        throw ValidationError("enumerate_partitions: need n >= 0 and max_parts >= 1");
    std::vector<Partition> out;
    std::vector<int> cur;
    auto rec = [&](auto &&self, int rem, int limit, int slots) -> void {
        if (rem == 0) {
            out.emplace_back(Partition(cur));
            return;
        }
        if (slots == 0)
            return;
        for (int p = std::min(rem, limit); p >= 1; --p) {
            // Remaining slots must be able to absorb the rest.
            if (static_cast<long long>(p) * slots < rem)
                break;
            cur.push_back(p);
            self(self, rem - p, p, slots - 1);
            cur.pop_back();
        }
    };
    if (n == 0) {
        out.emplace_back(Partition{});
        return out;
    }
    rec(rec, n, n, max_parts);
    return out;
}

namespace detail {

/// Hook lengths of every cell, row by row.
inline std::vector<int> hook_lengths(const Partition &lam) {
    const Partition conj = lam.conjugate();
    std::vector<int> hooks;
    for (int i = 0; i < lam.rows(); ++i)
        for (int j = 0; j < lam.part(i); ++j)
            hooks.push_back((lam.part(i) - j - 1) + (conj.part(j) - i - 1) + 1);
    return hooks;
}

inline __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline constexpr __int128 kInt128Guard = (static_cast<__int128>(1) << 120);

} // namespace detail

/**
 * @brief Number of standard Young tableaux of shape lam (hook-length formula).
 *
 * Exact integers; requires n <= 30 (use log_dim_sym beyond).
 */
inline std::uint64_t dim_sym(const Partition &lam) {
    const int n = lam.n();
    if (n > 30)
        throw ResourceError("dim_sym: exact evaluation capped at n <= 30");
    if (n == 0)
        return 1;
    __int128 num = 1;
    for (int i = 2; i <= n; ++i)
        num *= i;
    __int128 den = 1;
    for (int h : detail::hook_lengths(lam))
        den *= h;
    if (num % den != 0)
        throw InvariantError("dim_sym: hook product does not divide n!");
    return static_cast<std::uint64_t>(num / den);
}

/**
 * @brief Number of semistandard Young tableaux of shape lam with entries in
 * [d] (hook-content formula); 0 when lam has more than d parts.
 *
 * Exact integers; requires n <= 20.
 */
inline std::uint64_t dim_gl(const Partition &lam, int d) {
    if (lam.rows() > d)
        return 0;
    if (lam.n() > 20)
        throw ResourceError("dim_gl: exact evaluation capped at n <= 20");
    const std::vector<int> hooks = detail::hook_lengths(lam);
    __int128 num = 1, den = 1;
    std::size_t cell = 0;
    for (int i = 0; i < lam.rows(); ++i) {
        for (int j = 0; j < lam.part(i); ++j, ++cell) {
            num *= (d + j - i);
            den *= hooks[cell];
            const __int128 g = detail::gcd128(num, den);
            num /= g;
            den /= g;
            if (num > detail::kInt128Guard)
                throw ResourceError("dim_gl: intermediate product overflow");
        }
    }
    if (den != 1)
        throw InvariantError("dim_gl: hook-content ratio is not integral");
    return static_cast<std::uint64_t>(num);
}

/// log of dim_sym via log-hook sums; valid for any n.
inline double log_dim_sym(const Partition &lam) {
    double s = std::lgamma(static_cast<double>(lam.n()) + 1.0);
    for (int h : detail::hook_lengths(lam))
        s -= std::log(static_cast<double>(h));
    return s;
}

/// log of dim_gl; -inf when lam has more than d parts.
inline double log_dim_gl(const Partition &lam, int d) {
    if (lam.rows() > d)
        return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    const std::vector<int> hooks = detail::hook_lengths(lam);
    std::size_t cell = 0;
    for (int i = 0; i < lam.rows(); ++i)
        for (int j = 0; j < lam.part(i); ++j, ++cell)
            s += std::log(static_cast<double>(d + j - i)) - std::log(static_cast<double>(hooks[cell]));
    return s;
}

/// Number of length-n words over [d] whose symbol frequencies equal lam
/// (padded with zeros): the multinomial n! / prod lambda_i!.
inline std::uint64_t weight_word_count(const Partition &lam) {
    const int n = lam.n();
    if (n > 20)
        throw ResourceError("weight_word_count: capped at n <= 20");
    __int128 num = 1;
    for (int i = 2; i <= n; ++i)
        num *= i;
    for (int p : lam.parts)
        for (int i = 2; i <= p; ++i)
            num /= i;
    return static_cast<std::uint64_t>(num);
}

/// Parameters of a Schur-Weyl distribution SW^n(alpha).
struct SchurWeylSpec {
    int n;
    std::vector<double> alpha;

    SchurWeylSpec(int n_, std::vector<double> alpha_) : n(n_), alpha(std::move(alpha_)) {
        if (n < 1)
            throw ValidationError("SchurWeylSpec: n must be >= 1");
        double sum = 0.0;
        for (double a : alpha) {
            if (a < 0.0)
                throw ValidationError("SchurWeylSpec: alpha entries must be nonnegative");
            sum += a;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValidationError("SchurWeylSpec: alpha must sum to 1 within 1e-12");
    }

    int d() const { return static_cast<int>(alpha.size()); }
    bool uniform() const {
        for (double a : alpha)
            if (std::abs(a - 1.0 / d()) > 1e-12)
                return false;
        return true;
    }

    static SchurWeylSpec uniform_spec(int n, int d) {
        return SchurWeylSpec(n, std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
    }
};

namespace detail {

/// Visit the content vector (symbol frequencies) of every SSYT of shape lam
/// with entries in [d]. Cells are filled row-major; row-weak / column-strict
/// constraints prune the recursion.
template <typename Visitor>
void for_each_ssyt_content(const Partition &lam, int d, Visitor &&visit) {
    const int r = lam.rows();
    if (r == 0) {
        std::vector<int> none;
        visit(none);
        return;
    }
    if (r > d)
        return;
    std::vector<std::vector<int>> fill(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        fill[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(lam.part(i)), 0);
    std::vector<int> content(static_cast<std::size_t>(d), 0);
    auto rec = [&](auto &&self, int i, int j) -> void {
        if (i == r) {
            visit(content);
            return;
        }
        int ni = i, nj = j + 1;
        if (nj == lam.part(i)) {
            ni = i + 1;
            nj = 0;
        }
        int lo = 1;
        if (j > 0)
            lo = std::max(lo, fill[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)]);
        if (i > 0)
            lo = std::max(lo, fill[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] + 1);
        for (int v = lo; v <= d; ++v) {
            fill[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            content[static_cast<std::size_t>(v - 1)]++;
            self(self, ni, nj);
            content[static_cast<std::size_t>(v - 1)]--;
        }
    };
    rec(rec, 0, 0);
}

} // namespace detail

/// Schur polynomial s_lam(alpha) by SSYT monomial summation; capped at n <= 8.
inline double schur_polynomial(const Partition &lam, const std::vector<double> &alpha) {
    if (lam.n() > 8)
        throw ResourceError("schur_polynomial: SSYT monomial summation capped at n <= 8");
    double total = 0.0;
    detail::for_each_ssyt_content(lam, static_cast<int>(alpha.size()), [&](const std::vector<int> &content) {
        double term = 1.0;
        for (std::size_t i = 0; i < content.size(); ++i)
            for (int c = 0; c < content[i]; ++c)
                term *= alpha[i];
        total += term;
    });
    return total;
}

/**
 * @brief Exact Schur-Weyl pmf over partitions of n into at most d parts.
 *
 * Uniform alpha: P(lam) = dim_sym(lam) dim_gl(lam, d) / d^n, evaluated in the
 * log domain (valid up to the partition-enumeration cap). General alpha:
 * P(lam) = dim_sym(lam) s_lam(alpha), which requires n <= 8.
 */
inline std::map<Partition, double> sw_pmf(const SchurWeylSpec &spec) {
    const int n = spec.n, d = spec.d();
    if (n > 60)
        throw ResourceError("sw_pmf: partition enumeration capped at n <= 60");
    const bool uniform = spec.uniform();
    if (!uniform && n > 8)
        throw ResourceError("sw_pmf: general alpha requires n <= 8 (SSYT summation)");
    std::map<Partition, double> pmf;
    double total = 0.0;
    for (const Partition &lam : enumerate_partitions(n, d)) {
        double p;
        if (uniform) {
            p = std::exp(log_dim_sym(lam) + log_dim_gl(lam, d) - n * std::log(static_cast<double>(d)));
        } else {
            p = static_cast<double>(dim_sym(lam)) * schur_polynomial(lam, spec.alpha);
        }
        pmf[lam] = p;
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvariantError("sw_pmf: probabilities sum to " + std::to_string(total));
    return pmf;
}

/// Shape of the RSK insertion tableau of a word (row insertion: each letter
/// bumps the leftmost strictly greater entry).
inline Partition rsk_shape(const std::vector<int> &word) {
    if (word.empty())
        throw ValidationError("rsk_shape: word must be nonempty");
    std::vector<std::vector<int>> rows;
    for (int x : word) {
        int cur = x;
        for (std::size_t r = 0;; ++r) {
            if (r == rows.size()) {
                rows.emplace_back(1, cur);
                break;
            }
            auto &row = rows[r];
            auto it = std::upper_bound(row.begin(), row.end(), cur);
            if (it == row.end()) {
                row.push_back(cur);
                break;
            }
            std::swap(cur, *it);
        }
    }
    std::vector<int> shape;
    shape.reserve(rows.size());
    for (const auto &row : rows)
        shape.push_back(static_cast<int>(row.size()));
    return Partition(std::move(shape));
}

/// Draw from SW^n(alpha) by RSK on an i.i.d. alpha-word.
inline Partition sw_sample(const SchurWeylSpec &spec, RandomStream &rng) {
    std::vector<int> word(static_cast<std::size_t>(spec.n));
    for (auto &w : word)
        w = static_cast<int>(rng.categorical(spec.alpha)) + 1;
    return rsk_shape(word);
}

/**
 * @brief theta(t, d) = E_{lam ~ SW^t_d}[sum_j lambda_j^2] - t^2/d, evaluated
 * exactly from the uniform pmf. Strictly positive for all t >= 1, d >= 2.
 */
inline double theta(int t, int d) {
    if (t < 1 || d < 2)
        throw ValidationError("theta: need t >= 1 and d >= 2");
    if (t > 60)
        throw ResourceError("theta: capped at t <= 60");
    double expect = 0.0;
    for (const auto &[lam, p] : sw_pmf(SchurWeylSpec::uniform_spec(t, d)))
        expect += p * static_cast<double>(lam.sum_squares());
    return expect - static_cast<double>(t) * t / d;
}

} // namespace keylshadow
