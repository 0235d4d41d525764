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
 * Seeded, stream-splittable randomness. Every sampler in the library takes an
 * explicit RandomStream so runs are reproducible from (seed, stream-id) and
 * workers can draw from disjoint streams concurrently.
 */

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace keylshadow {

namespace detail {
// SplitMix64 finalizer; used only to decorrelate (seed, stream) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace detail

/**
 * @brief Deterministic random stream identified by (seed, stream-id).
 *
 * Identical (seed, stream-id) pairs reproduce identical draws. Substreams
 * derived via substream(id) are decorrelated from the parent and from each
 * other; one stream per worker, never shared.
 */
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{detail::splitmix64(seed),
                          detail::splitmix64(stream_id ^ 0x5851f42d4c957f2dULL)};
        gen_.seed(seq);
    }

    /// Derive an independent stream for worker / repetition `id`.
    [[nodiscard]] RandomStream substream(std::uint64_t id) const {
        return RandomStream(seed_, detail::splitmix64(stream_id_) ^ detail::splitmix64(id + 1));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Standard normal draw.
    double gaussian() { return normal_(gen_); }

    /// Uniform draw in [0, 1).
    double uniform() { return unif_(gen_); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(gen_);
    }

    /// Draw an index from an (unnormalized) nonnegative weight vector.
    std::size_t categorical(const std::vector<double> &weights) {
        double total = 0.0;
        for (double w : weights)
            total += w;
        double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc)
                return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    std::mt19937_64 &engine() { return gen_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

} // namespace keylshadow
