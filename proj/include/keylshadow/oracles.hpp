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
 * Measurement oracles: the only way estimators touch the unknown state.
 * Simulated implementations hold an explicit density matrix and keep honest
 * copy accounting so reported copy counts match what a physical run would
 * consume.
 */

#pragma once

#include <atomic>
#include <memory>

#include "keylshadow/linalg.hpp"
#include "keylshadow/random.hpp"
#include "keylshadow/schur_weyl.hpp"

namespace keylshadow {

/// Keyl-POVM measurement access to t-copy batches of an unknown d-dim state.
class KeylOracle {
  public:
    virtual ~KeylOracle() = default;
    virtual KeylOutcome measure_batch(RandomStream &rng) = 0;
    virtual int dim() const = 0;
    virtual int batch_size() const = 0;
    virtual long long batches_measured() const = 0;
    long long copies_used() const { return batches_measured() * batch_size(); }
};

/// Simulator: Keyl measurements on an explicitly known state.
class StateKeylOracle final : public KeylOracle {
  public:
    StateKeylOracle(const DensityMatrix &rho, int t)
        : sampler_(rho, t), d_(static_cast<int>(rho.dim())), t_(t) {}

    KeylOutcome measure_batch(RandomStream &rng) override {
        batches_.fetch_add(1, std::memory_order_relaxed);
        return sampler_.draw(rng);
    }
    int dim() const override { return d_; }
    int batch_size() const override { return t_; }
    long long batches_measured() const override { return batches_.load(); }

    const KeylBatchSampler &sampler() const { return sampler_; }

  private:
    KeylBatchSampler sampler_;
    int d_;
    int t_;
    std::atomic<long long> batches_{0};
};

/// Single-copy measurement access: measure one copy in a chosen orthonormal
/// basis (the columns of a unitary), observing outcome i with probability
/// (U^dag rho U)_{ii}.
class SingleCopyOracle {
  public:
    virtual ~SingleCopyOracle() = default;
    virtual int measure_in_basis(const Mat &u, RandomStream &rng) = 0;
    virtual int dim() const = 0;
    virtual long long copies_used() const = 0;
};

/// Simulator: single-copy basis measurements on an explicitly known state.
class StateSingleCopyOracle final : public SingleCopyOracle {
  public:
    explicit StateSingleCopyOracle(const DensityMatrix &rho)
        : rho_(rho), d_(static_cast<int>(rho.dim())) {}

    int measure_in_basis(const Mat &u, RandomStream &rng) override {
        copies_.fetch_add(1, std::memory_order_relaxed);
        std::vector<double> probs(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) {
            const Cplx p = u.col(i).adjoint() * rho_.matrix() * u.col(i);
            probs[static_cast<std::size_t>(i)] = std::max(0.0, p.real());
        }
        return static_cast<int>(rng.categorical(probs));
    }
    int dim() const override { return d_; }
    long long copies_used() const override { return copies_.load(); }

  private:
    DensityMatrix rho_;
    int d_;
    std::atomic<long long> copies_{0};
};

} // namespace keylshadow
