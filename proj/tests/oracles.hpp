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

// Test-only brute-force oracles, deliberately independent of the library's
// formula-based implementations.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "keylshadow/tableaux.hpp"

namespace ksoracle {

using keylshadow::Partition;

// Number of standard Young tableaux by the corner-removal recursion
// f(lam) = sum over removable corners f(lam minus corner). No hook lengths.
inline std::uint64_t count_syt(const std::vector<int> &shape) {
    if (shape.empty())
        return 1;
    static std::map<std::vector<int>, std::uint64_t> memo;
    auto it = memo.find(shape);
    if (it != memo.end())
        return it->second;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const bool corner = (i + 1 == shape.size()) || (shape[i] > shape[i + 1]);
        if (!corner)
            continue;
        std::vector<int> smaller = shape;
        smaller[i] -= 1;
        if (smaller[i] == 0)
            smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
        total += count_syt(smaller);
    }
    memo[shape] = total;
    return total;
}

// Number of semistandard Young tableaux with entries in [d] by explicit
// enumeration of fillings (rows weakly increasing, columns strictly).
inline std::uint64_t count_ssyt(const std::vector<int> &shape, int d) {
    if (shape.empty())
        return 1;
    if (static_cast<int>(shape.size()) > d)
        return 0;
    std::vector<std::vector<int>> tab(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i)
        tab[i].assign(static_cast<std::size_t>(shape[i]), 0);
    std::uint64_t count = 0;
    // Flat list of cells in row-major order.
    std::vector<std::pair<int, int>> cells;
    for (std::size_t i = 0; i < shape.size(); ++i)
        for (int j = 0; j < shape[i]; ++j)
            cells.emplace_back(static_cast<int>(i), j);
    auto rec = [&](auto &&self, std::size_t idx) -> void {
        if (idx == cells.size()) {
            ++count;
            return;
        }
        const auto [i, j] = cells[idx];
        int lo = 1;
        if (j > 0)
            lo = std::max(lo, tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)]);
        if (i > 0)
            lo = std::max(lo, tab[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] + 1);
        for (int v = lo; v <= d; ++v) {
            tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            self(self, idx + 1);
        }
    };
    rec(rec, 0);
    return count;
}

// Total-variation distance between an empirical partition histogram and an
// exact pmf.
inline double total_variation(const std::map<Partition, long long> &counts, long long n,
                              const std::map<Partition, double> &pmf) {
    double tv = 0.0;
    std::map<Partition, double> all;
    for (const auto &[lam, p] : pmf)
        all[lam] = p;
    for (const auto &[lam, cnt] : counts)
        all.try_emplace(lam, 0.0);
    for (const auto &[lam, p] : all) {
        const auto it = counts.find(lam);
        const double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
        tv += std::abs(emp - p);
    }
    return 0.5 * tv;
}

} // namespace ksoracle
