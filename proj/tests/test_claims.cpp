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

#include <catch2/catch_amalgamated.hpp>

#include "keylshadow/claims.hpp"

using namespace keylshadow;

TEST_CASE("check_haar_moments on the identity and sign matrices") {
    RandomStream rng(90);
    Mat y = random_hermitian(3, rng);
    const ClaimReport r1 = check_haar_moments(Mat::Identity(3, 3), y, 5000, rng);
    REQUIRE(r1.verdict != "fail");

    Mat x = Mat::Zero(2, 2);
    x(0, 0) = 1.0;
    x(1, 1) = -1.0;
    const ClaimReport r2 = check_haar_moments(x, x, 20000, rng);
    REQUIRE(r2.verdict != "fail");

    RandomStream one(91);
    REQUIRE_THROWS_AS(check_haar_moments(Mat::Identity(1, 1), Mat::Identity(1, 1), 10, one),
                      ValidationError);
}

TEST_CASE("check_typical_tableaux degenerate cases") {
    RandomStream rng(92);
    const ClaimReport r1 = check_typical_tableaux(1, {0.5, 0.5}, 500, rng);
    REQUIRE(r1.observed[0] == 1.0); // sum lam^2 = 1 >= 1/4 always

    const ClaimReport r2 = check_typical_tableaux(64, {1.0, 0.0}, 200, rng);
    REQUIRE(r2.observed[0] == 1.0);             // deterministic shape (64)
    REQUIRE(r2.observed[1] == Catch::Approx(4096.0)); // 64^2
    REQUIRE(r2.verdict == "pass");

    const ClaimReport r3 =
        check_typical_tableaux(100, std::vector<double>(10, 0.1), 2000, rng);
    REQUIRE(r3.verdict == "pass"); // both bounds hold at n=100, uniform d=10
}

TEST_CASE("run_all emits a full deterministic suite") {
    ClaimConfig cfg;
    cfg.seed = 7;
    cfg.sample_scale = 0.02;
    cfg.workers = 2;
    const auto reports = run_all(cfg);
    REQUIRE(reports.size() >= 12);
    for (std::size_t i = 1; i < reports.size(); ++i)
        REQUIRE(reports[i - 1].claim_id <= reports[i].claim_id);

    const auto again = run_all(cfg);
    REQUIRE(reports_to_json(reports) == reports_to_json(again));

    ClaimConfig serial = cfg;
    serial.workers = 1;
    const auto serial_reports = run_all(serial);
    REQUIRE(reports_to_json(serial_reports) == reports_to_json(reports));

    for (const auto &r : reports) {
        INFO(r.claim_id << " -> " << r.verdict << " (" << r.note << ")");
        REQUIRE(r.verdict != "fail");
    }
}

TEST_CASE("run_all filter selects exactly the requested claim group") {
    ClaimConfig cfg;
    cfg.seed = 7;
    cfg.sample_scale = 0.02;
    cfg.workers = 2;
    const auto reports = run_all(cfg, {"mean-calc"});
    REQUIRE(reports.size() == 3);
    for (const auto &r : reports)
        REQUIRE(r.claim_id.rfind("mean-calc", 0) == 0);

    // The filtered run reproduces the same draws as the full run.
    const auto full = run_all(cfg);
    std::vector<ClaimReport> mean_only;
    for (const auto &r : full)
        if (r.claim_id.rfind("mean-calc", 0) == 0)
            mean_only.push_back(r);
    REQUIRE(reports_to_json(mean_only) == reports_to_json(reports));
}

TEST_CASE("a corrupted dual map fails the duality report") {
    RandomStream rng(93);
    const DualMapFn corrupted = [](const Mat &n, const SplitSignature &sig) {
        // Off-by-one prefix comparison: drops the last bit of the longer
        // string before testing, so non-prefixes slip through.
        const int d = sig.d();
        std::vector<std::tuple<int, int, int>> idx; // (j, len, bits)
        for (int j = 0; j < d; ++j)
            for (int s = 0; s < (1 << sig.b[static_cast<std::size_t>(j)]); ++s)
                idx.emplace_back(j, sig.b[static_cast<std::size_t>(j)], s);
        const int k = sig.k();
        Mat out = Mat::Zero(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) {
                const auto [j1, l1, s1] = idx[static_cast<std::size_t>(r)];
                const auto [j2, l2, s2] = idx[static_cast<std::size_t>(c)];
                const int lo = std::min(l1, l2);
                const int hi = std::max(l1, l2);
                const int long_bits = (l1 >= l2) ? s1 : s2;
                const int short_bits = (l1 >= l2) ? s2 : s1;
                const int shift = std::max(0, hi - lo - 1); // off by one
                if ((long_bits >> shift) == short_bits)
                    out(r, c) = n(j1, j2);
            }
        return out;
    };
    const ClaimReport bad = check_splitting_duality(200, corrupted, rng);
    REQUIRE(bad.verdict == "fail");

    RandomStream rng2(93);
    const ClaimReport good = check_splitting_duality(
        200, [](const Mat &n, const SplitSignature &sig) { return dsplit(n, sig); }, rng2);
    REQUIRE(good.verdict == "pass");
}

TEST_CASE("report serialization shapes") {
    ClaimConfig cfg;
    cfg.seed = 1;
    cfg.sample_scale = 0.01;
    cfg.workers = 2;
    const auto reports = run_all(cfg, {"schur-weyl-completeness"});
    REQUIRE(reports.size() == 2);
    const std::string json = reports_to_json(reports);
    REQUIRE(json.find("\"schema\":\"keylshadow-claims/1\"") != std::string::npos);
    REQUIRE(json.find("schur-weyl-completeness/projector-sum") != std::string::npos);
    const std::string table = reports_to_table(reports);
    REQUIRE(table.find("pass") != std::string::npos);
}
