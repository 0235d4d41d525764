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

#include "keylshadow/serialize.hpp"
#include "keylshadow/splitting.hpp"
#include "oracles.hpp"

using namespace keylshadow;

namespace {

SplitSignature random_sig(int d, RandomStream &rng, int max_exp = 3) {
    std::vector<int> b(static_cast<std::size_t>(d));
    for (auto &e : b)
        e = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_exp + 1)));
    return SplitSignature(std::move(b));
}

} // namespace

TEST_CASE("split reproduces the 6x6 splitting of a 2x2 matrix bit-exactly") {
    Mat m(2, 2);
    m(0, 0) = Cplx(1.0, 0.0);
    m(0, 1) = Cplx(5.0, 2.0);
    m(1, 0) = Cplx(5.0, -2.0);
    m(1, 1) = Cplx(3.0, 0.0);
    const SplitSignature sig({2, 1});
    const Mat s = split(m, sig);
    REQUIRE(s.rows() == 6);

    const Cplx a11 = m(0, 0), a12 = m(0, 1), a21 = m(1, 0), a22 = m(1, 1);
    Mat expect = Mat::Zero(6, 6);
    expect(0, 0) = expect(1, 1) = expect(2, 2) = expect(3, 3) = 0.25 * a11;
    expect(0, 4) = expect(1, 4) = 0.25 * a12;
    expect(2, 5) = expect(3, 5) = 0.25 * a12;
    expect(4, 0) = expect(4, 1) = 0.25 * a21;
    expect(5, 2) = expect(5, 3) = 0.25 * a21;
    expect(4, 4) = expect(5, 5) = 0.5 * a22;
    REQUIRE((s - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("split and dsplit with zero exponents are the identity") {
    RandomStream rng(50);
    const Mat m = random_hermitian(3, rng);
    const SplitSignature sig({0, 0, 0});
    REQUIRE((split(m, sig) - m).norm() == 0.0);
    REQUIRE((dsplit(m, sig) - m).norm() == 0.0);
}

TEST_CASE("split preserves the trace") {
    RandomStream rng(51);
    for (int rep = 0; rep < 50; ++rep) {
        const Mat m = random_hermitian(3, rng);
        const SplitSignature sig = random_sig(3, rng);
        REQUIRE(std::abs(split(m, sig).trace() - m.trace()) < 1e-12);
    }
}

TEST_CASE("dsplit of the identity is the identity") {
    RandomStream rng(52);
    for (int rep = 0; rep < 10; ++rep) {
        const SplitSignature sig = random_sig(4, rng);
        REQUIRE((dsplit(Mat::Identity(4, 4), sig) - Mat::Identity(sig.k(), sig.k())).norm() == 0.0);
    }
}

TEST_CASE("splitting properties: contraction, duality, dual norm bound") {
    RandomStream rng(53);
    const SplitSignature fixed({2, 1, 0});
    for (int rep = 0; rep < 1000; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(3));
        const SplitSignature sig = (rep == 0) ? fixed : random_sig(d, rng);
        const int dd = sig.d();
        const Mat m = random_hermitian(dd, rng);
        const Mat n = random_hermitian(dd, rng);
        REQUIRE(split(m, sig).norm() <= m.norm() + 1e-12);
        REQUIRE(std::abs(inner(split(m, sig), dsplit(n, sig)) - inner(m, n)) < 1e-10);
        REQUIRE(dsplit(n, sig).norm() <=
                2.0 * std::sqrt(static_cast<double>(sig.k())) * operator_norm(n) + 1e-12);
    }
}

TEST_CASE("split and dsplit are linear") {
    RandomStream rng(54);
    const SplitSignature sig({1, 2, 0});
    const Mat a = random_hermitian(3, rng), b = random_hermitian(3, rng);
    const double c1 = 0.37, c2 = -1.42;
    REQUIRE((split(c1 * a + c2 * b, sig) - c1 * split(a, sig) - c2 * split(b, sig)).norm() < 1e-12);
    REQUIRE((dsplit(c1 * a + c2 * b, sig) - c1 * dsplit(a, sig) - c2 * dsplit(b, sig)).norm() <
            1e-12);
}

TEST_CASE("split maps density matrices to density matrices") {
    RandomStream rng(55);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(3));
        const DensityMatrix rho = random_density(d, rng);
        const SplitSignature sig = random_sig(d, rng, 2);
        REQUIRE_NOTHROW(DensityMatrix(hermitian_part(split(rho.matrix(), sig))));
    }
}

TEST_CASE("choose_b hand values and the flattening guarantee") {
    const SplitSignature uniform = choose_b({0.25, 0.25, 0.25, 0.25});
    REQUIRE(uniform.b == std::vector<int>({0, 0, 0, 0}));
    REQUIRE(uniform.k() == 4);

    const SplitSignature pure = choose_b({1.0, 0.0});
    REQUIRE(pure.b == std::vector<int>({1, 0}));
    REQUIRE(pure.k() == 3);

    const SplitSignature skew = choose_b({0.7, 0.1, 0.1, 0.1});
    REQUIRE(skew.b == std::vector<int>({2, 0, 0, 0}));
    REQUIRE(skew.k() == 7);

    RandomStream rng(56);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(4));
        const DensityMatrix rho = random_density(d, rng);
        Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix(), Eigen::EigenvaluesOnly);
        std::vector<double> spec;
        for (int i = 0; i < d; ++i)
            spec.push_back(std::max(0.0, es.eigenvalues()(i)));
        const SplitSignature sig = choose_b(spec);
        REQUIRE(sig.k() <= 4 * d);
        Mat diag = Mat::Zero(d, d);
        for (int i = 0; i < d; ++i)
            diag(i, i) = spec[static_cast<std::size_t>(i)];
        REQUIRE(operator_norm(split(diag, sig)) <= 1.0 / d + 1e-12);
    }
}

TEST_CASE("recenter_state at the fixed point and its exact identity") {
    const int d = 3;
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(d);
    const SplitSignature sig = choose_b(std::vector<double>(d, 1.0 / d));
    const DensityMatrix tilde = recenter_state(mixed, mixed, sig);
    REQUIRE(sig.k() == d);
    REQUIRE((tilde.matrix() - Mat::Identity(d, d) / static_cast<double>(d)).cwiseAbs().maxCoeff() <
            1e-14);

    RandomStream rng(57);
    for (int rep = 0; rep < 20; ++rep) {
        const DensityMatrix rho = random_density(2, rng);
        // A diagonal rough estimate close to the true spectrum.
        Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix());
        Mat diag = Mat::Zero(2, 2);
        diag(0, 0) = es.eigenvalues()(1);
        diag(1, 1) = es.eigenvalues()(0);
        const DensityMatrix rough(diag);
        const DensityMatrix rho_working(
            hermitian_part(es.eigenvectors().rightCols(2).adjoint() * rho.matrix() *
                           es.eigenvectors().rightCols(2)));
        const SplitSignature sig2 = choose_b({diag(0, 0).real(), diag(1, 1).real()});
        const DensityMatrix tilde2 = recenter_state(rho_working, rough, sig2);
        const int k = sig2.k();
        const Mat lhs = tilde2.matrix() - Mat::Identity(k, k) / static_cast<double>(k);
        const Mat rhs = 0.25 * split(rho_working.matrix() - rough.matrix(), sig2);
        REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(std::abs(tilde2.matrix().trace().real() - 1.0) < 1e-12);
    }
}

TEST_CASE("recenter_state rejects a non-diagonal rough estimate") {
    RandomStream rng(58);
    const DensityMatrix rho = random_density(2, rng);
    const DensityMatrix rough = random_density(2, rng); // almost surely not diagonal
    const SplitSignature sig({1, 0});
    REQUIRE_THROWS_AS(recenter_state(rho, rough, sig), ValidationError);
}

TEST_CASE("recenter_state contracts the rough residual") {
    // ||rho - rough||_F = 1e-3 forces ||tilde - I/k||_F <= 2.5e-4.
    Mat rho_m = Mat::Identity(2, 2) / 2.0;
    rho_m(0, 0) += 0.5e-3;
    rho_m(1, 1) -= 0.5e-3;
    rho_m(0, 1) = rho_m(1, 0) = 0.5e-3;
    const DensityMatrix rho(rho_m);
    const DensityMatrix rough = DensityMatrix::maximally_mixed(2);
    const double resid = (rho.matrix() - rough.matrix()).norm();
    const SplitSignature sig = choose_b({0.5, 0.5});
    const DensityMatrix tilde = recenter_state(rho, rough, sig);
    const int k = sig.k();
    REQUIRE((tilde.matrix() - Mat::Identity(k, k) / static_cast<double>(k)).norm() <=
            0.25 * resid + 1e-15);
}

TEST_CASE("rough tomography raw estimate is unbiased") {
    RandomStream rng(59);
    const DensityMatrix rho = random_density(2, rng);
    StateSingleCopyOracle oracle(rho);
    const long long n = 100000;
    const Mat raw = rough_tomography_raw(oracle, n, rng);
    // Per-copy estimates have O(1) entries; 3 sigma at n samples.
    REQUIRE((raw - rho.matrix()).cwiseAbs().maxCoeff() < 3.0 * 3.0 / std::sqrt(static_cast<double>(n)));
    REQUIRE(oracle.copies_used() == n);
}

TEST_CASE("rough tomography concentrates on a pure state") {
    Mat pure = Mat::Zero(2, 2);
    pure(0, 0) = 1.0;
    const DensityMatrix rho(pure);
    RandomStream rng(60);
    int good = 0;
    for (int rep = 0; rep < 20; ++rep) {
        StateSingleCopyOracle oracle(rho);
        RandomStream stream = rng.substream(static_cast<std::uint64_t>(rep));
        const DensityMatrix est = rough_tomography(oracle, 100000, stream);
        if ((est.matrix() - rho.matrix()).norm() <= 0.05)
            ++good;
    }
    REQUIRE(good >= 19);
}

TEST_CASE("rough tomography with a single copy is still a valid state") {
    RandomStream rng(61);
    StateSingleCopyOracle oracle(DensityMatrix::maximally_mixed(3));
    REQUIRE_NOTHROW(rough_tomography(oracle, 1, rng));
}

TEST_CASE("mixture access: lam = 1 reproduces the plain state oracle") {
    RandomStream rng(62);
    const DensityMatrix rho = random_density(2, rng);
    const DensityMatrix sigma = DensityMatrix::maximally_mixed(2);
    MixtureKeylOracle mix(rho, sigma, 1.0, 2, MixtureMode::Direct);
    StateKeylOracle plain(rho, 2);
    RandomStream r1(63), r2(63);
    for (int i = 0; i < 50; ++i) {
        const KeylOutcome a = mix.measure_batch(r1);
        const KeylOutcome b = plain.measure_batch(r2);
        REQUIRE(a.lam == b.lam);
        REQUIRE((a.u - b.u).norm() == 0.0);
    }
}

TEST_CASE("mixture access: lam = 0 consumes no rho copies in coin mode") {
    RandomStream rng(64);
    const DensityMatrix rho = random_density(2, rng);
    const DensityMatrix sigma = DensityMatrix::maximally_mixed(2);
    MixtureKeylOracle mix(rho, sigma, 0.0, 2, MixtureMode::PerCopyCoin);
    std::map<Partition, long long> counts;
    const int n = 4000;
    for (int i = 0; i < n; ++i)
        counts[mix.measure_batch(rng).lam]++;
    REQUIRE(mix.rho_copies_used() == 0);
    REQUIRE(ksoracle::total_variation(counts, n, weak_schur_pmf(sigma, 2)) < 0.03);
}

TEST_CASE("mixture access: coin mode matches the direct construction") {
    RandomStream rng(65);
    const DensityMatrix rho = random_density(2, rng);
    const DensityMatrix sigma = DensityMatrix::maximally_mixed(2);
    const double lam = 0.25;
    const int t = 2, n = 10000;

    MixtureKeylOracle faithful(rho, sigma, lam, t, MixtureMode::PerCopyCoin);
    std::map<Partition, long long> counts;
    for (int i = 0; i < n; ++i)
        counts[faithful.measure_batch(rng).lam]++;
    REQUIRE(faithful.rho_copies_used() <= faithful.copies_used());

    const Mat mix = lam * rho.matrix() + (1.0 - lam) * sigma.matrix();
    const auto exact = weak_schur_pmf(DensityMatrix(hermitian_part(mix)), t);
    REQUIRE(ksoracle::total_variation(counts, n, exact) < 0.02);
}

TEST_CASE("build_shadow repetition count and trivial queries") {
    RandomStream rng(66);
    ShadowBuildConfig cfg;
    cfg.delta = 0.3;
    cfg.total_copies = 20000;
    const ShadowBuildResult res = build_shadow(DensityMatrix::maximally_mixed(2), cfg, rng);
    REQUIRE(res.shadow.c() == 13); // ceil(10 ln(10/3))
    REQUIRE(res.shadow.k() == res.shadow.sig.k());
    for (const Mat &e : res.shadow.e_hats) {
        REQUIRE(e.rows() == res.shadow.k());
        REQUIRE(std::abs(e.trace()) < 1e-10);
    }
    REQUIRE(query_shadow(res.shadow, Mat::Identity(2, 2)) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(res.rough_copies + res.balanced_copies <= cfg.total_copies);

    // Storage is O(d^2 c) reals: k <= 4d so each e_hat holds <= 16 d^2 complex.
    const std::size_t stored_reals =
        2 * static_cast<std::size_t>(res.shadow.k()) * res.shadow.k() * res.shadow.e_hats.size();
    REQUIRE(stored_reals <= 32u * 4u * static_cast<std::size_t>(res.shadow.c()));
}

TEST_CASE("build_shadow on the maximally mixed state keeps perturbations small") {
    RandomStream rng(160);
    ShadowBuildConfig cfg;
    cfg.total_copies = 100000;
    cfg.delta = 0.3;
    const ShadowBuildResult res = build_shadow(DensityMatrix::maximally_mixed(2), cfg, rng);
    for (const Mat &e : res.shadow.e_hats)
        REQUIRE(e.norm() < 0.5);
}

TEST_CASE("query_shadow with perfect inner estimates returns tr(rho_rough^2)") {
    RandomStream rng(161);
    const DensityMatrix rough = random_density(2, rng);
    Eigen::SelfAdjointEigenSolver<Mat> es(rough.matrix());
    std::vector<double> spec = {es.eigenvalues()(1), es.eigenvalues()(0)};
    Mat basis(2, 2);
    basis.col(0) = es.eigenvectors().col(1);
    basis.col(1) = es.eigenvectors().col(0);
    const SplitSignature sig = choose_b(spec);
    const int k = sig.k();
    ClassicalShadow shadow{rough, basis, sig, {Mat::Zero(k, k), Mat::Zero(k, k)}};
    const double purity = rough.matrix().squaredNorm();
    REQUIRE(query_shadow(shadow, rough.matrix()) == Catch::Approx(purity).margin(1e-12));
}

TEST_CASE("build_shadow rejects an impossible budget") {
    RandomStream rng(67);
    ShadowBuildConfig cfg;
    cfg.delta = 0.1;
    cfg.total_copies = 100;
    REQUIRE_THROWS_AS(build_shadow(DensityMatrix::maximally_mixed(2), cfg, rng), ValidationError);
}

TEST_CASE("per-repetition shadow estimates are linear in the observable") {
    // The median itself is not linear across repetitions; linearity holds for
    // each tau_i.
    RandomStream rng(68);
    ShadowBuildConfig cfg;
    cfg.total_copies = 20000;
    cfg.delta = 0.3;
    const ShadowBuildResult res = build_shadow(random_density(2, rng), cfg, rng);
    const Mat a = random_hermitian(2, rng), b = random_hermitian(2, rng);
    const auto mix = query_shadow_components(res.shadow, 0.7 * a - 1.3 * b);
    const auto ta = query_shadow_components(res.shadow, a);
    const auto tb = query_shadow_components(res.shadow, b);
    for (std::size_t i = 0; i < mix.size(); ++i)
        REQUIRE(mix[i] == Catch::Approx(0.7 * ta[i] - 1.3 * tb[i]).margin(1e-10));

    // With a single repetition the median is the single linear estimate.
    cfg.delta = 0.905; // ceil(10 ln(1/0.905)) = 1
    const ShadowBuildResult one = build_shadow(random_density(2, rng), cfg, rng);
    REQUIRE(one.shadow.c() == 1);
    const double lhs = query_shadow(one.shadow, 0.7 * a - 1.3 * b);
    const double rhs = 0.7 * query_shadow(one.shadow, a) - 1.3 * query_shadow(one.shadow, b);
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-10));
}

TEST_CASE("shadow serialization round-trips byte-exactly") {
    RandomStream rng(69);
    ShadowBuildConfig cfg;
    cfg.total_copies = 20000;
    cfg.delta = 0.3;
    const ShadowBuildResult res = build_shadow(random_density(2, rng), cfg, rng);
    const std::string bytes = shadow_to_json(res.shadow);
    const ClassicalShadow back = shadow_from_json(bytes);
    REQUIRE(shadow_to_json(back) == bytes);
    REQUIRE(back.d() == res.shadow.d());
    REQUIRE(back.k() == res.shadow.k());
    REQUIRE(back.c() == res.shadow.c());
    const Mat o = random_hermitian(2, rng);
    REQUIRE(query_shadow(back, o) == Catch::Approx(query_shadow(res.shadow, o)).margin(0.0));
}

TEST_CASE("matrix file parsing validates input") {
    REQUIRE_THROWS_AS(matrix_from_json("not json"), ValidationError);
    REQUIRE_THROWS_AS(matrix_from_json("{\"d\":2}"), ValidationError);
    // Non-Hermitian entries.
    REQUIRE_THROWS_AS(
        matrix_from_json(
            "{\"d\":2,\"hermitian\":true,\"entries\":[[1,0],[1,0],[0,0],[1,0]]}"),
        ValidationError);
    const Mat m = matrix_from_json(matrix_to_json(Mat::Identity(2, 2)));
    REQUIRE((m - Mat::Identity(2, 2)).norm() == 0.0);
}
