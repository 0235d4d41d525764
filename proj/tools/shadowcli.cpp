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

// Command-line front end: build shadows, answer observable queries, run the
// claim-verification suite, and run parameter sweeps. Every command honors
// --seed for bit-reproducible output. Exit codes: 0 success, 1 claim or
// guarantee failure, 2 usage/parse error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "keylshadow/claims.hpp"
#include "keylshadow/gauss_projection.hpp"
#include "keylshadow/parallel.hpp"
#include "keylshadow/serialize.hpp"
#include "keylshadow/splitting.hpp"

using namespace keylshadow;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v) {
    if (v == 0.0)
        v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const std::size_t idx = static_cast<std::size_t>(q * (values.size() - 1));
    return values[idx];
}

struct VerifyOptions {
    std::uint64_t seed = 0;
    double samples_scale = 1.0;
    int workers = default_workers();
    std::string only;
    std::string out;
    std::string format = "json";
};

int run_verify(const VerifyOptions &opt) {
    std::vector<std::string> filters;
    if (!opt.only.empty()) {
        std::string token;
        std::istringstream ss(opt.only);
        const auto known = claim_group_names();
        while (std::getline(ss, token, ',')) {
            if (std::find(known.begin(), known.end(), token) == known.end()) {
                std::cerr << "unknown claim id: " << token << "\nknown ids:";
                for (const auto &k : known)
                    std::cerr << ' ' << k;
                std::cerr << "\n";
                return kExitUsage;
            }
            filters.push_back(token);
        }
    }
    ClaimConfig cfg;
    cfg.seed = opt.seed;
    cfg.sample_scale = opt.samples_scale;
    cfg.workers = opt.workers;
    const auto reports = run_all(cfg, filters);
    std::cout << reports_to_table(reports);
    if (!opt.out.empty()) {
        if (opt.format == "json") {
            write_file(opt.out, reports_to_json(reports));
        } else {
            std::string csv = "claim_id,verdict,margin,standard_error\n";
            for (const auto &r : reports)
                csv += r.claim_id + "," + r.verdict + "," + fmt(r.margin) + "," +
                       fmt(r.standard_error) + "\n";
            write_file(opt.out, csv);
        }
    }
    int fails = 0, inconclusive = 0;
    for (const auto &r : reports) {
        if (r.verdict == "fail")
            ++fails;
        if (r.verdict == "inconclusive")
            ++inconclusive;
    }
    std::cout << reports.size() << " reports, " << fails << " failed, " << inconclusive
              << " inconclusive\n";
    return fails == 0 ? kExitSuccess : kExitFailure;
}

struct BuildOptions {
    int d = 2;
    std::string state = "maximally-mixed";
    double epsilon = 0.1;
    double delta = 0.1;
    int t = 3;
    long long m = 0; // batches per repetition; 0 = derive from copies
    long long copies = 1000000;
    double budget_ratio = 0.5;
    std::uint64_t seed = 0;
    int workers = default_workers();
    std::string out = "shadow.json";
};

DensityMatrix resolve_state(const std::string &spec, int d, RandomStream &rng) {
    if (spec == "maximally-mixed")
        return DensityMatrix::maximally_mixed(d);
    if (spec.rfind("random-rank-", 0) == 0) {
        const int rank = std::stoi(spec.substr(std::string("random-rank-").size()));
        return random_density(d, rng, rank);
    }
    // Otherwise: an explicit matrix file holding a density matrix.
    const Mat m = matrix_from_json(read_file(spec));
    return DensityMatrix(m);
}

int run_build(const BuildOptions &opt) {
    RandomStream rng(opt.seed);
    RandomStream state_rng = rng.substream(777);
    const DensityMatrix rho = resolve_state(opt.state, opt.d, state_rng);

    ShadowBuildConfig cfg;
    cfg.epsilon = opt.epsilon;
    cfg.delta = opt.delta;
    cfg.t = opt.t;
    cfg.budget_ratio = opt.budget_ratio;
    cfg.workers = opt.workers;
    if (opt.m > 0) {
        const int c = static_cast<int>(std::ceil(10.0 * std::log(1.0 / opt.delta)));
        const long long balanced = static_cast<long long>(c) * opt.m * opt.t;
        cfg.total_copies = static_cast<long long>(
            std::llround(balanced / (1.0 - opt.budget_ratio)));
    } else {
        cfg.total_copies = opt.copies;
    }

    const ShadowBuildResult res = build_shadow(rho, cfg, rng);
    write_file(opt.out, shadow_to_json(res.shadow));
    std::cout << "shadow written to " << opt.out << "\n"
              << "d=" << res.shadow.d() << " k=" << res.shadow.k() << " c=" << res.shadow.c()
              << " batches_per_repetition=" << res.batches_per_repetition << "\n"
              << "copies: rough=" << res.rough_copies << " balanced=" << res.balanced_copies
              << " total=" << res.rough_copies + res.balanced_copies << "\n"
              << "rough_error_estimate=" << fmt(res.rough_error_estimate)
              << " achieved_epsilon=" << fmt(res.achieved_epsilon)
              << " bias_bound_term=" << fmt(res.bias_bound_term) << "\n";
    return kExitSuccess;
}

struct QueryOptions {
    std::string shadow_file;
    std::vector<std::string> observables;
};

int run_query(const QueryOptions &opt) {
    const ClassicalShadow shadow = shadow_from_json(read_file(opt.shadow_file));
    for (const std::string &path : opt.observables) {
        const Mat o = matrix_from_json(read_file(path));
        std::cout << fmt(query_shadow(shadow, o)) << "\n";
    }
    return kExitSuccess;
}

struct BenchOptions {
    std::vector<int> d = {2};
    std::vector<int> t = {3};
    std::vector<long long> m = {100};
    int k = 0; // when set, adds dimension-reduction rows
    double epsilon = 0.1;
    int trials = 50;
    std::uint64_t seed = 0;
    int workers = default_workers();
    std::string out;
};

int run_bench(const BenchOptions &opt) {
    std::string csv =
        "mode,d,t,m,k,epsilon_target,q50_query_error,q90_query_error,q50_frobenius_error,"
        "q90_frobenius_error,copies_used,wall_time_s,status\n";
    RandomStream root(opt.seed);

    for (int d : opt.d) {
        for (int t : opt.t) {
            for (long long m : opt.m) {
                const auto start = std::chrono::steady_clock::now();
                std::int64_t dim = 1;
                bool capped = false;
                for (int i = 0; i < t; ++i) {
                    dim *= d;
                    if (dim > kDefaultDimCap) {
                        capped = true;
                        break;
                    }
                }
                std::ostringstream row;
                row << "balanced," << d << "," << t << "," << m << ",,"
                    << fmt(opt.epsilon) << ",";
                if (capped || t > 6) {
                    row << ",,,,,," << "skipped\n";
                    csv += row.str();
                    continue;
                }
                // Fixed small perturbation and observable, from the seed.
                RandomStream setup = root.substream(static_cast<std::uint64_t>(d * 100 + t));
                Mat e = random_hermitian(d, setup);
                e -= e.trace() / static_cast<double>(d) * Mat::Identity(d, d);
                e *= 0.01 / e.norm();
                Mat o = random_hermitian(d, setup);
                o -= o.trace() / static_cast<double>(d) * Mat::Identity(d, d);
                o /= o.norm();
                const DensityMatrix rho(
                    hermitian_part(Mat::Identity(d, d) / static_cast<double>(d) + e));
                StateKeylOracle oracle(rho, t);

                std::vector<double> query_err(static_cast<std::size_t>(opt.trials));
                std::vector<double> frob_err(static_cast<std::size_t>(opt.trials));
                parallel_for(static_cast<std::size_t>(opt.trials), opt.workers,
                             [&](std::size_t i) {
                                 RandomStream r = root.substream(1000000 + i * 7919 +
                                                                 static_cast<std::uint64_t>(
                                                                     d * 100 + t) *
                                                                     31);
                                 const BalancedEstimate est = estimate_balanced(oracle, m, r);
                                 query_err[i] = std::abs(inner_re(o, est.e_hat - e));
                                 frob_err[i] = (est.e_hat - e).norm();
                             });
                const double wall =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                row << fmt(quantile(query_err, 0.5)) << "," << fmt(quantile(query_err, 0.9))
                    << "," << fmt(quantile(frob_err, 0.5)) << "," << fmt(quantile(frob_err, 0.9))
                    << "," << oracle.copies_used() << "," << fmt(wall) << ",ok\n";
                csv += row.str();
            }
        }
    }

    if (opt.k > 0) {
        for (int d : opt.d) {
            if (opt.k > d)
                continue;
            const auto start = std::chrono::steady_clock::now();
            RandomStream setup = root.substream(static_cast<std::uint64_t>(d) * 7 + 3);
            const DensityMatrix rho = random_density(d, setup);
            Mat o = random_hermitian(d, setup);
            o /= operator_norm(o);
            const double truth = inner_re(o, rho.matrix());
            std::vector<double> err(static_cast<std::size_t>(opt.trials));
            parallel_for(static_cast<std::size_t>(opt.trials), opt.workers, [&](std::size_t i) {
                RandomStream r = root.substream(2000000 + i);
                ReduceDimensionConfig cfg;
                cfg.epsilon = opt.epsilon;
                err[i] = std::abs(
                    reduce_dimension_estimate(exact_inner_solver(), rho, o, opt.k, cfg, r).tau -
                    truth);
            });
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::ostringstream row;
            row << "reduce-dimension," << d << ",,," << opt.k << "," << fmt(opt.epsilon) << ","
                << fmt(quantile(err, 0.5)) << "," << fmt(quantile(err, 0.9)) << ",,,"
                << opt.trials << "," << fmt(wall) << ",ok\n";
            csv += row.str();
        }
    }

    if (opt.out.empty())
        std::cout << csv;
    else
        write_file(opt.out, csv);
    return kExitSuccess;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"keylshadow: classical-shadow estimation simulator and verification harness"};
    app.require_subcommand(1);

    VerifyOptions vopt;
    CLI::App *verify = app.add_subcommand("verify", "run the claim-verification suite");
    verify->add_option("--seed", vopt.seed, "random seed");
    verify->add_option("--samples-scale", vopt.samples_scale,
                       "multiplier on default per-claim sample sizes");
    verify->add_option("--workers", vopt.workers, "worker threads");
    verify->add_option("--only", vopt.only, "comma-separated claim ids to run");
    verify->add_option("--out", vopt.out, "report file");
    verify->add_option("--format", vopt.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    BuildOptions bopt;
    QueryOptions qopt;
    CLI::App *shadow = app.add_subcommand("shadow", "build or query classical shadows");
    shadow->require_subcommand(1);
    CLI::App *build = shadow->add_subcommand("build", "measure a state and store its shadow");
    build->add_option("--d", bopt.d, "state dimension");
    build->add_option("--state", bopt.state,
                      "maximally-mixed | random-rank-<r> | matrix file path");
    build->add_option("--epsilon", bopt.epsilon, "target accuracy (reporting)");
    build->add_option("--delta", bopt.delta, "failure probability");
    build->add_option("--t", bopt.t, "batch size for the balanced stage");
    build->add_option("--m", bopt.m, "batches per repetition (overrides --copies)");
    build->add_option("--copies", bopt.copies, "total copy budget");
    build->add_option("--budget-ratio", bopt.budget_ratio,
                      "fraction of copies for rough tomography");
    build->add_option("--seed", bopt.seed, "random seed");
    build->add_option("--workers", bopt.workers, "worker threads");
    build->add_option("--out", bopt.out, "output shadow file");

    CLI::App *query = shadow->add_subcommand("query", "evaluate observables against a shadow");
    query->add_option("--shadow", qopt.shadow_file, "shadow file")->required();
    query->add_option("--obs", qopt.observables, "observable matrix files (order preserved)")
        ->required();

    BenchOptions nopt;
    CLI::App *bench = app.add_subcommand("bench", "error-vs-copies sweeps, CSV output");
    bench->add_option("--d", nopt.d, "dimensions")->delimiter(',');
    bench->add_option("--t", nopt.t, "batch sizes")->delimiter(',');
    bench->add_option("--m", nopt.m, "batch counts")->delimiter(',');
    bench->add_option("--k", nopt.k, "sketch dimension (adds reduce-dimension rows)");
    bench->add_option("--epsilon", nopt.epsilon, "target accuracy column");
    bench->add_option("--trials", nopt.trials, "trials per grid point");
    bench->add_option("--seed", nopt.seed, "random seed");
    bench->add_option("--workers", nopt.workers, "worker threads");
    bench->add_option("--out", nopt.out, "CSV file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (verify->parsed())
            return run_verify(vopt);
        if (shadow->parsed())
            return build->parsed() ? run_build(bopt) : run_query(qopt);
        if (bench->parsed())
            return run_bench(nopt);
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
