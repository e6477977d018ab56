/*
   Copyright 2026 The hdflow Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// hdflow command-line front end. Exit codes: 0 all pass, 2 any FAIL, 3 any FINDING, 1 usage or internal error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "hdflow/report.hpp"

namespace {

using namespace hdflow;

constexpr std::uint32_t kMaxCliPrime = 1u << 20;

struct Globals {
    std::string out = "out";
    std::uint64_t seed = 1;
    std::uint64_t max_degree = kDefaultDegreeCap;
    unsigned jobs = 1;
    bool timing = false;

    RunOptions options() const { return {seed, max_degree, jobs, timing}; }
};

void check_prime(std::uint32_t p) {
    if (p > kMaxCliPrime) throw CLI::ValidationError("--p", "prime must be at most 2^20");
    if (p == 2 || !hdflow::detail::is_prime(p)) throw CLI::ValidationError("--p", std::to_string(p) + " is not an odd prime");
}

std::vector<std::uint64_t> lambdas(std::uint32_t p, const std::vector<std::uint64_t>& given, bool all) {
    if (all == !given.empty()) throw CLI::ValidationError("--lambda", "give either --lambda or --all-lambda");
    if (!all) return given;
    std::vector<std::uint64_t> v;
    for (std::uint64_t l = 2; l < p; ++l) v.push_back(l);
    return v;
}

MapSide side_from(const std::string& s) { return s == "lattes" ? MapSide::Lattes : MapSide::Flow; }

int emit(const Globals& g, const std::vector<Certificate>& certs) {
    write_outputs(g.out, certs);
    for (const auto& c : certs) {
        std::cout << to_string(c.status) << "  " << c.name;
        if (!c.reason.empty()) std::cout << "  (" << c.reason << ")";
        std::cout << "\n";
    }
    std::cout << "wrote " << certs.size() << " certificate(s) to " << g.out << "\n";
    return exit_code(certs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks of the Higgs–de Rham flow on the four-punctured projective line"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--max-degree", g.max_degree, "cap on iterate degrees")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--jobs", g.jobs, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
    app.add_flag("--timing", g.timing, "record wall-clock timings in certificates");

    std::uint32_t p = 0;
    unsigned f = 1, degree = 1, steps = 5;
    std::vector<std::uint64_t> lambda;
    bool all_lambda = false;
    std::string side = "flow", b_mode = "traced", deformation_at = "frobenius-image", config, path;
    std::uint64_t a = 1;

    auto* verify = app.add_subcommand("verify-conjecture", "compare the flow map with x∘[p]");
    verify->add_option("--p", p, "odd prime")->required();
    verify->add_option("--lambda", lambda, "λ as an integer in [2, p)");
    verify->add_flag("--all-lambda", all_lambda, "every λ in F_p \\ {0, 1}");

    auto add_census_options = [&](CLI::App* sub) {
        sub->add_option("--p", p, "odd prime")->required();
        sub->add_option("--f", f, "period")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--lambda", lambda, "λ as an integer in [2, p)");
        sub->add_flag("--all-lambda", all_lambda, "every λ in F_p \\ {0, 1}");
        sub->add_option("--side", side, "which map to iterate")->capture_default_str()->check(CLI::IsMember({"flow", "lattes"}));
        sub->add_option("--deformation-at", deformation_at, "evaluate ψ′ at the point or at its Frobenius image")
            ->capture_default_str()
            ->check(CLI::IsMember({"frobenius-image", "point"}));
    };
    auto* count = app.add_subcommand("count-periodic", "census of periodic points");
    add_census_options(count);
    auto* torsion = app.add_subcommand("torsion-check", "periodic points against torsion of order dividing p^f ± 1");
    add_census_options(torsion);

    auto* scan = app.add_subcommand("supersingular-scan", "Deuring polynomial, trace and ψ′ ≡ 0 over F_{p^d}");
    scan->add_option("--p", p, "odd prime")->required();
    scan->add_option("--degree", degree, "extension degree d")->capture_default_str()->check(CLI::Range(1u, 4u));

    auto* lift = app.add_subcommand("lift-sim", "trajectory of a z^p - z + b = 0 up the tower");
    lift->add_option("--p", p, "odd prime")->required();
    lift->add_option("--f", f, "base field degree")->capture_default_str()->check(CLI::PositiveNumber);
    lift->add_option("--a", a, "packed value of a")->capture_default_str();
    lift->add_option("--b-mode", b_mode, "how b is chosen at each step")
        ->capture_default_str()
        ->check(CLI::IsMember({"zero", "random", "traced"}));
    lift->add_option("--steps", steps, "tower steps")->capture_default_str()->check(CLI::Range(1u, 64u));

    auto* sweep = app.add_subcommand("sweep", "run a JSON sweep configuration");
    sweep->add_option("config", config, "configuration file")->required()->check(CLI::ExistingFile);

    auto* reval = app.add_subcommand("revalidate", "re-check certificates from their serialized data only");
    reval->add_option("path", path, "output directory or certificate file")->required()->check(CLI::ExistingPath);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        RunOptions o = g.options();
        o.deformation_at = evaluation_point_from_string(deformation_at);
        std::vector<Certificate> certs;
        if (*verify) {
            check_prime(p);
            for (auto l : lambdas(p, lambda, all_lambda)) certs.push_back(conjecture_certificate(p, l, o));
        } else if (*count || *torsion) {
            check_prime(p);
            for (auto l : lambdas(p, lambda, all_lambda))
                certs.push_back(*count ? census_certificate(p, f, l, side_from(side), o)
                                       : torsion_certificate(p, f, l, side_from(side), o));
        } else if (*scan) {
            check_prime(p);
            certs.push_back(supersingular_certificate(p, degree, o));
        } else if (*lift) {
            check_prime(p);
            certs.push_back(lift_sim_certificate(p, f, a, bmode_from_string(b_mode), steps, o));
        } else if (*sweep) {
            std::ifstream is(config);
            SweepConfig cfg = sweep_config_from_json(json::parse(is));
            Globals sg = g;
            if (app.get_option("--out")->count() == 0) sg.out = cfg.out;
            if (app.get_option("--seed")->count()) cfg.seed = g.seed;
            if (app.get_option("--max-degree")->count()) cfg.max_degree = g.max_degree;
            return emit(sg, run_sweep(cfg, o, g.jobs));
        } else if (*reval) {
            bool ok = true;
            for (const auto& r : revalidate_path(path)) {
                std::cout << (r.ok ? "OK    " : "BAD   ") << r.name;
                if (!r.ok) std::cout << "  (" << r.message << ")";
                std::cout << "\n";
                ok = ok && r.ok;
            }
            return ok ? 0 : 2;
        }
        return emit(g, certs);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const hdflow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
