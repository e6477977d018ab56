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

/**
 * @file report.hpp
 * @brief Certificates, CSV tables, sweeps and offline revalidation.
 *
 * Every check produces one Certificate. Output is deterministic for a fixed configuration:
 * file names derive from the inputs, JSON keys are sorted, and wall-clock timings are only
 * written on request.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hdflow/dynamics.hpp"
#include "hdflow/elliptic.hpp"
#include "hdflow/flow.hpp"
#include "hdflow/serialize.hpp"

namespace hdflow {

inline constexpr const char* kVersion = "1.0.0";
/// The flow map is known to agree with the Lattès map up to this prime; beyond it a mismatch is a finding.
inline constexpr unsigned kVerifiedPrimeBound = 50;

enum class Status { Pass, Fail, Finding, Skipped };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::Finding: return "FINDING";
        case Status::Skipped: return "SKIPPED";
    }
    return "?";
}

inline Status status_from_string(const std::string& s) {
    if (s == "PASS") return Status::Pass;
    if (s == "FAIL") return Status::Fail;
    if (s == "FINDING") return Status::Finding;
    if (s == "SKIPPED") return Status::Skipped;
    throw Error(Errc::ParseError, "unknown status " + s);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const {
        auto cell = [](const std::string& s) {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
            return q + "\"";
        };
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << cell(header[i]);
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
            os << "\n";
        }
        return os.str();
    }
};

struct Certificate {
    std::string check;  // conjecture, census, torsion, supersingular, lift-sim, descent
    std::string name;   // output file stem
    json inputs = json::object();
    Status status = Status::Pass;
    json payload = json::object();
    std::string reason;
    std::optional<double> timing_ms;
    std::optional<Table> table;
    std::string conjecture;  // set for findings

    Certificate() = default;
    Certificate(std::string check_, std::string name_) : check(std::move(check_)), name(std::move(name_)) {}

    json to_json() const {
        json j = inputs;
        for (auto it = payload.begin(); it != payload.end(); ++it) j[it.key()] = it.value();
        j["check"] = check;
        j["kind"] = status == Status::Finding ? std::string("conjecture-violation") : check;
        if (status == Status::Finding) j["conjecture"] = conjecture;
        j["status"] = to_string(status);
        j["version"] = kVersion;
        j["inputs"] = inputs;
        if (!reason.empty()) j["reason"] = reason;
        if (timing_ms) j["timing_ms"] = *timing_ms;
        return j;
    }
};

struct RunOptions {
    std::uint64_t seed = 1;
    std::uint64_t max_degree = kDefaultDegreeCap;
    unsigned jobs = 1;
    bool timing = false;
    EvaluationPoint deformation_at = EvaluationPoint::FrobeniusImage;
};

inline std::string to_string(EvaluationPoint w) { return w == EvaluationPoint::Point ? "point" : "frobenius-image"; }

inline EvaluationPoint evaluation_point_from_string(const std::string& s) {
    if (s == "point") return EvaluationPoint::Point;
    if (s == "frobenius-image") return EvaluationPoint::FrobeniusImage;
    throw Error(Errc::ParseError, "deformation point must be frobenius-image or point, not " + s);
}

namespace detail {

class Stopwatch {
   public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void finish(Certificate& c, const Stopwatch& w, const RunOptions& o) {
    if (o.timing) c.timing_ms = w.ms();
}

inline const Field& prime_field_checked(std::uint32_t p) {
    if (!detail::is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    return Field::get(p, 1);
}

inline Element lambda_checked(std::uint32_t p, std::uint64_t lambda) {
    const Field& F = prime_field_checked(p);
    if (lambda >= p) throw Error(Errc::InvalidArgument, "lambda must be given as an integer in [0, p)");
    const Element l = F.element(lambda);
    if (l.is_zero() || l.is_one()) throw Error(Errc::SingularCurve, "lambda must differ from 0 and 1");
    return l;
}

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// individual checks

inline Certificate descent_certificate(std::uint32_t p, std::uint64_t lambda, const RunOptions& o = {}) {
    detail::Stopwatch w;
    const Element lam = detail::lambda_checked(p, lambda);
    Certificate c{"descent", "descent_p" + std::to_string(p) + "_l" + std::to_string(lambda)};
    c.inputs = {{"p", p}, {"lambda", to_json(lam)}};
    const LattesDescent L = lattes_p(LegendreCurve(lam));
    const bool ok = precompose_frobenius(L.verschiebung) == L.map && L.map.degree() == static_cast<int>(p * p) &&
                    L.verschiebung.degree() == static_cast<int>(p);
    c.status = ok ? Status::Pass : Status::Fail;
    c.payload = {{"lattes", to_json(L.map)}, {"verschiebung", to_json(L.verschiebung)}};
    if (!ok) c.reason = "x∘[p] does not factor as the Verschiebung part after z^p";
    detail::finish(c, w, o);
    return c;
}

inline Certificate conjecture_certificate_from(const ConjectureResult& r, const RunOptions& o, double elapsed) {
    Certificate c{"conjecture", "conjecture_p" + std::to_string(r.p) + "_l" + std::to_string(r.lambda.value())};
    c.inputs = {{"p", r.p}, {"lambda", to_json(r.lambda)}};
    json cusps = json::array();
    for (const auto& cv : r.flow.cusps) {
        json e = {{"point", to_json(cv.point)}, {"from_map", to_json(cv.from_map)}};
        e["direct"] = cv.direct ? to_json(*cv.direct) : json(nullptr);
        if (!cv.note.empty()) e["note"] = cv.note;
        cusps.push_back(e);
    }
    c.payload = {{"phi", to_json(r.flow.phi)},
                 {"psi", to_json(r.flow.psi)},
                 {"lattes", to_json(r.lattes.map)},
                 {"sample_field_degree", r.flow.sample_field_degree},
                 {"samples", r.flow.samples},
                 {"fresh_points_verified", r.flow.verified_fresh},
                 {"cusps", cusps}};
    if (r.pass) {
        c.status = Status::Pass;
    } else {
        c.status = r.p <= kVerifiedPrimeBound ? Status::Fail : Status::Finding;
        c.conjecture = "flow-equals-lattes";
        c.payload["witness"] = {{"part", r.witness->part},
                                {"index", r.witness->index},
                                {"flow", to_json(r.witness->flow_value)},
                                {"lattes", to_json(r.witness->oracle_value)}};
        c.reason = "flow map and x∘[p] differ";
    }
    if (o.timing) c.timing_ms = elapsed;
    return c;
}

inline Certificate conjecture_certificate(std::uint32_t p, std::uint64_t lambda, const RunOptions& o = {}) {
    detail::Stopwatch w;
    const Element lam = detail::lambda_checked(p, lambda);
    return conjecture_certificate_from(conjecture_check(lam, o.jobs), o, w.ms());
}

enum class MapSide { Flow, Lattes };

inline std::string to_string(MapSide s) { return s == MapSide::Flow ? "flow" : "lattes"; }

struct SideMaps {
    RationalMap map;
    RationalMap psi;
};

inline SideMaps side_maps(const Element& lam, MapSide side, unsigned jobs) {
    if (side == MapSide::Lattes) {
        LattesDescent L = lattes_p(LegendreCurve(lam));
        return {std::move(L.map), std::move(L.verschiebung)};
    }
    FlowMaps F = phi_map(lam, jobs);
    return {std::move(F.phi), std::move(F.psi)};
}

namespace detail {

inline bool degree_within(std::uint64_t base_degree, unsigned f, std::uint64_t cap) {
    unsigned __int128 d = 1;
    for (unsigned i = 0; i < f; ++i) {
        d *= base_degree;
        if (d > cap) return false;
    }
    return true;
}

inline Certificate skipped(Certificate c, const std::string& why) {
    c.status = Status::Skipped;
    c.reason = why;
    return c;
}

}  // namespace detail

inline Certificate census_certificate_from(const PeriodicCensus& census, const RationalMap* psi, Certificate c,
                                           EvaluationPoint where = EvaluationPoint::FrobeniusImage) {
    const SeparabilityReport sep = [&] {
        SeparabilityReport s{census.distinct, census.total_with_multiplicity, {}};
        for (const auto& pt : census.points) s.multiplicity_profile[pt.multiplicity] += 1;
        for (const auto& g : census.unresolved) s.multiplicity_profile[g.multiplicity] += g.point_count;
        return s;
    }();
    json points = json::array();
    Table t{{"point", "field_degree", "multiplicity", "exact_period", "deformation_a"}, {}};
    for (const auto& pt : census.points) {
        json e = {{"point", to_json(pt.point)},
                  {"field_degree", pt.field_degree},
                  {"multiplicity", pt.multiplicity},
                  {"exact_period", pt.exact_period}};
        std::string a_text;
        if (psi && census.period == 1) {
            const Element a = deformation_coefficient(*psi, pt.point, where);
            e["deformation_a"] = to_json(a);
            a_text = point_text(ProjPoint(a));
        }
        points.push_back(e);
        t.rows.push_back({point_text(pt.point), std::to_string(pt.field_degree), std::to_string(pt.multiplicity),
                          std::to_string(pt.exact_period), a_text});
    }
    json unresolved = json::array();
    for (const auto& g : census.unresolved)
        unresolved.push_back({{"field_degree", g.field_degree}, {"multiplicity", g.multiplicity}, {"points", g.point_count}});
    json profile = json::object();
    for (const auto& [m, n] : sep.multiplicity_profile) profile[std::to_string(m)] = n;
    c.payload = {{"map", to_json(census.map)},
                 {"total_with_multiplicity", census.total_with_multiplicity},
                 {"expected", census.expected},
                 {"distinct", census.distinct},
                 {"all_simple", sep.all_simple()},
                 {"multiplicity_profile", profile},
                 {"points", points},
                 {"unresolved", unresolved}};
    if (psi) {
        c.payload["psi"] = to_json(*psi);
        c.payload["deformation_at"] = to_string(where);
    }
    c.status = census.pass() ? Status::Pass : Status::Fail;
    if (!census.pass()) c.reason = "fixed-point total differs from deg^f + 1";
    c.table = std::move(t);
    return c;
}

inline Certificate census_certificate(std::uint32_t p, unsigned f, std::uint64_t lambda, MapSide side,
                                      const RunOptions& o = {}) {
    detail::Stopwatch w;
    const Element lam = detail::lambda_checked(p, lambda);
    Certificate c{"census", "census_" + to_string(side) + "_p" + std::to_string(p) + "_f" + std::to_string(f) + "_l" +
                                std::to_string(lambda)};
    c.inputs = {{"p", p}, {"f", f}, {"lambda", to_json(lam)}, {"side", to_string(side)}};
    if (f == 0) throw Error(Errc::InvalidArgument, "period must be positive");
    if (!detail::degree_within(static_cast<std::uint64_t>(p) * p, f, o.max_degree))
        return detail::skipped(c, "iterate degree (p^2)^f exceeds the cap " + std::to_string(o.max_degree));
    const SideMaps m = side_maps(lam, side, o.jobs);
    try {
        const PeriodicCensus census = periodic_census(m.map, f, o.max_degree);
        c = census_certificate_from(census, &m.psi, std::move(c), o.deformation_at);
    } catch (const Error& e) {
        if (e.code() != Errc::DegreeOverflow) throw;
        return detail::skipped(c, e.what());
    }
    detail::finish(c, w, o);
    return c;
}

/// Orders of torsion points the correspondence is known to hold for.
inline const std::set<std::uint64_t>& checked_torsion_orders() {
    static const std::set<std::uint64_t> s{1, 2, 3, 4, 6};
    return s;
}

inline Certificate torsion_certificate_from(const Element& lam, const PeriodicCensus& census, Certificate c) {
    const TorsionCorrespondence tc = torsion_correspondence(lam, census);
    json reports = json::array();
    Table t{{"point", "x", "y", "lift_degree", "order", "divides_p^f-1", "divides_p^f+1"}, {}};
    bool checked_case_violation = false;
    for (const auto& r : tc.forward) {
        json e = {{"point", to_json(r.z)}, {"lift_degree", r.lift_field_degree}};
        e["lift"] = r.lift ? to_json(*r.lift) : json(nullptr);
        e["order"] = r.order ? json(*r.order) : json(nullptr);
        e["divides_minus"] = r.divides_minus;
        e["divides_plus"] = r.divides_plus;
        reports.push_back(e);
        std::string xs = "O", ys = "O";
        if (r.lift && !r.lift->is_identity()) {
            xs = point_text(ProjPoint(r.lift->x()));
            ys = point_text(ProjPoint(r.lift->y()));
        }
        t.rows.push_back({point_text(r.z), xs, ys, std::to_string(r.lift_field_degree),
                          r.order ? std::to_string(*r.order) : std::string("none"), detail::yes_no(r.divides_minus),
                          detail::yes_no(r.divides_plus)});
        if (!r.consistent() && r.order && checked_torsion_orders().count(*r.order)) checked_case_violation = true;
    }
    c.payload = {{"census_map", to_json(census.map)},
                 {"reports", reports},
                 {"orders", std::vector<std::uint64_t>(tc.orders.begin(), tc.orders.end())},
                 {"forward_ok", tc.forward_ok()},
                 {"converse_ok", tc.converse_ok()},
                 {"torsion_x_count", tc.torsion_x_count},
                 {"torsion_x_periodic", tc.torsion_x_periodic},
                 {"violations", tc.violations}};
    if (tc.pass()) {
        c.status = Status::Pass;
    } else if (checked_case_violation) {
        c.status = Status::Fail;
        c.reason = "violation at a torsion order the correspondence is known for";
    } else {
        c.status = Status::Finding;
        c.conjecture = "periodic-iff-torsion";
        c.reason = tc.violations.front();
    }
    c.table = std::move(t);
    return c;
}

inline Certificate torsion_certificate(std::uint32_t p, unsigned f, std::uint64_t lambda, MapSide side,
                                       const RunOptions& o = {}) {
    detail::Stopwatch w;
    const Element lam = detail::lambda_checked(p, lambda);
    Certificate c{"torsion", "torsion_" + to_string(side) + "_p" + std::to_string(p) + "_f" + std::to_string(f) + "_l" +
                                 std::to_string(lambda)};
    c.inputs = {{"p", p}, {"f", f}, {"lambda", to_json(lam)}, {"side", to_string(side)}};
    if (f == 0) throw Error(Errc::InvalidArgument, "period must be positive");
    if (!detail::degree_within(static_cast<std::uint64_t>(p) * p, f, o.max_degree))
        return detail::skipped(c, "iterate degree (p^2)^f exceeds the cap " + std::to_string(o.max_degree));
    const SideMaps m = side_maps(lam, side, o.jobs);
    try {
        c = torsion_certificate_from(lam, periodic_census(m.map, f, o.max_degree), std::move(c));
    } catch (const Error& e) {
        if (e.code() != Errc::DegreeOverflow) throw;
        return detail::skipped(c, e.what());
    }
    detail::finish(c, w, o);
    return c;
}

/// Deuring polynomial, point-count trace and ψ′ ≡ 0 must agree for every λ in F_{p^d} \ {0, 1}.
/// For d = 1 the flow-side Verschiebung part is checked as well.
inline Certificate supersingular_certificate(std::uint32_t p, unsigned d, const RunOptions& o = {}) {
    detail::Stopwatch w;
    detail::prime_field_checked(p);
    Certificate c{"supersingular", "supersingular_p" + std::to_string(p) + "_d" + std::to_string(d)};
    c.inputs = {{"p", p}, {"degree", d}};
    const Field& F = Field::get(p, d);
    Table t{{"lambda", "hasse", "trace_mod_p", "psi_derivative_zero", "flow_psi_derivative_zero", "verdict"}, {}};
    json rows = json::array();
    std::size_t disagreements = 0, supersingular = 0;
    for (const Element& lam : enumerate(F)) {
        if (lam.is_zero() || lam.is_one()) continue;
        const LegendreCurve C(lam);
        const Element H = hasse_invariant(lam);
        const std::uint64_t n = point_count(C, d);
        const std::uint64_t q = F.order();
        const std::uint64_t trace_mod_p = ((q + 1 + static_cast<std::uint64_t>(p) * (n / p + 1)) - n) % p;
        const bool psi_zero = lattes_p(C).verschiebung.derivative().is_identically_zero();
        std::optional<bool> flow_zero;
        if (d == 1) flow_zero = phi_map(lam, o.jobs).psi.derivative().is_identically_zero();
        const bool ss = H.is_zero();
        const bool agree = ss == (trace_mod_p == 0) && ss == psi_zero && (!flow_zero || *flow_zero == ss);
        if (!agree) ++disagreements;
        if (ss) ++supersingular;
        json r = {{"lambda", to_json(lam)}, {"hasse", to_json(H)}, {"trace_mod_p", trace_mod_p},
                  {"psi_derivative_zero", psi_zero}, {"supersingular", ss}, {"agree", agree}};
        r["flow_psi_derivative_zero"] = flow_zero ? json(*flow_zero) : json(nullptr);
        rows.push_back(r);
        t.rows.push_back({point_text(ProjPoint(lam)), point_text(ProjPoint(H)), std::to_string(trace_mod_p),
                          detail::yes_no(psi_zero), flow_zero ? detail::yes_no(*flow_zero) : std::string(""),
                          ss ? "supersingular" : "ordinary"});
    }
    c.payload = {{"rows", rows}, {"supersingular_count", supersingular}, {"disagreements", disagreements}};
    c.status = disagreements == 0 ? Status::Pass : Status::Fail;
    if (disagreements) c.reason = std::to_string(disagreements) + " values of lambda disagree";
    c.table = std::move(t);
    detail::finish(c, w, o);
    return c;
}

inline BMode bmode_from_string(const std::string& s) {
    if (s == "zero") return BMode::Zero;
    if (s == "random") return BMode::Random;
    if (s == "traced") return BMode::Traced;
    throw Error(Errc::InvalidArgument, "b-mode must be zero, random or traced");
}

inline std::string to_string(BMode m) {
    switch (m) {
        case BMode::Zero: return "zero";
        case BMode::Random: return "random";
        case BMode::Traced: return "traced";
    }
    return "?";
}

/// Lifting-tower trajectory over F_{p^f} starting from the element with packed value a.
inline Certificate lift_sim_certificate(std::uint32_t p, unsigned f, std::uint64_t a, BMode mode, unsigned steps,
                                        const RunOptions& o = {}) {
    detail::Stopwatch w;
    detail::prime_field_checked(p);
    const Field& K = Field::get(p, f);
    if (a == 0 || a >= K.order()) throw Error(Errc::InvalidArgument, "a must be a nonzero element of the field");
    const Element ae = K.element(a);
    Certificate c{"lift-sim", "liftsim_p" + std::to_string(p) + "_f" + std::to_string(f) + "_a" + std::to_string(a) + "_" +
                                  to_string(mode)};
    c.inputs = {{"p", p}, {"f", f}, {"a", to_json(ae)}, {"b_mode", to_string(mode)}, {"steps", steps}, {"seed", o.seed}};
    const TowerTrajectory tr = lifting_tower_sim(ae, make_b_source(mode, ae, o.seed), steps);
    json js = json::array();
    Table t{{"step", "degree", "b", "solutions_in_current", "next_degree", "splitting_degree", "grew_by_p"}, {}};
    for (const auto& s : tr.steps) {
        js.push_back({{"step", s.step},
                      {"degree", s.degree},
                      {"b", to_json(s.b)},
                      {"solutions_in_current", s.solutions_in_current},
                      {"next_degree", s.next_degree},
                      {"splitting_degree", s.splitting_degree},
                      {"grew_by_p", s.grew_by_p}});
        t.rows.push_back({std::to_string(s.step), std::to_string(s.degree), point_text(ProjPoint(s.b)),
                          std::to_string(s.solutions_in_current), std::to_string(s.next_degree),
                          std::to_string(s.splitting_degree), detail::yes_no(s.grew_by_p)});
    }
    c.payload = {{"trajectory", js}, {"truncated", tr.truncated}};
    if (tr.truncated) c.payload["truncation_reason"] = tr.reason;
    c.status = Status::Pass;
    c.table = std::move(t);
    detail::finish(c, w, o);
    return c;
}

// ---------------------------------------------------------------------------------------------
// sweeps

struct SweepConfig {
    std::vector<std::uint32_t> primes;
    std::vector<unsigned> periods{1};
    bool all_lambda = true;
    std::vector<std::uint64_t> lambdas;
    std::vector<std::string> checks;
    std::string out = "out";
    std::uint64_t seed = 1;
    std::uint64_t max_degree = kDefaultDegreeCap;
    MapSide side = MapSide::Flow;
    std::vector<std::uint64_t> lift_a{1};
    BMode b_mode = BMode::Traced;
    unsigned lift_steps = 5;
    unsigned supersingular_degree = 1;
    EvaluationPoint deformation_at = EvaluationPoint::FrobeniusImage;
};

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> k{"descent", "conjecture", "census", "torsion", "supersingular", "lift-sim"};
    return k;
}

inline SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig s;
    auto fail = [](const std::string& m) { throw Error(Errc::ParseError, "sweep config: " + m); };
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::set<std::string> keys{"p", "f", "lambda", "checks", "out", "seed", "max_degree", "side",
                                                 "lift", "supersingular_degree", "deformation_at"};
        if (!keys.count(it.key())) fail("unknown key '" + it.key() + "'");
    }
    if (!j.contains("p")) fail("missing 'p'");
    s.primes = j.at("p").get<std::vector<std::uint32_t>>();
    if (s.primes.empty()) fail("'p' is empty");
    for (auto p : s.primes)
        if (p == 2 || !detail::is_prime(p)) fail(std::to_string(p) + " is not an odd prime");
    if (j.contains("f")) s.periods = j.at("f").get<std::vector<unsigned>>();
    for (auto f : s.periods)
        if (f == 0) fail("periods must be positive");
    if (j.contains("lambda")) {
        const json& l = j.at("lambda");
        if (l.is_string()) {
            if (l.get<std::string>() != "all") fail("'lambda' must be \"all\" or a list");
        } else {
            s.all_lambda = false;
            s.lambdas = l.get<std::vector<std::uint64_t>>();
        }
    }
    s.checks = j.contains("checks") ? j.at("checks").get<std::vector<std::string>>() : known_checks();
    for (const auto& c : s.checks)
        if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end()) fail("unknown check '" + c + "'");
    if (j.contains("out")) s.out = j.at("out").get<std::string>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_degree")) s.max_degree = j.at("max_degree").get<std::uint64_t>();
    if (s.max_degree == 0) fail("max_degree must be positive");
    if (j.contains("side")) {
        const auto side = j.at("side").get<std::string>();
        if (side != "flow" && side != "lattes") fail("side must be flow or lattes");
        s.side = side == "flow" ? MapSide::Flow : MapSide::Lattes;
    }
    if (j.contains("lift")) {
        const json& l = j.at("lift");
        if (l.contains("a")) s.lift_a = l.at("a").get<std::vector<std::uint64_t>>();
        if (l.contains("b_mode")) s.b_mode = bmode_from_string(l.at("b_mode").get<std::string>());
        if (l.contains("steps")) s.lift_steps = l.at("steps").get<unsigned>();
    }
    if (j.contains("supersingular_degree")) s.supersingular_degree = j.at("supersingular_degree").get<unsigned>();
    if (j.contains("deformation_at")) s.deformation_at = evaluation_point_from_string(j.at("deformation_at").get<std::string>());
    return s;
}

/// Runs every (check, p, f, λ) cell on a bounded worker pool; results come back in cell order.
inline std::vector<Certificate> run_sweep(const SweepConfig& cfg, const RunOptions& base, unsigned jobs) {
    RunOptions o = base;
    o.seed = cfg.seed;
    o.max_degree = cfg.max_degree;
    o.deformation_at = cfg.deformation_at;
    o.jobs = 1;
    std::vector<std::function<Certificate()>> cells;
    for (const auto& check : cfg.checks) {
        for (auto p : cfg.primes) {
            std::vector<std::uint64_t> lams;
            if (cfg.all_lambda) {
                for (std::uint64_t l = 2; l < p; ++l) lams.push_back(l);
            } else {
                for (auto l : cfg.lambdas)
                    if (l < p) lams.push_back(l);
            }
            if (check == "supersingular") {
                cells.push_back([=] { return supersingular_certificate(p, cfg.supersingular_degree, o); });
            } else if (check == "lift-sim") {
                for (auto f : cfg.periods)
                    for (auto a : cfg.lift_a)
                        cells.push_back([=] { return lift_sim_certificate(p, f, a, cfg.b_mode, cfg.lift_steps, o); });
            } else if (check == "descent" || check == "conjecture") {
                for (auto l : lams)
                    cells.push_back([=] {
                        return check == "descent" ? descent_certificate(p, l, o) : conjecture_certificate(p, l, o);
                    });
            } else {
                for (auto f : cfg.periods)
                    for (auto l : lams)
                        cells.push_back([=] {
                            return check == "census" ? census_certificate(p, f, l, cfg.side, o)
                                                     : torsion_certificate(p, f, l, cfg.side, o);
                        });
            }
        }
    }
    std::vector<std::optional<Certificate>> results(cells.size());
    std::vector<std::string> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
            try {
                results[i] = cells[i]();
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    std::vector<Certificate> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!results[i]) throw std::runtime_error("sweep cell " + std::to_string(i) + " failed: " + errors[i]);
        out.push_back(std::move(*results[i]));
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// output

inline int exit_code(const std::vector<Certificate>& certs) {
    bool finding = false;
    for (const auto& c : certs) {
        if (c.status == Status::Fail) return 2;
        if (c.status == Status::Finding) finding = true;
    }
    return finding ? 3 : 0;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

/// Writes <name>.json (and <name>.csv when there is a table) per certificate plus index.json.
inline void write_outputs(const std::filesystem::path& dir, const std::vector<Certificate>& certs) {
    std::filesystem::create_directories(dir);
    json index = {{"version", kVersion}, {"certificates", json::array()}};
    std::map<std::string, std::size_t> summary{{"PASS", 0}, {"FAIL", 0}, {"FINDING", 0}, {"SKIPPED", 0}};
    for (const auto& c : certs) {
        write_text(dir / (c.name + ".json"), c.to_json().dump(2) + "\n");
        json e = {{"name", c.name}, {"check", c.check}, {"status", to_string(c.status)}, {"json", c.name + ".json"}};
        if (c.table) {
            write_text(dir / (c.name + ".csv"), c.table->csv());
            e["csv"] = c.name + ".csv";
        }
        index["certificates"].push_back(e);
        ++summary[to_string(c.status)];
    }
    index["summary"] = summary;
    write_text(dir / "index.json", index.dump(2) + "\n");
}

// ---------------------------------------------------------------------------------------------
// revalidation from serialized data

struct Revalidation {
    std::string name;
    bool ok;
    std::string message;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

inline Status recorded_status(const json& j) { return status_from_string(j.at("status").get<std::string>()); }

inline void revalidate_descent(const json& j) {
    const RationalMap R = map_from_json(j.at("lattes")), V = map_from_json(j.at("verschiebung"));
    const bool ok = precompose_frobenius(V) == R;
    require(ok == (recorded_status(j) == Status::Pass), "descent status does not match the Frobenius factorization");
}

/// x∘[p] against the group law at a few points over F_{p^2}.
inline void spot_check_lattes(const Element& lam, const RationalMap& R, std::size_t count) {
    const unsigned p = lam.field().characteristic();
    const Field& L = Field::get(p, 2);
    const LegendreCurve C = LegendreCurve(lam).over(L);
    const RationalMap RL = detail::embed_map(R, L);
    std::size_t done = 0;
    for (const Element& x : enumerate(L)) {
        if (done == count) break;
        const auto P = lift_x(C, x);
        if (!P) continue;
        require(RL.eval(ProjPoint(x)) == scalar_mul(p, *P).x_proj(), "lattes map disagrees with the group law");
        ++done;
    }
}

inline void revalidate_conjecture(const json& j) {
    const unsigned p = j.at("p").get<unsigned>();
    const Element lam = element_from_json(p, j.at("lambda"));
    const RationalMap phi = map_from_json(j.at("phi")), psi = map_from_json(j.at("psi")), R = map_from_json(j.at("lattes"));
    require(precompose_frobenius(psi) == phi, "phi is not psi after z^p");
    require(phi.degree() == static_cast<int>(p * p), "phi has the wrong degree");
    spot_check_lattes(lam, R, 10);
    const auto w = compare_maps(phi, R);
    const Status s = recorded_status(j);
    require((s == Status::Pass) == !w.has_value(), "status does not match the map comparison");
    if (w) {
        const json& wj = j.at("witness");
        require(wj.at("part").get<std::string>() == w->part && wj.at("index").get<std::size_t>() == w->index,
                "witness does not point at the first differing coefficient");
        require(element_from_json(phi.field(), wj.at("flow")) == w->flow_value &&
                    element_from_json(phi.field(), wj.at("lattes")) == w->oracle_value,
                "witness values do not match the maps");
    }
    // cusp values must agree with the map
    for (const auto& cj : j.at("cusps")) {
        const ProjPoint pt = point_from_json(phi.field(), cj.at("point"));
        require(phi.eval(pt) == point_from_json(phi.field(), cj.at("from_map")), "cusp value does not match the map");
    }
}

inline void revalidate_census(const json& j) {
    if (recorded_status(j) == Status::Skipped) return;
    const RationalMap R = map_from_json(j.at("map"));
    const unsigned f = j.at("f").get<unsigned>();
    const unsigned p = R.field().characteristic();
    std::uint64_t total = 0;
    for (const auto& pj : j.at("points")) {
        const ProjPoint z = point_from_json(p, pj.at("point"));
        const RationalMap RL = detail::embed_map(R, z.field());
        const unsigned e = pj.at("exact_period").get<unsigned>();
        require(e >= 1 && f % e == 0, "exact period must divide the period");
        ProjPoint w = z;
        for (unsigned i = 1; i <= f; ++i) {
            w = RL.eval(w);
            if (i < e) require(!(w == z), "point returns before its exact period");
            if (i == e) require(w == z, "point is not periodic with its exact period");
        }
        require(w == z, "point is not fixed by the f-th iterate");
        total += pj.at("multiplicity").get<std::uint64_t>();
    }
    for (const auto& g : j.at("unresolved"))
        total += g.at("multiplicity").get<std::uint64_t>() * g.at("points").get<std::uint64_t>();
    require(total == j.at("total_with_multiplicity").get<std::uint64_t>(), "multiplicities do not add up to the total");
    const bool pass = total == j.at("expected").get<std::uint64_t>();
    require(pass == (recorded_status(j) == Status::Pass), "census status does not match the count");
    if (j.contains("psi") && f == 1) {
        const RationalMap psi = map_from_json(j.at("psi"));
        const EvaluationPoint where = evaluation_point_from_string(j.value("deformation_at", std::string("frobenius-image")));
        for (const auto& pj : j.at("points")) {
            if (!pj.contains("deformation_a")) continue;
            const ProjPoint z = point_from_json(p, pj.at("point"));
            require(deformation_coefficient(psi, z, where) == element_from_json(z.field(), pj.at("deformation_a")),
                    "deformation coefficient does not re-evaluate");
        }
    }
}

inline void revalidate_torsion(const json& j) {
    if (recorded_status(j) == Status::Skipped) return;
    const unsigned p = j.at("p").get<unsigned>(), f = j.at("f").get<unsigned>();
    const Element lam = element_from_json(p, j.at("lambda"));
    const LegendreCurve C(lam);
    std::uint64_t q = 1;
    for (unsigned i = 0; i < f; ++i) q *= p;
    const RationalMap R = map_from_json(j.at("census_map"));
    bool all_ok = true;
    for (const auto& rj : j.at("reports")) {
        const ProjPoint z = point_from_json(p, rj.at("point"));
        // periodic under the serialized map
        const RationalMap RL = detail::embed_map(R, z.field());
        ProjPoint w = z;
        for (unsigned i = 0; i < f; ++i) w = RL.eval(w);
        require(w == z, "reported point is not periodic");
        if (rj.at("lift").is_null()) {
            all_ok = false;
            continue;
        }
        const unsigned d = rj.at("lift_degree").get<unsigned>();
        const LegendreCurve CL = C.over(Field::get(p, d));
        const CurvePoint P = curve_point_from_json(CL, rj.at("lift"));
        if (!z.is_infinity())
            require(!P.is_identity() && embedding(z.field(), CL.field())(z.value()) == P.x(), "lift does not lie over the point");
        if (rj.at("order").is_null()) {
            all_ok = false;
            continue;
        }
        const auto n = rj.at("order").get<std::uint64_t>();
        require(scalar_mul(static_cast<std::int64_t>(n), P).is_identity(), "[order]P is not O");
        for (auto r : detail::prime_factors(n))
            require(!scalar_mul(static_cast<std::int64_t>(n / r), P).is_identity(), "order is not exact");
        const bool dm = (q - 1) % n == 0, dp = (q + 1) % n == 0;
        require(dm == rj.at("divides_minus").get<bool>() && dp == rj.at("divides_plus").get<bool>(), "divisibility flags are wrong");
        if (!dm && !dp) all_ok = false;
    }
    const bool conv = j.at("torsion_x_count") == j.at("torsion_x_periodic");
    const bool pass = all_ok && conv && j.at("violations").empty();
    require(pass == (recorded_status(j) == Status::Pass), "torsion status does not match the reports");
}

inline void revalidate_supersingular(const json& j) {
    const unsigned p = j.at("p").get<unsigned>(), d = j.at("degree").get<unsigned>();
    const Field& F = Field::get(p, d);
    std::size_t disagreements = 0;
    for (const auto& r : j.at("rows")) {
        const Element lam = element_from_json(F, r.at("lambda"));
        require(hasse_invariant(lam) == element_from_json(F, r.at("hasse")), "Hasse invariant does not re-evaluate");
        const bool ss = r.at("supersingular").get<bool>();
        require(ss == hasse_invariant(lam).is_zero(), "verdict does not follow the Hasse invariant");
        const bool agree = ss == (r.at("trace_mod_p").get<std::uint64_t>() == 0) && ss == r.at("psi_derivative_zero").get<bool>() &&
                           (r.at("flow_psi_derivative_zero").is_null() || r.at("flow_psi_derivative_zero").get<bool>() == ss);
        require(agree == r.at("agree").get<bool>(), "agreement flag is wrong");
        if (!agree) ++disagreements;
    }
    require((disagreements == 0) == (recorded_status(j) == Status::Pass), "supersingular status does not match the rows");
}

inline void revalidate_lift_sim(const json& j) {
    const unsigned p = j.at("p").get<unsigned>(), f = j.at("f").get<unsigned>();
    const Field& K = Field::get(p, f);
    const Element a = element_from_json(K, j.at("a"));
    for (const auto& s : j.at("trajectory")) {
        const unsigned h = s.at("degree").get<unsigned>();
        const Field& cur = Field::get(p, f * h);
        const Element b = element_from_json(cur, s.at("b"));
        const LiftStep st = artin_schreier_solve(embedding(K, cur)(a), b);
        require(st.base_solutions.size() == s.at("solutions_in_current").get<std::size_t>(), "solution count does not re-evaluate");
        require(h * st.first_solution_degree == s.at("next_degree").get<unsigned>(), "next degree does not re-evaluate");
        require(st.splitting_degree == s.at("splitting_degree").get<unsigned>(), "splitting degree does not re-evaluate");
    }
}

}  // namespace detail

inline Revalidation revalidate_certificate(const std::string& name, const json& j) {
    try {
        const auto check = j.at("check").get<std::string>();
        if (check == "descent")
            detail::revalidate_descent(j);
        else if (check == "conjecture")
            detail::revalidate_conjecture(j);
        else if (check == "census")
            detail::revalidate_census(j);
        else if (check == "torsion")
            detail::revalidate_torsion(j);
        else if (check == "supersingular")
            detail::revalidate_supersingular(j);
        else if (check == "lift-sim")
            detail::revalidate_lift_sim(j);
        else
            return {name, false, "unknown check " + check};
    } catch (const std::exception& e) {
        return {name, false, e.what()};
    }
    return {name, true, "ok"};
}

/// Revalidates a single certificate file or every certificate listed in a directory's index.json.
inline std::vector<Revalidation> revalidate_path(const std::filesystem::path& path) {
    auto load = [](const std::filesystem::path& f) {
        std::ifstream is(f);
        if (!is) throw Error(Errc::ParseError, "cannot read " + f.string());
        return json::parse(is);
    };
    std::vector<Revalidation> out;
    if (std::filesystem::is_directory(path)) {
        const json index = load(path / "index.json");
        for (const auto& e : index.at("certificates")) {
            const auto file = e.at("json").get<std::string>();
            out.push_back(revalidate_certificate(file, load(path / file)));
        }
    } else {
        out.push_back(revalidate_certificate(path.filename().string(), load(path)));
    }
    return out;
}

}  // namespace hdflow
