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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdflow/report.hpp"

using namespace hdflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hdflow_test_" + name);
    fs::remove_all(p);
    return p;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream is(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        out[e.path().filename().string()] = ss.str();
    }
    return out;
}

SweepConfig small_sweep() {
    return sweep_config_from_json(json::parse(R"({
        "p": [3, 5, 7], "f": [1], "lambda": "all",
        "checks": ["descent", "conjecture", "census", "torsion", "supersingular", "lift-sim"],
        "seed": 7, "lift": {"a": [1], "b_mode": "random", "steps": 3}
    })"));
}

}  // namespace

TEST(Report, VerifyConjectureAllLambdaForFive) {
    std::vector<Certificate> certs;
    for (std::uint64_t l = 2; l < 5; ++l) certs.push_back(conjecture_certificate(5, l));
    ASSERT_EQ(certs.size(), 3u);
    for (const auto& c : certs) EXPECT_EQ(c.status, Status::Pass);
    EXPECT_EQ(exit_code(certs), 0);
    EXPECT_EQ(conjecture_certificate(3, 2).status, Status::Pass);
    EXPECT_THROW(conjecture_certificate(4, 2), Error);
    EXPECT_THROW(conjecture_certificate(5, 1), Error);
}

TEST(Report, ConjectureMismatchIsFailAtSmallPrimesAndFindingBeyond) {
    const Element lam = Field::get(5, 1).element(2);
    LattesDescent oracle = lattes_p(LegendreCurve(lam));
    std::vector<Coeff> den = oracle.map.den().raw();
    den[0] = oracle.map.field().add(den[0], 1);
    oracle.map = canonicalize(oracle.map.num(), Poly(oracle.map.field(), den));
    ConjectureResult r = conjecture_check_against(lam, phi_map(lam), oracle);
    ASSERT_FALSE(r.pass);
    Certificate c = conjecture_certificate_from(r, {}, 0);
    EXPECT_EQ(c.status, Status::Fail);
    EXPECT_TRUE(c.to_json().contains("witness"));
    r.p = 53;
    c = conjecture_certificate_from(r, {}, 0);
    EXPECT_EQ(c.status, Status::Finding);
    const json j = c.to_json();
    EXPECT_EQ(j.at("kind"), "conjecture-violation");
    EXPECT_EQ(j.at("conjecture"), "flow-equals-lattes");
    EXPECT_EQ(exit_code({c}), 3);
}

TEST(Report, CensusCertificates) {
    const Certificate a = census_certificate(5, 1, 2, MapSide::Lattes);
    EXPECT_EQ(a.status, Status::Pass);
    EXPECT_EQ(a.payload.at("total_with_multiplicity"), 26);
    ASSERT_TRUE(a.table);
    EXPECT_EQ(a.table->rows.size(), 26u);
    const Certificate b = census_certificate(3, 2, 2, MapSide::Flow);
    EXPECT_EQ(b.status, Status::Pass);
    EXPECT_EQ(b.payload.at("total_with_multiplicity"), 82);
    RunOptions low;
    low.max_degree = 1000;
    const Certificate c = census_certificate(7, 2, 3, MapSide::Flow, low);
    EXPECT_EQ(c.status, Status::Skipped);
    EXPECT_FALSE(c.reason.empty());
    EXPECT_EQ(exit_code({a, b, c}), 0);
}

TEST(Report, TorsionCertificates) {
    const Certificate c = torsion_certificate(5, 1, 2, MapSide::Flow);
    EXPECT_EQ(c.status, Status::Pass);
    EXPECT_TRUE(c.payload.at("forward_ok").get<bool>());
    EXPECT_TRUE(c.payload.at("converse_ok").get<bool>());
}

TEST(Report, TamperedCensusGivesFinding) {
    const Element lam = Field::get(5, 1).element(2);
    PeriodicCensus census = periodic_census(lattes_p(LegendreCurve(lam)).map, 1);
    auto it = std::find_if(census.points.begin(), census.points.end(), [](const CensusPoint& pt) { return pt.field_degree == 4; });
    ASSERT_NE(it, census.points.end());
    census.points.erase(it);
    census.fixed_squarefree = Poly(Field::get(5, 1), {1});
    Certificate c{"torsion", "torsion_tampered"};
    c.inputs = {{"p", 5}, {"f", 1}, {"lambda", to_json(lam)}};
    c = torsion_certificate_from(lam, census, std::move(c));
    EXPECT_EQ(c.status, Status::Finding);
    EXPECT_EQ(c.to_json().at("conjecture"), "periodic-iff-torsion");
    EXPECT_EQ(exit_code({c}), 3);
}

TEST(Report, SupersingularScan) {
    const Certificate s3 = supersingular_certificate(3, 1);
    EXPECT_EQ(s3.status, Status::Pass);
    EXPECT_EQ(s3.payload.at("supersingular_count"), 1);
    EXPECT_TRUE(s3.payload.at("rows")[0].at("supersingular").get<bool>());
    const Certificate s5 = supersingular_certificate(5, 1);
    EXPECT_EQ(s5.status, Status::Pass);
    EXPECT_EQ(s5.payload.at("supersingular_count"), 0);
    EXPECT_EQ(supersingular_certificate(5, 2).status, Status::Pass);
}

TEST(Report, LiftSimZeroModeIsFlat) {
    const Certificate c = lift_sim_certificate(3, 2, 3, BMode::Zero, 5);
    EXPECT_EQ(c.status, Status::Pass);
    for (const auto& s : c.payload.at("trajectory")) {
        EXPECT_EQ(s.at("degree"), 1);
        EXPECT_FALSE(s.at("grew_by_p").get<bool>());
    }
    EXPECT_THROW(lift_sim_certificate(3, 2, 0, BMode::Zero, 5), Error);
}

TEST(Report, ExitCodePrecedence) {
    Certificate pass{"x", "a"}, fail{"x", "b"}, finding{"x", "c"}, skipped{"x", "d"};
    fail.status = Status::Fail;
    finding.status = Status::Finding;
    skipped.status = Status::Skipped;
    EXPECT_EQ(exit_code({pass, skipped}), 0);
    EXPECT_EQ(exit_code({pass, finding}), 3);
    EXPECT_EQ(exit_code({finding, fail}), 2);
}

TEST(Report, DeformationEvaluationPointIsSelectable) {
    RunOptions at_point;
    at_point.deformation_at = EvaluationPoint::Point;
    const Certificate c = census_certificate(5, 1, 2, MapSide::Flow, at_point);
    EXPECT_EQ(c.payload.at("deformation_at"), "point");
    const RationalMap psi = map_from_json(c.payload.at("psi"));
    for (const auto& pj : c.payload.at("points")) {
        const ProjPoint z = point_from_json(5, pj.at("point"));
        EXPECT_EQ(element_from_json(z.field(), pj.at("deformation_a")), deformation_coefficient(psi, z, EvaluationPoint::Point));
    }
    EXPECT_TRUE(revalidate_certificate(c.name, c.to_json()).ok);
    EXPECT_EQ(census_certificate(5, 1, 2, MapSide::Flow).payload.at("deformation_at"), "frobenius-image");
}

TEST(Report, SweepConfigValidation) {
    EXPECT_THROW(sweep_config_from_json(json::parse(R"({"p": [3], "deformation_at": "elsewhere"})")), Error);
    EXPECT_EQ(sweep_config_from_json(json::parse(R"({"p": [3], "deformation_at": "point"})")).deformation_at, EvaluationPoint::Point);
    EXPECT_THROW(sweep_config_from_json(json::parse(R"({"p": [4]})")), Error);
    EXPECT_THROW(sweep_config_from_json(json::parse(R"({"p": [2]})")), Error);
    EXPECT_THROW(sweep_config_from_json(json::parse(R"({"f": [1]})")), Error);
    EXPECT_THROW(sweep_config_from_json(json::parse(R"({"p": [3], "max_degree": 0})")), Error);
    EXPECT_THROW(sweep_config_from_json(json::parse(R"({"p": [3], "checks": ["bogus"]})")), Error);
    EXPECT_THROW(sweep_config_from_json(json::parse(R"({"p": [3], "colour": 1})")), Error);
    EXPECT_THROW(sweep_config_from_json(json::parse(R"({"p": [3], "lambda": "some"})")), Error);
    const SweepConfig c = sweep_config_from_json(json::parse(R"({"p": [5], "lambda": [2, 3]})"));
    EXPECT_FALSE(c.all_lambda);
    EXPECT_EQ(c.lambdas, (std::vector<std::uint64_t>{2, 3}));
}

TEST(Report, SweepIsDeterministicAndRevalidates) {
    const SweepConfig cfg = small_sweep();
    const auto certs = run_sweep(cfg, {}, 1);
    std::size_t fails = 0;
    for (const auto& c : certs) fails += c.status == Status::Fail;
    EXPECT_EQ(fails, 0u);
    EXPECT_EQ(exit_code(certs), 0);

    const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
    write_outputs(a, certs);
    write_outputs(b, run_sweep(cfg, {}, 3));
    EXPECT_EQ(read_tree(a), read_tree(b));

    const json index = json::parse(read_tree(a).at("index.json"));
    EXPECT_EQ(index.at("summary").at("FAIL"), 0);
    EXPECT_EQ(index.at("certificates").size(), certs.size());

    for (const auto& r : revalidate_path(a)) EXPECT_TRUE(r.ok) << r.name << ": " << r.message;
}

TEST(Report, RevalidationCatchesTampering) {
    const fs::path dir = scratch("tamper");
    write_outputs(dir, {census_certificate(5, 1, 2, MapSide::Lattes), conjecture_certificate(5, 3),
                        torsion_certificate(5, 1, 3, MapSide::Lattes)});
    for (const auto& r : revalidate_path(dir)) EXPECT_TRUE(r.ok) << r.name << ": " << r.message;

    auto edit = [&](const std::string& file, const std::function<void(json&)>& f) {
        std::ifstream is(dir / file);
        json j = json::parse(is);
        f(j);
        write_text(dir / file, j.dump(2));
        return revalidate_path(dir / file).front();
    };
    // a census point that is not fixed
    EXPECT_FALSE(edit("census_lattes_p5_f1_l2.json", [](json& j) { j["points"][5]["point"] = json::array({1, 2, 3, 4}); }).ok);
    // a witness-free status flip
    EXPECT_FALSE(edit("conjecture_p5_l3.json", [](json& j) { j["lattes"]["num"][3] = json::array({(j["lattes"]["num"][3][0].get<int>() + 1) % 5}); }).ok);
    // a wrong torsion order
    EXPECT_FALSE(edit("torsion_lattes_p5_f1_l3.json", [](json& j) {
                     for (auto& r : j["reports"])
                         if (r["order"] == 4) {
                             r["order"] = 8;
                             break;
                         }
                 }).ok);
}
