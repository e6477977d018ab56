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

#include <map>
#include <random>
#include <set>

#include "hdflow/dynamics.hpp"
#include "hdflow/flow.hpp"

using namespace hdflow;

namespace {

Element prime(std::uint32_t p, Coeff v) { return Field::get(p, 1).element(v); }

// fixed points of R^f whose field of definition has degree exactly d, by exhaustive evaluation
std::set<Element> brute_fixed(const RationalMap& R, unsigned f, unsigned d) {
    const Field& L = Field::get(R.field().characteristic(), d);
    const RationalMap RL = detail::embed_map(R, L);
    std::set<Element> out;
    for (const Element& z : enumerate(L)) {
        if (field_of_definition_degree(z) != d) continue;
        ProjPoint w(z);
        for (unsigned i = 0; i < f; ++i) w = RL.eval(w);
        if (w == ProjPoint(z)) out.insert(z);
    }
    return out;
}

// solutions of a z^p - z + b = 0 in F, by enumeration
std::set<Element> brute_as(const Element& a, const Element& b, const Field& F) {
    const Embedding& e = embedding(a.field(), F);
    const Element A = e(a), B = e(b);
    std::set<Element> out;
    for (const Element& z : enumerate(F))
        if ((A * frobenius(z) - z + B).is_zero()) out.insert(z);
    return out;
}

void check_census_against_brute_force(const RationalMap& R, unsigned f) {
    const PeriodicCensus c = periodic_census(R, f);
    EXPECT_TRUE(c.pass());
    EXPECT_TRUE(c.unresolved.empty());
    std::map<unsigned, std::set<Element>> by_degree;
    for (const auto& pt : c.points) {
        if (pt.point.is_infinity()) continue;
        EXPECT_EQ(pt.field_degree, pt.point.field().degree());
        by_degree[pt.field_degree].insert(pt.point.value());
    }
    const unsigned p = R.field().characteristic();
    for (const auto& [d, pts] : by_degree) {
        std::uint64_t q = 1;
        for (unsigned i = 0; i < d; ++i) q *= p;
        if (q > 1000000) continue;
        EXPECT_EQ(pts, brute_fixed(R, f, d)) << "degree " << d;
    }
}

}  // namespace

TEST(Census, CountsForSmallPrimes) {
    const PeriodicCensus c3 = periodic_census(lattes_p(LegendreCurve(prime(3, 2))).map, 1);
    EXPECT_EQ(c3.total_with_multiplicity, 10u);
    const PeriodicCensus c5 = periodic_census(lattes_p(LegendreCurve(prime(5, 2))).map, 1);
    EXPECT_EQ(c5.total_with_multiplicity, 26u);
    EXPECT_TRUE(c5.pass());
}

TEST(Census, ContainsTwoTorsionAndInfinity) {
    for (auto [p, l] : {std::pair{3u, 2u}, {5u, 2u}, {7u, 3u}}) {
        const PeriodicCensus c = periodic_census(lattes_p(LegendreCurve(prime(p, l))).map, 1);
        std::set<std::string> seen;
        for (const auto& pt : c.points) {
            std::ostringstream os;
            os << pt.point;
            seen.insert(os.str());
        }
        for (const std::string& s : std::vector<std::string>{"0", "1", std::to_string(l), "inf"}) EXPECT_TRUE(seen.count(s)) << s;
    }
}

TEST(Census, PointsMatchExhaustiveSearch) {
    check_census_against_brute_force(lattes_p(LegendreCurve(prime(5, 2))).map, 1);
    check_census_against_brute_force(lattes_p(LegendreCurve(prime(3, 2))).map, 2);
    check_census_against_brute_force(lattes_p(LegendreCurve(prime(7, 3))).map, 1);
}

TEST(Census, FlowAndLattesCensusesCoincide) {
    const Element lam = prime(5, 3);
    const PeriodicCensus a = periodic_census(phi_map(lam).phi, 1);
    const PeriodicCensus b = periodic_census(lattes_p(LegendreCurve(lam)).map, 1);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].point, b.points[i].point);
        EXPECT_EQ(a.points[i].multiplicity, b.points[i].multiplicity);
    }
}

TEST(Census, ExactPeriodsForPeriodTwo) {
    const RationalMap R = lattes_p(LegendreCurve(prime(3, 2))).map;
    const PeriodicCensus c1 = periodic_census(R, 1);
    const PeriodicCensus c2 = periodic_census(R, 2);
    EXPECT_EQ(c2.total_with_multiplicity, 82u);
    std::set<std::string> fixed;
    for (const auto& pt : c1.points) {
        std::ostringstream os;
        os << pt.point;
        fixed.insert(os.str());
    }
    std::size_t period_one = 0;
    for (const auto& pt : c2.points) {
        EXPECT_TRUE(pt.exact_period == 1 || pt.exact_period == 2);
        period_one += pt.exact_period == 1;
    }
    EXPECT_EQ(period_one, c1.points.size());
}

TEST(Census, DegreeCapSurfacesOverflow) {
    const RationalMap R = lattes_p(LegendreCurve(prime(7, 3))).map;
    try {
        periodic_census(R, 2, 1000);
        FAIL() << "expected DegreeOverflow";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegreeOverflow);
    }
}

TEST(Separability, Examples) {
    const Field& F = Field::get(5, 1);
    const SeparabilityReport sq = separability_report(RationalMap::polynomial(Poly(F, {0, 0, 1})), 1);
    EXPECT_TRUE(sq.all_simple());
    EXPECT_EQ(sq.distinct, 3u);
    const SeparabilityReport frob = separability_report(RationalMap::polynomial(Poly::monomial(F.one(), 5)), 1);
    EXPECT_TRUE(frob.all_simple());
    EXPECT_EQ(frob.distinct, 6u);
    const SeparabilityReport l = separability_report(lattes_p(LegendreCurve(prime(5, 2))).map, 1);
    EXPECT_EQ(l.total, 26u);
    EXPECT_TRUE(l.all_simple());
    // a repeated fixed point: z + z^2 fixes 0 twice
    const SeparabilityReport rep = separability_report(RationalMap::polynomial(Poly(F, {0, 1, 1})), 1);
    EXPECT_FALSE(rep.all_simple());
    EXPECT_EQ(rep.multiplicity_profile.at(2), 1u);
}

TEST(Torsion, CorrespondenceAtFiveTwo) {
    const Element lam = prime(5, 2);
    const PeriodicCensus c = periodic_census(lattes_p(LegendreCurve(lam)).map, 1);
    const TorsionCorrespondence t = torsion_correspondence(lam, c);
    EXPECT_TRUE(t.pass());
    EXPECT_TRUE(t.forward_ok());
    EXPECT_TRUE(t.converse_ok());
    for (const auto& r : t.forward) {
        ASSERT_TRUE(r.order);
        EXPECT_TRUE(4 % *r.order == 0 || 6 % *r.order == 0) << *r.order;
        if (!r.z.is_infinity() && r.z.field().degree() == 1 && (r.z.value().is_zero() || r.z.value().is_one() || r.z.value() == lam)) {
            EXPECT_EQ(*r.order, 2u);
            EXPECT_TRUE(r.divides_minus);
            EXPECT_TRUE(r.divides_plus);
        }
    }
    EXPECT_TRUE(t.orders.count(2));
    EXPECT_TRUE(t.orders.count(3));
    EXPECT_TRUE(t.orders.count(4));
    EXPECT_TRUE(t.orders.count(6));
}

TEST(Torsion, ThreeTorsionIsFixedForPFive) {
    // [5] acts as [-1] on 3-torsion, so its x-coordinates are fixed
    const Element lam = prime(5, 2);
    const RationalMap R = lattes_p(LegendreCurve(lam)).map;
    const RationalMap RL = detail::embed_map(R, Field::get(5, 4));
    for (const Element& x : n_torsion_x(LegendreCurve(lam), 3, 4)) EXPECT_EQ(RL.eval(x), ProjPoint(x));
}

TEST(Torsion, TamperedCensusIsCaught) {
    const Element lam = prime(5, 2);
    PeriodicCensus c = periodic_census(lattes_p(LegendreCurve(lam)).map, 1);
    // drop a 3-torsion point from the census: the converse direction must notice
    auto it = std::find_if(c.points.begin(), c.points.end(), [](const CensusPoint& pt) { return pt.field_degree == 4; });
    ASSERT_NE(it, c.points.end());
    c.points.erase(it);
    c.fixed_squarefree = Poly(Field::get(5, 1), {1});
    const TorsionCorrespondence t = torsion_correspondence(lam, c);
    EXPECT_FALSE(t.pass());
    EXPECT_FALSE(t.violations.empty());
}

TEST(Deformation, SupersingularVanishes) {
    for (auto [p, l] : {std::pair{3u, 2u}, {7u, 6u}}) {
        const Element lam = prime(p, l);
        ASSERT_TRUE(deuring_supersingular(lam));
        const FlowMaps m = phi_map(lam);
        EXPECT_TRUE(m.psi.derivative().is_identically_zero());
        for (const auto& pt : periodic_census(m.phi, 1).points) EXPECT_TRUE(deformation_coefficient(m.psi, pt.point).is_zero());
    }
}

TEST(Deformation, OrdinaryIsNonzeroAwayFromTwoTorsion) {
    const Element lam = prime(5, 2);
    ASSERT_FALSE(deuring_supersingular(lam));
    const FlowMaps m = phi_map(lam);
    std::size_t checked = 0;
    for (const auto& pt : periodic_census(m.phi, 1).points) {
        EXPECT_FALSE(deformation_coefficient(m.psi, pt.point).is_zero()) << pt.point;
        ++checked;
    }
    EXPECT_EQ(checked, 26u);
}

TEST(Deformation, EvaluationConventionsAgreeOverPrimeField) {
    const Element lam = prime(7, 3);
    const RationalMap psi = lattes_p(LegendreCurve(lam)).verschiebung;
    for (Coeff v = 0; v < 7; ++v) {
        const ProjPoint z(prime(7, v));
        EXPECT_EQ(deformation_coefficient(psi, z, EvaluationPoint::FrobeniusImage),
                  deformation_coefficient(psi, z, EvaluationPoint::Point));
    }
}

TEST(ArtinSchreier, TrivialExamples) {
    const Field& F = Field::get(5, 1);
    const LiftStep s = artin_schreier_solve(F.one(), F.zero());
    EXPECT_EQ(s.base_solutions.size(), 5u);
    EXPECT_EQ(s.first_solution_degree, 1u);
    const LiftStep z = artin_schreier_solve(F.zero(), F.element(3));
    ASSERT_EQ(z.base_solutions.size(), 1u);
    EXPECT_EQ(z.base_solutions[0], F.element(3));
}

TEST(ArtinSchreier, NonzeroTraceNeedsDegreeP) {
    const Field& F = Field::get(3, 1);
    const LiftStep s = artin_schreier_solve(F.one(), F.one());
    EXPECT_TRUE(s.base_solutions.empty());
    EXPECT_EQ(s.first_solution_degree, 3u);
    EXPECT_EQ(s.splitting_degree, 3u);
    EXPECT_EQ(brute_as(F.one(), F.one(), F).size(), 0u);
    EXPECT_EQ(brute_as(F.one(), F.one(), Field::get(3, 3)).size(), 3u);
    ASSERT_TRUE(s.solutions);
    EXPECT_EQ(s.solutions->size(), 3u);
}

TEST(ArtinSchreier, NonPrimeCoefficient) {
    const Field& F9 = Field::get(3, 2);
    const Element t = F9.from_coefficients({0, 1});
    const LiftStep s = artin_schreier_solve(t, F9.one());
    const auto base = brute_as(t, F9.one(), F9);
    EXPECT_EQ(s.base_solutions.size(), base.size());
    EXPECT_TRUE(base.size() == 0 || base.size() == 1 || base.size() == 3);
    const auto big = brute_as(t, F9.one(), Field::get(3, 2 * s.splitting_degree));
    EXPECT_EQ(big.size(), 3u);
}

TEST(ArtinSchreier, MatchesExhaustiveSearch) {
    std::mt19937_64 rng(51);
    for (auto [p, f] : {std::pair{3u, 1u}, {3u, 2u}, {5u, 1u}, {7u, 1u}, {3u, 3u}}) {
        const Field& K = Field::get(p, f);
        std::uniform_int_distribution<std::uint64_t> d(0, K.order() - 1);
        for (int i = 0; i < 20; ++i) {
            Element a = K.element(d(rng));
            if (a.is_zero()) a = K.one();
            const Element b = K.element(d(rng));
            const LiftStep s = artin_schreier_solve(a, b);
            const auto base = brute_as(a, b, K);
            EXPECT_EQ(std::set<Element>(s.base_solutions.begin(), s.base_solutions.end()), base);
            unsigned first = 0;
            for (unsigned e = 1; e <= 2 * p * (p - 1) && first == 0; ++e) {
                std::uint64_t q = 1;
                for (unsigned k = 0; k < f * e; ++k) q *= p;
                if (q > 1000000) break;
                if (!brute_as(a, b, Field::get(p, f * e)).empty()) first = e;
            }
            if (first) {
                EXPECT_EQ(s.first_solution_degree, first);
            }
            if (s.solutions) {
                EXPECT_EQ(s.solutions->size(), p);
                for (const Element& z : *s.solutions) {
                    const Embedding& e = embedding(K, z.field());
                    EXPECT_TRUE((e(a) * frobenius(z) - z + e(b)).is_zero());
                }
            }
        }
    }
}

TEST(Tower, ZeroModeIsFlat) {
    const Element a = Field::get(3, 2).from_coefficients({0, 1});
    const TowerTrajectory tr = lifting_tower_sim(a, make_b_source(BMode::Zero, a, 1), 5);
    ASSERT_EQ(tr.steps.size(), 5u);
    for (const auto& s : tr.steps) {
        EXPECT_EQ(s.degree, 1u);
        EXPECT_FALSE(s.grew_by_p);
        EXPECT_GE(s.solutions_in_current, 1u);
    }
}

TEST(Tower, NonzeroTraceGrowsByP) {
    const Element a = Field::get(3, 1).one();
    const TowerTrajectory tr = lifting_tower_sim(a, make_b_source(BMode::Traced, a, 1), 5);
    ASSERT_GE(tr.steps.size(), 2u);
    unsigned expect = 1;
    for (const auto& s : tr.steps) {
        EXPECT_EQ(s.degree, expect);
        EXPECT_TRUE(s.grew_by_p);
        EXPECT_EQ(s.solutions_in_current, 0u);
        expect *= 3;
    }
}

TEST(Tower, RandomModeMatchesBruteForce) {
    const Field& K = Field::get(3, 2);
    const Element a = K.from_coefficients({1, 1});
    const TowerTrajectory tr = lifting_tower_sim(a, make_b_source(BMode::Random, a, 7), 5);
    for (const auto& s : tr.steps) {
        const Field& cur = Field::get(3, 2 * s.degree);
        if (cur.order() > 1000000) break;
        EXPECT_EQ(brute_as(a, s.b, cur).size(), s.solutions_in_current);
        // the next field contains a solution, and no intermediate one does
        const unsigned rel = s.next_degree / s.degree;
        if (Field::get(3, 2 * s.next_degree).order() <= 1000000) {
            EXPECT_FALSE(brute_as(embedding(K, cur)(a), s.b, Field::get(3, 2 * s.next_degree)).empty());
        }
        EXPECT_TRUE(rel == 1 || rel == 3);
    }
}
