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

#include <random>

#include "hdflow/elliptic.hpp"
#include "hdflow/rational.hpp"

using namespace hdflow;

namespace {

Poly random_poly(const Field& F, int deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> d(0, F.order() - 1);
    std::vector<Coeff> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = d(rng);
    if (c.back() == 0) c.back() = 1;
    return Poly(F, std::move(c));
}

RationalMap random_map(const Field& F, int max_deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dd(0, max_deg);
    for (;;) {
        const RationalMap R = canonicalize(random_poly(F, dd(rng), rng), random_poly(F, dd(rng), rng));
        if (R.degree() >= 1) return R;
    }
}

}  // namespace

TEST(Rational, CanonicalizeExamples) {
    const Field& F5 = Field::get(5, 1);
    const RationalMap a = canonicalize(Poly(F5, {0, 0, 2}), Poly(F5, {0, 2}));
    EXPECT_EQ(a.num(), Poly(F5, {0, 1}));
    EXPECT_EQ(a.den(), Poly(F5, {1}));
    const Field& F7 = Field::get(7, 1);
    const RationalMap b = canonicalize(Poly(F7, {-1, 1}) * Poly(F7, {-2, 1}), Poly(F7, {-1, 1}));
    EXPECT_EQ(b.num(), Poly(F7, {-2, 1}));
    EXPECT_EQ(b.den(), Poly(F7, {1}));
    const RationalMap c = canonicalize(Poly(F5, {1, 0, 1}), Poly(F5, {2}));
    EXPECT_EQ(c.num(), Poly(F5, {3, 0, 3}));
    EXPECT_EQ(c.den(), Poly(F5, {1}));
    EXPECT_THROW(canonicalize(Poly(F5), Poly(F5)), Error);
}

TEST(Rational, CanonicalizeIsIdempotent) {
    std::mt19937_64 rng(21);
    const Field& F = Field::get(3, 2);
    for (int i = 0; i < 100; ++i) {
        const RationalMap R = random_map(F, 8, rng);
        EXPECT_EQ(canonicalize(R.num(), R.den()), R);
        EXPECT_TRUE(R.den().is_monic());
        EXPECT_EQ(gcd(R.num(), R.den()).degree(), 0);
    }
}

TEST(Rational, EvalProjExamples) {
    const Field& F = Field::get(5, 1);
    const RationalMap sq = RationalMap::polynomial(Poly(F, {0, 0, 1}));
    EXPECT_TRUE(sq.eval(ProjPoint::infinity(F)).is_infinity());
    const RationalMap inv = canonicalize(Poly(F, {1}), Poly(F, {0, 1}));
    EXPECT_TRUE(inv.eval(F.zero()).is_infinity());
    EXPECT_EQ(inv.eval(ProjPoint::infinity(F)), ProjPoint(F.zero()));
    // (x^2 + 1)/(x - 2) cancels to x + 2 over F_5, so its value at 2 is 4
    const RationalMap c = canonicalize(Poly(F, {1, 0, 1}), Poly(F, {-2, 1}));
    EXPECT_EQ(c, RationalMap::polynomial(Poly(F, {2, 1})));
    EXPECT_EQ(c.eval(F.element(2)), ProjPoint(F.element(4)));
    // (x^2 + 2)/(x - 2) keeps its pole at 2
    const RationalMap d = canonicalize(Poly(F, {2, 0, 1}), Poly(F, {-2, 1}));
    EXPECT_TRUE(d.eval(F.element(2)).is_infinity());
    EXPECT_TRUE(d.eval(ProjPoint::infinity(F)).is_infinity());
    const RationalMap m = canonicalize(Poly(F, {1, 3}), Poly(F, {4, 2}));
    EXPECT_EQ(m.eval(ProjPoint::infinity(F)), ProjPoint(F.element(4)));
}

TEST(Rational, FrobeniusDecomposeExamples) {
    const Field& F = Field::get(3, 1);
    EXPECT_EQ(frobenius_decompose(RationalMap::polynomial(Poly::monomial(F.one(), 3))), RationalMap::identity(F));
    const RationalMap R = canonicalize(Poly(F, {1, 0, 0, 1}), Poly(F, {-1, 0, 0, 1}));
    EXPECT_EQ(frobenius_decompose(R), canonicalize(Poly(F, {1, 1}), Poly(F, {-1, 1})));
    EXPECT_THROW(frobenius_decompose(RationalMap::polynomial(Poly::monomial(F.one(), 2))), Error);
}

TEST(Rational, FrobeniusDecomposeRoundTrip) {
    std::mt19937_64 rng(22);
    for (const Field* F : {&Field::get(3, 1), &Field::get(5, 1), &Field::get(7, 2)}) {
        for (int i = 0; i < 100; ++i) {
            const RationalMap psi = random_map(*F, 10, rng);
            const RationalMap phi = precompose_frobenius(psi);
            EXPECT_EQ(phi.degree(), psi.degree() * static_cast<int>(F->characteristic()));
            EXPECT_EQ(frobenius_decompose(phi), psi);
        }
    }
}

TEST(Rational, InterpolationExamples) {
    const Field& F7 = Field::get(7, 1);
    const RationalMap sq = RationalMap::polynomial(Poly(F7, {0, 0, 1}));
    std::vector<std::pair<ProjPoint, ProjPoint>> s;
    for (Coeff x = 0; x < 7; ++x) s.push_back({F7.element(x), sq.eval(F7.element(x))});
    EXPECT_EQ(interpolate_rational(s, 2), sq);
    const Field& F11 = Field::get(11, 1);
    const RationalMap m = canonicalize(Poly(F11, {1, 1}), Poly(F11, {-1, 1}));
    s.clear();
    for (Coeff x = 0; x < 8; ++x) s.push_back({F11.element(x), m.eval(F11.element(x))});
    EXPECT_EQ(interpolate_rational(s, 1), m);
    s.erase(s.begin() + 3, s.end());
    EXPECT_THROW(interpolate_rational(s, 2), Error);
}

TEST(Rational, InterpolationRoundTrip) {
    std::mt19937_64 rng(23);
    const Field& F = Field::get(5, 3);
    for (int i = 0; i < 40; ++i) {
        const RationalMap R = random_map(F, 9, rng);
        const int d = R.degree();
        std::vector<std::pair<ProjPoint, ProjPoint>> s;
        for (Coeff x = 0; x < static_cast<Coeff>(2 * d + 2); ++x) s.push_back({F.element(x), R.eval(F.element(x))});
        EXPECT_EQ(interpolate_rational(s, d), R);
    }
}

TEST(Rational, InterpolationRejectsInconsistentSamples) {
    const Field& F = Field::get(7, 1);
    std::vector<std::pair<ProjPoint, ProjPoint>> s;
    for (Coeff x = 0; x < 7; ++x) s.push_back({F.element(x), F.element(x * x * x % 7)});
    EXPECT_THROW(interpolate_rational(s, 1), Error);
}

TEST(Rational, IterateAndFixedPoints) {
    const Field& F = Field::get(5, 1);
    const RationalMap sq = RationalMap::polynomial(Poly(F, {0, 0, 1}));
    EXPECT_EQ(iterate_map(sq, 1), sq);
    EXPECT_EQ(iterate_map(sq, 2), RationalMap::polynomial(Poly::monomial(F.one(), 4)));
    const FixedPointDivisor fp = fixed_point_divisor(sq);
    EXPECT_TRUE(fp.infinity_fixed);
    EXPECT_EQ(fp.total(), 3u);
    EXPECT_EQ(fp.finite.degree(), 2);
    EXPECT_THROW(iterate_map(sq, 20, 1000), Error);
}

TEST(Rational, BezoutCountOnRandomIterates) {
    std::mt19937_64 rng(24);
    const Field& F = Field::get(3, 2);
    for (int i = 0; i < 30; ++i) {
        const RationalMap R = random_map(F, 4, rng);
        if (R == RationalMap::identity(F)) continue;
        for (unsigned n = 1; n <= 3; ++n) {
            const RationalMap Rn = iterate_map(R, n);
            if (Rn == RationalMap::identity(F)) continue;
            std::uint64_t expect = 1;
            for (unsigned k = 0; k < n; ++k) expect *= static_cast<std::uint64_t>(R.degree());
            EXPECT_EQ(fixed_point_divisor(Rn).total(), expect + 1);
        }
    }
}

TEST(Rational, LattesFixedPointCountForP3) {
    const Field& F = Field::get(3, 1);
    const RationalMap R = x_mult(LegendreCurve(F.element(2)), 3);
    EXPECT_EQ(fixed_point_divisor(R).total(), 10u);
}

TEST(Rational, ArithmeticAndOrders) {
    const Field& F = Field::get(7, 1);
    const RationalMap z = RationalMap::identity(F);
    const RationalMap a = divide(z * z, z - constant_map(F.element(3)));
    EXPECT_EQ(order_at(a, F.zero()), 2);
    EXPECT_EQ(order_at(a, F.element(3)), -1);
    EXPECT_EQ(order_at_infinity(a), -1);
    EXPECT_EQ(a + (-a), constant_map(F.zero()));
    EXPECT_EQ((a * z).derivative(), a.derivative() * z + a);
}
