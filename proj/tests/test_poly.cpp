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

#include "hdflow/poly.hpp"

using namespace hdflow;

namespace {

Poly random_poly(const Field& F, int deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> d(0, F.order() - 1);
    std::vector<Coeff> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = d(rng);
    if (c.back() == 0) c.back() = 1;
    return Poly(F, std::move(c));
}

}  // namespace

TEST(Poly, GcdIsMonic) {
    const Field& F = Field::get(5, 1);
    EXPECT_EQ(gcd(Poly(F, {-1, 0, 1}), Poly(F, {-1, 1})), Poly(F, {-1, 1}));
    EXPECT_EQ(gcd(Poly(F, {-2, 0, 2}), Poly(F, {3, 3})), Poly(F, {1, 1}));
}

TEST(Poly, DerivativeKillsPthPowers) {
    const Field& F = Field::get(5, 1);
    EXPECT_TRUE(Poly::monomial(F.one(), 5).derivative().is_zero());
    EXPECT_EQ(Poly(F, {1, 2, 3}).derivative(), Poly(F, {2, 6}));
}

TEST(Poly, Compose) {
    const Field& F = Field::get(7, 1);
    EXPECT_EQ(Poly(F, {1, 0, 1}).compose(Poly(F, {2, 1})), Poly(F, {5, 4, 1}));
}

TEST(Poly, DivremContract) {
    std::mt19937_64 rng(5);
    const Field& F = Field::get(3, 3);
    for (int i = 0; i < 50; ++i) {
        const Poly a = random_poly(F, 12, rng), b = random_poly(F, 5, rng);
        const auto [q, r] = divrem(a, b);
        EXPECT_EQ(q * b + r, a);
        EXPECT_LT(r.degree(), b.degree());
    }
    EXPECT_THROW(divrem(Poly(F, {1, 1}), Poly(F)), Error);
}

TEST(Poly, ExtendedGcdBezout) {
    std::mt19937_64 rng(6);
    const Field& F = Field::get(7, 2);
    for (int i = 0; i < 30; ++i) {
        const Poly c = random_poly(F, 2, rng);
        const Poly a = random_poly(F, 6, rng) * c, b = random_poly(F, 4, rng) * c;
        const auto e = extended_gcd(a, b);
        EXPECT_EQ(e.s * a + e.t * b, e.g);
        EXPECT_TRUE(e.g.is_monic());
        EXPECT_EQ(a % e.g, Poly(F));
        EXPECT_EQ(b % e.g, Poly(F));
    }
}

TEST(Poly, RingAxiomsOnRandomPolys) {
    std::mt19937_64 rng(7);
    const Field& F = Field::get(5, 2);
    for (int i = 0; i < 30; ++i) {
        const Poly a = random_poly(F, 4, rng), b = random_poly(F, 3, rng), c = random_poly(F, 5, rng);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a - a, Poly(F));
        EXPECT_EQ(a.compose(b).eval(F.element(static_cast<Coeff>(i % 25))), a.eval(b.eval(F.element(static_cast<Coeff>(i % 25)))));
    }
}

TEST(Poly, PthRoot) {
    const Field& F = Field::get(3, 2);
    const Poly P(F, std::vector<Coeff>{4, 0, 0, 7, 0, 0, 1});
    const Poly r = pth_root(P);
    EXPECT_EQ(pow(r, 3), P);
    EXPECT_THROW(pth_root(Poly(F, {0, 1})), Error);
}

TEST(Poly, SquarefreeDecomposition) {
    const Field& F = Field::get(3, 1);
    const Poly c(F, {1, 0, 1});  // irreducible over F_3
    const Poly P = c * pow(Poly(F, {0, 1}), 3) * pow(Poly(F, {2, 1}), 4);
    const auto dec = squarefree_decomposition(P);
    Poly prod(F, {1});
    for (const auto& [m, S] : dec) prod = prod * pow(S, m);
    EXPECT_EQ(prod, P.monic());
    ASSERT_EQ(dec.size(), 3u);
    EXPECT_EQ(dec[0].first, 1u);
    EXPECT_EQ(dec[0].second, c);
    EXPECT_EQ(dec[1].first, 3u);
    EXPECT_EQ(dec[2].first, 4u);
    EXPECT_EQ(squarefree_part(P), (c * Poly(F, {0, 1}) * Poly(F, {2, 1})).monic());
}

TEST(Poly, PowmodAgreesWithPow) {
    std::mt19937_64 rng(8);
    const Field& F = Field::get(11, 1);
    const Poly m = random_poly(F, 7, rng), b = random_poly(F, 4, rng);
    EXPECT_EQ(powmod(b, 13, m), pow(b, 13) % m);
}
