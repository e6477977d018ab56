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

#include "hdflow/linalg.hpp"
#include "hdflow/roots.hpp"

using namespace hdflow;

namespace {

// exhaustive root search with multiplicity by repeated division
std::map<Coeff, unsigned> brute_roots(const Poly& P, const Field& L) {
    const Poly Q = embedding(P.field(), L)(P);
    std::map<Coeff, unsigned> out;
    for (const Element& x : enumerate(L)) {
        Poly rest = Q;
        unsigned m = 0;
        while (rest.degree() >= 1 && rest.eval(x).is_zero()) {
            rest = rest / Poly::linear(x);
            ++m;
        }
        if (m) out[x.value()] = m;
    }
    return out;
}

Poly random_monic(const Field& F, int deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> d(0, F.order() - 1);
    std::vector<Coeff> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = d(rng);
    c.back() = 1;
    return Poly(F, std::move(c));
}

}  // namespace

TEST(Roots, Examples) {
    const Field& F5 = Field::get(5, 1);
    const auto a = roots_with_multiplicity(Poly(F5, {-1, 0, 1}), 1);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0], std::make_pair(F5.element(1), 1u));
    EXPECT_EQ(a[1], std::make_pair(F5.element(4), 1u));
    const Field& F7 = Field::get(7, 1);
    const auto b = roots_with_multiplicity(pow(Poly(F7, {-2, 1}), 3), 1);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0], std::make_pair(F7.element(2), 3u));
    const Field& F3 = Field::get(3, 1);
    EXPECT_TRUE(roots_with_multiplicity(Poly(F3, {1, 0, 1}), 1).empty());
    const auto c = roots_with_multiplicity(Poly(F3, {1, 0, 1}), 2);
    ASSERT_EQ(c.size(), 2u);
    for (const auto& [r, m] : c) {
        EXPECT_EQ(&r.field(), &Field::get(3, 2));
        EXPECT_TRUE((r * r + r.field().one()).is_zero());
    }
    EXPECT_THROW(roots_with_multiplicity(Poly(F3), 1), Error);
}

TEST(Roots, AgreeWithExhaustiveSearch) {
    std::mt19937_64 rng(31);
    for (auto [p, e, d] : {std::tuple{3u, 1u, 4u}, {5u, 1u, 2u}, {3u, 2u, 4u}, {7u, 1u, 3u}}) {
        const Field& K = Field::get(p, e);
        const Field& L = Field::get(p, d);
        for (int i = 0; i < 20; ++i) {
            Poly P = random_monic(K, 3, rng) * pow(random_monic(K, 1, rng), 2) * random_monic(K, 2, rng);
            std::map<Coeff, unsigned> got;
            for (const auto& [r, m] : roots_with_multiplicity(P, d)) got[r.value()] = m;
            EXPECT_EQ(got, brute_roots(P, L));
        }
    }
}

TEST(Roots, DistinctDegreeFactorization) {
    std::mt19937_64 rng(32);
    const Field& F = Field::get(3, 1);
    for (int i = 0; i < 20; ++i) {
        const Poly P = squarefree_part(random_monic(F, 12, rng));
        Poly prod(F, {1});
        for (const auto& [k, G] : distinct_degree_factorization(P)) {
            EXPECT_EQ(G.degree() % static_cast<int>(k), 0);
            // every root of G has exact degree k
            const auto roots = roots_with_multiplicity(G, k);
            EXPECT_EQ(roots.size(), static_cast<std::size_t>(G.degree()));
            for (const auto& [r, m] : roots) EXPECT_EQ(field_of_definition_degree(r), k);
            const auto parts = equal_degree_factorization(G, k);
            EXPECT_EQ(parts.size(), static_cast<std::size_t>(G.degree()) / k);
            Poly eprod(F, {1});
            for (const Poly& h : parts) {
                EXPECT_EQ(h.degree(), static_cast<int>(k));
                eprod = eprod * h;
            }
            EXPECT_EQ(eprod, G.monic());
            prod = prod * G;
        }
        EXPECT_EQ(prod.monic(), P.monic());
    }
}

TEST(Roots, EmbeddingIsAHomomorphism) {
    std::mt19937_64 rng(33);
    const Field& K = Field::get(5, 2);
    const Field& L = Field::get(5, 6);
    const Embedding& e = embedding(K, L);
    std::uniform_int_distribution<std::uint64_t> d(0, K.order() - 1);
    for (int i = 0; i < 100; ++i) {
        const Element a = K.element(d(rng)), b = K.element(d(rng));
        EXPECT_EQ(e(a + b), e(a) + e(b));
        EXPECT_EQ(e(a * b), e(a) * e(b));
        EXPECT_EQ(e.preimage(e(a)), a);
        EXPECT_TRUE(subfield_member(e(a), 2));
    }
    EXPECT_THROW(embedding(Field::get(5, 4), L), Error);
}

TEST(Linalg, NullspaceVectorsAnnihilate) {
    std::mt19937_64 rng(34);
    const Field& F = Field::get(7, 1);
    std::uniform_int_distribution<Coeff> d(0, 6);
    for (int t = 0; t < 20; ++t) {
        Matrix A(4, std::vector<Coeff>(7));
        for (auto& row : A)
            for (auto& x : row) x = d(rng);
        A[3] = A[0];
        const auto N = nullspace(F, A, 7);
        EXPECT_GE(N.size(), 4u);
        for (const auto& v : N)
            for (const auto& row : A) {
                Coeff s = 0;
                for (std::size_t j = 0; j < 7; ++j) s = F.add(s, F.mul(row[j], v[j]));
                EXPECT_EQ(s, 0u);
            }
    }
}
