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
 * @file roots.hpp
 * @brief Root extraction over finite fields and embeddings between them.
 *
 * Roots are found by isolating the split part gcd(P, x^Q - x) and splitting it with
 * Cantor–Zassenhaus using the deterministic probe sequence x + 0, x + 1, ... in canonical
 * element order, so results never depend on a random source.
 */

#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "hdflow/field.hpp"
#include "hdflow/poly.hpp"

namespace hdflow {

/// x^{|K|^k} mod m for the field K of m.
inline Poly frobenius_of_x_mod(const Poly& m, unsigned k) {
    Poly h = Poly::x(m.field()) % m;
    for (unsigned i = 0; i < k; ++i) h = powmod(h, m.field().order(), m);
    return h;
}

/// Splits a squarefree polynomial whose roots all lie in its coefficient field.
inline void split_linear(const Poly& g, std::vector<Element>& out) {
    const Field& F = g.field();
    if (g.degree() <= 0) return;
    if (g.degree() == 1) {
        out.push_back(-(g.coeff(0) / g.coeff(1)));
        return;
    }
    const std::uint64_t half = (F.order() - 1) / 2;
    for (Coeff delta = 0; delta < F.order(); ++delta) {
        Poly probe(F, std::vector<Coeff>{delta, 1});
        Poly h = powmod(probe, half, g) - Poly(F, {1});
        Poly d = gcd(h, g);
        if (d.degree() > 0 && d.degree() < g.degree()) {
            split_linear(d, out);
            split_linear(g / d, out);
            return;
        }
    }
    throw Error(Errc::InvalidArgument, "split_linear: polynomial does not split into distinct linear factors");
}

/// Distinct roots of P lying in P's own coefficient field, canonically sorted.
inline std::vector<Element> distinct_roots(const Poly& P) {
    if (P.is_zero()) throw Error(Errc::ZeroPolynomial, "roots of the zero polynomial");
    std::vector<Element> out;
    if (P.degree() <= 0) return out;
    const Poly monicP = P.monic();
    const Poly xq = frobenius_of_x_mod(monicP, 1);
    const Poly split = gcd(monicP, xq - Poly::x(P.field()));
    split_linear(split, out);
    std::sort(out.begin(), out.end());
    return out;
}

/// Distinct-degree factorization of a squarefree monic polynomial: (k, product of its
/// irreducible factors of degree k) for every k that occurs.
inline std::vector<std::pair<unsigned, Poly>> distinct_degree_factorization(const Poly& P) {
    if (P.is_zero()) throw Error(Errc::ZeroPolynomial, "factorization of zero");
    std::vector<std::pair<unsigned, Poly>> out;
    Poly rest = P.monic();
    const Field& F = P.field();
    Poly h = Poly::x(F);
    unsigned k = 0;
    while (rest.degree() >= 2 * static_cast<int>(k + 1)) {
        ++k;
        h = powmod(h, F.order(), rest);
        Poly g = gcd(rest, h - Poly::x(F));
        if (g.degree() > 0) {
            out.emplace_back(k, g);
            rest = rest / g;
            h = h % rest;
        }
    }
    if (rest.degree() > 0) out.emplace_back(static_cast<unsigned>(rest.degree()), rest);
    return out;
}

/**
 * Splits a squarefree monic polynomial whose irreducible factors all have degree k into those
 * factors (Cantor–Zassenhaus). Probes come from a fixed-seed generator, and the factors are
 * returned sorted by coefficients, so the output is deterministic.
 */
inline std::vector<Poly> equal_degree_factorization(const Poly& G, unsigned k) {
    const Field& F = G.field();
    std::vector<Poly> out;
    if (G.degree() <= 0) return out;
    if (static_cast<unsigned>(G.degree()) == k) {
        out.push_back(G.monic());
        return out;
    }
    unsigned __int128 Q = 1;
    for (unsigned i = 0; i < k; ++i) {
        Q *= F.order();
        if (Q > (static_cast<unsigned __int128>(1) << 64))
            throw Error(Errc::FieldTooLarge, "equal-degree factorization exponent overflows");
    }
    const auto half = static_cast<std::uint64_t>((Q - 1) / 2);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::vector<Poly> work{G.monic()};
    while (!work.empty()) {
        Poly g = std::move(work.back());
        work.pop_back();
        if (static_cast<unsigned>(g.degree()) == k) {
            out.push_back(std::move(g));
            continue;
        }
        for (;;) {
            std::vector<Coeff> c(static_cast<std::size_t>(g.degree()));
            for (auto& v : c) v = rng() % F.order();
            const Poly a(F, std::move(c));
            if (a.degree() <= 0) continue;
            const Poly d = gcd(powmod(a, half, g) - Poly(F, {1}), g);
            if (d.degree() > 0 && d.degree() < g.degree()) {
                work.push_back(g / d);
                work.push_back(d);
                break;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) { return a.raw() < b.raw(); });
    return out;
}

/// A field homomorphism F_{p^e} → F_{p^d} (e | d), fixed by sending t to the smallest root of
/// the source modulus in the target.
class Embedding {
   public:
    Embedding(const Field& from, const Field& to, Element image) : from_(&from), to_(&to), image_(image) {}

    const Field& source() const noexcept { return *from_; }
    const Field& target() const noexcept { return *to_; }
    const Element& image_of_generator() const noexcept { return image_; }

    Element operator()(const Element& x) const {
        if (x.field_ptr() != from_) throw Error(Errc::FieldMismatch, "embedding applied to element of another field");
        if (from_->is_prime_field()) return to_->element(x.value());
        Coeff acc = 0;
        for (unsigned i = from_->degree(); i-- > 0;)
            acc = to_->add(to_->mul(acc, image_.value()), from_->digit(x.value(), i));
        return Element(*to_, acc);
    }

    Poly operator()(const Poly& P) const {
        std::vector<Coeff> c;
        c.reserve(P.size());
        for (std::size_t i = 0; i < P.size(); ++i) c.push_back((*this)(P.coeff(i)).value());
        return Poly(*to_, std::move(c));
    }

    /// Preimage of an element known to lie in the image (linear algebra over F_p).
    Element preimage(const Element& y) const;

   private:
    const Field* from_;
    const Field* to_;
    Element image_;
};

inline const Embedding& embedding(const Field& from, const Field& to) {
    if (from.characteristic() != to.characteristic()) throw Error(Errc::FieldMismatch, "characteristics differ");
    if (to.degree() % from.degree() != 0)
        throw Error(Errc::DegreeNotDivisor, std::to_string(from.degree()) + " does not divide " + std::to_string(to.degree()));
    static std::mutex mu;
    static std::map<std::pair<const Field*, const Field*>, std::unique_ptr<Embedding>> cache;
    const auto key = std::make_pair(&from, &to);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return *it->second;
    }
    Element image = to.zero();
    if (!from.is_prime_field()) {
        std::vector<Coeff> m;
        for (auto c : from.modulus()) m.push_back(c);
        const auto roots = distinct_roots(Poly(to, std::move(m)));
        if (roots.empty()) throw Error(Errc::InvalidArgument, "modulus has no root in target field");
        image = roots.front();
    }
    auto made = std::make_unique<Embedding>(from, to, image);
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(made));
    return *it->second;
}

inline Element Embedding::preimage(const Element& y) const {
    if (y.field_ptr() != to_) throw Error(Errc::FieldMismatch, "preimage of element of another field");
    if (from_->is_prime_field()) {
        if (!y.in_prime_field()) throw Error(Errc::InvalidArgument, "element not in the image of the embedding");
        return from_->element(y.value());
    }
    // Solve Σ c_i image^i = y over F_p by Gaussian elimination on digit vectors.
    const unsigned e = from_->degree(), d = to_->degree();
    const std::uint64_t p = to_->characteristic();
    std::vector<std::vector<std::uint64_t>> A(d, std::vector<std::uint64_t>(e + 1, 0));
    Element pw = to_->one();
    for (unsigned i = 0; i < e; ++i) {
        for (unsigned r = 0; r < d; ++r) A[r][i] = to_->digit(pw.value(), r);
        pw *= image_;
    }
    for (unsigned r = 0; r < d; ++r) A[r][e] = to_->digit(y.value(), r);
    unsigned row = 0;
    std::vector<int> pivot_col(d, -1);
    for (unsigned col = 0; col < e && row < d; ++col) {
        unsigned pr = row;
        while (pr < d && A[pr][col] == 0) ++pr;
        if (pr == d) continue;
        std::swap(A[row], A[pr]);
        const std::uint64_t inv = detail::inv_mod(A[row][col], p);
        for (auto& v : A[row]) v = v * inv % p;
        for (unsigned r = 0; r < d; ++r) {
            if (r == row || A[r][col] == 0) continue;
            const std::uint64_t fct = A[r][col];
            for (unsigned c = 0; c <= e; ++c) A[r][c] = (A[r][c] + (p - fct) * A[row][c]) % p;
        }
        pivot_col[row] = static_cast<int>(col);
        ++row;
    }
    for (unsigned r = row; r < d; ++r)
        if (A[r][e] != 0) throw Error(Errc::InvalidArgument, "element not in the image of the embedding");
    std::vector<std::uint32_t> coeffs(e, 0);
    for (unsigned r = 0; r < row; ++r) coeffs[static_cast<unsigned>(pivot_col[r])] = static_cast<std::uint32_t>(A[r][e]);
    return from_->from_coefficients(coeffs);
}

/// Roots in L of a squarefree polynomial over a subfield of L whose irreducible factors all have
/// degree k with [L : field] divisible by k. Roots are found one factor at a time.
inline std::vector<Element> roots_of_equal_degree(const Poly& G, unsigned k, const Field& L) {
    const Embedding& e = embedding(G.field(), L);
    std::vector<Element> out;
    for (const Poly& h : equal_degree_factorization(G, k)) {
        const auto r = distinct_roots(e(h));
        out.insert(out.end(), r.begin(), r.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Roots of P in F_{p^d} with multiplicities, sorted canonically. The degree of P's field must divide d.
inline std::vector<std::pair<Element, unsigned>> roots_with_multiplicity(const Poly& P, unsigned d) {
    if (P.is_zero()) throw Error(Errc::ZeroPolynomial, "roots of the zero polynomial");
    const Field& K = P.field();
    const Field& L = Field::get(K.characteristic(), d);
    const Poly Q = embedding(K, L)(P);
    std::vector<std::pair<Element, unsigned>> out;
    for (const Element& r : distinct_roots(Q)) {
        Poly rest = Q;
        unsigned mult = 0;
        const Poly lin = Poly::linear(r);
        for (;;) {
            auto [quo, rem] = divrem(rest, lin);
            if (!rem.is_zero()) break;
            rest = std::move(quo);
            ++mult;
        }
        out.emplace_back(r, mult);
    }
    return out;
}

}  // namespace hdflow
