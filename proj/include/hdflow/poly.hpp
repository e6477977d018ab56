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

#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

#include "hdflow/error.hpp"
#include "hdflow/field.hpp"

namespace hdflow {

/// Dense univariate polynomial over a Field, coefficients low to high with no trailing zeros.
class Poly {
   public:
    explicit Poly(const Field& F) : field_(&F) {}
    Poly(const Field& F, std::vector<Coeff> c) : field_(&F), c_(std::move(c)) { trim(); }
    Poly(const Field& F, std::initializer_list<std::int64_t> ints) : field_(&F) {
        for (auto n : ints) c_.push_back(F.from_int(n).value());
        trim();
    }

    static Poly constant(const Element& c) { return Poly(c.field(), std::vector<Coeff>{c.value()}); }
    static Poly monomial(const Element& c, std::size_t k) {
        std::vector<Coeff> v(k + 1, 0);
        v[k] = c.value();
        return Poly(c.field(), std::move(v));
    }
    static Poly x(const Field& F) { return Poly(F, std::vector<Coeff>{0, 1}); }
    /// x - r
    static Poly linear(const Element& r) { return Poly(r.field(), std::vector<Coeff>{r.field().neg(r.value()), 1}); }

    const Field& field() const noexcept { return *field_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    std::size_t size() const noexcept { return c_.size(); }
    const std::vector<Coeff>& raw() const noexcept { return c_; }

    Element coeff(std::size_t i) const { return Element(*field_, i < c_.size() ? c_[i] : 0); }
    Element lead() const {
        if (c_.empty()) throw Error(Errc::ZeroPolynomial, "zero polynomial has no leading coefficient");
        return Element(*field_, c_.back());
    }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

    Element eval(const Element& z) const {
        check(z.field());
        const Field& F = *field_;
        Coeff acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = F.add(F.mul(acc, z.value()), c_[i]);
        return Element(F, acc);
    }

    Poly operator-() const {
        Poly r(*field_);
        r.c_.reserve(c_.size());
        for (Coeff a : c_) r.c_.push_back(field_->neg(a));
        return r;
    }
    Poly& operator+=(const Poly& o) {
        check(o.field());
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_->add(c_[i], o.c_[i]);
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check(o.field());
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_->sub(c_[i], o.c_[i]);
        trim();
        return *this;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Element& s) {
        check(s.field());
        if (s.is_zero()) {
            c_.clear();
            return *this;
        }
        for (Coeff& a : c_) a = field_->mul(a, s.value());
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Element& s) { return a *= s; }
    friend Poly operator*(const Element& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b.field());
        if (a.is_zero() || b.is_zero()) return Poly(*a.field_);
        const Field& F = *a.field_;
        std::vector<Coeff> r(a.c_.size() + b.c_.size() - 1, 0);
        if (F.is_prime_field()) {
            // Delay reduction: p < 2^20 so partial sums of 2^40-sized products fit for 2^23 terms.
            const std::uint64_t p = F.characteristic();
            std::vector<std::uint64_t> acc(r.size(), 0);
            for (std::size_t i = 0; i < a.c_.size(); ++i) {
                const std::uint64_t ai = a.c_[i];
                if (!ai) continue;
                for (std::size_t j = 0; j < b.c_.size(); ++j) {
                    acc[i + j] += ai * b.c_[j];
                    if (acc[i + j] >= (1ull << 62)) acc[i + j] %= p;
                }
            }
            for (std::size_t k = 0; k < r.size(); ++k) r[k] = acc[k] % p;
        } else {
            for (std::size_t i = 0; i < a.c_.size(); ++i) {
                if (!a.c_[i]) continue;
                for (std::size_t j = 0; j < b.c_.size(); ++j)
                    if (b.c_[j]) r[i + j] = F.add(r[i + j], F.mul(a.c_[i], b.c_[j]));
            }
        }
        return Poly(F, std::move(r));
    }

    friend bool operator==(const Poly& a, const Poly& b) noexcept { return a.field_ == b.field_ && a.c_ == b.c_; }

    /// a = q·b + r with deg r < deg b.
    friend std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
        a.check(b.field());
        if (b.is_zero()) throw Error(Errc::DivisionByZeroPoly, "division by the zero polynomial");
        const Field& F = *a.field_;
        if (a.degree() < b.degree()) return {Poly(F), a};
        std::vector<Coeff> r = a.c_;
        std::vector<Coeff> q(a.c_.size() - b.c_.size() + 1, 0);
        const Coeff inv = F.inv(b.c_.back());
        const std::size_t db = b.c_.size() - 1;
        for (std::size_t i = r.size(); i-- > db;) {
            const Coeff t = r[i];
            if (!t) continue;
            const Coeff c = F.mul(t, inv);
            q[i - db] = c;
            for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b.c_[j]));
        }
        r.resize(db);
        return {Poly(F, std::move(q)), Poly(F, std::move(r))};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divrem(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divrem(a, b).second; }

    Poly monic() const {
        if (is_zero()) return *this;
        return *this * lead().inverse();
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly(*field_);
        std::vector<Coeff> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = field_->mul(field_->from_int(static_cast<std::int64_t>(i % field_->characteristic())).value(), c_[i]);
        return Poly(*field_, std::move(d));
    }

    /// this(g(x)), Horner's scheme.
    Poly compose(const Poly& g) const {
        check(g.field());
        Poly acc(*field_);
        for (std::size_t i = c_.size(); i-- > 0;) {
            acc = acc * g;
            acc += Poly(*field_, std::vector<Coeff>{c_[i]});
        }
        return acc;
    }

    /// Coefficients reversed with respect to a formal degree n ≥ deg: x^n·P(1/x).
    Poly reversed(std::size_t n) const {
        std::vector<Coeff> r(n + 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i) r[n - i] = c_[i];
        return Poly(*field_, std::move(r));
    }

    /// Largest k with x^k | P; zero polynomial gives -1.
    int low_order() const noexcept {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i]) return static_cast<int>(i);
        return -1;
    }

    /// Re-homes a polynomial whose coefficients all lie in the prime field.
    Poly over_prime_subfield_into(const Field& target) const {
        if (target.characteristic() != field_->characteristic())
            throw Error(Errc::FieldMismatch, "characteristics differ");
        for (Coeff a : c_)
            if (a >= field_->characteristic()) throw Error(Errc::FieldMismatch, "coefficient outside the prime field");
        return Poly(target, c_);
    }
    bool has_prime_coefficients() const noexcept {
        for (Coeff a : c_)
            if (a >= field_->characteristic()) return false;
        return true;
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    void check(const Field& F) const {
        if (&F != field_) throw Error(Errc::FieldMismatch, "polynomial operands live in different fields");
    }

    const Field* field_;
    std::vector<Coeff> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

struct ExtendedGcd {
    Poly g, s, t;  ///< g = s·a + t·b, g monic
};

inline ExtendedGcd extended_gcd(const Poly& a, const Poly& b) {
    const Field& F = a.field();
    Poly r0 = a, r1 = b, s0 = Poly(F, {1}), s1(F), t0(F), t1 = Poly(F, {1});
    while (!r1.is_zero()) {
        auto [q, r] = divrem(r0, r1);
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    const Element inv = r0.lead().inverse();
    return {r0 * inv, s0 * inv, t0 * inv};
}

inline Poly pow(Poly base, std::uint64_t e) {
    Poly r(base.field(), {1});
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

/// base^e mod m.
inline Poly powmod(Poly base, std::uint64_t e, const Poly& m) {
    Poly r = Poly(base.field(), {1}) % m;
    base = base % m;
    while (e) {
        if (e & 1) r = (r * base) % m;
        e >>= 1;
        if (e) base = (base * base) % m;
    }
    return r;
}

/// Coefficient-wise p-th root of a polynomial in x^p.
inline Poly pth_root(const Poly& P) {
    const Field& F = P.field();
    const std::size_t p = F.characteristic();
    std::vector<Coeff> root;
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (i % p == 0)
            root.push_back(frobenius_inverse(P.coeff(i)).value());
        else if (P.raw()[i] != 0)
            throw Error(Errc::InvalidArgument, "pth_root: polynomial is not a p-th power");
    }
    return Poly(F, std::move(root));
}

/**
 * Squarefree decomposition P = c·Π S_j^j with the S_j squarefree, monic and pairwise coprime.
 * Returns the (j, S_j) with deg S_j > 0 sorted by j. Multiplicities divisible by p are recovered
 * through p-th roots.
 */
inline std::vector<std::pair<unsigned, Poly>> squarefree_decomposition(const Poly& P) {
    if (P.is_zero()) throw Error(Errc::ZeroPolynomial, "squarefree decomposition of zero");
    const Field& F = P.field();
    const unsigned p = F.characteristic();
    std::vector<std::pair<unsigned, Poly>> out;
    const Poly one(F, {1});
    Poly f = P.monic();
    if (f.degree() <= 0) return out;
    const Poly b = f.derivative();
    if (b.is_zero()) {
        for (auto& [j, g] : squarefree_decomposition(pth_root(f))) out.emplace_back(j * p, std::move(g));
        return out;
    }
    Poly c = gcd(f, b);
    Poly w = f / c;
    unsigned i = 1;
    while (w.degree() > 0) {
        Poly y = gcd(w, c);
        Poly z = w / y;
        if (z.degree() > 0) out.emplace_back(i, z.monic());
        ++i;
        w = std::move(y);
        c = c / w;
    }
    if (c.degree() > 0) {
        for (auto& [j, g] : squarefree_decomposition(pth_root(c.monic()))) out.emplace_back(j * p, std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    return out;
}

/// Product of the distinct monic irreducible factors of P.
inline Poly squarefree_part(const Poly& P) {
    Poly out(P.field(), {1});
    for (const auto& [j, g] : squarefree_decomposition(P)) out = out * g;
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Poly& P) {
    if (P.is_zero()) return os << "0";
    bool first = true;
    for (int i = P.degree(); i >= 0; --i) {
        const Coeff c = P.raw()[static_cast<std::size_t>(i)];
        if (!c) continue;
        if (!first) os << " + ";
        first = false;
        const bool show_coeff = c != 1 || i == 0;
        if (show_coeff) {
            if (P.field().is_prime_field()) {
                os << c;
            } else {
                os << "[";
                const Element e(P.field(), c);
                const auto cs = e.coefficients();
                for (std::size_t k = 0; k < cs.size(); ++k) os << (k ? "," : "") << cs[k];
                os << "]";
            }
        }
        if (i >= 1) os << (show_coeff ? "*" : "") << "x";
        if (i >= 2) os << "^" << i;
    }
    return os;
}

}  // namespace hdflow
