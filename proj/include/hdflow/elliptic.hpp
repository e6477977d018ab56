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
 * @file elliptic.hpp
 * @brief Legendre curves y² = x(x-1)(x-λ): group law, division polynomials and x∘[n].
 *
 * Division polynomials are kept in x alone. An even-index ψ_n carries one factor of y, which
 * is recorded by a parity flag instead of a bivariate representation; products of two such
 * factors are folded back with y² = x³ + a2·x² + a4·x.
 */

#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include "hdflow/field.hpp"
#include "hdflow/poly.hpp"
#include "hdflow/rational.hpp"
#include "hdflow/roots.hpp"

namespace hdflow {

inline constexpr std::uint64_t kMaxPointCountOrder = 1000000;

class LegendreCurve {
   public:
    explicit LegendreCurve(const Element& lambda) : lambda_(lambda) {
        if (lambda.is_zero() || lambda.is_one())
            throw Error(Errc::SingularCurve, "lambda must differ from 0 and 1");
    }

    const Element& lambda() const noexcept { return lambda_; }
    const Field& field() const { return lambda_.field(); }
    Element a2() const { return -(field().one() + lambda_); }
    Element a4() const { return lambda_; }

    /// x(x-1)(x-λ)
    Element rhs(const Element& x) const { return x * (x - field().one()) * (x - lambda_); }
    Poly rhs_poly() const { return Poly(field(), {0, 0, 0, 1}) + Poly::constant(a2()) * Poly(field(), {0, 0, 1}) + Poly::constant(a4()) * Poly::x(field()); }

    /// The same curve over an extension field.
    LegendreCurve over(const Field& L) const { return LegendreCurve(embedding(field(), L)(lambda_)); }

    friend bool operator==(const LegendreCurve& a, const LegendreCurve& b) noexcept { return a.lambda_ == b.lambda_; }

   private:
    Element lambda_;
};

class CurvePoint {
   public:
    static CurvePoint identity(const LegendreCurve& C) { return CurvePoint(C); }
    CurvePoint(const LegendreCurve& C, const Element& x, const Element& y) : curve_(C), x_(x), y_(y), inf_(false) {
        if (&x.field() != &C.field() || &y.field() != &C.field())
            throw Error(Errc::FieldMismatch, "point coordinates must lie in the curve's field");
        if (y * y != C.rhs(x)) throw Error(Errc::NotOnCurve, "y^2 != x(x-1)(x-lambda)");
    }

    const LegendreCurve& curve() const noexcept { return curve_; }
    bool is_identity() const noexcept { return inf_; }
    const Element& x() const {
        if (inf_) throw Error(Errc::InvalidArgument, "the identity has no affine coordinates");
        return x_;
    }
    const Element& y() const {
        if (inf_) throw Error(Errc::InvalidArgument, "the identity has no affine coordinates");
        return y_;
    }
    /// x-coordinate as a point of P^1, with O over ∞.
    ProjPoint x_proj() const { return inf_ ? ProjPoint::infinity(curve_.field()) : ProjPoint(x_); }

    friend bool operator==(const CurvePoint& a, const CurvePoint& b) noexcept {
        if (!(a.curve_ == b.curve_) || a.inf_ != b.inf_) return false;
        return a.inf_ || (a.x_ == b.x_ && a.y_ == b.y_);
    }

   private:
    explicit CurvePoint(const LegendreCurve& C) : curve_(C), x_(C.field().zero()), y_(C.field().zero()), inf_(true) {}

    LegendreCurve curve_;
    Element x_, y_;
    bool inf_;
};

inline std::ostream& operator<<(std::ostream& os, const CurvePoint& P) {
    if (P.is_identity()) return os << "O";
    return os << "(" << ProjPoint(P.x()) << ", " << ProjPoint(P.y()) << ")";
}

inline CurvePoint negate(const CurvePoint& P) {
    if (P.is_identity()) return P;
    return CurvePoint(P.curve(), P.x(), -P.y());
}

inline CurvePoint add(const CurvePoint& P, const CurvePoint& Q) {
    if (!(P.curve() == Q.curve())) throw Error(Errc::PointsOnDifferentCurves, "points lie on different curves");
    if (P.is_identity()) return Q;
    if (Q.is_identity()) return P;
    const LegendreCurve& C = P.curve();
    const Field& F = C.field();
    Element L = F.zero();
    if (P.x() == Q.x()) {
        if (P.y() == -Q.y()) return CurvePoint::identity(C);
        const Element x = P.x();
        L = (F.from_int(3) * x * x + F.from_int(2) * C.a2() * x + C.a4()) / (F.from_int(2) * P.y());
    } else {
        L = (Q.y() - P.y()) / (Q.x() - P.x());
    }
    const Element x3 = L * L - C.a2() - P.x() - Q.x();
    const Element y3 = L * (P.x() - x3) - P.y();
    return CurvePoint(C, x3, y3);
}

inline CurvePoint operator+(const CurvePoint& P, const CurvePoint& Q) { return add(P, Q); }
inline CurvePoint operator-(const CurvePoint& P) { return negate(P); }

/// Double-and-add; negative n uses -P.
inline CurvePoint scalar_mul(std::int64_t n, const CurvePoint& P) {
    CurvePoint base = n < 0 ? negate(P) : P;
    std::uint64_t k = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    CurvePoint acc = CurvePoint::identity(P.curve());
    while (k) {
        if (k & 1) acc = add(acc, base);
        base = add(base, base);
        k >>= 1;
    }
    return acc;
}

/// A point with the given x-coordinate (the smaller square root as y), if one is rational.
inline std::optional<CurvePoint> lift_x(const LegendreCurve& C, const Element& x) {
    const auto r = sqrt(C.rhs(x));
    if (!r) return std::nullopt;
    return CurvePoint(C, x, r->first);
}

/// ψ_n = y^parity · xpart(x).
struct DivisionPoly {
    Poly xpart;
    bool has_y = false;
};

class DivisionPolySequence {
   public:
    explicit DivisionPolySequence(const LegendreCurve& C) : curve_(C), Q_(C.rhs_poly()) {
        const Field& F = C.field();
        const Element b2 = F.from_int(4) * C.a2(), b4 = F.from_int(2) * C.a4(), b8 = -(C.a4() * C.a4());
        const Element two = F.from_int(2), three = F.from_int(3), five = F.from_int(5), ten = F.from_int(10);
        auto c = [](const Element& e) { return e.value(); };
        seq_.push_back({Poly(F), true});
        seq_.push_back({Poly(F, {1}), false});
        seq_.push_back({Poly::constant(two), true});
        seq_.push_back({Poly(F, std::vector<Coeff>{c(b8), 0, c(three * b4), c(b2), c(three)}), false});
        // ψ_4 / ψ_2 = 2x^6 + b2 x^5 + 5b4 x^4 + 10b8 x^2 + b2b8 x + b4b8 (b6 = 0)
        const Poly inner(F, std::vector<Coeff>{c(b4 * b8), c(b2 * b8), c(ten * b8), 0, c(five * b4), c(b2), c(two)});
        seq_.push_back({Poly::constant(two) * inner, true});
    }

    const LegendreCurve& curve() const noexcept { return curve_; }

    /// ψ_n, extending the cached sequence as needed.
    const DivisionPoly& operator[](std::size_t n) {
        std::lock_guard lock(mu_);
        while (seq_.size() <= n) extend();
        return seq_[n];
    }
    std::size_t size() const noexcept { return seq_.size(); }

    /// Product of two entries with y² folded into the cubic.
    DivisionPoly mul(const DivisionPoly& a, const DivisionPoly& b) const {
        DivisionPoly r{a.xpart * b.xpart, a.has_y != b.has_y};
        if (a.has_y && b.has_y) r.xpart = r.xpart * Q_;
        return r;
    }

   private:
    DivisionPoly sub(const DivisionPoly& a, const DivisionPoly& b) const {
        if (a.has_y != b.has_y && !a.xpart.is_zero() && !b.xpart.is_zero())
            throw Error(Errc::InvalidArgument, "division polynomial parity mismatch");
        return {a.xpart - b.xpart, a.xpart.is_zero() ? b.has_y : a.has_y};
    }
    DivisionPoly cube(const DivisionPoly& a) const { return mul(mul(a, a), a); }

    void extend() {
        const std::size_t n = seq_.size();
        const std::size_t m = n / 2;
        if (n % 2 == 1) {
            seq_.push_back(sub(mul(seq_[m + 2], cube(seq_[m])), mul(seq_[m - 1], cube(seq_[m + 1]))));
            return;
        }
        // needs ψ_{m+2} with m + 2 < n, true for n ≥ 6
        DivisionPoly t = sub(mul(seq_[m + 2], mul(seq_[m - 1], seq_[m - 1])), mul(seq_[m - 2], mul(seq_[m + 1], seq_[m + 1])));
        DivisionPoly v = mul(seq_[m], t);
        const Element half = curve_.field().from_int(2).inverse();
        if (v.has_y) {
            seq_.push_back({v.xpart * half, false});
        } else {
            auto [q, r] = divrem(v.xpart, Q_);
            if (!r.is_zero()) throw Error(Errc::InvalidArgument, "division polynomial recurrence is not exact");
            seq_.push_back({q * half, true});
        }
    }

    LegendreCurve curve_;
    Poly Q_;
    std::vector<DivisionPoly> seq_;
    std::mutex mu_;
};

/// ψ_0 .. ψ_n.
inline std::vector<DivisionPoly> division_polys(const LegendreCurve& C, std::size_t n) {
    DivisionPolySequence s(C);
    std::vector<DivisionPoly> out;
    for (std::size_t i = 0; i <= n; ++i) out.push_back(s[i]);
    return out;
}

/// x∘[n] = (x·ψ_n² - ψ_{n-1}ψ_{n+1}) / ψ_n².
inline RationalMap x_mult(DivisionPolySequence& seq, std::size_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "x_mult needs n >= 1");
    const Field& F = seq.curve().field();
    if (n == 1) return RationalMap::identity(F);
    const DivisionPoly sq = seq.mul(seq[n], seq[n]);
    const DivisionPoly prod = seq.mul(seq[n - 1], seq[n + 1]);
    return canonicalize(Poly::x(F) * sq.xpart - prod.xpart, sq.xpart);
}

inline RationalMap x_mult(const LegendreCurve& C, std::size_t n) {
    DivisionPolySequence seq(C);
    return x_mult(seq, n);
}

struct LattesDescent {
    RationalMap map;           // x∘[p]
    RationalMap verschiebung;  // ψ_V with ψ_V(z^p) = x∘[p](z)
};

inline LattesDescent lattes_p(const LegendreCurve& C) {
    RationalMap R = x_mult(C, C.field().characteristic());
    RationalMap V = frobenius_decompose(R);
    return {std::move(R), std::move(V)};
}

/// H_p(λ) = Σ_{i≤m} C(m,i)² λ^i with m = (p-1)/2.
inline Element hasse_invariant(const Element& lambda) {
    const Field& F = lambda.field();
    const unsigned m = (F.characteristic() - 1) / 2;
    Element acc = F.zero(), binom = F.one(), pw = F.one();
    for (unsigned i = 0; i <= m; ++i) {
        acc += binom * binom * pw;
        binom = binom * F.from_int(m - i) / F.from_int(i + 1);
        pw *= lambda;
    }
    return acc;
}

inline bool deuring_supersingular(const Element& lambda) {
    if (lambda.is_zero() || lambda.is_one()) throw Error(Errc::SingularCurve, "lambda must differ from 0 and 1");
    return hasse_invariant(lambda).is_zero();
}

/// Exhaustive #C(F_{p^d}) including O; d must be a multiple of the curve field's degree.
inline std::uint64_t point_count(const LegendreCurve& C, unsigned d) {
    const std::uint32_t p = C.field().characteristic();
    std::uint64_t q = 1;
    for (unsigned i = 0; i < d; ++i) {
        q *= p;
        if (q > kMaxPointCountOrder)
            throw Error(Errc::FieldTooLarge, "point_count is exhaustive and limited to fields of size <= 10^6");
    }
    const Field& L = Field::get(p, d);
    const LegendreCurve CL = C.over(L);
    const std::uint64_t half = (q - 1) / 2;
    std::uint64_t n = 1;
    for (const Element& x : enumerate(L)) {
        const Element r = CL.rhs(x);
        if (r.is_zero())
            n += 1;
        else if (r.pow(half).is_one())
            n += 2;
    }
    return n;
}

/// Smallest m ≤ bound with [m]P = O.
inline std::optional<std::uint64_t> torsion_order(const CurvePoint& P, std::uint64_t bound) {
    CurvePoint Q = P;
    for (std::uint64_t m = 1; m <= bound; ++m) {
        if (Q.is_identity()) return m;
        Q = add(Q, P);
    }
    return std::nullopt;
}

/// x-coordinates in F_{p^d} of nonzero n-torsion points, sorted; O is excluded.
inline std::vector<Element> n_torsion_x(const LegendreCurve& C, std::size_t n, unsigned d) {
    if (n == 0) throw Error(Errc::InvalidArgument, "n_torsion_x needs n >= 1");
    const Field& L = Field::get(C.field().characteristic(), d);
    const LegendreCurve CL = C.over(L);
    std::set<Element> xs;
    if (n > 1) {
        DivisionPolySequence seq(CL);
        for (const Element& r : distinct_roots(seq[n].xpart)) xs.insert(r);
    }
    if (n % 2 == 0) {
        xs.insert(L.zero());
        xs.insert(L.one());
        xs.insert(CL.lambda());
    }
    return {xs.begin(), xs.end()};
}

}  // namespace hdflow
