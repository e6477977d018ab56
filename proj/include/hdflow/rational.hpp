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
 * @file rational.hpp
 * @brief Points of P^1 and rational self-maps of P^1 in canonical form.
 *
 * A RationalMap N/D is canonical when gcd(N, D) = 1 and D is monic and nonzero. Two maps agree
 * as functions on P^1 over the algebraic closure exactly when their canonical forms coincide,
 * so equality of maps is plain equality of coefficient vectors.
 */

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <set>
#include <utility>
#include <vector>

#include "hdflow/field.hpp"
#include "hdflow/poly.hpp"

namespace hdflow {

/// A point of P^1: an element of the field or the distinguished point ∞.
class ProjPoint {
   public:
    ProjPoint(const Element& z) : field_(&z.field()), z_(z) {}  // NOLINT: implicit by design of P^1 ⊃ A^1
    static ProjPoint infinity(const Field& F) {
        ProjPoint pt(F.zero());
        pt.inf_ = true;
        return pt;
    }

    bool is_infinity() const noexcept { return inf_; }
    const Field& field() const noexcept { return *field_; }
    const Element& value() const {
        if (inf_) throw Error(Errc::InvalidArgument, "the point at infinity has no affine coordinate");
        return z_;
    }

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) noexcept {
        if (a.field_ != b.field_ || a.inf_ != b.inf_) return false;
        return a.inf_ || a.z_ == b.z_;
    }
    /// Finite points in canonical element order, then ∞.
    friend std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b) noexcept {
        if (a.inf_ != b.inf_) return a.inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
        if (a.inf_) return std::strong_ordering::equal;
        return a.z_ <=> b.z_;
    }

   private:
    const Field* field_;
    Element z_;
    bool inf_ = false;
};

inline std::ostream& operator<<(std::ostream& os, const ProjPoint& pt) {
    if (pt.is_infinity()) return os << "inf";
    const auto c = pt.value().coefficients();
    if (c.size() == 1) return os << c[0];
    os << "[";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    return os << "]";
}

class RationalMap;
RationalMap canonicalize(Poly N, Poly D);

class RationalMap {
   public:
    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    const Field& field() const noexcept { return num_.field(); }
    int degree() const noexcept { return std::max(std::max(num_.degree(), den_.degree()), 0); }

    static RationalMap identity(const Field& F) { return canonicalize(Poly::x(F), Poly(F, {1})); }
    static RationalMap polynomial(const Poly& P) { return canonicalize(P, Poly(P.field(), {1})); }

    ProjPoint eval(const ProjPoint& z) const {
        if (&z.field() != &field()) throw Error(Errc::FieldMismatch, "evaluation point lives in another field");
        if (z.is_infinity()) {
            if (num_.degree() > den_.degree()) return ProjPoint::infinity(field());
            if (num_.degree() < den_.degree()) return ProjPoint(field().zero());
            return ProjPoint(num_.lead() / den_.lead());
        }
        const Element d = den_.eval(z.value());
        if (d.is_zero()) return ProjPoint::infinity(field());
        return ProjPoint(num_.eval(z.value()) / d);
    }

    /// this ∘ inner.
    RationalMap compose(const RationalMap& inner) const {
        const int d = degree();
        const Field& F = field();
        std::vector<Poly> pn{Poly(F, {1})}, pd{Poly(F, {1})};
        for (int i = 1; i <= d; ++i) {
            pn.push_back(pn.back() * inner.num_);
            pd.push_back(pd.back() * inner.den_);
        }
        Poly n(F), m(F);
        for (int i = 0; i <= d; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const Element a = num_.coeff(ui), b = den_.coeff(ui);
            if (a.is_zero() && b.is_zero()) continue;
            const Poly term = pn[ui] * pd[static_cast<std::size_t>(d - i)];
            if (!a.is_zero()) n += term * a;
            if (!b.is_zero()) m += term * b;
        }
        return canonicalize(std::move(n), std::move(m));
    }

    /// Derivative as a rational function: (N'D - ND') / D^2.
    RationalMap derivative() const {
        return canonicalize(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    bool is_identically_zero() const noexcept { return num_.is_zero(); }

    friend bool operator==(const RationalMap& a, const RationalMap& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

   private:
    RationalMap(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {}
    friend RationalMap canonicalize(Poly N, Poly D);

    Poly num_, den_;
};

/// Removes the common factor of N and D and makes D monic.
inline RationalMap canonicalize(Poly N, Poly D) {
    if (&N.field() != &D.field()) throw Error(Errc::FieldMismatch, "numerator and denominator in different fields");
    if (N.is_zero() && D.is_zero()) throw Error(Errc::BothZero, "0/0 is not a rational map");
    if (D.is_zero()) throw Error(Errc::DivisionByZeroPoly, "denominator is zero");
    if (N.is_zero()) return RationalMap(std::move(N), Poly(D.field(), {1}));
    const Poly g = gcd(N, D);
    if (g.degree() > 0) {
        N = N / g;
        D = D / g;
    }
    const Element inv = D.lead().inverse();
    return RationalMap(N * inv, D * inv);
}

// Arithmetic of rational functions; results are canonical.
inline RationalMap operator+(const RationalMap& a, const RationalMap& b) {
    return canonicalize(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}
inline RationalMap operator-(const RationalMap& a, const RationalMap& b) {
    return canonicalize(a.num() * b.den() - b.num() * a.den(), a.den() * b.den());
}
inline RationalMap operator*(const RationalMap& a, const RationalMap& b) {
    return canonicalize(a.num() * b.num(), a.den() * b.den());
}
inline RationalMap operator-(const RationalMap& a) { return canonicalize(-a.num(), a.den()); }
/// a / b; b must not be the zero function.
inline RationalMap divide(const RationalMap& a, const RationalMap& b) {
    if (b.is_identically_zero()) throw Error(Errc::DivisionByZeroPoly, "division by the zero function");
    return canonicalize(a.num() * b.den(), a.den() * b.num());
}
inline RationalMap constant_map(const Element& c) { return RationalMap::polynomial(Poly::constant(c)); }

/// Order of vanishing at a finite point x (negative for poles); the zero function gives INT_MAX.
inline int order_at(const RationalMap& R, const Element& x) {
    if (R.is_identically_zero()) return std::numeric_limits<int>::max();
    auto multiplicity = [&](Poly P) {
        int k = 0;
        const Poly lin = Poly::linear(x);
        for (;;) {
            auto [q, r] = divrem(P, lin);
            if (!r.is_zero()) return k;
            P = std::move(q);
            ++k;
        }
    };
    return multiplicity(R.num()) - multiplicity(R.den());
}

/// Order of vanishing at ∞: deg D - deg N.
inline int order_at_infinity(const RationalMap& R) {
    if (R.is_identically_zero()) return std::numeric_limits<int>::max();
    return R.den().degree() - R.num().degree();
}

inline ProjPoint eval_proj(const RationalMap& R, const ProjPoint& z) { return R.eval(z); }

inline std::ostream& operator<<(std::ostream& os, const RationalMap& R) {
    return os << "(" << R.num() << ") / (" << R.den() << ")";
}

/// R(z^p).
inline RationalMap precompose_frobenius(const RationalMap& R) {
    const Field& F = R.field();
    const std::size_t p = F.characteristic();
    auto spread = [&](const Poly& P) {
        std::vector<Coeff> c(P.is_zero() ? 0 : static_cast<std::size_t>(P.degree()) * p + 1, 0);
        for (std::size_t i = 0; i < P.size(); ++i) c[i * p] = P.raw()[i];
        return Poly(F, std::move(c));
    };
    return canonicalize(spread(R.num()), spread(R.den()));
}

/// The map ψ with ψ(z^p) = R(z). Throws NotFrobeniusComposite when some exponent of the
/// canonical numerator or denominator is not divisible by p.
inline RationalMap frobenius_decompose(const RationalMap& R) {
    const Field& F = R.field();
    const std::size_t p = F.characteristic();
    auto squeeze = [&](const Poly& P, const char* which) {
        std::vector<Coeff> c;
        for (std::size_t i = 0; i < P.size(); ++i) {
            if (i % p == 0) {
                c.push_back(P.raw()[i]);
            } else if (P.raw()[i] != 0) {
                throw Error(Errc::NotFrobeniusComposite,
                            std::string(which) + " has a nonzero coefficient at exponent " + std::to_string(i));
            }
        }
        return Poly(F, std::move(c));
    };
    return canonicalize(squeeze(R.num(), "numerator"), squeeze(R.den(), "denominator"));
}

/**
 * Cauchy interpolation: the unique canonical map of degree ≤ d through the samples.
 *
 * Needs at least 2d + 2 samples at distinct finite abscissae; samples at ∞ are only used for the
 * final verification. Infinite sample values are moved to 0 by the Möbius change y ↦ 1/(y - t),
 * with t the first element (canonical order) not taken by any finite value.
 */
inline RationalMap interpolate_rational(const std::vector<std::pair<ProjPoint, ProjPoint>>& samples, int d) {
    if (samples.empty() || d < 0) throw Error(Errc::InsufficientSamples, "no samples");
    const Field& F = samples.front().first.field();
    std::vector<std::pair<Element, ProjPoint>> finite;
    std::set<Coeff> seen;
    for (const auto& [x, y] : samples) {
        if (&x.field() != &F || &y.field() != &F) throw Error(Errc::FieldMismatch, "samples in mixed fields");
        if (x.is_infinity()) continue;
        if (!seen.insert(x.value().value()).second) {
            for (const auto& [x2, y2] : finite)
                if (x2 == x.value() && !(y2 == y)) throw Error(Errc::InconsistentSamples, "two values at the same abscissa");
            continue;
        }
        finite.emplace_back(x.value(), y);
    }
    const std::size_t n = finite.size();
    if (n < static_cast<std::size_t>(2 * d + 2))
        throw Error(Errc::InsufficientSamples,
                    std::to_string(n) + " distinct finite samples, need " + std::to_string(2 * d + 2));

    bool any_inf = false;
    std::set<Coeff> values;
    for (const auto& [x, y] : finite) {
        if (y.is_infinity())
            any_inf = true;
        else
            values.insert(y.value().value());
    }
    Element shift = F.zero();
    if (any_inf) {
        Coeff t = 0;
        while (t < F.order() && values.count(t)) ++t;
        if (t == F.order()) throw Error(Errc::InsufficientSamples, "no free value for the Möbius shift");
        shift = F.element(t);
    }
    std::vector<Element> xs, ys;
    for (const auto& [x, y] : finite) {
        xs.push_back(x);
        if (!any_inf)
            ys.push_back(y.value());
        else
            ys.push_back(y.is_infinity() ? F.zero() : (y.value() - shift).inverse());
    }

    // Lagrange form L with L(x_i) = y_i, and M = Π (x - x_i).
    Poly M(F, {1});
    for (const auto& x : xs) M = M * Poly::linear(x);
    const Poly dM = M.derivative();
    Poly L(F);
    for (std::size_t i = 0; i < n; ++i) {
        if (ys[i].is_zero()) continue;
        const Poly basis = M / Poly::linear(xs[i]);
        L += basis * (ys[i] / dM.eval(xs[i]));
    }

    // Extended Euclid on (M, L), stop at the first remainder of degree ≤ d.
    Poly r0 = M, r1 = L, t0(F), t1(F, {1});
    while (r1.degree() > d) {
        auto [q, r] = divrem(r0, r1);
        Poly t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (t1.degree() > d || t1.is_zero()) throw Error(Errc::InconsistentSamples, "no map of degree ≤ d fits the samples");
    for (const auto& x : xs)
        if (t1.eval(x).is_zero()) throw Error(Errc::InconsistentSamples, "reconstructed denominator vanishes at a sample");
    RationalMap S = canonicalize(r1, t1);
    RationalMap R = S;
    if (any_inf) {
        // R = shift + 1/S
        R = canonicalize(S.num() * shift + S.den(), S.num());
    }
    if (R.degree() > d) throw Error(Errc::InconsistentSamples, "reconstruction exceeds the degree bound");
    for (const auto& [x, y] : samples)
        if (!(R.eval(x) == y)) throw Error(Errc::InconsistentSamples, "reconstructed map misses a sample");
    return R;
}

inline constexpr std::uint64_t kDefaultDegreeCap = 100000;

/// R∘R∘...∘R (n times), canonical.
inline RationalMap iterate_map(const RationalMap& R, unsigned n, std::uint64_t cap = kDefaultDegreeCap) {
    if (n == 0) throw Error(Errc::InvalidArgument, "iteration count must be positive");
    unsigned __int128 deg = 1;
    for (unsigned i = 0; i < n; ++i) {
        deg *= static_cast<unsigned>(R.degree());
        if (deg > cap)
            throw Error(Errc::DegreeOverflow, "iterate degree exceeds cap " + std::to_string(cap));
    }
    RationalMap acc = R;
    for (unsigned i = 1; i < n; ++i) acc = R.compose(acc);
    return acc;
}

/// Fixed points of a map: the finite part N - zD and the bookkeeping at ∞ from the chart w = 1/z.
struct FixedPointDivisor {
    Poly finite;
    bool infinity_fixed = false;
    unsigned infinity_multiplicity = 0;

    std::uint64_t total() const noexcept {
        return static_cast<std::uint64_t>(std::max(finite.degree(), 0)) + infinity_multiplicity;
    }
};

inline FixedPointDivisor fixed_point_divisor(const RationalMap& R) {
    const Field& F = R.field();
    Poly finite = R.num() - Poly::x(F) * R.den();
    if (finite.is_zero()) throw Error(Errc::InvalidArgument, "the identity map fixes every point");
    // In the chart w = 1/z the map is w ↦ Drev(w)/Nrev(w); its fixed-point polynomial is Drev - w·Nrev.
    const auto d = static_cast<std::size_t>(R.degree());
    const Poly nrev = R.num().reversed(d), drev = R.den().reversed(d);
    const Poly at_inf = drev - Poly::x(F) * nrev;
    FixedPointDivisor out{std::move(finite), false, 0};
    const int ord = at_inf.low_order();
    if (ord > 0) {
        out.infinity_fixed = true;
        out.infinity_multiplicity = static_cast<unsigned>(ord);
    }
    return out;
}

}  // namespace hdflow
