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
 * @file dynamics.hpp
 * @brief Periodic points of self-maps of P^1, their torsion lifts, and Artin–Schreier steps.
 *
 * Fixed points of R^f are read off the divisor N - zD (plus ∞). The divisor is split by
 * squarefree decomposition, which gives multiplicities, and then by distinct-degree
 * factorization, which gives the field of definition of every point. Points whose field is
 * too large to construct are kept as degree bookkeeping only.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hdflow/elliptic.hpp"
#include "hdflow/field.hpp"
#include "hdflow/poly.hpp"
#include "hdflow/rational.hpp"
#include "hdflow/roots.hpp"

namespace hdflow {

/// Fields up to this order are used to write down periodic points explicitly.
inline constexpr std::uint64_t kMaxResolveOrder = 1ull << 40;

namespace detail {

inline std::uint64_t checked_power(std::uint64_t base, unsigned e, std::uint64_t limit) {
    unsigned __int128 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        r *= base;
        if (r > limit) return limit + 1;
    }
    return static_cast<std::uint64_t>(r);
}

inline RationalMap embed_map(const RationalMap& R, const Field& L) {
    if (&R.field() == &L) return R;
    const Embedding& e = embedding(R.field(), L);
    return canonicalize(e(R.num()), e(R.den()));
}

}  // namespace detail

struct CensusPoint {
    ProjPoint point;  // lives in F_{p^field_degree}
    unsigned multiplicity;
    unsigned field_degree;  // over F_p
    unsigned exact_period;
};

/// Irreducible content that was counted but not written down pointwise.
struct UnresolvedGroup {
    unsigned field_degree;  // over F_p
    unsigned multiplicity;
    std::uint64_t point_count;
};

struct PeriodicCensus {
    unsigned p;
    unsigned period;
    RationalMap map;
    std::vector<CensusPoint> points;  // sorted by (field degree, value), ∞ last
    std::vector<UnresolvedGroup> unresolved;
    Poly fixed_squarefree;  // product of the distinct finite fixed points' minimal polynomials
    std::uint64_t total_with_multiplicity;
    std::uint64_t distinct;
    std::uint64_t expected;  // deg(map)^f + 1

    bool pass() const noexcept { return total_with_multiplicity == expected; }
};

/// Exact period of z under R, the least e | f with R^e(z) = z.
inline unsigned exact_period(const RationalMap& RL, const ProjPoint& z, unsigned f) {
    ProjPoint w = z;
    for (unsigned e = 1; e <= f; ++e) {
        w = RL.eval(w);
        if (w == z && f % e == 0) return e;
    }
    return 0;
}

inline PeriodicCensus periodic_census(const RationalMap& R, unsigned f, std::uint64_t cap = kDefaultDegreeCap) {
    const Field& K = R.field();
    const unsigned p = K.characteristic();
    const RationalMap It = iterate_map(R, f, cap);
    const FixedPointDivisor D = fixed_point_divisor(It);

    PeriodicCensus out{p, f, R, {}, {}, Poly(K, {1}), D.total(), 0, 0};
    unsigned __int128 expected = 1;
    for (unsigned i = 0; i < f; ++i) expected *= static_cast<unsigned>(R.degree());
    out.expected = static_cast<std::uint64_t>(expected) + 1;

    std::map<const Field*, RationalMap> maps;
    auto map_over = [&](const Field& L) -> const RationalMap& {
        auto it = maps.find(&L);
        if (it == maps.end()) it = maps.emplace(&L, detail::embed_map(R, L)).first;
        return it->second;
    };

    if (D.finite.degree() > 0) {
        for (const auto& [mult, S] : squarefree_decomposition(D.finite)) {
            out.fixed_squarefree = out.fixed_squarefree * S;
            for (const auto& [k, G] : distinct_degree_factorization(S)) {
                const unsigned deg = k * K.degree();
                const auto count = static_cast<std::uint64_t>(G.degree());
                out.distinct += count;
                if (detail::checked_power(p, deg, kMaxResolveOrder) > kMaxResolveOrder) {
                    out.unresolved.push_back({deg, mult, count});
                    continue;
                }
                const Field& L = Field::get(p, deg);
                const RationalMap& RL = map_over(L);
                for (const Element& r : roots_of_equal_degree(G, k, L))
                    out.points.push_back({ProjPoint(r), mult, field_of_definition_degree(r), exact_period(RL, ProjPoint(r), f)});
            }
        }
    }
    if (D.infinity_fixed) {
        out.distinct += 1;
        out.points.push_back({ProjPoint::infinity(K), D.infinity_multiplicity, 1, exact_period(R, ProjPoint::infinity(K), f)});
    }
    std::stable_sort(out.points.begin(), out.points.end(), [](const CensusPoint& a, const CensusPoint& b) {
        if (a.point.is_infinity() != b.point.is_infinity()) return b.point.is_infinity();
        if (a.field_degree != b.field_degree) return a.field_degree < b.field_degree;
        if (a.point.is_infinity()) return false;
        return a.point.value().value() < b.point.value().value();
    });
    return out;
}

struct SeparabilityReport {
    std::uint64_t distinct;
    std::uint64_t total;
    std::map<unsigned, std::uint64_t> multiplicity_profile;  // multiplicity -> number of points
    bool all_simple() const noexcept { return distinct == total; }
};

inline SeparabilityReport separability_report(const RationalMap& R, unsigned f, std::uint64_t cap = kDefaultDegreeCap) {
    const FixedPointDivisor D = fixed_point_divisor(iterate_map(R, f, cap));
    SeparabilityReport rep{0, D.total(), {}};
    if (D.finite.degree() > 0) {
        for (const auto& [mult, S] : squarefree_decomposition(D.finite)) {
            rep.multiplicity_profile[mult] += static_cast<std::uint64_t>(S.degree());
            rep.distinct += static_cast<std::uint64_t>(S.degree());
        }
    }
    if (D.infinity_fixed) {
        rep.multiplicity_profile[D.infinity_multiplicity] += 1;
        rep.distinct += 1;
    }
    return rep;
}

struct TorsionReport {
    ProjPoint z;
    std::optional<CurvePoint> lift;
    unsigned lift_field_degree;
    std::optional<std::uint64_t> order;
    bool divides_minus;  // order | p^f - 1
    bool divides_plus;   // order | p^f + 1

    bool consistent() const noexcept { return order && (divides_minus || divides_plus); }
};

struct TorsionCorrespondence {
    unsigned p;
    unsigned f;
    Element lambda;
    std::vector<TorsionReport> forward;
    std::set<std::uint64_t> orders;
    std::size_t torsion_x_count;     // distinct x of nonzero (p^f ± 1)-torsion
    std::size_t torsion_x_periodic;  // how many of them are census points
    std::vector<std::string> violations;

    bool forward_ok() const {
        for (const auto& r : forward)
            if (!r.consistent()) return false;
        return true;
    }
    bool converse_ok() const noexcept { return torsion_x_periodic == torsion_x_count; }
    bool pass() const { return violations.empty(); }
};

/// Lifts z to a point of C_λ over the field of z or its quadratic extension.
inline std::pair<std::optional<CurvePoint>, unsigned> lift_to_curve(const LegendreCurve& C, const ProjPoint& z) {
    if (z.is_infinity()) return {CurvePoint::identity(C), C.field().degree()};
    const Field& L = z.field();
    const unsigned p = L.characteristic();
    const unsigned k = std::lcm(L.degree(), C.field().degree());
    for (unsigned d : {k, 2 * k}) {
        if (detail::checked_power(p, d, kMaxFieldOrder) > kMaxFieldOrder) break;
        const Field& M = Field::get(p, d);
        const LegendreCurve CM = C.over(M);
        if (auto P = lift_x(CM, embedding(L, M)(z.value()))) return {*P, d};
    }
    return {std::nullopt, 0};
}

/**
 * Both directions of the torsion correspondence for a census of x∘[p^f]-type dynamics: every
 * periodic point lifts to torsion of order dividing p^f ± 1, and every x-coordinate of nonzero
 * (p^f ± 1)-torsion is among the census points.
 */
inline TorsionCorrespondence torsion_correspondence(const Element& lambda, const PeriodicCensus& census) {
    const unsigned p = census.p, f = census.period;
    const LegendreCurve C(lambda);
    const std::uint64_t q = detail::checked_power(p, f, kMaxFieldOrder);
    TorsionCorrespondence out{p, f, lambda, {}, {}, 0, 0, {}};
    const std::uint64_t bound = q + 3;

    for (const auto& cp : census.points) {
        auto [P, deg] = lift_to_curve(C, cp.point);
        TorsionReport rep{cp.point, P, deg, std::nullopt, false, false};
        if (!P) {
            out.violations.push_back("no curve point over the periodic point " + [&] {
                std::ostringstream os;
                os << cp.point;
                return os.str();
            }());
            out.forward.push_back(std::move(rep));
            continue;
        }
        rep.order = torsion_order(*P, bound);
        if (rep.order) {
            rep.divides_minus = (q - 1) % *rep.order == 0;
            rep.divides_plus = (q + 1) % *rep.order == 0;
            out.orders.insert(*rep.order);
        }
        if (!rep.consistent()) {
            std::ostringstream os;
            os << "periodic point " << cp.point << " lifts to "
               << (rep.order ? "order " + std::to_string(*rep.order) : std::string("order beyond bound"))
               << ", dividing neither " << q - 1 << " nor " << q + 1;
            out.violations.push_back(os.str());
        }
        out.forward.push_back(std::move(rep));
    }
    for (const auto& g : census.unresolved)
        out.violations.push_back(std::to_string(g.point_count) + " periodic points over F_{p^" + std::to_string(g.field_degree) +
                                 "} were not resolved");

    // converse: x-coordinates of (q ± 1)-torsion as roots of division polynomials
    const Field& K = C.field();
    DivisionPolySequence seq(C);
    const Poly z = Poly::x(K), one(K, {1});
    const Poly T = squarefree_part(seq[q - 1].xpart * seq[q + 1].xpart * (z * (z - one) * Poly::linear(lambda)));
    out.torsion_x_count = static_cast<std::size_t>(T.degree());
    if (&census.fixed_squarefree.field() != &K)
        throw Error(Errc::FieldMismatch, "census and curve are defined over different fields");
    const Poly common = gcd(T, census.fixed_squarefree);
    out.torsion_x_periodic = static_cast<std::size_t>(common.degree());
    if (!out.converse_ok())
        out.violations.push_back(std::to_string(out.torsion_x_count - out.torsion_x_periodic) +
                                 " torsion x-coordinates are not periodic");
    return out;
}

enum class EvaluationPoint { FrobeniusImage, Point };

/// ψ′ at z̄^p (default) or z̄, computed in affine charts at both ends.
inline Element deformation_coefficient(const RationalMap& psi, const ProjPoint& zbar,
                                       EvaluationPoint where = EvaluationPoint::FrobeniusImage) {
    const Field& L = zbar.field();
    const RationalMap psiL = detail::embed_map(psi, L);
    ProjPoint pt = zbar;
    if (where == EvaluationPoint::FrobeniusImage && !zbar.is_infinity()) pt = ProjPoint(frobenius(zbar.value()));
    const Poly x = Poly::x(L), one(L, {1});
    RationalMap local = psiL;
    Element u0 = L.zero();
    if (pt.is_infinity()) {
        local = psiL.compose(canonicalize(one, x));
    } else {
        u0 = pt.value();
    }
    if (local.eval(ProjPoint(u0)).is_infinity()) local = canonicalize(local.den(), local.num());
    const ProjPoint a = local.derivative().eval(ProjPoint(u0));
    if (a.is_infinity()) throw Error(Errc::InvalidArgument, "derivative has a pole at the evaluation point");
    return a.value();
}

/// One Artin–Schreier step a·z^p - z + b = 0 over the field K of a and b.
struct LiftStep {
    Element a, b;
    std::vector<Element> base_solutions;  // in K
    unsigned first_solution_degree;       // [K(z):K] minimized over solutions
    unsigned splitting_degree;            // [K(all solutions):K]
    unsigned gamma_degree;                // [K(γ):K] with a·γ^{p-1} = 1; 0 when a = 0
    std::optional<bool> trace_zero;       // Tr(b/γ) = 0 over K(γ), when K(γ) is constructible
    std::optional<std::vector<Element>> solutions;  // all solutions in the splitting field
};

namespace detail {

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

/// Smallest e with c a (p-1)-th power in the degree-e extension of c's field.
inline unsigned root_extension_degree(const Element& c) {
    const Field& K = c.field();
    const std::uint64_t p = K.characteristic(), q = K.order();
    const std::uint64_t ord = multiplicative_order(c);
    for (unsigned e = 1;; ++e) {
        // c = x^{p-1} is solvable in a cyclic group of order Q - 1 iff ord(c)·gcd(p-1, Q-1) | Q - 1
        const std::uint64_t g = std::gcd(p - 1, (powmod_u64(q, e, p - 1) + (p - 1) - 1) % (p - 1));
        if (ord > UINT64_MAX / 2 / g) throw Error(Errc::FieldTooLarge, "multiplicative order too large");
        const std::uint64_t modulus = ord * g;
        if (powmod_u64(q, e, modulus) == 1 % modulus) return e;
    }
}

}  // namespace detail

inline LiftStep artin_schreier_solve(const Element& a, const Element& b) {
    const Field& K = a.field();
    if (&b.field() != &K) throw Error(Errc::FieldMismatch, "a and b must lie in the same field");
    const unsigned p = K.characteristic();
    if (a.is_zero()) return {a, b, {b}, 1, 1, 0, std::nullopt, std::vector<Element>{b}};

    std::vector<Coeff> c(p + 1, 0);
    c[0] = b.value();
    c[1] = K.neg(1);
    c[p] = a.value();
    const Poly P(K, std::move(c));
    LiftStep out{a, b, distinct_roots(P), 0, 1, 0, std::nullopt, std::nullopt};
    unsigned first = 0;
    for (const auto& [k, g] : distinct_degree_factorization(P)) {
        if (first == 0 || k < first) first = k;
        out.splitting_degree = std::lcm(out.splitting_degree, k);
    }
    out.first_solution_degree = first;
    out.gamma_degree = detail::root_extension_degree(a.inverse());

    const unsigned f = K.degree();
    if (detail::checked_power(p, f * out.gamma_degree, kMaxFieldOrder) <= kMaxFieldOrder) {
        const Field& G = Field::get(p, f * out.gamma_degree);
        const Embedding& e = embedding(K, G);
        std::vector<Coeff> m(p, 0);
        m[0] = G.neg(e(a.inverse()).value());
        m[p - 1] = 1;
        const auto gammas = distinct_roots(Poly(G, std::move(m)));
        if (gammas.empty()) throw Error(Errc::InvalidArgument, "no (p-1)-th root in the predicted extension");
        const Element cc = e(b) / gammas.front();
        out.trace_zero = trace_to_prime(cc).is_zero();
        const unsigned predicted = out.gamma_degree * (*out.trace_zero ? 1 : p);
        if (predicted != out.splitting_degree)
            throw Error(Errc::InvalidArgument, "normalized trace test disagrees with the factorization");
    }
    if (detail::checked_power(p, f * out.splitting_degree, kMaxFieldOrder) <= kMaxFieldOrder) {
        const Field& S = Field::get(p, f * out.splitting_degree);
        auto sols = distinct_roots(embedding(K, S)(P));
        if (sols.size() != p) throw Error(Errc::InvalidArgument, "splitting field does not contain p solutions");
        out.solutions = std::move(sols);
    }
    return out;
}

struct TowerStep {
    unsigned step;
    unsigned degree;  // of the current field over the starting field
    Element b;
    std::size_t solutions_in_current;
    unsigned next_degree;
    unsigned splitting_degree;
    bool grew_by_p;
};

struct TowerTrajectory {
    std::vector<TowerStep> steps;
    bool truncated = false;
    std::string reason;
};

/// Supplies b for a step, given the current field and step index.
using BSource = std::function<Element(const Field&, unsigned)>;

/**
 * Iterates Artin–Schreier steps, moving at each step to the smallest extension where a
 * solution exists. The field degree therefore grows by [K(z):K] per step.
 */
inline TowerTrajectory lifting_tower_sim(const Element& a, const BSource& b_source, unsigned steps) {
    const Field& K = a.field();
    const unsigned p = K.characteristic(), f = K.degree();
    TowerTrajectory out;
    unsigned h = 1;
    for (unsigned i = 0; i < steps; ++i) {
        const Field& cur = Field::get(p, f * h);
        const Element ac = embedding(K, cur)(a);
        const Element b = b_source(cur, i);
        const LiftStep s = artin_schreier_solve(ac, b);
        const unsigned next = h * s.first_solution_degree;
        out.steps.push_back({i, h, b, s.base_solutions.size(), next, s.splitting_degree, s.first_solution_degree == p});
        if (detail::checked_power(p, f * next, kMaxFieldOrder) > kMaxFieldOrder) {
            out.truncated = true;
            out.reason = "next field exceeds the supported size";
            break;
        }
        h = next;
    }
    return out;
}

enum class BMode { Zero, Random, Traced };

/// b-sources for the simulator. Traced picks the first basis element t^i with no solution in the
/// current field, or 1 when every b is solvable.
inline BSource make_b_source(BMode mode, const Element& a, std::uint64_t seed) {
    switch (mode) {
        case BMode::Zero:
            return [](const Field& F, unsigned) { return F.zero(); };
        case BMode::Random: {
            auto rng = std::make_shared<std::mt19937_64>(seed);
            return [rng](const Field& F, unsigned) { return F.element((*rng)() % F.order()); };
        }
        case BMode::Traced:
        default: {
            const Field& K = a.field();
            return [a, &K](const Field& F, unsigned) {
                const Element ac = embedding(K, F)(a);
                // the solvable b form an F_p-subspace; if it is proper it misses some basis vector t^i
                Coeff v = 1;
                for (unsigned i = 0; i < F.degree(); ++i, v *= F.characteristic()) {
                    std::vector<Coeff> c(F.characteristic() + 1, 0);
                    c[0] = v;
                    c[1] = F.neg(1);
                    c[F.characteristic()] = ac.value();
                    if (distinct_roots(Poly(F, std::move(c))).empty()) return F.element(v);
                }
                return F.one();
            };
        }
    }
}

}  // namespace hdflow
