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
 * @file field.hpp
 * @brief Exact arithmetic in F_p and F_{p^f}.
 *
 * An element of F_{p^f} = F_p[t]/(m(t)) is the residue c_0 + c_1 t + ... + c_{f-1} t^{f-1}.
 * It is stored packed as the integer c_0 + c_1 p + ... + c_{f-1} p^{f-1}, which doubles as
 * the element's position in the canonical enumeration order of the field.
 *
 * Fields are interned: Field::get(p, f) always returns the same object, whose modulus is the
 * least monic irreducible polynomial of degree f in packed order of its lower coefficients.
 * Fields of order at most 2^20 carry discrete log tables; larger ones (up to 2^62) fall back
 * to schoolbook multiplication modulo m(t).
 */

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ranges>
#include <string>
#include <utility>
#include <vector>

#include "hdflow/error.hpp"

namespace hdflow {

using Coeff = std::uint64_t;

inline constexpr std::uint32_t kMaxPrime = 1u << 20;
inline constexpr std::uint64_t kMaxFieldOrder = 1ull << 62;
inline constexpr std::uint64_t kLogTableOrder = 1ull << 20;
inline constexpr unsigned kMaxExtensionDegree = 64;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Distinct prime factors, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Minimal F_p[x] arithmetic on coefficient vectors, used only to pick the modulus.
using PrimePoly = std::vector<std::uint64_t>;

inline void trim(PrimePoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PrimePoly prime_mulmod(const PrimePoly& a, const PrimePoly& b, const PrimePoly& m, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    PrimePoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    const std::size_t f = m.size() - 1;  // m monic
    for (std::size_t i = r.size(); i-- > f;) {
        const std::uint64_t t = r[i];
        if (!t) continue;
        for (std::size_t j = 0; j <= f; ++j) r[i - f + j] = (r[i - f + j] + (p - t) * m[j]) % p;
    }
    trim(r);
    return r;
}

inline PrimePoly prime_powmod(PrimePoly base, std::uint64_t e, const PrimePoly& m, std::uint64_t p) {
    PrimePoly r{1};
    while (e) {
        if (e & 1) r = prime_mulmod(r, base, m, p);
        base = prime_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

inline PrimePoly prime_gcd(PrimePoly a, PrimePoly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        const std::uint64_t inv = inv_mod(b.back(), p);
        while (a.size() >= b.size() && !a.empty()) {
            const std::uint64_t c = a.back() * inv % p;
            const std::size_t shift = a.size() - b.size();
            for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + (p - c) * b[j]) % p;
            trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

/// Rabin's test for a monic polynomial of degree f over F_p.
inline bool prime_irreducible(const PrimePoly& m, std::uint64_t p) {
    const std::size_t f = m.size() - 1;
    if (f == 1) return true;
    if (m[0] == 0) return false;
    std::vector<PrimePoly> frob_powers(f + 1);  // x^{p^i} mod m
    frob_powers[0] = PrimePoly{0, 1};
    for (std::size_t i = 1; i <= f; ++i) frob_powers[i] = prime_powmod(frob_powers[i - 1], p, m, p);
    if (frob_powers[f] != PrimePoly{0, 1}) return false;
    for (std::uint64_t r : prime_factors(f)) {
        PrimePoly h = frob_powers[f / r];
        h.resize(std::max<std::size_t>(h.size(), 2), 0);
        h[1] = (h[1] + p - 1) % p;
        trim(h);
        if (prime_gcd(m, h, p).size() != 1) return false;
    }
    return true;
}

}  // namespace detail

class Element;

/**
 * The finite field F_{p^f} with its deterministic modulus.
 *
 * Arithmetic entry points work on packed values (Coeff); Element wraps them with a field handle.
 * Instances are immutable and never destroyed, so `const Field&` handles stay valid for the
 * lifetime of the process and may be shared across threads.
 */
class Field {
   public:
    static const Field& get(std::uint32_t p, unsigned f);

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

    std::uint32_t characteristic() const noexcept { return p_; }
    unsigned degree() const noexcept { return f_; }
    std::uint64_t order() const noexcept { return q_; }
    bool is_prime_field() const noexcept { return f_ == 1; }
    bool has_log_tables() const noexcept { return !log_.empty(); }
    /// Monic modulus, f + 1 coefficients low to high. The prime field uses x - 0.
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
    const Field& prime_field() const { return get(p_, 1); }

    Element zero() const;
    Element one() const;
    Element element(Coeff packed) const;
    Element from_int(std::int64_t n) const;
    Element from_coefficients(const std::vector<std::uint32_t>& c) const;
    /// The residue class of t, i.e. a root of the modulus.
    Element generator() const;

    Coeff add(Coeff a, Coeff b) const {
        if (f_ == 1) {
            const Coeff s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        Coeff out = 0;
        for (unsigned i = f_; i-- > 0;) {
            const Coeff da = (a / pow_p_[i]) % p_;
            const Coeff db = (b / pow_p_[i]) % p_;
            Coeff s = da + db;
            if (s >= p_) s -= p_;
            out = out * p_ + s;
        }
        return out;
    }

    Coeff neg(Coeff a) const {
        if (f_ == 1) return a == 0 ? 0 : p_ - a;
        Coeff out = 0;
        for (unsigned i = f_; i-- > 0;) {
            const Coeff d = (a / pow_p_[i]) % p_;
            out = out * p_ + (d == 0 ? 0 : p_ - d);
        }
        return out;
    }

    Coeff sub(Coeff a, Coeff b) const { return add(a, neg(b)); }

    Coeff mul(Coeff a, Coeff b) const {
        if (a == 0 || b == 0) return 0;
        if (f_ == 1) return a * b % p_;
        if (!log_.empty()) return exp_[log_[a] + log_[b]];
        return mul_schoolbook(a, b);
    }

    Coeff inv(Coeff a) const {
        if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
        if (f_ == 1) return detail::inv_mod(a, p_);
        if (!log_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
        return pow(a, q_ - 2);
    }

    Coeff pow(Coeff a, std::uint64_t e) const {
        if (e == 0) return 1;
        if (a == 0) return 0;
        if (!log_.empty()) return exp_[detail::mulmod(log_[a], e % (q_ - 1), q_ - 1)];
        Coeff r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    /// x ↦ x^p.
    Coeff frob(Coeff a) const {
        if (f_ == 1) return a;
        return pow(a, p_);
    }

    /// Digit i of the packed value (coefficient of t^i).
    std::uint32_t digit(Coeff a, unsigned i) const { return static_cast<std::uint32_t>((a / pow_p_[i]) % p_); }

   private:
    Field(std::uint32_t p, unsigned f);

    Coeff mul_schoolbook(Coeff a, Coeff b) const {
        std::array<std::uint64_t, kMaxExtensionDegree> da{}, db{};
        std::array<std::uint64_t, 2 * kMaxExtensionDegree> r{};
        for (unsigned i = 0; i < f_; ++i) {
            da[i] = a % p_;
            a /= p_;
            db[i] = b % p_;
            b /= p_;
        }
        for (unsigned i = 0; i < f_; ++i) {
            if (!da[i]) continue;
            for (unsigned j = 0; j < f_; ++j) r[i + j] = (r[i + j] + da[i] * db[j]) % p_;
        }
        for (unsigned i = 2 * f_ - 1; i-- > f_;) {
            const std::uint64_t t = r[i];
            if (!t) continue;
            for (unsigned j = 0; j < f_; ++j) r[i - f_ + j] = (r[i - f_ + j] + (p_ - t) * modulus_[j]) % p_;
        }
        Coeff out = 0;
        for (unsigned i = f_; i-- > 0;) out = out * p_ + r[i];
        return out;
    }

    void build_log_tables();

    std::uint32_t p_;
    unsigned f_;
    std::uint64_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint64_t> pow_p_;
    std::vector<std::uint32_t> log_;
    std::vector<Coeff> exp_;
};

/// An element of a specific Field. Default-constructed elements have no field and are only
/// placeholders for containers.
class Element {
   public:
    Element() = default;
    Element(const Field& field, Coeff packed) : field_(&field), v_(packed) {}

    const Field& field() const {
        if (!field_) throw Error(Errc::InvalidArgument, "element has no field");
        return *field_;
    }
    const Field* field_ptr() const noexcept { return field_; }
    Coeff value() const noexcept { return v_; }
    bool is_zero() const noexcept { return v_ == 0; }
    bool is_one() const noexcept { return v_ == 1; }

    /// Coefficients c_0..c_{f-1} of the residue.
    std::vector<std::uint32_t> coefficients() const {
        std::vector<std::uint32_t> out(field().degree());
        for (unsigned i = 0; i < out.size(); ++i) out[i] = field_->digit(v_, i);
        return out;
    }
    bool in_prime_field() const noexcept { return field_ && v_ < field_->characteristic(); }

    Element operator-() const { return {field(), field_->neg(v_)}; }
    Element& operator+=(const Element& o) {
        check(o);
        v_ = field_->add(v_, o.v_);
        return *this;
    }
    Element& operator-=(const Element& o) {
        check(o);
        v_ = field_->sub(v_, o.v_);
        return *this;
    }
    Element& operator*=(const Element& o) {
        check(o);
        v_ = field_->mul(v_, o.v_);
        return *this;
    }
    Element& operator/=(const Element& o) {
        check(o);
        v_ = field_->mul(v_, field_->inv(o.v_));
        return *this;
    }
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(Element a, const Element& b) { return a *= b; }
    friend Element operator/(Element a, const Element& b) { return a /= b; }

    Element inverse() const { return {field(), field_->inv(v_)}; }
    Element pow(std::uint64_t e) const { return {field(), field_->pow(v_, e)}; }

    friend bool operator==(const Element& a, const Element& b) noexcept {
        return a.field_ == b.field_ && a.v_ == b.v_;
    }
    /// Canonical element order: packed value (fields compared by address first).
    friend std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept {
        if (a.field_ != b.field_) return std::compare_three_way{}(a.field_, b.field_);
        return a.v_ <=> b.v_;
    }

   private:
    void check(const Element& o) const {
        if (!field_ || field_ != o.field_) throw Error(Errc::FieldMismatch, "operands live in different fields");
    }

    const Field* field_ = nullptr;
    Coeff v_ = 0;
};

inline Field::Field(std::uint32_t p, unsigned f) : p_(p), f_(f) {
    pow_p_.assign(f + 1, 1);
    for (unsigned i = 1; i <= f; ++i) pow_p_[i] = pow_p_[i - 1] * p;
    q_ = pow_p_[f];
    if (f == 1) {
        modulus_ = {0, 1};
        return;
    }
    // Least monic irreducible: scan the lower coefficients in packed order.
    detail::PrimePoly m(f + 1, 0);
    m[f] = 1;
    for (std::uint64_t idx = 1; idx < q_; ++idx) {
        std::uint64_t t = idx;
        for (unsigned i = 0; i < f; ++i) {
            m[i] = t % p;
            t /= p;
        }
        if (m[0] == 0) continue;
        if (detail::prime_irreducible(m, p)) break;
    }
    modulus_.assign(m.begin(), m.end());
    if (q_ <= kLogTableOrder) build_log_tables();
}

inline void Field::build_log_tables() {
    const std::uint64_t n = q_ - 1;
    const auto factors = detail::prime_factors(n);
    Coeff g = 0;
    for (Coeff cand = 2; cand < q_; ++cand) {
        bool primitive = true;
        for (std::uint64_t r : factors) {
            Coeff x = 1, b = cand;
            std::uint64_t e = n / r;
            while (e) {
                if (e & 1) x = mul_schoolbook(x, b);
                b = mul_schoolbook(b, b);
                e >>= 1;
            }
            if (x == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            g = cand;
            break;
        }
    }
    exp_.assign(2 * n, 0);
    log_.assign(q_, 0);
    Coeff x = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        exp_[i] = x;
        exp_[i + n] = x;
        log_[x] = static_cast<std::uint32_t>(i);
        x = mul_schoolbook(x, g);
    }
}

inline const Field& Field::get(std::uint32_t p, unsigned f) {
    if (p == 2) throw Error(Errc::EvenPrime, "characteristic 2 is not supported");
    if (!detail::is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (p > kMaxPrime) throw Error(Errc::PrimeTooLarge, std::to_string(p) + " exceeds 2^20");
    if (f < 1) throw Error(Errc::InvalidArgument, "extension degree must be at least 1");
    {
        unsigned __int128 q = 1;
        for (unsigned i = 0; i < f; ++i) {
            q *= p;
            if (q > kMaxFieldOrder || f > kMaxExtensionDegree)
                throw Error(Errc::FieldTooLarge, "F_" + std::to_string(p) + "^" + std::to_string(f) + " exceeds 2^62");
        }
    }
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, unsigned>, std::unique_ptr<Field>> registry;
    const auto key = std::make_pair(p, f);
    {
        std::lock_guard lock(mu);
        if (auto it = registry.find(key); it != registry.end()) return *it->second;
    }
    std::unique_ptr<Field> made(new Field(p, f));
    std::lock_guard lock(mu);
    auto [it, inserted] = registry.emplace(key, std::move(made));
    return *it->second;
}

inline Element Field::zero() const { return {*this, 0}; }
inline Element Field::one() const { return {*this, 1}; }
inline Element Field::element(Coeff packed) const {
    if (packed >= q_) throw Error(Errc::InvalidArgument, "packed value out of range");
    return {*this, packed};
}
inline Element Field::from_int(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return {*this, static_cast<Coeff>(r)};
}
inline Element Field::from_coefficients(const std::vector<std::uint32_t>& c) const {
    if (c.size() > f_) throw Error(Errc::InvalidArgument, "too many coefficients for field degree");
    Coeff out = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] >= p_) throw Error(Errc::InvalidArgument, "coefficient not reduced mod p");
        out = out * p_ + c[i];
    }
    return {*this, out};
}
inline Element Field::generator() const {
    if (f_ == 1) return zero();  // root of x - 0
    return {*this, p_};
}

/// Builds F_{p^f}; f = 1 gives the prime field.
inline const Field& build_field(std::uint32_t p, unsigned f) { return Field::get(p, f); }

inline Element frobenius(const Element& x) { return {x.field(), x.field().frob(x.value())}; }

/// x ↦ x^{p^k}.
inline Element frobenius_power(Element x, unsigned k) {
    const unsigned f = x.field().degree();
    for (unsigned i = 0; i < k % f; ++i) x = frobenius(x);
    return x;
}

/// The unique y with y^p = x, i.e. the Frobenius applied f - 1 times.
inline Element frobenius_inverse(const Element& x) { return frobenius_power(x, x.field().degree() - 1); }

/// Σ_{i<f} x^{p^i}, returned as an element of the prime field.
inline Element trace_to_prime(const Element& x) {
    const Field& F = x.field();
    Element acc = F.zero(), y = x;
    for (unsigned i = 0; i < F.degree(); ++i) {
        acc += y;
        y = frobenius(y);
    }
    if (!acc.in_prime_field()) throw Error(Errc::InvalidArgument, "trace left the prime field");
    return F.prime_field().element(acc.value());
}

/// Π_{i<f} x^{p^i}, returned as an element of the prime field.
inline Element norm_to_prime(const Element& x) {
    const Field& F = x.field();
    const std::uint64_t e = (F.order() - 1) / (F.characteristic() - 1);
    const Element n = x.pow(e);
    return F.prime_field().element(n.value());
}

/// Embeds a prime-field element (or any element with value < p) into another field of the same characteristic.
inline Element lift_prime(const Element& x, const Field& target) {
    if (!x.in_prime_field() || x.field().characteristic() != target.characteristic())
        throw Error(Errc::FieldMismatch, "element is not in the common prime field");
    return target.element(x.value());
}

/// Euler's criterion. Zero counts as a square.
inline bool is_square(const Element& x) {
    if (x.is_zero()) return true;
    return x.pow((x.field().order() - 1) / 2).is_one();
}

/// Both square roots (r, -r) ordered canonically, or nothing for non-squares; 0 ↦ (0, 0).
inline std::optional<std::pair<Element, Element>> sqrt(const Element& x) {
    const Field& F = x.field();
    if (x.is_zero()) return std::make_pair(x, x);
    if (!is_square(x)) return std::nullopt;
    const std::uint64_t q = F.order();
    Element r;
    if (q % 4 == 3) {
        r = x.pow((q + 1) / 4);
    } else {
        // Tonelli–Shanks
        std::uint64_t t = q - 1;
        unsigned s = 0;
        while (t % 2 == 0) {
            t /= 2;
            ++s;
        }
        Element z = F.element(2 % q);
        for (Coeff c = 2; c < q; ++c) {
            z = F.element(c);
            if (!is_square(z)) break;
        }
        Element c = z.pow(t);
        Element tt = x.pow(t);
        r = x.pow((t + 1) / 2);
        unsigned m = s;
        while (!tt.is_one()) {
            unsigned i = 0;
            Element sq = tt;
            while (!sq.is_one()) {
                sq *= sq;
                ++i;
            }
            Element b = c;
            for (unsigned j = 0; j + 1 < m - i; ++j) b *= b;
            m = i;
            c = b * b;
            tt *= c;
            r *= b;
        }
    }
    Element other = -r;
    if (other < r) std::swap(r, other);
    return std::make_pair(r, other);
}

/// Every element of the field in canonical order.
inline auto enumerate(const Field& F) {
    return std::views::iota(Coeff{0}, F.order()) |
           std::views::transform([&F](Coeff v) { return Element(F, v); });
}

/// Whether x lies in the subfield F_{p^d}; d must divide the degree of x's field.
inline bool subfield_member(const Element& x, unsigned d) {
    const unsigned f = x.field().degree();
    if (d == 0 || f % d != 0) throw Error(Errc::DegreeNotDivisor, std::to_string(d) + " does not divide " + std::to_string(f));
    return frobenius_power(x, d) == x;
}

/// Degree over F_p of the smallest subfield containing x.
inline unsigned field_of_definition_degree(const Element& x) {
    const unsigned f = x.field().degree();
    for (unsigned d = 1; d <= f; ++d)
        if (f % d == 0 && subfield_member(x, d)) return d;
    return f;
}

/// Smallest m ≥ 1 with x^m = 1.
inline std::uint64_t multiplicative_order(const Element& x) {
    if (x.is_zero()) throw Error(Errc::InvalidArgument, "zero has no multiplicative order");
    std::uint64_t n = x.field().order() - 1;
    for (std::uint64_t r : detail::prime_factors(n))
        while (n % r == 0 && x.pow(n / r).is_one()) n /= r;
    return n;
}

}  // namespace hdflow
