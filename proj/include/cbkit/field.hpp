#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "cbkit/rng.hpp"

namespace cbkit {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

enum class FieldKind { rationals, prime, extension };

struct field_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    // p prime, a != 0 mod p
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt; nt = tmp;
        tmp = r - q * nr;
        r = nr; nr = tmp;
    }
    if (r != 1) throw field_error("invmod: element not invertible");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d : {2ULL, 3ULL, 5ULL, 7ULL}) {
        if (n % d == 0) return n == d;
    }
    for (std::uint64_t d = 11; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

// Legendre symbol; p odd prime.
inline int legendre(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// Tonelli-Shanks; requires legendre(a, p) == 1 or a == 0.
inline std::uint64_t sqrtmod(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    std::uint64_t q = p - 1, s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    std::uint64_t z = 2;
    while (legendre(z, p) != -1) ++z;
    std::uint64_t m = s;
    std::uint64_t c = powmod(z, q, p);
    std::uint64_t t = powmod(a, q, p);
    std::uint64_t r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

using ResiduePoly = std::vector<std::uint64_t>;  // lowest degree first, reduced mod p

inline void rp_trim(ResiduePoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ResiduePoly rp_mul(const ResiduePoly& a, const ResiduePoly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    ResiduePoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    rp_trim(c);
    return c;
}

// Remainder of a by monic m.
inline ResiduePoly rp_rem(ResiduePoly a, const ResiduePoly& m, std::uint64_t p) {
    rp_trim(a);
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        std::uint64_t lead = a.back();
        std::size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (std::size_t i = 0; i < dm; ++i) {
                std::uint64_t s = mulmod(lead, m[i], p);
                a[shift + i] = (a[shift + i] + p - s) % p;
            }
        }
        a.pop_back();
        rp_trim(a);
    }
    return a;
}

inline ResiduePoly rp_gcd(ResiduePoly a, ResiduePoly b, std::uint64_t p) {
    rp_trim(a);
    rp_trim(b);
    while (!b.empty()) {
        // reduce a mod b (b not necessarily monic)
        std::uint64_t inv = invmod(b.back(), p);
        ResiduePoly bm = b;
        for (auto& c : bm) c = mulmod(c, inv, p);
        a = rp_rem(std::move(a), bm, p);
        std::swap(a, b);
    }
    if (!a.empty()) {
        std::uint64_t inv = invmod(a.back(), p);
        for (auto& c : a) c = mulmod(c, inv, p);
    }
    return a;
}

inline ResiduePoly rp_powmod_xq(const ResiduePoly& m, std::uint64_t p, const mpz_class& e) {
    // x^e mod m, m monic of degree >= 1
    ResiduePoly result{1};
    ResiduePoly base{0, 1};
    base = rp_rem(base, m, p);
    mpz_class exp = e;
    std::vector<bool> bits;
    while (exp > 0) {
        bits.push_back(mpz_odd_p(exp.get_mpz_t()) != 0);
        exp >>= 1;
    }
    for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
        result = rp_rem(rp_mul(result, result, p), m, p);
        if (*it) result = rp_rem(rp_mul(result, base, p), m, p);
    }
    return result;
}

// Rabin irreducibility test over F_p (exact).
inline bool rp_is_irreducible(const ResiduePoly& f, std::uint64_t p) {
    if (f.size() < 2) return false;
    std::size_t k = f.size() - 1;
    if (f.back() != 1) throw field_error("irreducibility test expects a monic polynomial");
    if (k == 1) return true;
    // x^(p^k) == x mod f
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
    ResiduePoly xq = rp_powmod_xq(f, p, pk);
    ResiduePoly x{0, 1};
    if (rp_rem(xq, f, p) != rp_rem(x, f, p)) return false;
    // gcd(x^(p^(k/q)) - x, f) == 1 for each prime q | k
    std::size_t kk = k;
    std::vector<std::size_t> prime_divs;
    for (std::size_t q = 2; q * q <= kk; ++q) {
        if (kk % q == 0) {
            prime_divs.push_back(q);
            while (kk % q == 0) kk /= q;
        }
    }
    if (kk > 1) prime_divs.push_back(kk);
    for (std::size_t q : prime_divs) {
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(k / q));
        ResiduePoly g = rp_powmod_xq(f, p, pe);
        // g - x
        ResiduePoly diff = g;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        rp_trim(diff);
        ResiduePoly d = rp_gcd(diff, f, p);
        if (d.size() != 1) return false;
    }
    return true;
}

}  // namespace detail

class Scalar;

// Immutable field descriptor, shared by all scalars of the field.
class Field : public std::enable_shared_from_this<Field> {
public:
    static FieldPtr rationals() {
        static FieldPtr q(new Field(FieldKind::rationals, 0, 1, {}));
        return q;
    }

    static FieldPtr prime(std::uint64_t p) {
        check_char(p);
        return FieldPtr(new Field(FieldKind::prime, p, 1, {}));
    }

    // Extension with an explicit monic irreducible minpoly (lowest degree first,
    // length k+1, leading coefficient 1).
    static FieldPtr extension(std::uint64_t p, const std::vector<std::uint64_t>& minpoly) {
        check_char(p);
        if (minpoly.size() < 3) throw field_error("extension degree must be >= 2");
        detail::ResiduePoly m = minpoly;
        for (auto& c : m) c %= p;
        if (m.back() != 1) throw field_error("minpoly must be monic");
        if (!detail::rp_is_irreducible(m, p))
            throw field_error("minpoly is not irreducible over F_p");
        return FieldPtr(new Field(FieldKind::extension, p, static_cast<unsigned>(m.size() - 1), m));
    }

    // Deterministic extension of degree k: first monic irreducible in
    // lexicographic order on the coefficient tuple (c_0, ..., c_{k-1}).
    static FieldPtr extension(std::uint64_t p, unsigned k) {
        check_char(p);
        if (k == 0) throw field_error("extension degree must be >= 1");
        if (k == 1) return prime(p);
        detail::ResiduePoly m(k + 1, 0);
        m[k] = 1;
        // every candidate with c_0 = 0 is divisible by x, so the scan can
        // start at (1, 0, ..., 0) without changing the first hit
        m[0] = 1;
        for (;;) {
            if (detail::rp_is_irreducible(m, p))
                return FieldPtr(new Field(FieldKind::extension, p, k, m));
            // lexicographic increment of (c_0, ..., c_{k-1})
            std::size_t i = k;
            while (i > 0) {
                --i;
                if (++m[i] < p) break;
                m[i] = 0;
            }
            if (i == 0 && m[0] == 0) throw field_error("no irreducible polynomial found");
        }
    }

    FieldKind kind() const { return kind_; }
    std::uint64_t characteristic() const { return p_; }
    std::uint64_t p() const { return p_; }
    unsigned ext_degree() const { return k_; }
    const std::vector<std::uint64_t>& minpoly() const { return minpoly_; }
    bool finite() const { return kind_ != FieldKind::rationals; }

    // Field cardinality for finite fields (as an exact integer).
    mpz_class cardinality() const {
        if (!finite()) throw field_error("cardinality of an infinite field");
        mpz_class q;
        mpz_ui_pow_ui(q.get_mpz_t(), p_, k_);
        return q;
    }

    bool same(const Field& other) const {
        if (this == &other) return true;
        return kind_ == other.kind_ && p_ == other.p_ && k_ == other.k_ &&
               minpoly_ == other.minpoly_;
    }

    Scalar zero() const;
    Scalar one() const;
    Scalar from_int(long v) const;
    Scalar from_residues(std::vector<std::uint64_t> coeffs) const;  // extension element
    Scalar generator() const;  // x mod minpoly (extension fields)
    Scalar parse(const std::string& s) const;
    Scalar random(Rng& rng) const;  // uniform element (finite fields only)

private:
    Field(FieldKind kind, std::uint64_t p, unsigned k, detail::ResiduePoly minpoly)
        : kind_(kind), p_(p), k_(k), minpoly_(std::move(minpoly)) {}

    static void check_char(std::uint64_t p) {
        if (p < 3) throw field_error("characteristic must be an odd prime >= 3");
        if (!detail::is_prime_u64(p)) throw field_error("modulus is not prime");
    }

    FieldKind kind_;
    std::uint64_t p_;
    unsigned k_;
    detail::ResiduePoly minpoly_;
};

// Exact field element. Rationals are kept in lowest terms with positive
// denominator (mpq canonical form); residues reduced mod p.
class Scalar {
public:
    Scalar() = default;

    Scalar(FieldPtr field, mpq_class v) : field_(std::move(field)), v_(std::move(v)) {
        std::get<mpq_class>(v_).canonicalize();
    }
    Scalar(FieldPtr field, std::uint64_t r) : field_(std::move(field)), v_(r % field_->p()) {}
    Scalar(FieldPtr field, detail::ResiduePoly coeffs)
        : field_(std::move(field)), v_(std::move(coeffs)) {
        auto& c = std::get<detail::ResiduePoly>(v_);
        c.resize(field_->ext_degree(), 0);
        for (auto& x : c) x %= field_->p();
    }

    const FieldPtr& field() const { return field_; }
    bool valid() const { return static_cast<bool>(field_); }

    bool is_zero() const {
        switch (field_->kind()) {
            case FieldKind::rationals: return std::get<mpq_class>(v_) == 0;
            case FieldKind::prime: return std::get<std::uint64_t>(v_) == 0;
            case FieldKind::extension: {
                for (auto c : std::get<detail::ResiduePoly>(v_))
                    if (c != 0) return false;
                return true;
            }
        }
        return true;
    }

    bool is_one() const {
        switch (field_->kind()) {
            case FieldKind::rationals: return std::get<mpq_class>(v_) == 1;
            case FieldKind::prime: return std::get<std::uint64_t>(v_) == 1;
            case FieldKind::extension: {
                const auto& c = std::get<detail::ResiduePoly>(v_);
                if (c[0] != 1) return false;
                for (std::size_t i = 1; i < c.size(); ++i)
                    if (c[i] != 0) return false;
                return true;
            }
        }
        return false;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        a.require_same_field(b);
        return a.v_ == b.v_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        a.require_same_field(b);
        switch (a.field_->kind()) {
            case FieldKind::rationals:
                return Scalar(a.field_, mpq_class(std::get<mpq_class>(a.v_) + std::get<mpq_class>(b.v_)));
            case FieldKind::prime:
                return Scalar(a.field_,
                              (std::get<std::uint64_t>(a.v_) + std::get<std::uint64_t>(b.v_)) %
                                  a.field_->p());
            case FieldKind::extension: {
                auto c = std::get<detail::ResiduePoly>(a.v_);
                const auto& d = std::get<detail::ResiduePoly>(b.v_);
                for (std::size_t i = 0; i < c.size(); ++i) c[i] = (c[i] + d[i]) % a.field_->p();
                return Scalar(a.field_, std::move(c));
            }
        }
        throw field_error("bad field kind");
    }

    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

    Scalar operator-() const {
        switch (field_->kind()) {
            case FieldKind::rationals:
                return Scalar(field_, mpq_class(-std::get<mpq_class>(v_)));
            case FieldKind::prime: {
                std::uint64_t r = std::get<std::uint64_t>(v_);
                return Scalar(field_, r == 0 ? 0 : field_->p() - r);
            }
            case FieldKind::extension: {
                auto c = std::get<detail::ResiduePoly>(v_);
                for (auto& x : c) x = x == 0 ? 0 : field_->p() - x;
                return Scalar(field_, std::move(c));
            }
        }
        throw field_error("bad field kind");
    }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        a.require_same_field(b);
        switch (a.field_->kind()) {
            case FieldKind::rationals:
                return Scalar(a.field_, mpq_class(std::get<mpq_class>(a.v_) * std::get<mpq_class>(b.v_)));
            case FieldKind::prime:
                return Scalar(a.field_, detail::mulmod(std::get<std::uint64_t>(a.v_),
                                                       std::get<std::uint64_t>(b.v_), a.field_->p()));
            case FieldKind::extension: {
                auto prod = detail::rp_mul(trimmed(std::get<detail::ResiduePoly>(a.v_)),
                                           trimmed(std::get<detail::ResiduePoly>(b.v_)),
                                           a.field_->p());
                prod = detail::rp_rem(std::move(prod), a.field_->minpoly(), a.field_->p());
                return Scalar(a.field_, std::move(prod));
            }
        }
        throw field_error("bad field kind");
    }

    Scalar inverse() const {
        if (is_zero()) throw field_error("division by zero");
        switch (field_->kind()) {
            case FieldKind::rationals:
                return Scalar(field_, mpq_class(1 / std::get<mpq_class>(v_)));
            case FieldKind::prime:
                return Scalar(field_, detail::invmod(std::get<std::uint64_t>(v_), field_->p()));
            case FieldKind::extension: {
                // extended Euclid against the minpoly
                const std::uint64_t p = field_->p();
                detail::ResiduePoly r0 = field_->minpoly();
                detail::ResiduePoly r1 = trimmed(std::get<detail::ResiduePoly>(v_));
                detail::ResiduePoly s0 = {}, s1 = {1};
                while (!r1.empty()) {
                    // divide r0 by r1
                    detail::ResiduePoly q;
                    detail::ResiduePoly rem = r0;
                    std::uint64_t lead_inv = detail::invmod(r1.back(), p);
                    while (rem.size() >= r1.size() && !rem.empty()) {
                        std::size_t shift = rem.size() - r1.size();
                        std::uint64_t coef = detail::mulmod(rem.back(), lead_inv, p);
                        if (q.size() < shift + 1) q.resize(shift + 1, 0);
                        q[shift] = coef;
                        for (std::size_t i = 0; i < r1.size(); ++i) {
                            std::uint64_t s = detail::mulmod(coef, r1[i], p);
                            rem[shift + i] = (rem[shift + i] + p - s) % p;
                        }
                        detail::rp_trim(rem);
                    }
                    detail::ResiduePoly qs1 = detail::rp_mul(q, s1, p);
                    detail::ResiduePoly ns = s0;
                    if (ns.size() < qs1.size()) ns.resize(qs1.size(), 0);
                    for (std::size_t i = 0; i < qs1.size(); ++i)
                        ns[i] = (ns[i] + p - qs1[i]) % p;
                    detail::rp_trim(ns);
                    r0 = std::move(r1);
                    r1 = std::move(rem);
                    s0 = std::move(s1);
                    s1 = std::move(ns);
                }
                if (r0.size() != 1) throw field_error("non-invertible extension element");
                std::uint64_t inv = detail::invmod(r0[0], p);
                for (auto& c : s0) c = detail::mulmod(c, inv, p);
                return Scalar(field_, std::move(s0));
            }
        }
        throw field_error("bad field kind");
    }

    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar pow(std::uint64_t e) const {
        Scalar r = field_->one();
        Scalar base = *this;
        while (e) {
            if (e & 1) r *= base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    Scalar pow(const mpz_class& e) const {
        if (e < 0) return inverse().pow(mpz_class(-e));
        Scalar r = field_->one();
        Scalar base = *this;
        mpz_class exp = e;
        std::vector<bool> bits;
        while (exp > 0) {
            bits.push_back(mpz_odd_p(exp.get_mpz_t()) != 0);
            exp >>= 1;
        }
        for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
            r = r * r;
            if (*it) r *= base;
        }
        return r;
    }

    // Residue access (prime fields).
    std::uint64_t residue() const { return std::get<std::uint64_t>(v_); }
    const detail::ResiduePoly& residues() const { return std::get<detail::ResiduePoly>(v_); }
    const mpq_class& rational() const { return std::get<mpq_class>(v_); }

    // Decimal string for rationals/prime residues; comma-joined coefficient
    // list for extension elements.
    std::string to_string() const {
        switch (field_->kind()) {
            case FieldKind::rationals: return std::get<mpq_class>(v_).get_str();
            case FieldKind::prime: return std::to_string(std::get<std::uint64_t>(v_));
            case FieldKind::extension: {
                const auto& c = std::get<detail::ResiduePoly>(v_);
                std::string s;
                for (std::size_t i = 0; i < c.size(); ++i) {
                    if (i) s += ',';
                    s += std::to_string(c[i]);
                }
                return s;
            }
        }
        return {};
    }

    // Stable total order within one field, used for deterministic tie-breaks.
    friend bool operator<(const Scalar& a, const Scalar& b) {
        a.require_same_field(b);
        switch (a.field_->kind()) {
            case FieldKind::rationals:
                return std::get<mpq_class>(a.v_) < std::get<mpq_class>(b.v_);
            case FieldKind::prime:
                return std::get<std::uint64_t>(a.v_) < std::get<std::uint64_t>(b.v_);
            case FieldKind::extension: {
                const auto& x = std::get<detail::ResiduePoly>(a.v_);
                const auto& y = std::get<detail::ResiduePoly>(b.v_);
                for (std::size_t i = x.size(); i-- > 0;) {
                    if (x[i] != y[i]) return x[i] < y[i];
                }
                return false;
            }
        }
        return false;
    }

private:
    static detail::ResiduePoly trimmed(detail::ResiduePoly c) {
        detail::rp_trim(c);
        return c;
    }

    void require_same_field(const Scalar& o) const {
        if (field_.get() == o.field_.get()) return;
        if (!field_ || !o.field_ || !field_->same(*o.field_))
            throw field_error("scalars belong to different fields");
    }

    FieldPtr field_;
    std::variant<mpq_class, std::uint64_t, detail::ResiduePoly> v_;
};

inline Scalar Field::zero() const {
    auto self = shared_from_this();
    switch (kind_) {
        case FieldKind::rationals: return Scalar(self, mpq_class(0));
        case FieldKind::prime: return Scalar(self, std::uint64_t(0));
        case FieldKind::extension: return Scalar(self, detail::ResiduePoly(k_, 0));
    }
    throw field_error("bad field kind");
}

inline Scalar Field::one() const { return from_int(1); }

inline Scalar Field::from_int(long v) const {
    auto self = shared_from_this();
    switch (kind_) {
        case FieldKind::rationals: return Scalar(self, mpq_class(v));
        case FieldKind::prime: {
            long r = v % static_cast<long>(p_);
            if (r < 0) r += static_cast<long>(p_);
            return Scalar(self, static_cast<std::uint64_t>(r));
        }
        case FieldKind::extension: {
            long r = v % static_cast<long>(p_);
            if (r < 0) r += static_cast<long>(p_);
            detail::ResiduePoly c(k_, 0);
            c[0] = static_cast<std::uint64_t>(r);
            return Scalar(self, std::move(c));
        }
    }
    throw field_error("bad field kind");
}

inline Scalar Field::from_residues(std::vector<std::uint64_t> coeffs) const {
    if (kind_ == FieldKind::prime) {
        if (coeffs.size() != 1) throw field_error("prime field element needs one residue");
        return Scalar(shared_from_this(), coeffs[0]);
    }
    if (kind_ != FieldKind::extension) throw field_error("residue vector needs a finite field");
    return Scalar(shared_from_this(), std::move(coeffs));
}

inline Scalar Field::generator() const {
    if (kind_ != FieldKind::extension) throw field_error("generator only defined for extensions");
    detail::ResiduePoly c(k_, 0);
    c[1] = 1;
    return Scalar(shared_from_this(), std::move(c));
}

inline Scalar Field::parse(const std::string& s) const {
    auto self = shared_from_this();
    switch (kind_) {
        case FieldKind::rationals: {
            mpq_class q(s);
            q.canonicalize();
            return Scalar(self, std::move(q));
        }
        case FieldKind::prime: {
            mpz_class z(s);
            mpz_class r = z % static_cast<unsigned long>(p_);
            if (r < 0) r += static_cast<unsigned long>(p_);
            return Scalar(self, r.get_ui());
        }
        case FieldKind::extension: {
            detail::ResiduePoly c;
            std::size_t pos = 0;
            while (pos <= s.size()) {
                std::size_t comma = s.find(',', pos);
                std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos);
                mpz_class z(tok);
                mpz_class r = z % static_cast<unsigned long>(p_);
                if (r < 0) r += static_cast<unsigned long>(p_);
                c.push_back(r.get_ui());
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            return Scalar(self, std::move(c));
        }
    }
    throw field_error("bad field kind");
}

inline Scalar Field::random(Rng& rng) const {
    auto self = shared_from_this();
    switch (kind_) {
        case FieldKind::rationals:
            // small random integers; used only by tests over Q
            return Scalar(self, mpq_class(static_cast<long>(rng.below(2001)) - 1000));
        case FieldKind::prime: return Scalar(self, rng.below(p_));
        case FieldKind::extension: {
            detail::ResiduePoly c(k_);
            for (auto& x : c) x = rng.below(p_);
            return Scalar(self, std::move(c));
        }
    }
    throw field_error("bad field kind");
}

}  // namespace cbkit
