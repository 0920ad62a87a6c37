#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "cbkit/field.hpp"
#include "cbkit/rng.hpp"

namespace cbkit {

// Univariate polynomial with exact coefficients, lowest degree first.
// The zero polynomial has an empty coefficient list.
class UniPoly {
public:
    explicit UniPoly(FieldPtr field) : field_(std::move(field)) {}
    UniPoly(FieldPtr field, std::vector<Scalar> coeffs)
        : field_(std::move(field)), coeffs_(std::move(coeffs)) {
        trim();
    }

    static UniPoly from_ints(const FieldPtr& field, std::initializer_list<long> cs) {
        std::vector<Scalar> v;
        for (long c : cs) v.push_back(field->from_int(c));
        return UniPoly(field, std::move(v));
    }

    static UniPoly monomial(const FieldPtr& field, std::size_t deg, Scalar coeff) {
        std::vector<Scalar> v(deg + 1, field->zero());
        v[deg] = std::move(coeff);
        return UniPoly(field, std::move(v));
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<Scalar>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    // degree of the zero polynomial is reported as -1
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }

    Scalar coeff(std::size_t i) const {
        return i < coeffs_.size() ? coeffs_[i] : field_->zero();
    }
    Scalar leading() const {
        if (is_zero()) throw field_error("leading coefficient of zero polynomial");
        return coeffs_.back();
    }

    bool is_constant() const { return coeffs_.size() <= 1; }

    Scalar eval(const Scalar& x) const {
        Scalar r = field_->zero();
        for (std::size_t i = coeffs_.size(); i-- > 0;) r = r * x + coeffs_[i];
        return r;
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<Scalar> c(std::max(a.coeffs_.size(), b.coeffs_.size()), a.field_->zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return UniPoly(a.field_, std::move(c));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        std::vector<Scalar> c(std::max(a.coeffs_.size(), b.coeffs_.size()), a.field_->zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return UniPoly(a.field_, std::move(c));
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return UniPoly(a.field_);
        std::vector<Scalar> c(a.coeffs_.size() + b.coeffs_.size() - 1, a.field_->zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return UniPoly(a.field_, std::move(c));
    }
    friend UniPoly operator*(const Scalar& s, const UniPoly& a) {
        std::vector<Scalar> c = a.coeffs_;
        for (auto& x : c) x *= s;
        return UniPoly(a.field_, std::move(c));
    }

    // Quotient and remainder; divisor must be nonzero.
    static std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
        if (b.is_zero()) throw field_error("polynomial division by zero");
        UniPoly rem = a;
        std::vector<Scalar> q;
        const long db = b.degree();
        Scalar lead_inv = b.leading().inverse();
        while (!rem.is_zero() && rem.degree() >= db) {
            const long shift = rem.degree() - db;
            Scalar c = rem.leading() * lead_inv;
            if (static_cast<long>(q.size()) < shift + 1)
                q.resize(static_cast<std::size_t>(shift + 1), a.field_->zero());
            q[static_cast<std::size_t>(shift)] = c;
            for (long i = 0; i <= db; ++i)
                rem.coeffs_[static_cast<std::size_t>(shift + i)] -=
                    c * b.coeffs_[static_cast<std::size_t>(i)];
            rem.trim();
        }
        return {UniPoly(a.field_, std::move(q)), rem};
    }

    UniPoly derivative() const {
        if (coeffs_.size() <= 1) return UniPoly(field_);
        std::vector<Scalar> c(coeffs_.size() - 1, field_->zero());
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            c[i - 1] = field_->from_int(static_cast<long>(i)) * coeffs_[i];
        return UniPoly(field_, std::move(c));
    }

    UniPoly monic() const {
        if (is_zero()) return *this;
        return leading().inverse() * *this;
    }

    // Map coefficients into another field via a coefficient-wise lift.
    template <typename F>
    UniPoly map_coeffs(const FieldPtr& target, F&& lift) const {
        std::vector<Scalar> c;
        c.reserve(coeffs_.size());
        for (const auto& x : coeffs_) c.push_back(lift(x));
        return UniPoly(target, std::move(c));
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    FieldPtr field_;
    std::vector<Scalar> coeffs_;
};

inline UniPoly gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = UniPoly::divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline UniPoly powmod(const UniPoly& base, const mpz_class& e, const UniPoly& mod) {
    UniPoly r = UniPoly::from_ints(base.field(), {1});
    UniPoly b = UniPoly::divmod(base, mod).second;
    mpz_class exp = e;
    std::vector<bool> bits;
    while (exp > 0) {
        bits.push_back(mpz_odd_p(exp.get_mpz_t()) != 0);
        exp >>= 1;
    }
    for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
        r = UniPoly::divmod(r * r, mod).second;
        if (*it) r = UniPoly::divmod(r * b, mod).second;
    }
    return r;
}

// True iff gcd(f, f') is constant. Requires characteristic 0 or > deg f.
inline bool squarefree(const UniPoly& f) {
    if (f.is_zero()) throw field_error("squarefree: identically zero");
    if (f.field()->finite() &&
        f.field()->characteristic() <= static_cast<std::uint64_t>(f.degree()))
        throw field_error("characteristic too small");
    if (f.degree() == 0) return true;
    return gcd(f, f.derivative()).degree() == 0;
}

// (squarefree part, multiplicity) list. Requires char 0 or > deg f.
inline std::vector<std::pair<UniPoly, unsigned>> squarefree_decomposition(const UniPoly& f) {
    if (f.is_zero()) throw field_error("squarefree decomposition of zero");
    if (f.field()->finite() &&
        f.field()->characteristic() <= static_cast<std::uint64_t>(f.degree()))
        throw field_error("characteristic too small");
    std::vector<std::pair<UniPoly, unsigned>> parts;
    UniPoly g = f.monic();
    if (g.degree() == 0) return parts;
    // Yun's algorithm
    UniPoly d = g.derivative();
    UniPoly a = gcd(g, d);
    UniPoly b = UniPoly::divmod(g, a).first;
    UniPoly c = UniPoly::divmod(d, a).first;
    UniPoly diff = c - b.derivative();
    unsigned i = 1;
    while (b.degree() > 0) {
        UniPoly p = gcd(b, diff);
        if (p.degree() > 0) parts.emplace_back(p.monic(), i);
        b = UniPoly::divmod(b, p).first;
        diff = UniPoly::divmod(diff, p).first - b.derivative();
        ++i;
    }
    return parts;
}

namespace detail {

// Distinct-degree factorization of a squarefree monic f over a finite
// field F_q. Returns (product of irreducibles of degree e, e) pairs.
inline std::vector<std::pair<UniPoly, unsigned>> distinct_degree(const UniPoly& f) {
    std::vector<std::pair<UniPoly, unsigned>> out;
    const mpz_class q = f.field()->cardinality();
    UniPoly rem = f;
    UniPoly x = UniPoly::from_ints(f.field(), {0, 1});
    UniPoly h = x;
    unsigned e = 0;
    while (rem.degree() > 0) {
        ++e;
        if (2 * static_cast<long>(e) > rem.degree()) {
            out.emplace_back(rem, static_cast<unsigned>(rem.degree()));
            break;
        }
        h = powmod(h, q, rem);
        UniPoly g = gcd(h - x, rem);
        if (g.degree() > 0) {
            out.emplace_back(g, e);
            rem = UniPoly::divmod(rem, g).first;
            h = UniPoly::divmod(h, rem).second;
        }
    }
    return out;
}

// Cantor-Zassenhaus equal-degree splitting: f is squarefree monic, a
// product of irreducibles of degree e over F_q, q odd.
inline void equal_degree_split(const UniPoly& f, unsigned e, Rng& rng,
                               std::vector<UniPoly>& out) {
    if (f.degree() == static_cast<long>(e)) {
        out.push_back(f);
        return;
    }
    const auto& field = f.field();
    mpz_class qe = field->cardinality();
    mpz_pow_ui(qe.get_mpz_t(), qe.get_mpz_t(), e);
    mpz_class half = (qe - 1) / 2;
    for (;;) {
        std::vector<Scalar> cs;
        for (long i = 0; i < f.degree(); ++i) cs.push_back(field->random(rng));
        UniPoly a(field, std::move(cs));
        if (a.degree() < 1) continue;
        UniPoly g = gcd(a, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, e, rng, out);
            equal_degree_split(UniPoly::divmod(f, g).first, e, rng, out);
            return;
        }
        UniPoly b = powmod(a, half, f) - UniPoly::from_ints(field, {1});
        g = gcd(b, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, e, rng, out);
            equal_degree_split(UniPoly::divmod(f, g).first, e, rng, out);
            return;
        }
    }
}

}  // namespace detail

// Full factorization over a finite field: (monic irreducible, multiplicity).
inline std::vector<std::pair<UniPoly, unsigned>> factor(const UniPoly& f, Rng& rng) {
    if (!f.field()->finite()) throw field_error("factorization requires a finite field");
    if (f.is_zero()) throw field_error("identically zero");
    std::vector<std::pair<UniPoly, unsigned>> out;
    for (const auto& [part, mult] : squarefree_decomposition(f)) {
        for (const auto& [prod, e] : detail::distinct_degree(part)) {
            std::vector<UniPoly> irreducibles;
            detail::equal_degree_split(prod, e, rng, irreducibles);
            std::sort(irreducibles.begin(), irreducibles.end(),
                      [](const UniPoly& a, const UniPoly& b) {
                          if (a.degree() != b.degree()) return a.degree() < b.degree();
                          for (std::size_t i = a.coeffs().size(); i-- > 0;)
                              if (!(a.coeffs()[i] == b.coeffs()[i]))
                                  return a.coeffs()[i] < b.coeffs()[i];
                          return false;
                      });
            for (auto& g : irreducibles) out.emplace_back(std::move(g), mult);
        }
    }
    return out;
}

struct PolyRoot {
    Scalar value;        // element of F_{p^degree} (degree 1: the base field)
    unsigned multiplicity;
    unsigned degree;     // residue field degree over the prime field
};

// All roots of f lying in the field of f itself (degree-1 factors), with
// multiplicities. Works over any odd finite field.
inline std::vector<std::pair<Scalar, unsigned>> roots_in_field(const UniPoly& f, Rng& rng) {
    if (!f.field()->finite()) throw field_error("root listing requires finite field");
    if (f.is_zero()) throw field_error("identically zero");
    std::vector<std::pair<Scalar, unsigned>> out;
    for (const auto& [part, mult] : squarefree_decomposition(f)) {
        // roots in F_q are captured by gcd(part, x^q - x)
        UniPoly x = UniPoly::from_ints(f.field(), {0, 1});
        UniPoly xq = powmod(x, f.field()->cardinality(), part);
        UniPoly lin = gcd(xq - x, part);
        if (lin.degree() <= 0) continue;
        std::vector<UniPoly> linears;
        detail::equal_degree_split(lin, 1, rng, linears);
        for (const auto& g : linears)
            out.emplace_back(-g.coeff(0), mult);  // g = x + c
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// All roots of f in extensions of the prime field of degree <= max_ext_degree.
// f must live over a prime field unless max_ext_degree <= 1 (extension towers
// are not modeled). Extension fields use the deterministic lex-first minpoly.
inline std::vector<PolyRoot> uni_roots(const UniPoly& f, unsigned max_ext_degree, Rng& rng) {
    if (!f.field()->finite()) throw field_error("root listing requires finite field");
    if (f.is_zero()) throw field_error("identically zero");
    const auto& base = f.field();
    std::vector<PolyRoot> out;
    if (base->kind() == FieldKind::extension) {
        if (max_ext_degree > 1)
            throw field_error("roots beyond the base field need a prime base field");
        for (auto& [v, m] : roots_in_field(f, rng))
            out.push_back({v, m, base->ext_degree()});
        return out;
    }
    for (const auto& [part, mult] : squarefree_decomposition(f)) {
        for (const auto& [prod, e] : detail::distinct_degree(part)) {
            if (e > max_ext_degree) continue;
            if (e == 1) {
                std::vector<UniPoly> linears;
                detail::equal_degree_split(prod, 1, rng, linears);
                for (const auto& g : linears) out.push_back({-g.coeff(0), mult, 1});
            } else {
                FieldPtr ext = Field::extension(base->p(), e);
                UniPoly lifted = prod.map_coeffs(
                    ext, [&](const Scalar& c) { return ext->from_int(0) + ext->from_residues(
                                                     {c.residue()}); });
                for (auto& [v, m2] : roots_in_field(lifted, rng))
                    out.push_back({v, mult * m2, e});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const PolyRoot& a, const PolyRoot& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return a.value < b.value;
    });
    return out;
}

}  // namespace cbkit
