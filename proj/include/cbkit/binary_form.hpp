#pragma once

#include <utility>
#include <vector>

#include "cbkit/unipoly.hpp"

namespace cbkit {

// Homogeneous binary form F(s,t) of fixed degree d; coeffs_[i] is the
// coefficient of s^(d-i) t^i. Used for restrictions of forms to
// parametrized lines and conics, where roots in P^1 are fiber points.
class BinaryForm {
public:
    BinaryForm(FieldPtr field, std::size_t degree)
        : field_(std::move(field)), coeffs_(degree + 1, field_->zero()) {}
    BinaryForm(FieldPtr field, std::vector<Scalar> coeffs)
        : field_(std::move(field)), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw field_error("binary form needs degree >= 0");
    }

    static BinaryForm constant(const FieldPtr& field, Scalar c) {
        BinaryForm f(field, std::size_t{0});
        f.coeffs_[0] = std::move(c);
        return f;
    }
    // a*s + b*t
    static BinaryForm linear(const FieldPtr& field, Scalar a, Scalar b) {
        BinaryForm f(field, std::size_t{1});
        f.coeffs_[0] = std::move(a);
        f.coeffs_[1] = std::move(b);
        return f;
    }

    const FieldPtr& field() const { return field_; }
    std::size_t degree() const { return coeffs_.size() - 1; }
    const Scalar& coeff(std::size_t i) const { return coeffs_[i]; }
    Scalar& coeff(std::size_t i) { return coeffs_[i]; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    Scalar eval(const Scalar& s, const Scalar& t) const {
        // Horner in t with powers of s
        Scalar r = field_->zero();
        Scalar spow = field_->one();
        std::vector<Scalar> spows(coeffs_.size(), field_->one());
        for (std::size_t i = 1; i < coeffs_.size(); ++i) spows[i] = spows[i - 1] * s;
        Scalar tpow = field_->one();
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            r += coeffs_[i] * spows[coeffs_.size() - 1 - i] * tpow;
            tpow *= t;
        }
        return r;
    }

    friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) {
        if (a.degree() != b.degree()) throw field_error("binary form degree mismatch");
        BinaryForm c = a;
        for (std::size_t i = 0; i < c.coeffs_.size(); ++i) c.coeffs_[i] += b.coeffs_[i];
        return c;
    }
    friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
        BinaryForm c(a.field_, a.degree() + b.degree());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                c.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return c;
    }
    friend BinaryForm operator*(const Scalar& s, const BinaryForm& a) {
        BinaryForm c = a;
        for (auto& x : c.coeffs_) x *= s;
        return c;
    }

    BinaryForm pow(std::size_t e) const {
        BinaryForm r = constant(field_, field_->one());
        for (std::size_t i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    // Dehomogenization F(1,t) as a UniPoly. The multiplicity of the root
    // at infinity (0:1) equals degree() - deg of the dehomogenization.
    UniPoly dehomogenize() const { return UniPoly(field_, coeffs_); }
    std::size_t infinity_multiplicity() const {
        UniPoly f = dehomogenize();
        if (f.is_zero()) throw field_error("infinity multiplicity of zero form");
        return degree() - static_cast<std::size_t>(f.degree());
    }

private:
    FieldPtr field_;
    std::vector<Scalar> coeffs_;
};

// Total multiplicity, in F, of roots of F shared with W (projective roots
// of P^1 including infinity). This is the base-locus drop of a restricted
// form: the length of the restriction supported on the base scheme.
inline std::size_t shared_root_multiplicity(const BinaryForm& F, const BinaryForm& W) {
    if (F.is_zero() || W.is_zero()) throw field_error("shared roots of zero form");
    UniPoly f = F.dehomogenize();
    UniPoly w = W.dehomogenize();
    std::size_t drop = 0;
    for (;;) {
        UniPoly g = gcd(f, w);
        if (g.degree() <= 0) break;
        drop += static_cast<std::size_t>(g.degree());
        f = UniPoly::divmod(f, g).first;
    }
    if (W.infinity_multiplicity() > 0) drop += F.infinity_multiplicity();
    return drop;
}

// F with every factor shared with W removed to its full multiplicity in F.
// Returns the stripped dehomogenization and the remaining multiplicity at
// infinity (0 if W vanishes at infinity).
struct StrippedForm {
    UniPoly affine_part;
    std::size_t infinity_multiplicity;
};

inline StrippedForm remove_shared_roots(const BinaryForm& F, const BinaryForm& W) {
    UniPoly f = F.dehomogenize();
    UniPoly w = W.dehomogenize();
    for (;;) {
        UniPoly g = gcd(f, w);
        if (g.degree() <= 0) break;
        f = UniPoly::divmod(f, g).first;
    }
    std::size_t inf = W.infinity_multiplicity() > 0 ? 0 : F.infinity_multiplicity();
    return {std::move(f), inf};
}

}  // namespace cbkit
