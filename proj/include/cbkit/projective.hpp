#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cbkit/binary_form.hpp"
#include "cbkit/field.hpp"
#include "cbkit/matrix.hpp"
#include "cbkit/rng.hpp"

namespace cbkit {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Canonical representative: first nonzero coordinate scaled to 1.
inline std::vector<Scalar> normalize_coords(std::vector<Scalar> v) {
    for (const auto& c : v) {
        if (!c.is_zero()) {
            Scalar inv = c.inverse();
            for (auto& x : v) x *= inv;
            return v;
        }
    }
    throw field_error("projective point cannot be the zero vector");
}

// Point of P^N, stored in normal form; equality is coordinate-wise.
class ProjectivePoint {
public:
    ProjectivePoint(FieldPtr field, std::vector<Scalar> coords)
        : field_(std::move(field)), coords_(normalize_coords(std::move(coords))) {}

    static ProjectivePoint from_ints(const FieldPtr& field, std::initializer_list<long> cs) {
        std::vector<Scalar> v;
        for (long c : cs) v.push_back(field->from_int(c));
        return ProjectivePoint(field, std::move(v));
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<Scalar>& coords() const { return coords_; }
    std::size_t ambient_dim() const { return coords_.size() - 1; }

    friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) {
        return a.coords_ == b.coords_;
    }
    friend bool operator!=(const ProjectivePoint& a, const ProjectivePoint& b) {
        return !(a == b);
    }
    friend bool operator<(const ProjectivePoint& a, const ProjectivePoint& b) {
        for (std::size_t i = 0; i < a.coords_.size(); ++i) {
            if (a.coords_[i] != b.coords_[i]) return a.coords_[i] < b.coords_[i];
        }
        return false;
    }

private:
    FieldPtr field_;
    std::vector<Scalar> coords_;
};

// Finite set of pairwise-distinct points of one P^N. Duplicates are a
// construction error, not silently removed.
class PointSet {
public:
    PointSet(FieldPtr field, std::size_t ambient_dim, std::vector<ProjectivePoint> points)
        : field_(std::move(field)), ambient_dim_(ambient_dim), points_(std::move(points)) {
        for (const auto& pt : points_) {
            if (pt.ambient_dim() != ambient_dim_)
                throw field_error("point set: ambient dimension mismatch");
            if (!pt.field()->same(*field_))
                throw field_error("point set: field mismatch");
        }
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j)
                if (points_[i] == points_[j])
                    throw field_error("point set contains duplicate points");
    }

    const FieldPtr& field() const { return field_; }
    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t size() const { return points_.size(); }
    const ProjectivePoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<ProjectivePoint>& points() const { return points_; }

    PointSet without(std::size_t index) const {
        std::vector<ProjectivePoint> pts;
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (i != index) pts.push_back(points_[i]);
        return PointSet(field_, ambient_dim_, std::move(pts));
    }

    // r x (N+1) coordinate matrix.
    ExactMatrix coordinate_matrix() const {
        ExactMatrix m(field_, points_.size(), ambient_dim_ + 1);
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = 0; j <= ambient_dim_; ++j)
                m.at(i, j) = points_[i].coords()[j];
        return m;
    }

private:
    FieldPtr field_;
    std::size_t ambient_dim_;
    std::vector<ProjectivePoint> points_;
};

// Degree-m monomials in num_vars variables, in graded-lex order: for fixed
// total degree, exponent vectors are listed in lexicographically descending
// order, so (m,0,...,0) comes first and (0,...,0,m) last. This order is
// fixed once and shared by all serialized outputs.
class MonomialBasis {
public:
    MonomialBasis(std::size_t num_vars, unsigned degree)
        : num_vars_(num_vars), degree_(degree) {
        std::vector<unsigned> cur(num_vars, 0);
        emit(cur, 0, degree);
    }

    std::size_t num_vars() const { return num_vars_; }
    unsigned degree() const { return degree_; }
    std::size_t size() const { return monomials_.size(); }
    const std::vector<unsigned>& operator[](std::size_t i) const { return monomials_[i]; }
    const std::vector<std::vector<unsigned>>& monomials() const { return monomials_; }

    // Evaluate every monomial at one coordinate vector, reusing lower
    // degree products (each monomial is a predecessor times one variable).
    std::vector<Scalar> evaluate_all(const std::vector<Scalar>& coords) const {
        const FieldPtr& field = coords[0].field();
        std::map<std::vector<unsigned>, Scalar> memo;
        memo[std::vector<unsigned>(num_vars_, 0)] = field->one();
        std::vector<Scalar> out;
        out.reserve(monomials_.size());
        for (const auto& mono : monomials_) out.push_back(eval_memo(mono, coords, memo));
        return out;
    }

private:
    static Scalar eval_memo(const std::vector<unsigned>& mono,
                            const std::vector<Scalar>& coords,
                            std::map<std::vector<unsigned>, Scalar>& memo) {
        auto it = memo.find(mono);
        if (it != memo.end()) return it->second;
        std::vector<unsigned> pred = mono;
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] > 0) {
                pred[i]--;
                Scalar v = eval_memo(pred, coords, memo) * coords[i];
                memo[mono] = v;
                return v;
            }
        }
        return memo.at(mono);
    }

    void emit(std::vector<unsigned>& cur, std::size_t var, unsigned remaining) {
        if (var + 1 == num_vars_) {
            cur[var] = remaining;
            monomials_.push_back(cur);
            cur[var] = 0;
            return;
        }
        for (unsigned e = remaining + 1; e-- > 0;) {
            cur[var] = e;
            emit(cur, var + 1, remaining - e);
        }
        cur[var] = 0;
    }

    std::size_t num_vars_;
    unsigned degree_;
    std::vector<std::vector<unsigned>> monomials_;
};

// Sparse exact homogeneous form; keys are exponent vectors summing to the
// degree, stored coefficients nonzero.
class HomogeneousForm {
public:
    HomogeneousForm(FieldPtr field, std::size_t num_vars, unsigned degree)
        : field_(std::move(field)), num_vars_(num_vars), degree_(degree) {}

    static HomogeneousForm from_coeff_vector(const FieldPtr& field, const MonomialBasis& basis,
                                             const std::vector<Scalar>& coeffs) {
        HomogeneousForm f(field, basis.num_vars(), basis.degree());
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (!coeffs[i].is_zero()) f.terms_[basis[i]] = coeffs[i];
        return f;
    }

    const FieldPtr& field() const { return field_; }
    std::size_t num_vars() const { return num_vars_; }
    unsigned degree() const { return degree_; }
    const std::map<std::vector<unsigned>, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void set_coeff(const std::vector<unsigned>& expv, Scalar c) {
        unsigned total = 0;
        for (unsigned e : expv) total += e;
        if (expv.size() != num_vars_ || total != degree_)
            throw field_error("exponent vector does not match the form");
        if (c.is_zero())
            terms_.erase(expv);
        else
            terms_[expv] = std::move(c);
    }

    Scalar evaluate_raw(const std::vector<Scalar>& coords) const {
        if (coords.size() != num_vars_) throw field_error("form/point dimension mismatch");
        Scalar acc = field_->zero();
        for (const auto& [expv, c] : terms_) {
            Scalar t = c;
            for (std::size_t i = 0; i < num_vars_; ++i)
                for (unsigned e = 0; e < expv[i]; ++e) t *= coords[i];
            acc += t;
        }
        return acc;
    }

    Scalar evaluate(const ProjectivePoint& p) const { return evaluate_raw(p.coords()); }

    // Restriction along a parametrized curve: one binary form of uniform
    // degree per ambient coordinate; the result has degree carrier_degree
    // times the form degree.
    BinaryForm restrict_to(const std::vector<BinaryForm>& coord_forms) const {
        if (coord_forms.size() != num_vars_) throw field_error("carrier dimension mismatch");
        const std::size_t cdeg = coord_forms[0].degree();
        BinaryForm acc(field_, cdeg * degree_);
        for (const auto& [expv, c] : terms_) {
            BinaryForm t = BinaryForm::constant(field_, c);
            for (std::size_t i = 0; i < num_vars_; ++i)
                for (unsigned e = 0; e < expv[i]; ++e) t = t * coord_forms[i];
            acc = acc + t;
        }
        return acc;
    }

    // Substitute variable i -> sum_j L[i][j] y_j (linear change into
    // num_new variables), same degree in the new variables.
    HomogeneousForm substitute_linear(const std::vector<std::vector<Scalar>>& L,
                                      std::size_t num_new) const {
        using Poly = std::map<std::vector<unsigned>, Scalar>;
        HomogeneousForm out(field_, num_new, degree_);
        for (const auto& [expv, c] : terms_) {
            Poly prod;
            prod[std::vector<unsigned>(num_new, 0)] = c;
            for (std::size_t i = 0; i < num_vars_; ++i) {
                for (unsigned e = 0; e < expv[i]; ++e) {
                    Poly next;
                    for (const auto& [pe, pc] : prod) {
                        for (std::size_t j = 0; j < num_new; ++j) {
                            if (L[i][j].is_zero()) continue;
                            std::vector<unsigned> ne = pe;
                            ne[j]++;
                            auto it = next.find(ne);
                            if (it == next.end())
                                next[ne] = pc * L[i][j];
                            else
                                it->second += pc * L[i][j];
                        }
                    }
                    prod = std::move(next);
                }
            }
            for (const auto& [pe, pc] : prod) {
                auto it = out.terms_.find(pe);
                if (it == out.terms_.end())
                    out.terms_[pe] = pc;
                else
                    it->second += pc;
            }
        }
        for (auto it = out.terms_.begin(); it != out.terms_.end();) {
            if (it->second.is_zero())
                it = out.terms_.erase(it);
            else
                ++it;
        }
        return out;
    }

private:
    FieldPtr field_;
    std::size_t num_vars_;
    unsigned degree_;
    std::map<std::vector<unsigned>, Scalar> terms_;
};

// Multihomogeneous form on P^{m_1} x ... x P^{m_k}; exponent keys are the
// concatenation of the per-factor exponent blocks.
class MultiHomogeneousForm {
public:
    MultiHomogeneousForm(FieldPtr field, std::vector<std::size_t> factor_dims,
                         std::vector<unsigned> multidegree)
        : field_(std::move(field)), factor_dims_(std::move(factor_dims)),
          multidegree_(std::move(multidegree)) {
        if (factor_dims_.size() != multidegree_.size() || factor_dims_.size() < 2)
            throw field_error("multihomogeneous form needs >= 2 matching factors");
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<std::size_t>& factor_dims() const { return factor_dims_; }
    const std::vector<unsigned>& multidegree() const { return multidegree_; }
    const std::map<std::vector<unsigned>, Scalar>& terms() const { return terms_; }
    std::size_t num_factors() const { return factor_dims_.size(); }
    std::size_t total_vars() const {
        std::size_t n = 0;
        for (auto d : factor_dims_) n += d + 1;
        return n;
    }

    void set_coeff(const std::vector<unsigned>& expv, Scalar c) {
        if (expv.size() != total_vars()) throw field_error("exponent vector length mismatch");
        std::size_t off = 0;
        for (std::size_t f = 0; f < factor_dims_.size(); ++f) {
            unsigned block = 0;
            for (std::size_t i = 0; i <= factor_dims_[f]; ++i) block += expv[off + i];
            if (block != multidegree_[f])
                throw field_error("exponent block does not match the multidegree");
            off += factor_dims_[f] + 1;
        }
        if (c.is_zero())
            terms_.erase(expv);
        else
            terms_[expv] = std::move(c);
    }

    Scalar evaluate(const std::vector<ProjectivePoint>& pts) const {
        if (pts.size() != factor_dims_.size()) throw field_error("factor arity mismatch");
        std::vector<Scalar> coords;
        for (std::size_t f = 0; f < pts.size(); ++f) {
            if (pts[f].ambient_dim() != factor_dims_[f])
                throw field_error("factor dimension mismatch");
            for (const auto& c : pts[f].coords()) coords.push_back(c);
        }
        Scalar acc = field_->zero();
        for (const auto& [expv, c] : terms_) {
            Scalar t = c;
            for (std::size_t i = 0; i < coords.size(); ++i)
                for (unsigned e = 0; e < expv[i]; ++e) t *= coords[i];
            acc += t;
        }
        return acc;
    }

    // Restriction where every coordinate of every factor is a binary form;
    // per-factor carrier degrees may differ (0 for frozen factors).
    BinaryForm restrict_to(const std::vector<std::vector<BinaryForm>>& factor_forms) const {
        std::vector<BinaryForm> flat;
        for (const auto& ff : factor_forms)
            for (const auto& f : ff) flat.push_back(f);
        if (flat.size() != total_vars()) throw field_error("carrier dimension mismatch");
        std::size_t total_deg = 0;
        for (std::size_t f = 0; f < factor_forms.size(); ++f)
            total_deg += factor_forms[f][0].degree() * multidegree_[f];
        BinaryForm acc(field_, total_deg);
        for (const auto& [expv, c] : terms_) {
            BinaryForm t = BinaryForm::constant(field_, c);
            for (std::size_t i = 0; i < flat.size(); ++i)
                for (unsigned e = 0; e < expv[i]; ++e) t = t * flat[i];
            acc = acc + t;
        }
        return acc;
    }

private:
    FieldPtr field_;
    std::vector<std::size_t> factor_dims_;
    std::vector<unsigned> multidegree_;
    std::map<std::vector<unsigned>, Scalar> terms_;
};

// Row per point, column per monomial of MonomialBasis(N, m), evaluated at
// the normalized representatives. Realizes the restriction map
// H^0(P^N, O(m)) -> H^0(O(m)|_S).
inline ExactMatrix evaluation_matrix(const PointSet& s, unsigned m) {
    if (m < 1) throw field_error("evaluation matrix needs degree >= 1");
    MonomialBasis basis(s.ambient_dim() + 1, m);
    ExactMatrix out(s.field(), s.size(), basis.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<Scalar> row = basis.evaluate_all(s[i].coords());
        for (std::size_t j = 0; j < basis.size(); ++j) out.at(i, j) = std::move(row[j]);
    }
    return out;
}

struct PointConstraint {
    ProjectivePoint point;
    bool vanish;  // false: require nonzero value
};

// Seeded random form of degree d on P^N through the prescribed vanishing
// constraints, rejecting non-vanishing violations up to retry_cap. This is
// the computable stand-in for "very general".
inline HomogeneousForm random_hypersurface(const FieldPtr& field, std::size_t ambient_dim,
                                           unsigned degree,
                                           const std::vector<PointConstraint>& constraints,
                                           Rng& rng, unsigned retry_cap = 32) {
    MonomialBasis basis(ambient_dim + 1, degree);
    std::vector<const PointConstraint*> vanish, avoid;
    for (const auto& c : constraints) (c.vanish ? vanish : avoid).push_back(&c);

    ExactMatrix cond(field, vanish.size(), basis.size());
    for (std::size_t i = 0; i < vanish.size(); ++i) {
        std::vector<Scalar> row = basis.evaluate_all(vanish[i]->point.coords());
        for (std::size_t j = 0; j < basis.size(); ++j) cond.at(i, j) = std::move(row[j]);
    }
    std::vector<std::vector<Scalar>> kernel = nullspace_basis(cond);
    if (kernel.empty()) throw field_error("unsatisfiable vanishing constraints");

    for (unsigned attempt = 0; attempt < retry_cap; ++attempt) {
        std::vector<Scalar> coeffs(basis.size(), field->zero());
        for (const auto& kv : kernel) {
            Scalar lambda = field->random(rng);
            for (std::size_t j = 0; j < basis.size(); ++j) coeffs[j] += lambda * kv[j];
        }
        HomogeneousForm f = HomogeneousForm::from_coeff_vector(field, basis, coeffs);
        if (f.is_zero()) continue;
        bool ok = true;
        for (const auto* c : avoid)
            if (f.evaluate(c->point).is_zero()) { ok = false; break; }
        if (ok) return f;
    }
    throw field_error("random hypersurface: retry cap exceeded");
}

}  // namespace cbkit
