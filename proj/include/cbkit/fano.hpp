#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cbkit/projective.hpp"
#include "cbkit/unipoly.hpp"

namespace cbkit {

namespace detail {

// Square root in a prime field, when the element is a quadratic residue.
inline std::optional<Scalar> scalar_sqrt(const Scalar& a) {
    if (a.field()->kind() != FieldKind::prime)
        throw field_error("square root implemented for prime fields");
    if (a.is_zero()) return a;
    std::uint64_t p = a.field()->characteristic();
    std::uint64_t r = a.residue();
    if (legendre(r, p) != 1) return std::nullopt;
    return a.field()->from_int(static_cast<long>(sqrtmod(r, p)));
}

}  // namespace detail

// Quadric hypersurface x^T G x = 0 given by its symmetric Gram matrix;
// smooth exactly when G has full rank (characteristic is odd throughout).
class Quadric {
public:
    explicit Quadric(ExactMatrix gram) : gram_(std::move(gram)) {
        if (gram_.rows() != gram_.cols()) throw field_error("Gram matrix must be square");
        for (std::size_t i = 0; i < gram_.rows(); ++i)
            for (std::size_t j = i + 1; j < gram_.cols(); ++j)
                if (gram_.at(i, j) != gram_.at(j, i))
                    throw field_error("Gram matrix must be symmetric");
    }

    // Standard hyperbolic form sum x_{2i} x_{2i+1} (plus x_last^2 when the
    // variable count is odd).
    static Quadric hyperbolic(const FieldPtr& field, std::size_t num_vars) {
        ExactMatrix g(field, num_vars, num_vars);
        Scalar half = field->from_int(2).inverse();
        std::size_t i = 0;
        for (; i + 1 < num_vars; i += 2) g.at(i, i + 1) = g.at(i + 1, i) = half;
        if (i < num_vars) g.at(i, i) = field->one();
        return Quadric(std::move(g));
    }

    const ExactMatrix& gram() const { return gram_; }
    const FieldPtr& field() const { return gram_.field(); }
    std::size_t num_vars() const { return gram_.rows(); }
    std::size_t rank() const { return cbkit::rank(gram_); }
    bool smooth() const { return rank() == num_vars(); }

    Scalar bilinear(const std::vector<Scalar>& u, const std::vector<Scalar>& v) const {
        if (u.size() != num_vars() || v.size() != num_vars())
            throw field_error("quadric dimension mismatch");
        Scalar acc = field()->zero();
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (u[i].is_zero()) continue;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (!gram_.at(i, j).is_zero() && !v[j].is_zero())
                    acc += u[i] * gram_.at(i, j) * v[j];
        }
        return acc;
    }

    Scalar evaluate(const std::vector<Scalar>& v) const { return bilinear(v, v); }
    bool contains_point(const ProjectivePoint& p) const { return evaluate(p.coords()).is_zero(); }

    HomogeneousForm form() const {
        HomogeneousForm f(field(), num_vars(), 2);
        for (std::size_t i = 0; i < num_vars(); ++i)
            for (std::size_t j = i; j < num_vars(); ++j) {
                Scalar c = i == j ? gram_.at(i, i) : gram_.at(i, j) + gram_.at(j, i);
                if (c.is_zero()) continue;
                std::vector<unsigned> e(num_vars(), 0);
                e[i] += 1;
                e[j] += 1;
                f.set_coeff(e, c);
            }
        return f;
    }

private:
    ExactMatrix gram_;
};

// Linear subspace of the ambient vector space given by an independent
// basis; projective dimension is one less than the basis size.
class LinearSubspace {
public:
    LinearSubspace(FieldPtr field, std::vector<std::vector<Scalar>> basis)
        : field_(std::move(field)), basis_(std::move(basis)) {
        if (basis_.empty()) throw field_error("subspace needs a nonempty basis");
        ExactMatrix m(field_, basis_.size(), basis_[0].size());
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if (basis_[i].size() != basis_[0].size())
                throw field_error("subspace basis rows must have equal length");
            for (std::size_t j = 0; j < basis_[i].size(); ++j) m.at(i, j) = basis_[i][j];
        }
        if (rank(m) != basis_.size()) throw field_error("subspace basis is dependent");
    }

    static LinearSubspace span_of_coordinates(const FieldPtr& field, std::size_t num_vars,
                                              std::initializer_list<std::size_t> axes) {
        return span_of_coordinates(field, num_vars,
                                   std::vector<std::size_t>(axes.begin(), axes.end()));
    }

    static LinearSubspace span_of_coordinates(const FieldPtr& field, std::size_t num_vars,
                                              const std::vector<std::size_t>& axes) {
        std::vector<std::vector<Scalar>> basis;
        for (std::size_t a : axes) {
            std::vector<Scalar> v(num_vars, field->zero());
            v[a] = field->one();
            basis.push_back(std::move(v));
        }
        return LinearSubspace(field, std::move(basis));
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<std::vector<Scalar>>& basis() const { return basis_; }
    std::size_t num_vars() const { return basis_[0].size(); }
    std::size_t dim_linear() const { return basis_.size(); }
    std::size_t dim_projective() const { return basis_.size() - 1; }

private:
    FieldPtr field_;
    std::vector<std::vector<Scalar>> basis_;
};

inline bool quadric_contains(const Quadric& q, const LinearSubspace& l) {
    if (q.num_vars() != l.num_vars()) throw field_error("quadric dimension mismatch");
    for (std::size_t i = 0; i < l.dim_linear(); ++i)
        for (std::size_t j = i; j < l.dim_linear(); ++j)
            if (!q.bilinear(l.basis()[i], l.basis()[j]).is_zero()) return false;
    return true;
}

namespace detail {

// A single isotropic vector of the form, or nullopt when none exists
// (anisotropic forms of rank <= 2) or the random search exceeds its cap.
inline std::optional<std::vector<Scalar>> isotropic_vector(const Quadric& q, Rng& rng) {
    const FieldPtr& field = q.field();
    const std::size_t n = q.num_vars();
    // radical first: any kernel vector of the Gram matrix is isotropic
    std::vector<std::vector<Scalar>> rad = nullspace_basis(q.gram());
    if (!rad.empty()) return rad[0];
    if (n == 1) return std::nullopt;  // rank-1 forms are anisotropic
    for (unsigned attempt = 0; attempt < 128; ++attempt) {
        std::vector<Scalar> u, v;
        for (std::size_t i = 0; i < n; ++i) u.push_back(field->random(rng));
        bool zero = true;
        for (const auto& c : u) zero = zero && c.is_zero();
        if (zero) continue;
        Scalar qu = q.evaluate(u);
        if (qu.is_zero()) return u;
        for (std::size_t i = 0; i < n; ++i) v.push_back(field->random(rng));
        // solve Q(u + t v) = 0: Q(v) t^2 + 2 b(u,v) t + Q(u) = 0
        Scalar qv = q.evaluate(v);
        Scalar b = q.bilinear(u, v);
        if (qv.is_zero()) {
            if (b.is_zero()) continue;  // v spans with u a totally anisotropic? retry
            // t = -Q(u) / (2 b)
            Scalar t = -qu * (field->from_int(2) * b).inverse();
            std::vector<Scalar> w = u;
            for (std::size_t i = 0; i < n; ++i) w[i] += t * v[i];
            return w;
        }
        Scalar disc = b * b - qu * qv;
        auto root = scalar_sqrt(disc);
        if (!root) continue;
        Scalar t = (-b + *root) * qv.inverse();
        std::vector<Scalar> w = u;
        for (std::size_t i = 0; i < n; ++i) w[i] += t * v[i];
        if (!q.evaluate(w).is_zero())
            throw field_error("internal error: quadratic solve produced a non-root");
        bool wz = true;
        for (const auto& c : w) wz = wz && c.is_zero();
        if (!wz) return w;
    }
    return std::nullopt;
}

}  // namespace detail

// Totally isotropic subspace of projective dimension k, built greedily:
// find an isotropic vector, restrict the form to its orthogonal modulo
// the vector, recurse, and lift the answer back.
inline LinearSubspace isotropic_subspace(const Quadric& q, std::size_t target_projective_dim,
                                         Rng& rng) {
    const FieldPtr& field = q.field();
    if (!field->finite())
        throw field_error("isotropic search requires a finite field");
    const std::size_t need = target_projective_dim + 1;
    const std::size_t n = q.num_vars();
    std::size_t corank = n - q.rank();
    if (2 * need > n + corank)
        throw field_error("no isotropic subspace of that dimension");

    std::vector<std::vector<Scalar>> found;
    // ambient coordinates of the current working subspace's basis
    std::vector<std::vector<Scalar>> chart;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Scalar> e(n, field->zero());
        e[i] = field->one();
        chart.push_back(std::move(e));
    }
    ExactMatrix gram = q.gram();

    while (found.size() < need) {
        Quadric cur(gram);
        auto x = detail::isotropic_vector(cur, rng);
        if (!x) throw field_error("no isotropic subspace of that dimension");
        // ambient representative of x
        std::vector<Scalar> ax(n, field->zero());
        for (std::size_t i = 0; i < chart.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) ax[j] += (*x)[i] * chart[i][j];
        found.push_back(ax);
        if (found.size() == need) break;

        // orthogonal complement of x inside the current space, modulo x
        const std::size_t dim = chart.size();
        std::vector<Scalar> gx(dim, field->zero());
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) gx[i] += gram.at(i, j) * (*x)[j];
        ExactMatrix cond(field, 1, dim);
        for (std::size_t i = 0; i < dim; ++i) cond.at(0, i) = gx[i];
        std::vector<std::vector<Scalar>> perp = nullspace_basis(cond);
        // drop x from perp: keep rows independent from x
        ExactMatrix probe(field, 1 + perp.size(), dim);
        for (std::size_t i = 0; i < dim; ++i) probe.at(0, i) = (*x)[i];
        std::vector<std::vector<Scalar>> next_basis;
        std::size_t cur_rank = 1;
        for (const auto& row : perp) {
            for (std::size_t i = 0; i < dim; ++i) probe.at(next_basis.size() + 1, i) = row[i];
            ExactMatrix head(field, next_basis.size() + 2, dim);
            for (std::size_t r = 0; r < next_basis.size() + 2; ++r)
                for (std::size_t i = 0; i < dim; ++i) head.at(r, i) = probe.at(r, i);
            if (rank(head) > cur_rank) {
                next_basis.push_back(row);
                ++cur_rank;
            }
        }
        // new chart in ambient coordinates and restricted Gram matrix
        std::vector<std::vector<Scalar>> new_chart;
        for (const auto& row : next_basis) {
            std::vector<Scalar> amb(n, field->zero());
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < n; ++j) amb[j] += row[i] * chart[i][j];
            new_chart.push_back(std::move(amb));
        }
        ExactMatrix new_gram(field, next_basis.size(), next_basis.size());
        for (std::size_t a = 0; a < next_basis.size(); ++a)
            for (std::size_t b = 0; b < next_basis.size(); ++b) {
                Scalar acc = field->zero();
                for (std::size_t i = 0; i < dim; ++i)
                    for (std::size_t j = 0; j < dim; ++j)
                        acc += next_basis[a][i] * gram.at(i, j) * next_basis[b][j];
                new_gram.at(a, b) = acc;
            }
        chart = std::move(new_chart);
        gram = std::move(new_gram);
    }
    LinearSubspace out(field, std::move(found));
    if (!quadric_contains(q, out))
        throw field_error("internal error: constructed subspace is not isotropic");
    return out;
}

// Pencil of quadrics in P^5 spanned by two symmetric 6x6 matrices; the
// affine chart t -> M1 + t M2 puts the second generator at t = infinity.
class QuadricPencil {
public:
    QuadricPencil(ExactMatrix m1, ExactMatrix m2) : m1_(std::move(m1)), m2_(std::move(m2)) {
        auto check = [](const ExactMatrix& m) {
            if (m.rows() != 6 || m.cols() != 6)
                throw field_error("pencil generators must be 6x6");
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = i + 1; j < 6; ++j)
                    if (m.at(i, j) != m.at(j, i))
                        throw field_error("pencil generators must be symmetric");
        };
        check(m1_);
        check(m2_);
    }

    const ExactMatrix& m1() const { return m1_; }
    const ExactMatrix& m2() const { return m2_; }
    const FieldPtr& field() const { return m1_.field(); }

    Quadric member(const Scalar& t) const {
        ExactMatrix g(field(), 6, 6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) g.at(i, j) = m1_.at(i, j) + t * m2_.at(i, j);
        return Quadric(std::move(g));
    }
    Quadric member_infinity() const { return Quadric(m2_); }

private:
    ExactMatrix m1_, m2_;
};

// Value of the pencil parameter, with infinity meaning the M2 member.
struct PencilParameter {
    bool infinity = false;
    Scalar t;
};

struct SingularMember {
    Scalar t;             // root of the discriminant, possibly in an extension
    unsigned root_degree; // residue field degree of the root
    std::size_t member_rank;
};

struct PencilDiscriminant {
    UniPoly discriminant;
    std::vector<SingularMember> singular_members;
    bool smooth_z = false;      // squarefree sextic and all singular ranks 5
    bool check_infinity = false; // degree < 6: the member at infinity is singular
};

// det(M1 + t M2), expanded exactly by Lagrange interpolation at 7 sample
// parameters, together with its roots and the singular member ranks.
inline PencilDiscriminant pencil_discriminant(const QuadricPencil& pencil, Rng& rng) {
    const FieldPtr& field = pencil.field();
    if (field->kind() != FieldKind::prime || field->characteristic() < 11)
        throw field_error("pencil analysis needs a prime field with p >= 11");

    // interpolate the degree <= 6 polynomial det(M1 + t M2)
    std::vector<Scalar> xs, ys;
    for (long i = 0; i < 7; ++i) {
        Scalar t = field->from_int(i);
        xs.push_back(t);
        ys.push_back(determinant(pencil.member(t).gram()));
    }
    UniPoly disc(field);
    for (std::size_t i = 0; i < 7; ++i) {
        UniPoly basis = UniPoly::from_ints(field, {1});
        Scalar denom = field->one();
        for (std::size_t j = 0; j < 7; ++j) {
            if (j == i) continue;
            basis = basis * UniPoly(field, {-xs[j], field->one()});
            denom *= xs[i] - xs[j];
        }
        disc = disc + (ys[i] * denom.inverse()) * basis;
    }
    if (disc.is_zero()) throw field_error("degenerate pencil");

    PencilDiscriminant out{disc, {}, false, false};
    out.check_infinity = disc.degree() < 6;

    bool ranks_ok = true;
    for (const auto& root : uni_roots(disc, 6, rng)) {
        std::size_t member_rank;
        if (root.degree == 1) {
            member_rank = pencil.member(root.value).rank();
        } else {
            // lift the pencil into the root's field and evaluate there
            const FieldPtr& ext = root.value.field();
            ExactMatrix g(ext, 6, 6);
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j)
                    g.at(i, j) = ext->from_residues({pencil.m1().at(i, j).residue()}) +
                                 root.value *
                                     ext->from_residues({pencil.m2().at(i, j).residue()});
            member_rank = rank(g);
        }
        if (member_rank != 5) ranks_ok = false;
        out.singular_members.push_back({root.value, root.degree, member_rank});
    }
    out.smooth_z = disc.degree() == 6 && squarefree(disc) && ranks_ok;
    return out;
}

// The unique pencil member containing a given 2-plane (when the base
// locus Z is smooth): six linear conditions a_i + t b_i = 0, solved
// projectively so t = infinity is representable.
inline PencilParameter residual_quadric(const QuadricPencil& pencil,
                                        const LinearSubspace& plane) {
    if (plane.dim_projective() != 2) throw field_error("residual member needs a 2-plane");
    const FieldPtr& field = pencil.field();
    Quadric q1(pencil.m1()), q2(pencil.m2());
    ExactMatrix cond(field, 6, 2);
    std::size_t row = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) {
            cond.at(row, 0) = q1.bilinear(plane.basis()[i], plane.basis()[j]);
            cond.at(row, 1) = q2.bilinear(plane.basis()[i], plane.basis()[j]);
            ++row;
        }
    auto sols = nullspace_basis(cond);
    if (sols.size() != 1)
        throw field_error("plane not residual to pencil / Z not smooth");
    // solution (t0, t1) with t0 a + t1 b = 0 for all rows; the member is
    // M1 + (t1/t0) M2, degenerating to M2 when t0 = 0
    const Scalar& t0 = sols[0][0];
    const Scalar& t1 = sols[0][1];
    if (t0.is_zero()) return {true, field->zero()};
    return {false, t1 * t0.inverse()};
}

// Grassmannian Gr(k, m) in Plücker coordinates indexed by the k-subsets
// of {0..m-1} in lexicographic order.
class PluckerModel {
public:
    PluckerModel(unsigned k, unsigned m) : k_(k), m_(m) {
        if (k == 0 || k >= m) throw field_error("Grassmannian needs 0 < k < m");
        std::vector<unsigned> cur;
        emit(cur, 0);
    }

    unsigned k() const { return k_; }
    unsigned m() const { return m_; }
    std::size_t ambient_dim() const { return subsets_.size() - 1; }
    const std::vector<std::vector<unsigned>>& subsets() const { return subsets_; }

private:
    void emit(std::vector<unsigned>& cur, unsigned next) {
        if (cur.size() == k_) {
            subsets_.push_back(cur);
            return;
        }
        for (unsigned i = next; i < m_; ++i) {
            cur.push_back(i);
            emit(cur, i + 1);
            cur.pop_back();
        }
    }

    unsigned k_, m_;
    std::vector<std::vector<unsigned>> subsets_;
};

inline ProjectivePoint plucker_embed(const PluckerModel& model, const LinearSubspace& v) {
    if (v.dim_linear() != model.k())
        throw field_error("subspace dimension does not match the Grassmannian");
    if (v.num_vars() != model.m())
        throw field_error("ambient dimension does not match the Grassmannian");
    const FieldPtr& field = v.field();
    std::vector<Scalar> coords;
    for (const auto& subset : model.subsets()) {
        ExactMatrix minor(field, model.k(), model.k());
        for (std::size_t i = 0; i < model.k(); ++i)
            for (std::size_t j = 0; j < model.k(); ++j)
                minor.at(i, j) = v.basis()[i][subset[j]];
        coords.push_back(determinant(minor));
    }
    ProjectivePoint p(field, std::move(coords));
    // well-definedness guard: for planes (k = 2) check every 3-term
    // quadratic relation p_ab p_cd - p_ac p_bd + p_ad p_bc = 0
    if (model.k() == 2) {
        auto idx = [&](unsigned a, unsigned b) {
            std::size_t pos = 0;
            for (const auto& s : model.subsets()) {
                if (s[0] == a && s[1] == b) return pos;
                ++pos;
            }
            throw field_error("internal error: Plücker index lookup failed");
        };
        for (unsigned a = 0; a < model.m(); ++a)
            for (unsigned b = a + 1; b < model.m(); ++b)
                for (unsigned c = b + 1; c < model.m(); ++c)
                    for (unsigned d = c + 1; d < model.m(); ++d) {
                        Scalar rel = p.coords()[idx(a, b)] * p.coords()[idx(c, d)] -
                                     p.coords()[idx(a, c)] * p.coords()[idx(b, d)] +
                                     p.coords()[idx(a, d)] * p.coords()[idx(b, c)];
                        if (!rel.is_zero())
                            throw field_error("internal error: Plücker relation violated");
                    }
    }
    return p;
}

// Product of projective spaces P^{m_1} x ... x P^{m_k} with its Segre
// embedding; image coordinates are indexed lexicographically by one
// coordinate index per factor.
class SegreModel {
public:
    explicit SegreModel(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        if (dims_.size() < 2) throw field_error("Segre model needs at least 2 factors");
    }

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t ambient_dim() const {
        std::size_t n = 1;
        for (std::size_t d : dims_) n *= d + 1;
        return n - 1;
    }

private:
    std::vector<std::size_t> dims_;
};

inline ProjectivePoint segre_embed(const SegreModel& model,
                                   const std::vector<ProjectivePoint>& pts) {
    if (pts.size() != model.dims().size()) throw field_error("Segre factor arity mismatch");
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].ambient_dim() != model.dims()[i])
            throw field_error("Segre factor dimension mismatch");
    const FieldPtr& field = pts[0].field();
    std::vector<Scalar> coords;
    std::vector<std::size_t> idx(pts.size(), 0);
    for (;;) {
        Scalar c = field->one();
        for (std::size_t f = 0; f < pts.size(); ++f) c *= pts[f].coords()[idx[f]];
        coords.push_back(c);
        std::size_t f = pts.size();
        while (f > 0) {
            --f;
            if (++idx[f] <= model.dims()[f]) break;
            idx[f] = 0;
        }
        if (f == 0 && idx[0] == 0) break;
    }
    return ProjectivePoint(field, std::move(coords));
}

}  // namespace cbkit
