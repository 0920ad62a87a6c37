#pragma once

#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "cbkit/cayley_bacharach.hpp"
#include "cbkit/fano.hpp"

namespace cbkit {

enum class Ci22Case { generic, contains_line, contains_conic };

inline const char* ci22_case_name(Ci22Case c) {
    switch (c) {
        case Ci22Case::generic: return "generic";
        case Ci22Case::contains_line: return "contains_line";
        default: return "contains_conic";
    }
}

// Symbolic degree of a projection: degree of the hypersurface form
// restricted to a general fiber carrier, minus the part supported on the
// base locus. Stability across independent samples is enforced, never
// averaged.
struct DegreeReport {
    std::size_t symbolic_degree = 0;
    std::size_t base_locus_drop = 0;
    std::optional<Ci22Case> case_tag;
    std::size_t samples_checked = 0;
};

// One explicit fiber: its carrier parametrization, the residue-field
// degrees of the fiber points, the assembled points over the splitting
// extension, and the CB verdict at the adjunction degree.
struct FiberSample {
    std::vector<BinaryForm> carrier;
    std::vector<Scalar> target;
    unsigned ext_degree = 1;
    std::vector<unsigned> residue_degrees;
    std::optional<PointSet> points;
    std::optional<CbReport> cb;
    bool cb_vacuous = false;
};

namespace detail {

constexpr unsigned kRetryCap = 32;
constexpr unsigned kMaxSplittingDegree = 60;

struct CarrierSample {
    std::vector<BinaryForm> coords;  // ambient coordinates as forms in (s,t)
    BinaryForm restricted;           // hypersurface form restricted to the carrier
    BinaryForm base;                 // roots = carrier points on the base locus
    std::vector<Scalar> target;      // image coordinates (may be empty)
};

inline Scalar lift_scalar(const FieldPtr& ext, const Scalar& c) {
    if (ext->same(*c.field())) return c;
    return ext->from_residues({c.residue()});
}

inline HomogeneousForm lift_form(const FieldPtr& ext, const HomogeneousForm& f) {
    HomogeneousForm out(ext, f.num_vars(), f.degree());
    for (const auto& [e, c] : f.terms()) out.set_coeff(e, lift_scalar(ext, c));
    return out;
}

inline std::vector<Scalar> eval_carrier(const FieldPtr& field,
                                        const std::vector<BinaryForm>& coords,
                                        const Scalar& s, const Scalar& t) {
    std::vector<Scalar> out;
    for (const auto& c : coords) {
        Scalar acc = field->zero();
        for (std::size_t i = 0; i <= c.degree(); ++i) {
            Scalar term = lift_scalar(field, c.coeff(i));
            for (std::size_t a = 0; a + i < c.degree(); ++a) term *= s;
            for (std::size_t a = 0; a < i; ++a) term *= t;
            acc += term;
        }
        out.push_back(acc);
    }
    return out;
}

inline void assert_carrier_in(const HomogeneousForm& eq,
                              const std::vector<BinaryForm>& coords, const char* what) {
    if (!eq.restrict_to(coords).is_zero())
        throw field_error(std::string("internal error: carrier leaves ") + what);
}

inline std::vector<Scalar> random_combination(const FieldPtr& field,
                                              const std::vector<std::vector<Scalar>>& basis,
                                              Rng& rng) {
    for (;;) {
        std::vector<Scalar> v(basis[0].size(), field->zero());
        bool zero = true;
        for (const auto& row : basis) {
            Scalar c = field->random(rng);
            if (!c.is_zero()) zero = false;
            for (std::size_t j = 0; j < row.size(); ++j) v[j] += c * row[j];
        }
        if (!zero) return v;
    }
}

// Parameter value avoiding the roots of a nonzero binary form, so image
// probes never land on the projection center.
inline std::pair<Scalar, Scalar> probe_param(const BinaryForm& avoid) {
    const FieldPtr& field = avoid.field();
    if (!avoid.eval(field->zero(), field->one()).is_zero())
        return {field->zero(), field->one()};
    for (long t = 0;; ++t) {
        Scalar tt = field->from_int(t);
        if (!avoid.eval(field->one(), tt).is_zero()) return {field->one(), tt};
    }
}

// Binary form whose projective roots are the common roots of all inputs.
inline BinaryForm common_zeros(const std::vector<BinaryForm>& ws) {
    std::optional<UniPoly> g;
    bool inf = true;
    bool any = false;
    const FieldPtr* field = nullptr;
    for (const auto& w : ws) {
        if (w.is_zero()) continue;
        any = true;
        field = &w.field();
        inf = inf && w.infinity_multiplicity() > 0;
        g = g ? gcd(*g, w.dehomogenize()) : w.dehomogenize();
    }
    if (!any) throw field_error("base-locus forms all vanish on the carrier");
    BinaryForm out(*field, g->coeffs().empty()
                               ? std::vector<Scalar>{(*field)->one()}
                               : g->coeffs());
    if (out.is_zero()) out = BinaryForm::constant(*field, (*field)->one());
    // a shared root at (0:1) is restored by the factor s, which drops
    // degree under dehomogenization
    if (inf) out = out * BinaryForm::linear(*field, (*field)->one(), (*field)->zero());
    return out;
}

// ---- carrier samplers, one per construction -------------------------------

// Residual line of a plane through a line on a quadric.
inline CarrierSample sample_quadric_line(const Quadric& q, const LinearSubspace& line,
                                         const HomogeneousForm& f, Rng& rng) {
    const FieldPtr& field = q.field();
    const std::size_t nv = q.num_vars();
    const auto& b0 = line.basis()[0];
    const auto& b1 = line.basis()[1];
    for (unsigned attempt = 0; attempt < kRetryCap; ++attempt) {
        std::vector<Scalar> u;
        for (std::size_t i = 0; i < nv; ++i) u.push_back(field->random(rng));
        // restricted quadric on the plane <b0, b1, u> in coords (y0,y1,y2)
        // is y2 (a y0 + b y1 + c y2) since the line is isotropic
        Scalar a = field->from_int(2) * q.bilinear(b0, u);
        Scalar b = field->from_int(2) * q.bilinear(b1, u);
        Scalar c = q.bilinear(u, u);
        if (a.is_zero() && b.is_zero()) continue;  // tangent or contained plane
        ExactMatrix cond(field, 1, 3);
        cond.at(0, 0) = a;
        cond.at(0, 1) = b;
        cond.at(0, 2) = c;
        auto dirs = nullspace_basis(cond);  // the residual line inside the plane
        std::vector<BinaryForm> coords;
        for (std::size_t j = 0; j < nv; ++j) {
            Scalar s_part = dirs[0][0] * b0[j] + dirs[0][1] * b1[j] + dirs[0][2] * u[j];
            Scalar t_part = dirs[1][0] * b0[j] + dirs[1][1] * b1[j] + dirs[1][2] * u[j];
            coords.push_back(BinaryForm::linear(field, s_part, t_part));
        }
        assert_carrier_in(q.form(), coords, "the quadric");
        BinaryForm restricted = f.restrict_to(coords);
        if (restricted.is_zero()) continue;  // carrier inside X: resample the plane
        // base locus: where the carrier meets the center line (y2 = 0)
        BinaryForm base = BinaryForm::linear(field, dirs[0][2], dirs[1][2]);
        if (base.is_zero()) continue;
        // image point: the whole plane maps to one point of P^n
        std::vector<Scalar> target;
        ExactMatrix lm(field, 2, nv);
        for (std::size_t j = 0; j < nv; ++j) {
            lm.at(0, j) = b0[j];
            lm.at(1, j) = b1[j];
        }
        auto ann = nullspace_basis(lm);
        auto [ps, pt] = probe_param(base);
        std::vector<Scalar> probe = eval_carrier(field, coords, ps, pt);
        for (const auto& lam : ann) {
            Scalar acc = field->zero();
            for (std::size_t j = 0; j < nv; ++j) acc += lam[j] * probe[j];
            target.push_back(acc);
        }
        return {std::move(coords), std::move(restricted), std::move(base),
                std::move(target)};
    }
    throw field_error("quadric line projection: no general plane found (retry cap)");
}

// Contracted line s v + t w between disjoint maximal isotropics.
inline CarrierSample sample_quadric_double(const Quadric& q, const LinearSubspace& V,
                                           const LinearSubspace& W, const HomogeneousForm& f,
                                           Rng& rng) {
    const FieldPtr& field = q.field();
    const std::size_t nv = q.num_vars();
    for (unsigned attempt = 0; attempt < kRetryCap; ++attempt) {
        std::vector<Scalar> v = random_combination(field, V.basis(), rng);
        // w must satisfy b(v, w) = 0 so that the line lies on the quadric
        ExactMatrix cond(field, 1, W.dim_linear());
        for (std::size_t i = 0; i < W.dim_linear(); ++i)
            cond.at(0, i) = q.bilinear(v, W.basis()[i]);
        auto sols = nullspace_basis(cond);
        if (sols.empty()) continue;
        std::vector<Scalar> wc = random_combination(field, sols, rng);
        std::vector<Scalar> w(nv, field->zero());
        for (std::size_t i = 0; i < W.dim_linear(); ++i)
            for (std::size_t j = 0; j < nv; ++j) w[j] += wc[i] * W.basis()[i][j];
        bool wz = true;
        for (const auto& c : w) wz = wz && c.is_zero();
        if (wz) continue;
        std::vector<BinaryForm> coords;
        for (std::size_t j = 0; j < nv; ++j)
            coords.push_back(BinaryForm::linear(field, v[j], w[j]));
        assert_carrier_in(q.form(), coords, "the quadric");
        BinaryForm restricted = f.restrict_to(coords);
        if (restricted.is_zero()) continue;
        // the whole line is one fiber of the map to P(V) x P(W): no base locus
        BinaryForm base = BinaryForm::constant(field, field->one());
        std::vector<Scalar> target = v;
        target.insert(target.end(), w.begin(), w.end());
        return {std::move(coords), std::move(restricted), base, std::move(target)};
    }
    throw field_error("quadric double projection: no general ruling line found (retry cap)");
}

// Residual conic of a 3-space through a plane inside one pencil member.
inline CarrierSample sample_ci22(const QuadricPencil& pencil, const LinearSubspace& plane,
                                 const PencilParameter& t, const HomogeneousForm& g,
                                 Rng& rng) {
    const FieldPtr& field = pencil.field();
    Quadric qt = t.infinity ? pencil.member_infinity() : pencil.member(t.t);
    if (!quadric_contains(qt, plane))
        throw field_error("plane is not inside the named pencil member");
    for (unsigned attempt = 0; attempt < kRetryCap; ++attempt) {
        std::vector<Scalar> u;
        for (std::size_t i = 0; i < 6; ++i) u.push_back(field->random(rng));
        // Lambda = <plane, u>; the restriction of Q_t splits off the plane
        // (y3 = 0), leaving a residual plane {l0 y0 + l1 y1 + l2 y2 + l3 y3 = 0}
        Scalar two = field->from_int(2);
        std::vector<Scalar> l = {two * qt.bilinear(plane.basis()[0], u),
                                 two * qt.bilinear(plane.basis()[1], u),
                                 two * qt.bilinear(plane.basis()[2], u),
                                 qt.bilinear(u, u)};
        if (l[0].is_zero() && l[1].is_zero() && l[2].is_zero()) continue;
        ExactMatrix cond(field, 1, 4);
        for (std::size_t i = 0; i < 4; ++i) cond.at(0, i) = l[i];
        auto res = nullspace_basis(cond);  // 3 vectors: the residual plane P'
        std::vector<std::vector<Scalar>> pp;
        for (const auto& row : res) {
            std::vector<Scalar> amb(6, field->zero());
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 6; ++j) amb[j] += row[i] * plane.basis()[i][j];
            for (std::size_t j = 0; j < 6; ++j) amb[j] += row[3] * u[j];
            pp.push_back(std::move(amb));
        }
        // complementary member carrying the residual conic
        Scalar ts = field->random(rng);
        if (!t.infinity && ts == t.t) continue;
        Quadric qs = pencil.member(ts);
        ExactMatrix a(field, 3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) a.at(i, j) = qs.bilinear(pp[i], pp[j]);
        if (rank(a) != 3) continue;  // degenerate residual conic: resample
        Quadric conic(a);
        // rational point on the conic (always exists over F_p)
        std::optional<std::vector<Scalar>> pt;
        for (unsigned inner = 0; inner < 128 && !pt; ++inner) {
            std::vector<Scalar> y = {field->random(rng), field->random(rng), field->one()};
            Scalar qa = a.at(2, 2);
            Scalar qb = two * (a.at(0, 2) * y[0] + a.at(1, 2) * y[1]);
            Scalar qc = a.at(0, 0) * y[0] * y[0] + two * a.at(0, 1) * y[0] * y[1] +
                        a.at(1, 1) * y[1] * y[1];
            if (qa.is_zero()) {
                pt = std::vector<Scalar>{field->zero(), field->zero(), field->one()};
                break;
            }
            Scalar disc = qb * qb - field->from_int(4) * qa * qc;
            auto root = scalar_sqrt(disc);
            if (!root) continue;
            Scalar z = (-qb + *root) * (two * qa).inverse();
            pt = std::vector<Scalar>{y[0], y[1], z};
        }
        if (!pt) continue;
        if (!conic.evaluate(*pt).is_zero())
            throw field_error("internal error: conic point search failed");
        // chord parametrization through pt: x = Q(u) pt - 2 b(pt,u) u with
        // u = sigma u1 + tau u2, quadratic in (sigma, tau)
        std::vector<std::vector<Scalar>> dirs;
        for (std::size_t i = 0; i < 3 && dirs.size() < 2; ++i) {
            std::vector<Scalar> e(3, field->zero());
            e[i] = field->one();
            ExactMatrix probe(field, 2 + dirs.size(), 3);
            for (std::size_t j = 0; j < 3; ++j) probe.at(0, j) = (*pt)[j];
            for (std::size_t r = 0; r < dirs.size(); ++r)
                for (std::size_t j = 0; j < 3; ++j) probe.at(1 + r, j) = dirs[r][j];
            for (std::size_t j = 0; j < 3; ++j) probe.at(1 + dirs.size(), j) = e[j];
            if (rank(probe) == 2 + dirs.size()) dirs.push_back(e);
        }
        const auto& u1 = dirs[0];
        const auto& u2 = dirs[1];
        auto bil = [&](const std::vector<Scalar>& x, const std::vector<Scalar>& y2) {
            return conic.bilinear(x, y2);
        };
        // Q(u) = Q(u1) s^2 + 2 b(u1,u2) s t + Q(u2) t^2
        BinaryForm qu(field, {bil(u1, u1), two * bil(u1, u2), bil(u2, u2)});
        // b(pt,u) = b(pt,u1) s + b(pt,u2) t
        BinaryForm bpu = BinaryForm::linear(field, bil(*pt, u1), bil(*pt, u2));
        std::vector<BinaryForm> conic_coords;  // in P' coordinates
        for (std::size_t i = 0; i < 3; ++i) {
            BinaryForm ui = BinaryForm::linear(field, u1[i], u2[i]);
            conic_coords.push_back((*pt)[i] * qu + (field->from_int(-2)) * (bpu * ui));
        }
        // parametrization must be nondegenerate: three sample points distinct
        {
            auto p1 = eval_carrier(field, conic_coords, field->one(), field->zero());
            auto p2 = eval_carrier(field, conic_coords, field->zero(), field->one());
            auto p3 = eval_carrier(field, conic_coords, field->one(), field->one());
            try {
                PointSet check(field, 2,
                               {ProjectivePoint(field, p1), ProjectivePoint(field, p2),
                                ProjectivePoint(field, p3)});
            } catch (const field_error&) {
                continue;
            }
        }
        std::vector<BinaryForm> coords;
        for (std::size_t j = 0; j < 6; ++j) {
            BinaryForm acc(field, std::size_t{2});
            for (std::size_t i = 0; i < 3; ++i) acc = acc + pp[i][j] * conic_coords[i];
            coords.push_back(acc);
        }
        assert_carrier_in(Quadric(pencil.m1()).form(), coords, "the first quadric");
        assert_carrier_in(Quadric(pencil.m2()).form(), coords, "the second quadric");
        BinaryForm restricted = g.restrict_to(coords);
        if (restricted.is_zero()) continue;
        // base locus: carrier points on the center plane
        ExactMatrix pm(field, 3, 6);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 6; ++j) pm.at(i, j) = plane.basis()[i][j];
        auto ann = nullspace_basis(pm);
        std::vector<BinaryForm> lam_restr;
        for (const auto& lam : ann) {
            BinaryForm acc(field, std::size_t{2});
            for (std::size_t j = 0; j < 6; ++j)
                acc = acc + lam[j] * coords[j];
            lam_restr.push_back(acc);
        }
        BinaryForm base = common_zeros(lam_restr);
        // image point in P^2 (the 3-space maps to one point)
        std::vector<Scalar> target;
        auto [ps, pt2] = probe_param(base);
        std::vector<Scalar> probe = eval_carrier(field, coords, ps, pt2);
        for (const auto& lam : ann) {
            Scalar acc = field->zero();
            for (std::size_t j = 0; j < 6; ++j) acc += lam[j] * probe[j];
            target.push_back(acc);
        }
        return {std::move(coords), std::move(restricted), std::move(base),
                std::move(target)};
    }
    throw field_error("ci22 projection: no general 3-space found (retry cap)");
}

// Pencil of k-planes between a flag, a line in the Plücker embedding.
inline CarrierSample sample_grassmann(const PluckerModel& model, const LinearSubspace& lambda,
                                      const LinearSubspace& w, const HomogeneousForm& f,
                                      Rng& rng) {
    const FieldPtr& field = lambda.field();
    const unsigned k = model.k(), m = model.m();
    if (lambda.dim_linear() != 1 || w.dim_linear() != m - 1)
        throw field_error("flag center needs dim(lambda) = 1 and dim(W) = m-1");
    // the hyperplane W as one linear functional
    ExactMatrix wm(field, m - 1, m);
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j < m; ++j) wm.at(i, j) = w.basis()[i][j];
    std::vector<Scalar> mu = nullspace_basis(wm)[0];
    auto mu_of = [&](const std::vector<Scalar>& x) {
        Scalar acc = field->zero();
        for (std::size_t j = 0; j < m; ++j) acc += mu[j] * x[j];
        return acc;
    };
    if (mu_of(lambda.basis()[0]).is_zero())
        throw field_error("flag center needs lambda not inside W");
    for (unsigned attempt = 0; attempt < kRetryCap; ++attempt) {
        // random k-plane Lambda with dim(Lambda ∩ W) = k-1 and lambda not in it
        std::vector<std::vector<Scalar>> rows;
        for (unsigned i = 0; i < k; ++i) {
            std::vector<Scalar> r;
            for (unsigned j = 0; j < m; ++j) r.push_back(field->random(rng));
            rows.push_back(std::move(r));
        }
        std::optional<LinearSubspace> L;
        try {
            L = LinearSubspace(field, rows);
        } catch (const field_error&) {
            continue;
        }
        // U = Lambda ∩ W: reduce against mu
        std::size_t special = k;
        for (std::size_t i = 0; i < k; ++i)
            if (!mu_of(rows[i]).is_zero()) { special = i; break; }
        if (special == k) continue;  // Lambda ⊂ W: degenerate
        std::vector<std::vector<Scalar>> ubasis;
        Scalar ms = mu_of(rows[special]);
        for (std::size_t i = 0; i < k; ++i) {
            if (i == special) continue;
            Scalar c = mu_of(rows[i]) * ms.inverse();
            std::vector<Scalar> v = rows[i];
            for (unsigned j = 0; j < m; ++j) v[j] -= c * rows[special][j];
            ubasis.push_back(std::move(v));
        }
        const std::vector<Scalar>& a = rows[special];
        const std::vector<Scalar>& b = lambda.basis()[0];
        // b must leave Lambda, so span(U, a) != span(U, b)
        {
            std::vector<std::vector<Scalar>> all = rows;
            all.push_back(b);
            ExactMatrix t(field, all.size(), m);
            for (std::size_t i = 0; i < all.size(); ++i)
                for (unsigned j = 0; j < m; ++j) t.at(i, j) = all[i][j];
            if (rank(t) != k + 1) continue;
        }
        // Plücker coordinates of span(U, s a + t b) are linear in (s, t)
        // by multilinearity of the minors in the last row
        auto plucker_of = [&](const std::vector<Scalar>& last) {
            std::vector<Scalar> out;
            for (const auto& subset : model.subsets()) {
                ExactMatrix minor(field, k, k);
                for (unsigned i = 0; i + 1 < k; ++i)
                    for (unsigned j = 0; j < k; ++j)
                        minor.at(i, j) = ubasis[i][subset[j]];
                for (unsigned j = 0; j < k; ++j) minor.at(k - 1, j) = last[subset[j]];
                out.push_back(determinant(minor));
            }
            return out;
        };
        std::vector<Scalar> pa = plucker_of(a), pb = plucker_of(b);
        std::vector<BinaryForm> coords;
        for (std::size_t j = 0; j < pa.size(); ++j)
            coords.push_back(BinaryForm::linear(field, pa[j], pb[j]));
        BinaryForm restricted = f.restrict_to(coords);
        if (restricted.is_zero()) continue;
        BinaryForm base = BinaryForm::constant(field, field->one());
        return {std::move(coords), std::move(restricted), base, {}};
    }
    throw field_error("Grassmannian projection: no general plane found (retry cap)");
}

struct ProductCarrier {
    std::vector<std::vector<BinaryForm>> factor_coords;
    BinaryForm restricted;
    BinaryForm base;
};

// Line through the center point in one factor, other factors frozen.
inline ProductCarrier sample_product(const SegreModel& model, std::size_t factor,
                                     const ProjectivePoint& x, const MultiHomogeneousForm& f,
                                     Rng& rng) {
    const FieldPtr& field = x.field();
    if (factor >= model.dims().size()) throw field_error("factor index out of range");
    if (x.ambient_dim() != model.dims()[factor])
        throw field_error("center point dimension mismatch");
    unsigned zero_streak = 0;
    for (unsigned attempt = 0; attempt < kRetryCap; ++attempt) {
        std::vector<std::vector<BinaryForm>> carriers;
        std::optional<ProjectivePoint> z;
        bool bad = false;
        for (std::size_t g = 0; g < model.dims().size(); ++g) {
            std::vector<BinaryForm> fc;
            if (g == factor) {
                std::vector<Scalar> zc;
                for (std::size_t j = 0; j <= model.dims()[g]; ++j)
                    zc.push_back(field->random(rng));
                try {
                    z = ProjectivePoint(field, zc);
                } catch (const field_error&) {
                    bad = true;
                    break;
                }
                if (*z == x) { bad = true; break; }
                for (std::size_t j = 0; j <= model.dims()[g]; ++j)
                    fc.push_back(BinaryForm::linear(field, x.coords()[j], z->coords()[j]));
            } else {
                for (std::size_t j = 0; j <= model.dims()[g]; ++j)
                    fc.push_back(BinaryForm::constant(field, field->random(rng)));
                bool allz = true;
                for (const auto& c : fc) allz = allz && c.is_zero();
                if (allz) { bad = true; break; }
            }
            carriers.push_back(std::move(fc));
        }
        if (bad) continue;
        BinaryForm restricted = f.restrict_to(carriers);
        if (restricted.is_zero()) {
            // distinguish a bad draw from the center slice lying inside X
            if (++zero_streak >= 8)
                throw field_error("center slice contained in X: choose another center");
            continue;
        }
        // base locus: the parameter (1:0) is the center point itself
        BinaryForm base = BinaryForm::linear(field, field->zero(), field->one());
        return {std::move(carriers), std::move(restricted), std::move(base)};
    }
    throw field_error("product projection: no general line found (retry cap)");
}

// ---- degree loop ----------------------------------------------------------

// Degree from repeated general carriers. Over a small field a random
// carrier occasionally hits X on the projection center, inflating the
// base-locus drop; such accidental samples are in the minority and can
// only lower the degree, so the generic value is the maximum. Samples
// below it are discarded (with a cap); a sample above it is impossible
// for a correct sampler and any residual disagreement is an error.
template <typename Sampler>
DegreeReport run_degree(Sampler&& sample, std::size_t samples) {
    DegreeReport out;
    bool have = false;
    std::size_t agreed = 0;
    for (std::size_t draw = 0; draw < samples + kRetryCap && agreed < samples; ++draw) {
        CarrierSample cs = sample();
        std::size_t total = cs.restricted.degree();
        std::size_t drop = shared_root_multiplicity(cs.restricted, cs.base);
        std::size_t deg = total - drop;
        if (!have || deg > out.symbolic_degree) {
            out.symbolic_degree = deg;
            out.base_locus_drop = drop;
            have = true;
            agreed = 1;
        } else if (deg == out.symbolic_degree) {
            if (drop != out.base_locus_drop)
                throw field_error("projection degree unstable across general samples");
            ++agreed;
        }
        // deg below the running maximum: accidental center hit, discard
    }
    if (agreed < samples)
        throw field_error("projection degree unstable across general samples");
    out.samples_checked = agreed;
    return out;
}

}  // namespace detail

inline DegreeReport degree_quadric_line(const Quadric& q, const LinearSubspace& line,
                                        const HomogeneousForm& f, Rng& rng,
                                        std::size_t samples = 10) {
    if (line.dim_projective() != 1) throw field_error("center must be a line");
    if (!quadric_contains(q, line)) throw field_error("center line must lie on the quadric");
    {
        std::vector<BinaryForm> lp;
        for (std::size_t j = 0; j < q.num_vars(); ++j)
            lp.push_back(BinaryForm::linear(q.field(), line.basis()[0][j], line.basis()[1][j]));
        if (f.restrict_to(lp).is_zero())
            throw field_error("line contained in X: projection degree drops — report and refuse");
    }
    return detail::run_degree(
        [&] { return detail::sample_quadric_line(q, line, f, rng); }, samples);
}

inline DegreeReport degree_quadric_double(const Quadric& q, const LinearSubspace& V,
                                          const LinearSubspace& W, const HomogeneousForm& f,
                                          Rng& rng, std::size_t samples = 10) {
    if (!quadric_contains(q, V) || !quadric_contains(q, W))
        throw field_error("projection centers must be isotropic");
    if (V.dim_linear() + W.dim_linear() != q.num_vars())
        throw field_error("isotropic centers must be maximal");
    ExactMatrix stack(q.field(), V.dim_linear() + W.dim_linear(), q.num_vars());
    for (std::size_t i = 0; i < V.dim_linear(); ++i)
        for (std::size_t j = 0; j < q.num_vars(); ++j) stack.at(i, j) = V.basis()[i][j];
    for (std::size_t i = 0; i < W.dim_linear(); ++i)
        for (std::size_t j = 0; j < q.num_vars(); ++j)
            stack.at(V.dim_linear() + i, j) = W.basis()[i][j];
    if (rank(stack) != q.num_vars())
        throw field_error("isotropic centers must not intersect");
    return detail::run_degree(
        [&] { return detail::sample_quadric_double(q, V, W, f, rng); }, samples);
}

inline DegreeReport degree_ci22_plane(const QuadricPencil& pencil, const LinearSubspace& plane,
                                      const HomogeneousForm& g, Rng& rng,
                                      std::size_t samples = 10) {
    if (plane.dim_projective() != 2) throw field_error("center must be a 2-plane");
    PencilParameter t = residual_quadric(pencil, plane);
    DegreeReport out = detail::run_degree(
        [&] { return detail::sample_ci22(pencil, plane, t, g, rng); }, samples);
    switch (out.base_locus_drop) {
        case 0: out.case_tag = Ci22Case::generic; break;
        case 1: out.case_tag = Ci22Case::contains_line; break;
        case 2: out.case_tag = Ci22Case::contains_conic; break;
        default: throw field_error("ci22 base locus drop exceeds 2: degenerate input");
    }
    return out;
}

inline DegreeReport degree_grassmann_flag(const PluckerModel& model,
                                          const LinearSubspace& lambda,
                                          const LinearSubspace& w, const HomogeneousForm& f,
                                          Rng& rng, std::size_t samples = 10) {
    if (model.k() == 1 || model.k() + 1 == model.m())
        throw field_error("flag projection excludes k = 1 and k = m-1");
    return detail::run_degree(
        [&] { return detail::sample_grassmann(model, lambda, w, f, rng); }, samples);
}

inline DegreeReport degree_product_point(const SegreModel& model, std::size_t factor,
                                         const ProjectivePoint& x,
                                         const MultiHomogeneousForm& f, Rng& rng,
                                         std::size_t samples = 10) {
    // same maximum-degree policy as detail::run_degree
    DegreeReport out;
    bool have = false;
    std::size_t agreed = 0;
    for (std::size_t draw = 0; draw < samples + detail::kRetryCap && agreed < samples;
         ++draw) {
        detail::ProductCarrier pc = detail::sample_product(model, factor, x, f, rng);
        std::size_t total = pc.restricted.degree();
        std::size_t drop = shared_root_multiplicity(pc.restricted, pc.base);
        std::size_t deg = total - drop;
        if (!have || deg > out.symbolic_degree) {
            out.symbolic_degree = deg;
            out.base_locus_drop = drop;
            have = true;
            agreed = 1;
        } else if (deg == out.symbolic_degree) {
            ++agreed;
        }
    }
    if (agreed < samples)
        throw field_error("projection degree unstable across general samples");
    out.samples_checked = agreed;
    return out;
}

// ---- explicit fibers and their CB verdicts --------------------------------

namespace detail {

// Assemble the fiber cut out by a carrier sample: strip the base locus,
// demand a reduced (transverse) fiber, list all points over the splitting
// extension, and run the CB check at the adjunction degree.
inline std::optional<FiberSample> assemble_fiber(const CarrierSample& cs, long adjunction_m,
                                                 const std::vector<HomogeneousForm>& ambient,
                                                 Rng& rng) {
    const FieldPtr& base_field = cs.restricted.field();
    StrippedForm sf = remove_shared_roots(cs.restricted, cs.base);
    if (sf.infinity_multiplicity > 1) return std::nullopt;
    std::vector<unsigned> factor_degrees;
    unsigned lcm_deg = 1;
    if (sf.affine_part.degree() >= 1) {
        Rng frng = rng.fork(0);
        for (const auto& [irr, mult] : factor(sf.affine_part, frng)) {
            if (mult > 1) return std::nullopt;  // tangential: not transverse
            factor_degrees.push_back(static_cast<unsigned>(irr.degree()));
            lcm_deg = static_cast<unsigned>(
                std::lcm<std::uint64_t>(lcm_deg, static_cast<unsigned>(irr.degree())));
            if (lcm_deg > kMaxSplittingDegree) return std::nullopt;
        }
    }
    FiberSample out;
    out.carrier = cs.coords;
    out.target = cs.target;
    out.ext_degree = lcm_deg;
    out.residue_degrees = factor_degrees;
    if (sf.infinity_multiplicity == 1) out.residue_degrees.push_back(1);

    FieldPtr field = lcm_deg == 1 ? base_field
                                  : Field::extension(base_field->characteristic(), lcm_deg);
    std::vector<ProjectivePoint> pts;
    if (sf.affine_part.degree() >= 1) {
        UniPoly poly = lcm_deg == 1
                           ? sf.affine_part
                           : sf.affine_part.map_coeffs(
                                 field, [&](const Scalar& c) { return lift_scalar(field, c); });
        Rng rrng = rng.fork(1);
        auto roots = roots_in_field(poly, rrng);
        if (roots.size() != static_cast<std::size_t>(poly.degree()))
            throw field_error("internal error: splitting field failed to split the fiber");
        for (const auto& [tau, mult] : roots) {
            (void)mult;
            pts.emplace_back(field, eval_carrier(field, cs.coords, field->one(), tau));
        }
    }
    if (sf.infinity_multiplicity == 1)
        pts.emplace_back(field, eval_carrier(field, cs.coords, field->zero(), field->one()));
    if (pts.size() < 2) return std::nullopt;

    std::optional<PointSet> set;
    try {
        set = PointSet(field, pts[0].ambient_dim(), pts);
    } catch (const field_error&) {
        return std::nullopt;  // coincident points: not a transverse sample
    }
    for (const auto& eq : ambient) {
        HomogeneousForm lifted = lift_form(field, eq);
        for (const auto& p : set->points())
            if (!lifted.evaluate(p).is_zero())
                throw field_error("internal error: fiber point violates an ambient equation");
    }
    out.points = std::move(set);
    if (adjunction_m >= 1) {
        out.cb = cb_check(*out.points, static_cast<unsigned>(adjunction_m));
    } else {
        out.cb_vacuous = true;
    }
    return out;
}

template <typename Sampler>
std::vector<FiberSample> collect_fibers(Sampler&& sample, long adjunction_m,
                                        const std::vector<HomogeneousForm>& ambient,
                                        std::size_t count, Rng& rng) {
    // establish the generic base-locus drop first, so carriers that hit X
    // on the center (smaller fibers) are rejected as non-general
    DegreeReport ref = run_degree(sample, 6);
    std::vector<FiberSample> out;
    unsigned failures = 0;
    while (out.size() < count) {
        CarrierSample cs = sample();
        if (shared_root_multiplicity(cs.restricted, cs.base) != ref.base_locus_drop) {
            if (++failures > kRetryCap) throw field_error("no transverse sample found");
            continue;
        }
        Rng sub = rng.fork(out.size() * 1000 + failures);
        auto fib = assemble_fiber(cs, adjunction_m, ambient, sub);
        if (!fib) {
            if (++failures > kRetryCap) throw field_error("no transverse sample found");
            continue;
        }
        out.push_back(std::move(*fib));
    }
    return out;
}

}  // namespace detail

inline std::vector<FiberSample> verify_fiber_cb_quadric_line(
    const Quadric& q, const LinearSubspace& line, const HomogeneousForm& f,
    std::size_t count, Rng& rng) {
    const long n = static_cast<long>(q.num_vars()) - 3;  // dim of X
    const long m = static_cast<long>(f.degree()) - n - 1;
    return detail::collect_fibers(
        [&] { return detail::sample_quadric_line(q, line, f, rng); }, m,
        {q.form(), f}, count, rng);
}

inline std::vector<FiberSample> verify_fiber_cb_quadric_double(
    const Quadric& q, const LinearSubspace& V, const LinearSubspace& W,
    const HomogeneousForm& f, std::size_t count, Rng& rng) {
    const long n = static_cast<long>(q.num_vars()) - 3;
    const long m = static_cast<long>(f.degree()) - n - 1;
    return detail::collect_fibers(
        [&] { return detail::sample_quadric_double(q, V, W, f, rng); }, m,
        {q.form(), f}, count, rng);
}

inline std::vector<FiberSample> verify_fiber_cb_ci22(
    const QuadricPencil& pencil, const LinearSubspace& plane, const HomogeneousForm& g,
    std::size_t count, Rng& rng) {
    PencilParameter t = residual_quadric(pencil, plane);
    const long m = static_cast<long>(g.degree()) - 2;
    return detail::collect_fibers(
        [&] { return detail::sample_ci22(pencil, plane, t, g, rng); }, m,
        {Quadric(pencil.m1()).form(), Quadric(pencil.m2()).form(), g}, count, rng);
}

inline std::vector<FiberSample> verify_fiber_cb_grassmann(
    const PluckerModel& model, const LinearSubspace& lambda, const LinearSubspace& w,
    const HomogeneousForm& f, std::size_t count, Rng& rng) {
    const long m = static_cast<long>(f.degree()) - model.m();
    return detail::collect_fibers(
        [&] { return detail::sample_grassmann(model, lambda, w, f, rng); }, m,
        {f}, count, rng);
}

// Product fibers are assembled in the product itself, and the CB check
// runs on the Segre re-embedding of the fiber points.
inline std::vector<FiberSample> verify_fiber_cb_product(
    const SegreModel& model, std::size_t factor, const ProjectivePoint& x,
    const MultiHomogeneousForm& f, std::size_t count, Rng& rng) {
    long m = 0;
    bool first = true;
    for (std::size_t i = 0; i < model.dims().size(); ++i) {
        long mi = static_cast<long>(f.multidegree()[i]) - static_cast<long>(model.dims()[i]) - 1;
        if (first || mi < m) m = mi;
        first = false;
    }
    DegreeReport ref = degree_product_point(model, factor, x, f, rng, 6);
    std::vector<FiberSample> out;
    unsigned failures = 0;
    while (out.size() < count) {
        detail::ProductCarrier pc = detail::sample_product(model, factor, x, f, rng);
        if (shared_root_multiplicity(pc.restricted, pc.base) != ref.base_locus_drop) {
            if (++failures > detail::kRetryCap)
                throw field_error("no transverse sample found");
            continue;
        }
        // fold the per-factor carriers into the Segre ambient: each Segre
        // coordinate is the product of one coordinate form per factor
        std::vector<BinaryForm> segre_coords;
        std::vector<std::size_t> idx(model.dims().size(), 0);
        const FieldPtr& base_field = x.field();
        for (;;) {
            BinaryForm acc = BinaryForm::constant(base_field, base_field->one());
            for (std::size_t g = 0; g < idx.size(); ++g)
                acc = acc * pc.factor_coords[g][idx[g]];
            segre_coords.push_back(acc);
            std::size_t g = idx.size();
            while (g > 0) {
                --g;
                if (++idx[g] <= model.dims()[g]) break;
                idx[g] = 0;
            }
            if (g == 0 && idx[0] == 0) break;
        }
        detail::CarrierSample cs{std::move(segre_coords), pc.restricted, pc.base, {}};
        Rng sub = rng.fork(out.size() * 1000 + failures);
        auto fib = detail::assemble_fiber(cs, m, {}, sub);
        if (!fib) {
            if (++failures > detail::kRetryCap)
                throw field_error("no transverse sample found");
            continue;
        }
        // assert the fiber against f in the product directly
        {
            const FieldPtr& ext = (*fib->points)[0].field();
            StrippedForm sf = remove_shared_roots(pc.restricted, pc.base);
            UniPoly poly = sf.affine_part.map_coeffs(
                ext, [&](const Scalar& c) { return detail::lift_scalar(ext, c); });
            Rng rrng = sub.fork(2);
            for (const auto& [tau, mult] : roots_in_field(poly, rrng)) {
                (void)mult;
                std::vector<ProjectivePoint> factors;
                for (std::size_t g = 0; g < model.dims().size(); ++g)
                    factors.emplace_back(ext, detail::eval_carrier(ext, pc.factor_coords[g],
                                                                   ext->one(), tau));
                MultiHomogeneousForm lifted(ext, f.factor_dims(), f.multidegree());
                for (const auto& [e, c] : f.terms())
                    lifted.set_coeff(e, detail::lift_scalar(ext, c));
                if (!lifted.evaluate(factors).is_zero())
                    throw field_error("internal error: fiber point leaves X");
            }
        }
        out.push_back(std::move(*fib));
    }
    return out;
}

}  // namespace cbkit
