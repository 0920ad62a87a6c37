#pragma once

#include <vector>

#include "cbkit/projection.hpp"

namespace cbkit {

// Ready-made instances of the five projection constructions, used by the
// CLI and the acceptance suite. Each builder returns a standard ambient
// (hyperbolic quadric, diagonal reference pencil, coordinate flags) plus a
// random hypersurface drawn from the supplied RNG, optionally constrained
// so the ci22 plane section degenerates in a prescribed way.

struct QuadricLineInstance {
    Quadric quadric;
    LinearSubspace line;
    HomogeneousForm f;
};

inline QuadricLineInstance make_quadric_line_instance(const FieldPtr& field, std::size_t n,
                                                      unsigned d, Rng& rng) {
    Quadric q = Quadric::hyperbolic(field, n + 3);
    LinearSubspace line = LinearSubspace::span_of_coordinates(field, n + 3, {0, 2});
    HomogeneousForm f = random_hypersurface(field, n + 2, d, {}, rng);
    return {std::move(q), std::move(line), std::move(f)};
}

struct QuadricDoubleInstance {
    Quadric quadric;
    LinearSubspace v, w;
    HomogeneousForm f;
};

// the quadric surface in P^3 with its two coordinate rulings (n = 1)
inline QuadricDoubleInstance make_quadric_double_instance(const FieldPtr& field, unsigned d,
                                                          Rng& rng) {
    Quadric q = Quadric::hyperbolic(field, 4);
    LinearSubspace v = LinearSubspace::span_of_coordinates(field, 4, {0, 2});
    LinearSubspace w = LinearSubspace::span_of_coordinates(field, 4, {1, 3});
    HomogeneousForm f = random_hypersurface(field, 3, d, {}, rng);
    return {std::move(q), std::move(v), std::move(w), std::move(f)};
}

struct Ci22Instance {
    QuadricPencil pencil;
    LinearSubspace plane;
    HomogeneousForm g;
};

namespace detail {

inline ExactMatrix diagonal_matrix(const FieldPtr& field, const std::vector<long>& entries) {
    ExactMatrix m(field, entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m.at(i, i) = field->from_int(entries[i]);
    return m;
}

// rational points of the reference plane conic x0^2 + 3 x2^2 + 5 x4^2 = 0
// inside P^5, enumerated deterministically
inline std::vector<ProjectivePoint> reference_conic_points(const FieldPtr& field,
                                                           std::size_t count) {
    std::vector<ProjectivePoint> pts;
    Scalar inv5 = field->from_int(5).inverse();
    for (std::uint64_t a = 0; a < field->characteristic() && pts.size() < count; ++a) {
        Scalar y0 = field->from_int(static_cast<long>(a));
        Scalar rhs = -(y0 * y0 + field->from_int(3)) * inv5;
        auto y2 = scalar_sqrt(rhs);
        if (!y2) continue;
        for (const Scalar& z : {*y2, -*y2}) {
            std::vector<Scalar> v(6, field->zero());
            v[0] = y0;
            v[2] = field->one();
            v[4] = z;
            ProjectivePoint p(field, v);
            bool dup = false;
            for (const auto& q : pts) dup = dup || q == p;
            if (!dup) pts.push_back(p);
        }
    }
    if (pts.size() < count)
        throw field_error("field too small to collect enough reference conic points");
    return pts;
}

}  // namespace detail

// The (2,2) reference: first member the hyperbolic quadric, the plane
// <e0, e2, e4> inside it. "generic" pairs it with the diagonal second
// member; "contains_line" swaps in a second member whose plane section is
// the split conic x0 x2 and constrains g through the line <e2, e4>;
// "contains_conic" constrains g through the plane conic.
inline Ci22Instance make_ci22_instance(const FieldPtr& field, unsigned d, Ci22Case which,
                                       Rng& rng) {
    LinearSubspace plane = LinearSubspace::span_of_coordinates(field, 6, {0, 2, 4});
    ExactMatrix m1 = Quadric::hyperbolic(field, 6).gram();
    std::vector<PointConstraint> cons;
    ExactMatrix m2(field, 6, 6);
    switch (which) {
        case Ci22Case::generic:
        case Ci22Case::contains_conic:
            m2 = detail::diagonal_matrix(field, {1, 2, 3, 4, 5, 6});
            if (which == Ci22Case::contains_conic) {
                // vanishing at 2d+1 conic points forces the whole conic in
                auto pts = detail::reference_conic_points(field, 2 * d + 1);
                for (const auto& p : pts) cons.push_back({p, true});
            }
            break;
        case Ci22Case::contains_line: {
            Scalar half = field->from_int(2).inverse();
            m2.at(0, 2) = m2.at(2, 0) = half;
            m2.at(4, 5) = m2.at(5, 4) = half;
            m2.at(1, 1) = m2.at(3, 3) = field->one();
            // d+1 points pin g to the line <e2, e4> of the split section
            for (long t = 0; t <= static_cast<long>(d); ++t) {
                std::vector<Scalar> v(6, field->zero());
                v[2] = field->one();
                v[4] = field->from_int(t);
                if (t == static_cast<long>(d)) {
                    v[2] = field->zero();
                    v[4] = field->one();
                }
                cons.push_back({ProjectivePoint(field, v), true});
            }
            break;
        }
    }
    HomogeneousForm g = random_hypersurface(field, 5, d, cons, rng);
    return {QuadricPencil(std::move(m1), std::move(m2)), std::move(plane), std::move(g)};
}

struct GrassmannInstance {
    PluckerModel model;
    LinearSubspace lambda, w;
    HomogeneousForm f;
};

inline GrassmannInstance make_grassmann_instance(const FieldPtr& field, unsigned k,
                                                 unsigned m, unsigned d, Rng& rng) {
    PluckerModel model(k, m);
    std::vector<std::size_t> first;
    for (unsigned i = 0; i + 1 < k; ++i) first.push_back(i);
    LinearSubspace lambda = LinearSubspace::span_of_coordinates(field, m, first);
    std::vector<std::size_t> rest;
    for (unsigned i = 1; i < m; ++i) rest.push_back(i);
    LinearSubspace w = LinearSubspace::span_of_coordinates(field, m, rest);
    HomogeneousForm f = random_hypersurface(field, model.ambient_dim(), d, {}, rng);
    return {std::move(model), std::move(lambda), std::move(w), std::move(f)};
}

struct ProductInstance {
    SegreModel model;
    ProjectivePoint center;
    MultiHomogeneousForm f;
};

inline ProductInstance make_product_instance(const FieldPtr& field,
                                             const std::vector<std::size_t>& dims,
                                             const std::vector<unsigned>& degrees,
                                             std::size_t factor, Rng& rng) {
    if (dims.size() != degrees.size() || dims.size() < 2)
        throw field_error("product instance needs matching dims and degrees, >= 2 factors");
    if (factor >= dims.size()) throw field_error("factor index out of range");
    SegreModel model(dims);
    MultiHomogeneousForm f(field, dims, degrees);
    std::vector<MonomialBasis> bases;
    for (std::size_t i = 0; i < dims.size(); ++i) bases.emplace_back(dims[i] + 1, degrees[i]);
    std::vector<std::size_t> idx(dims.size(), 0);
    for (;;) {
        std::vector<unsigned> e;
        for (std::size_t i = 0; i < dims.size(); ++i)
            for (unsigned x : bases[i][idx[i]]) e.push_back(x);
        f.set_coeff(e, field->random(rng));
        std::size_t i = idx.size();
        while (i > 0) {
            --i;
            if (++idx[i] < bases[i].size()) break;
            idx[i] = 0;
        }
        if (i == 0 && idx[0] == 0) break;
    }
    std::vector<Scalar> c;
    for (std::size_t i = 0; i <= dims[factor]; ++i) c.push_back(field->random(rng));
    c[0] = field->one();  // guaranteed nonzero, deterministic normalization
    return {std::move(model), ProjectivePoint(field, std::move(c)), std::move(f)};
}

}  // namespace cbkit
