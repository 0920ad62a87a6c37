#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cbkit/projective.hpp"

namespace cbkit {

// A line in P^N presented by N-1 independent linear forms cutting it out.
struct LineWitness {
    std::vector<std::vector<Scalar>> forms;
};

// A planar conic: the linear forms cutting the 2-plane plus a degree-2
// ambient form (a cone over the conic) vanishing on the set.
struct ConicWitness {
    std::vector<std::vector<Scalar>> plane_forms;
    HomogeneousForm conic;
};

enum class CurveKind { line, two_lines, smooth_conic, none };

inline const char* curve_kind_name(CurveKind k) {
    switch (k) {
        case CurveKind::line: return "line";
        case CurveKind::two_lines: return "two_lines";
        case CurveKind::smooth_conic: return "smooth_conic";
        default: return "none";
    }
}

// Most special low-degree curve containing the set; reporting order is
// line, then two_lines, then smooth_conic, since a degenerate set lies on
// several of them at once.
struct CurveClass {
    CurveKind kind = CurveKind::none;
    std::vector<LineWitness> lines;        // 1 entry for line, 2 for two_lines
    std::vector<std::size_t> per_line_counts;
    std::optional<ConicWitness> conic;
};

namespace detail {

inline bool on_line(const ProjectivePoint& p, const LineWitness& l) {
    for (const auto& form : l.forms) {
        Scalar acc = p.field()->zero();
        for (std::size_t i = 0; i < form.size(); ++i) acc += form[i] * p.coords()[i];
        if (!acc.is_zero()) return false;
    }
    return true;
}

// Forms vanishing on the span of the given points (their annihilator).
inline std::vector<std::vector<Scalar>> annihilator(const FieldPtr& field,
                                                    const std::vector<ProjectivePoint>& pts) {
    ExactMatrix m(field, pts.size(), pts[0].coords().size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts[i].coords().size(); ++j)
            m.at(i, j) = pts[i].coords()[j];
    return nullspace_basis(m);
}

inline LineWitness line_through(const ProjectivePoint& a, const ProjectivePoint& b) {
    return LineWitness{annihilator(a.field(), {a, b})};
}

inline bool same_line(const FieldPtr& field, const LineWitness& a, const LineWitness& b) {
    std::size_t cols = a.forms[0].size();
    ExactMatrix m(field, a.forms.size() + b.forms.size(), cols);
    for (std::size_t i = 0; i < a.forms.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = a.forms[i][j];
    for (std::size_t i = 0; i < b.forms.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(a.forms.size() + i, j) = b.forms[i][j];
    return rank(m) == cols - 2;
}

}  // namespace detail

// Line containing all of S, when one exists: the coordinate matrix must
// have rank <= 2 and its kernel supplies the cutting forms.
inline std::optional<LineWitness> collinear(const PointSet& s) {
    if (s.size() < 2) throw field_error("collinearity needs at least 2 points");
    ExactMatrix m = s.coordinate_matrix();
    if (rank(m) > 2) return std::nullopt;
    return LineWitness{nullspace_basis(m)};
}

// Cover of S by two distinct lines, searched over lines through point
// pairs in lexicographic index order; the first cover found wins. Counts
// report how many points of S lie on each line (shared points count on
// both).
struct TwoLines {
    LineWitness line1, line2;
    std::size_t count1 = 0, count2 = 0;
};

inline std::optional<TwoLines> on_two_lines(const PointSet& s) {
    if (s.size() < 2) throw field_error("two-line cover needs at least 2 points");
    if (s.size() > 64) throw field_error("two-line search capped at 64 points");
    const FieldPtr& field = s.field();

    auto finish = [&](const LineWitness& l1, const LineWitness& l2) -> std::optional<TwoLines> {
        if (detail::same_line(field, l1, l2)) return std::nullopt;
        TwoLines out{l1, l2, 0, 0};
        for (const auto& p : s.points()) {
            bool a = detail::on_line(p, l1), b = detail::on_line(p, l2);
            if (!a && !b) return std::nullopt;
            if (a) ++out.count1;
            if (b) ++out.count2;
        }
        return out;
    };

    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            LineWitness l1 = detail::line_through(s[i], s[j]);
            std::vector<ProjectivePoint> rest;
            for (const auto& p : s.points())
                if (!detail::on_line(p, l1)) rest.push_back(p);
            if (rest.size() >= 2) {
                ExactMatrix m(field, rest.size(), s.ambient_dim() + 1);
                for (std::size_t a = 0; a < rest.size(); ++a)
                    for (std::size_t b = 0; b <= s.ambient_dim(); ++b)
                        m.at(a, b) = rest[a].coords()[b];
                if (rank(m) > 2) continue;
                auto res = finish(l1, LineWitness{nullspace_basis(m)});
                if (res) return res;
            } else if (rest.size() == 1) {
                // any line through the stray point and a covered point works;
                // take the lexicographically first covered point
                auto res = finish(l1, detail::line_through(rest[0], s[i]));
                if (res) return res;
            } else {
                // everything already lies on l1; complete with a second line
                // through the first point, leaving l1
                for (std::size_t c = 0; c <= s.ambient_dim(); ++c) {
                    std::vector<Scalar> e(s.ambient_dim() + 1, field->zero());
                    e[c] = field->one();
                    ProjectivePoint q(field, std::move(e));
                    if (detail::on_line(q, l1) || q == s[0]) continue;
                    auto res = finish(l1, detail::line_through(s[0], q));
                    if (res) return res;
                }
            }
        }
    }
    return std::nullopt;
}

namespace detail {

// 3x3 symmetric matrix of a plane conic with coefficients in the
// graded-lex basis (u^2, uv, uw, v^2, vw, w^2); smoothness is rank 3.
inline ExactMatrix conic_gram(const FieldPtr& field, const std::vector<Scalar>& c) {
    Scalar half = field->from_int(2).inverse();
    ExactMatrix g(field, 3, 3);
    g.at(0, 0) = c[0];
    g.at(1, 1) = c[3];
    g.at(2, 2) = c[5];
    g.at(0, 1) = g.at(1, 0) = half * c[1];
    g.at(0, 2) = g.at(2, 0) = half * c[2];
    g.at(1, 2) = g.at(2, 1) = half * c[4];
    return g;
}

inline Scalar det3(const ExactMatrix& m) {
    return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
           m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
           m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

}  // namespace detail

// Smooth plane conic through S: S must span (or lie in) a 2-plane, no 3
// points may be collinear, and the space of plane conics through S must
// contain a member whose symmetric matrix has rank 3. A smooth member is
// located by scanning combinations of the kernel basis; the scan is
// exhaustive in the worst case, so "nullopt" is a genuine no.
inline std::optional<ConicWitness> on_smooth_conic(const PointSet& s) {
    if (s.size() < 3) throw field_error("conic test needs at least 3 points");
    const FieldPtr& field = s.field();
    ExactMatrix coords = s.coordinate_matrix();
    ExactMatrix red = coords;
    std::vector<std::size_t> pivots = rref_in_place(red);
    if (pivots.size() != 3) return std::nullopt;  // not planar, or collinear

    // a line meets a smooth conic in at most 2 points
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            LineWitness l = detail::line_through(s[i], s[j]);
            for (std::size_t k = j + 1; k < s.size(); ++k)
                if (detail::on_line(s[k], l)) return std::nullopt;
        }

    // plane coordinates: with an RREF basis, the coefficient of basis row
    // i is simply the point's pivot-column coordinate
    std::vector<ProjectivePoint> plane_pts;
    for (const auto& p : s.points()) {
        std::vector<Scalar> v;
        for (std::size_t piv : pivots) v.push_back(p.coords()[piv]);
        plane_pts.emplace_back(field, std::move(v));
    }
    PointSet planar(field, 2, std::move(plane_pts));
    std::vector<std::vector<Scalar>> kernel = nullspace_basis(evaluation_matrix(planar, 2));
    if (kernel.empty()) return std::nullopt;

    auto smooth = [&](const std::vector<Scalar>& c) {
        return !detail::det3(detail::conic_gram(field, c)).is_zero();
    };
    std::optional<std::vector<Scalar>> found;
    for (const auto& v : kernel)
        if (smooth(v)) { found = v; break; }
    if (!found && kernel.size() >= 2) {
        // the determinant is a cubic in the combination coefficients; with
        // no 3 points collinear a smooth member exists whenever the space
        // is nonempty, so a full projective scan of up to 3 basis vectors
        // is decisive (the kernel has dimension <= 3 here)
        std::vector<std::vector<Scalar>> lambdas;
        const long pmax = field->finite() ? static_cast<long>(field->characteristic()) : 64;
        std::size_t dim = std::min<std::size_t>(kernel.size(), 3);
        std::vector<long> idx(dim, 0);
        for (;;) {
            std::vector<Scalar> c(6, field->zero());
            bool all_zero = true;
            for (std::size_t d = 0; d < dim; ++d) {
                if (idx[d] != 0) all_zero = false;
                for (std::size_t j = 0; j < 6; ++j)
                    c[j] += field->from_int(idx[d]) * kernel[d][j];
            }
            if (!all_zero && smooth(c)) { found = c; break; }
            std::size_t d = dim;
            while (d > 0) {
                if (++idx[--d] < pmax) break;
                idx[d] = 0;
            }
            if (d == 0 && idx[0] == 0) break;
        }
    }
    if (!found) return std::nullopt;

    // ambient cone over the conic: substitute the pivot coordinates for
    // the plane variables (they restrict to the plane coordinates)
    MonomialBasis plane_basis(3, 2);
    HomogeneousForm ambient(field, s.ambient_dim() + 1, 2);
    for (std::size_t i = 0; i < plane_basis.size(); ++i) {
        if ((*found)[i].is_zero()) continue;
        std::vector<unsigned> expv(s.ambient_dim() + 1, 0);
        for (std::size_t d = 0; d < 3; ++d) expv[pivots[d]] += plane_basis[i][d];
        ambient.set_coeff(expv, (*found)[i]);
    }
    ExactMatrix plane_mat(field, 3, s.ambient_dim() + 1);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j <= s.ambient_dim(); ++j) plane_mat.at(i, j) = red.at(i, j);
    return ConicWitness{nullspace_basis(plane_mat), std::move(ambient)};
}

inline CurveClass classify_degree2(const PointSet& s) {
    if (s.size() < 2) throw field_error("classification needs at least 2 points");
    CurveClass out;
    if (auto l = collinear(s)) {
        out.kind = CurveKind::line;
        out.lines.push_back(std::move(*l));
        out.per_line_counts.push_back(s.size());
        return out;
    }
    if (auto t = on_two_lines(s)) {
        out.kind = CurveKind::two_lines;
        out.lines.push_back(std::move(t->line1));
        out.lines.push_back(std::move(t->line2));
        out.per_line_counts = {t->count1, t->count2};
        return out;
    }
    if (s.size() >= 3) {
        if (auto c = on_smooth_conic(s)) {
            out.kind = CurveKind::smooth_conic;
            out.conic = std::move(*c);
            return out;
        }
    }
    out.kind = CurveKind::none;
    return out;
}

}  // namespace cbkit
