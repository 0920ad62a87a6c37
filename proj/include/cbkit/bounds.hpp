#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "cbkit/field.hpp"

namespace cbkit {

// Families of ambient Fano varieties whose hypersurfaces the calculator
// covers. "n" is always the dimension of the hypersurface X itself.
enum class BoundsFamily { projective_space, quadric, cubic, ci22, grassmannian, product };

inline const char* bounds_family_name(BoundsFamily f) {
    switch (f) {
        case BoundsFamily::projective_space: return "projective_space";
        case BoundsFamily::quadric: return "quadric";
        case BoundsFamily::cubic: return "cubic";
        case BoundsFamily::ci22: return "ci22";
        case BoundsFamily::grassmannian: return "grassmannian";
        default: return "product";
    }
}

inline std::optional<BoundsFamily> bounds_family_from_name(const std::string& s) {
    for (BoundsFamily f :
         {BoundsFamily::projective_space, BoundsFamily::quadric, BoundsFamily::cubic,
          BoundsFamily::ci22, BoundsFamily::grassmannian, BoundsFamily::product})
        if (s == bounds_family_name(f)) return f;
    return std::nullopt;
}

struct BoundsQuery {
    BoundsFamily family = BoundsFamily::quadric;
    unsigned n = 0;  // dim X; derived for grassmannian/product/ci22 when 0
    unsigned d = 0;  // hypersurface degree (all families except product)
    unsigned k = 0, m = 0;             // Grassmannian Gr(k, m)
    std::vector<unsigned> factor_dims;     // product: m_1..m_k
    std::vector<unsigned> factor_degrees;  // product: d_1..d_k
    // caller-supplied assertions about curves on X; the verdict records
    // them as assumptions, it does not verify them
    bool contains_line = false;
    bool contains_conic = false;
};

struct Bound {
    std::size_t value = 0;
    std::string provenance;
};

struct BoundsVerdict {
    long adjunction_exponent = 0;  // p with omega_X = O_X(p)
    Bound lower, upper;
    std::optional<std::size_t> exact;
    std::string exact_provenance;
    bool hypothesis_ok = false;
    std::vector<std::string> violated_hypotheses;
};

// Closed-form degree-of-irrationality calculator: a generic lower bound
// p+2 from the positivity of the canonical series, a constructive upper
// bound from the matching projection, and the exact value whenever the
// query sits inside the proven range.
inline BoundsVerdict irr_bounds(const BoundsQuery& q) {
    BoundsVerdict v;
    auto require = [&](bool cond, const char* what) {
        if (!cond) v.violated_hypotheses.emplace_back(what);
        return cond;
    };
    auto invalid = [](const char* what) { throw field_error(what); };

    switch (q.family) {
        case BoundsFamily::projective_space: {
            if (q.n < 1 || q.d < 1) invalid("projective space query needs n >= 1, d >= 1");
            v.adjunction_exponent = static_cast<long>(q.d) - q.n - 2;
            v.upper = {std::max<std::size_t>(q.d, 2) - 1,
                       "projection from a point of X"};
            if (require(q.d >= 2 * q.n + 1, "d >= 2n+1")) {
                v.exact = q.d - 1;
                v.exact_provenance = "hypersurface in projective space, d >= 2n+1";
            }
            break;
        }
        case BoundsFamily::quadric: {
            if (q.n < 1 || q.d < 1) invalid("quadric query needs n >= 1, d >= 1");
            v.adjunction_exponent = static_cast<long>(q.d) - q.n - 1;
            v.upper = {q.d, "projection from a line on the quadric"};
            if (require(q.d >= 2 * q.n, "d >= 2n")) {
                v.exact = q.d;
                v.exact_provenance = "hypersurface in a quadric, d >= 2n";
            }
            break;
        }
        case BoundsFamily::cubic: {
            if (q.n < 1 || q.d < 1) invalid("cubic query needs n >= 1, d >= 1");
            v.adjunction_exponent = static_cast<long>(q.d) - q.n;
            if (q.contains_line)
                v.upper = {2 * q.d - 2, "projection from a line contained in X"};
            else
                v.upper = {2 * q.d, "projection from a line on the cubic"};
            bool dim_ok = require(q.n == 2 || q.n == 3, "n in {2, 3}");
            if (dim_ok && q.n == 2 && require(q.d >= 8, "d >= 8 (n = 2)")) {
                v.exact = q.contains_line ? 2 * q.d - 2 : 2 * q.d;
                v.exact_provenance = q.contains_line
                                         ? "surface in a cubic threefold containing a line"
                                         : "surface in a cubic threefold, no line";
            } else if (dim_ok && q.n == 3 && require(q.d >= 13, "d >= 13 (n = 3)")) {
                v.exact = 2 * q.d;
                v.exact_provenance = "threefold in a cubic fourfold, d >= 13";
            }
            break;
        }
        case BoundsFamily::ci22: {
            if (q.n != 0 && q.n != 2) invalid("ci22 surfaces have n = 2");
            if (q.d < 1) invalid("ci22 query needs d >= 1");
            v.adjunction_exponent = static_cast<long>(q.d) - 2;
            if (q.contains_conic)
                v.upper = {std::max<std::size_t>(2 * q.d, 3) - 2,
                           "projection from a plane meeting X in a conic"};
            else if (q.contains_line)
                v.upper = {2 * q.d - 1, "projection from a plane meeting X in a line"};
            else
                v.upper = {2 * q.d, "projection from a plane in a pencil quadric"};
            if (require(q.d >= 8, "d >= 8")) {
                v.exact = *&v.upper.value;
                v.exact_provenance =
                    q.contains_conic ? "ci22 surface containing a plane conic"
                    : q.contains_line ? "ci22 surface containing a line and no conic"
                                      : "ci22 surface with no line or conic";
            }
            break;
        }
        case BoundsFamily::grassmannian: {
            if (q.k == 0 || q.m <= q.k) invalid("Grassmannian query needs 0 < k < m");
            if (q.d < 1) invalid("Grassmannian query needs d >= 1");
            if (q.n != 0 && q.n + 1 != static_cast<unsigned>(q.k * (q.m - q.k)))
                invalid("Grassmannian hypersurface dimension is k(m-k) - 1");
            v.adjunction_exponent = static_cast<long>(q.d) - q.m;
            v.upper = {q.d, "projection along pencils of planes in a flag"};
            bool k_ok = require(q.k != 1 && q.k + 1 != q.m, "k not in {1, m-1}");
            if (k_ok && require(q.d + 5 >= 3 * q.m, "d >= 3m-5")) {
                v.exact = q.d;
                v.exact_provenance = "hypersurface in a Grassmannian, d >= 3m-5";
            }
            break;
        }
        case BoundsFamily::product: {
            const auto& ms = q.factor_dims;
            const auto& ds = q.factor_degrees;
            if (ms.size() < 2 || ms.size() != ds.size())
                invalid("product query needs matching m_i and d_i lists, >= 2 factors");
            unsigned dim = 0;
            for (unsigned mi : ms) {
                if (mi < 1) invalid("product factors need m_i >= 1");
                dim += mi;
            }
            for (unsigned di : ds)
                if (di < 1) invalid("product query needs d_i >= 1");
            if (q.n != 0 && q.n + 1 != dim)
                invalid("product hypersurface dimension is sum(m_i) - 1");
            long p = 0;
            bool first = true;
            unsigned mmax = 0, dmin = 0;
            for (std::size_t i = 0; i < ms.size(); ++i) {
                long pi = static_cast<long>(ds[i]) - ms[i] - 1;
                if (first || pi < p) p = pi;
                if (first || ds[i] < dmin) dmin = ds[i];
                mmax = std::max(mmax, ms[i]);
                first = false;
            }
            v.adjunction_exponent = p;
            v.upper = {dmin, "projection from a point in the lowest-degree factor"};
            if (require(p >= static_cast<long>(mmax), "min(d_i - m_i - 1) >= max(m_i)")) {
                v.exact = dmin;
                v.exact_provenance = "hypersurface in a product of projective spaces";
            }
            break;
        }
    }

    v.hypothesis_ok = v.violated_hypotheses.empty();
    // generic lower bound from the canonical series
    long lower = v.adjunction_exponent + 2;
    v.lower = {static_cast<std::size_t>(std::max<long>(lower, 1)),
               "canonical positivity: p + 2"};
    // sharper sandwich for cubic hypersurface sections in its proven range
    if (q.family == BoundsFamily::cubic && (q.n == 2 || q.n == 3) && q.d >= 5 * q.n - 2) {
        std::size_t sandwich = 2 * (q.d - q.n) + 2;
        if (sandwich > v.lower.value)
            v.lower = {sandwich, "line-fiber sandwich: 2(d-n) + 2"};
    }

    if (v.lower.value > v.upper.value)
        throw field_error("internal error: lower bound exceeds upper bound");
    if (v.exact && (*v.exact < v.lower.value || *v.exact > v.upper.value))
        throw field_error("internal error: exact value escapes the bounds");
    return v;
}

}  // namespace cbkit
