#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cbkit/projective.hpp"

namespace cbkit {

// Verdict of the CB(m) test on a point set: the condition holds when every
// degree-m divisor through all but one point also passes through the last
// one. Equivalently, dropping any single point must not lower the rank of
// the degree-m evaluation matrix.
struct CbReport {
    unsigned m = 0;
    bool holds = false;
    std::optional<std::size_t> failing_point;
    std::optional<HomogeneousForm> witness_form;
    // per point: (rank of the full matrix, rank with that point removed)
    std::vector<std::pair<std::size_t, std::size_t>> ranks;
};

namespace detail {

inline void cb_guard(const PointSet& s, unsigned m) {
    if (s.size() < 2) throw field_error("CB undefined");
    if (m < 1) throw field_error("CB undefined");
    if (s.field()->finite()) {
        std::uint64_t bound = 2 * std::max<std::uint64_t>(m, s.size());
        if (s.field()->characteristic() <= bound)
            throw field_error("characteristic too small for a faithful CB check");
    }
}

// Witness that CB fails at point p: a degree-m form vanishing on S minus p
// but not at p, normalized so its first nonzero coefficient is 1.
inline HomogeneousForm cb_witness(const PointSet& s, unsigned m, std::size_t p) {
    PointSet rest = s.without(p);
    MonomialBasis basis(s.ambient_dim() + 1, m);
    ExactMatrix ev = evaluation_matrix(rest, m);
    for (const auto& v : nullspace_basis(ev)) {
        HomogeneousForm f = HomogeneousForm::from_coeff_vector(s.field(), basis, v);
        Scalar at_p = f.evaluate(s[p]);
        if (!at_p.is_zero()) {
            std::vector<Scalar> scaled = v;
            for (const auto& c : v) {
                if (!c.is_zero()) {
                    Scalar inv = c.inverse();
                    for (auto& x : scaled) x *= inv;
                    break;
                }
            }
            return HomogeneousForm::from_coeff_vector(s.field(), basis, scaled);
        }
    }
    throw field_error("internal error: rank dropped but no witness form found");
}

}  // namespace detail

// Rank criterion for CB(m), computed from a single elimination: removing
// row i keeps the rank exactly when row i depends on the others, i.e. when
// some left-kernel vector of the evaluation matrix is nonzero in slot i.
inline CbReport cb_check(const PointSet& s, unsigned m) {
    detail::cb_guard(s, m);
    ExactMatrix ev = evaluation_matrix(s, m);
    // left kernel of the evaluation matrix, computed as the nullspace of
    // the transpose: the elimination is as narrow as possible this way
    ExactMatrix evt(s.field(), ev.cols(), ev.rows());
    for (std::size_t i = 0; i < ev.rows(); ++i)
        for (std::size_t j = 0; j < ev.cols(); ++j) evt.at(j, i) = ev.at(i, j);
    std::vector<std::vector<Scalar>> kernel = nullspace_basis(evt);
    const std::size_t full = s.size() - kernel.size();
    CbReport report;
    report.m = m;
    report.holds = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool dependent = false;
        for (const auto& y : kernel)
            if (!y[i].is_zero()) { dependent = true; break; }
        std::size_t minus = dependent ? full : full - 1;
        report.ranks.emplace_back(full, minus);
        if (!dependent && report.holds) {
            report.holds = false;
            report.failing_point = i;
        }
    }
    if (!report.holds)
        report.witness_form = detail::cb_witness(s, m, *report.failing_point);
    return report;
}

// Same verdict via r+1 independent eliminations; kept as the slow
// reference path for the throughput comparison.
inline CbReport cb_check_naive(const PointSet& s, unsigned m) {
    detail::cb_guard(s, m);
    ExactMatrix ev = evaluation_matrix(s, m);
    std::size_t full = rank(ev);
    CbReport report;
    report.m = m;
    report.holds = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::size_t minus = rank(ev.without_row(i));
        report.ranks.emplace_back(full, minus);
        if (minus != full && report.holds) {
            report.holds = false;
            report.failing_point = i;
        }
    }
    if (!report.holds)
        report.witness_form = detail::cb_witness(s, m, *report.failing_point);
    return report;
}

// Literal restatement of the definition, used to cross-validate cb_check:
// CB holds at p when every degree-m form through S minus p also vanishes
// at p.
inline bool cb_check_oracle(const PointSet& s, unsigned m) {
    detail::cb_guard(s, m);
    MonomialBasis basis(s.ambient_dim() + 1, m);
    for (std::size_t p = 0; p < s.size(); ++p) {
        PointSet rest = s.without(p);
        ExactMatrix ev = evaluation_matrix(rest, m);
        for (const auto& v : nullspace_basis(ev)) {
            HomogeneousForm f = HomogeneousForm::from_coeff_vector(s.field(), basis, v);
            if (!f.evaluate(s[p]).is_zero()) return false;
        }
    }
    return true;
}

// Largest m <= m_max with CB(m); CB(m) implies CB(m') for m' <= m, and the
// downward scan double-checks that monotonicity on the way out.
inline std::optional<unsigned> max_cb_degree(const PointSet& s, unsigned m_max) {
    if (m_max < 1) throw field_error("CB undefined");
    std::optional<unsigned> best;
    for (unsigned m = m_max; m >= 1; --m) {
        if (cb_check(s, m).holds) {
            best = m;
            break;
        }
    }
    if (best) {
        for (unsigned m = 1; m < *best; ++m)
            if (!cb_check(s, m).holds)
                throw field_error("internal error: CB monotonicity violated");
    }
    return best;
}

}  // namespace cbkit
