#pragma once

#include <array>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cbkit/cayley_bacharach.hpp"
#include "cbkit/curve_class.hpp"
#include "cbkit/projection.hpp"

namespace cbkit {

// Implications stress-tested by the harness, each of the form "a CB(m) set
// with few enough points lies on a special low-degree curve". q73 is the
// exploratory degree-3 variant: outcomes are data, not claims.
enum class SearchMode { lemma18, thm19, remark111, q73 };

inline const char* search_mode_name(SearchMode m) {
    switch (m) {
        case SearchMode::lemma18: return "lemma18";
        case SearchMode::thm19: return "thm19";
        case SearchMode::remark111: return "remark111";
        default: return "q73";
    }
}

inline std::optional<SearchMode> search_mode_from_name(const std::string& s) {
    for (SearchMode m : {SearchMode::lemma18, SearchMode::thm19, SearchMode::remark111,
                         SearchMode::q73})
        if (s == search_mode_name(m)) return m;
    return std::nullopt;
}

enum class SearchGenerator { ci_fibers, projection_fibers, random_filtered };

inline const char* search_generator_name(SearchGenerator g) {
    switch (g) {
        case SearchGenerator::ci_fibers: return "ci_fibers";
        case SearchGenerator::projection_fibers: return "projection_fibers";
        default: return "random_filtered";
    }
}

inline std::optional<SearchGenerator> search_generator_from_name(const std::string& s) {
    for (SearchGenerator g : {SearchGenerator::ci_fibers, SearchGenerator::projection_fibers,
                              SearchGenerator::random_filtered})
        if (s == search_generator_name(g)) return g;
    return std::nullopt;
}

struct SearchJob {
    SearchMode mode = SearchMode::lemma18;
    unsigned q73_degree = 3;  // only 3 is supported
    std::uint64_t p = 101;    // prime field characteristic
    std::size_t ambient = 2;  // N: sets live in P^N
    unsigned m_min = 2, m_max = 2;
    std::size_t r_min = 2, r_max = 5;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    SearchGenerator generator = SearchGenerator::ci_fibers;
    // fault-injection hook for exercising the violation/reproducer path:
    // inverts every implication verdict so conforming sets get recorded.
    // Never serialized; test plumbing only.
    bool invert_implication = false;
};

// points-few-enough threshold r(m) for each mode
inline std::size_t search_threshold(SearchMode mode, unsigned m) {
    switch (mode) {
        case SearchMode::lemma18: return 2 * static_cast<std::size_t>(m) + 1;
        case SearchMode::q73: return 3 * static_cast<std::size_t>(m) + 1;
        default: return (5 * static_cast<std::size_t>(m)) / 2 + 1;  // thm19, remark111
    }
}

// Full reproducer for a recorded violation: replaying cb_check and
// classify_degree2 on `points` with this `m` reproduces the verdicts.
struct SearchViolation {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    unsigned m = 0;
    PointSet points;
    CbReport cb;
    CurveClass classification;
    std::string label;  // "violation" or "candidate counterexample" (q73)
};

struct SearchOutcome {
    std::size_t trials_run = 0;
    std::size_t cb_sets_found = 0;
    std::vector<SearchViolation> violations;
    // histogram: r -> counts per curve class (line, two_lines, smooth_conic, none)
    std::map<std::size_t, std::array<std::size_t, 4>> histogram;
    std::size_t q73_tested = 0, q73_contained = 0;
    double elapsed_seconds = 0.0;
    double trials_per_second = 0.0;
};

namespace detail {

inline ProjectivePoint random_point(const FieldPtr& field, std::size_t ambient, Rng& rng) {
    for (;;) {
        std::vector<Scalar> v;
        bool nonzero = false;
        for (std::size_t i = 0; i <= ambient; ++i) {
            v.push_back(field->random(rng));
            nonzero = nonzero || !v.back().is_zero();
        }
        if (nonzero) return ProjectivePoint(field, std::move(v));
    }
}

inline std::vector<Scalar> distinct_scalars(const FieldPtr& field, std::size_t count,
                                            Rng& rng) {
    if (count > field->characteristic())
        throw field_error("field too small for the requested point count");
    std::vector<Scalar> out;
    std::size_t guard = 0;
    while (out.size() < count) {
        Scalar t = field->random(rng);
        bool fresh = true;
        for (const auto& s : out)
            if (s == t) { fresh = false; break; }
        if (fresh) out.push_back(t);
        if (++guard > 64 * count)
            throw field_error("failed to draw distinct field elements");
    }
    return out;
}

// Embed a planar configuration into P^N through a random full-rank
// (N+1) x 3 matrix; this preserves collinearity, conic membership and the
// CB property (degree-m forms restrict onto the plane surjectively).
inline PointSet embed_planar(const std::vector<ProjectivePoint>& pts, std::size_t ambient,
                             Rng& rng) {
    const FieldPtr& field = pts[0].field();
    if (ambient == 2) return PointSet(field, 2, pts);
    for (int attempt = 0; attempt < 32; ++attempt) {
        ExactMatrix emb(field, ambient + 1, 3);
        for (std::size_t i = 0; i <= ambient; ++i)
            for (std::size_t j = 0; j < 3; ++j) emb.at(i, j) = field->random(rng);
        if (rank(emb) != 3) continue;
        std::vector<ProjectivePoint> out;
        for (const auto& p : pts) {
            std::vector<Scalar> v(ambient + 1, field->zero());
            for (std::size_t i = 0; i <= ambient; ++i)
                for (std::size_t j = 0; j < 3; ++j) v[i] += emb.at(i, j) * p.coords()[j];
            out.emplace_back(field, std::move(v));
        }
        return PointSet(field, ambient, std::move(out));
    }
    throw field_error("failed to draw a full-rank planar embedding");
}

// Complete-intersection sources of CB sets in a plane: b distinct points
// on a line are a (1,b) intersection and satisfy CB(b-2); 2b distinct
// points on a conic (smooth, or two lines avoiding the node) are a (2,b)
// intersection and satisfy CB(b-1).
enum class CiShape { line, smooth_conic, two_lines };

inline std::vector<ProjectivePoint> ci_planar_points(const FieldPtr& field, CiShape shape,
                                                     std::size_t b, Rng& rng) {
    std::vector<ProjectivePoint> pts;
    switch (shape) {
        case CiShape::line: {
            // line z = 0, points (1 : t : 0)
            for (const auto& t : distinct_scalars(field, b, rng))
                pts.push_back(ProjectivePoint(field, {field->one(), t, field->zero()}));
            break;
        }
        case CiShape::smooth_conic: {
            // conic xz = y^2, points (1 : t : t^2)
            for (const auto& t : distinct_scalars(field, 2 * b, rng))
                pts.push_back(ProjectivePoint(field, {field->one(), t, t * t}));
            break;
        }
        case CiShape::two_lines: {
            // lines x = 0 and y = 0 meeting at the node (0 : 0 : 1); the
            // chosen points avoid the node automatically
            for (const auto& t : distinct_scalars(field, b, rng))
                pts.push_back(ProjectivePoint(field, {field->zero(), field->one(), t}));
            for (const auto& t : distinct_scalars(field, b, rng))
                pts.push_back(ProjectivePoint(field, {field->one(), field->zero(), t}));
            break;
        }
    }
    return pts;
}

struct TrialResult {
    bool found = false;
    std::size_t r = 0;
    CurveKind kind = CurveKind::none;
    bool q73_tested = false, q73_contained = false;
    std::optional<SearchViolation> violation;
};

// Containment of a planar set in some degree-3 plane curve, decided by the
// rank of the evaluation matrix on the 10 cubic monomials of the plane.
// Non-planar sets are reported as not contained.
inline bool contained_in_plane_cubic(const PointSet& s) {
    const FieldPtr& field = s.field();
    ExactMatrix red = s.coordinate_matrix();
    std::vector<std::size_t> pivots = rref_in_place(red);
    if (pivots.size() > 3) return false;
    if (pivots.size() < 3) return true;  // collinear sets lie on cubics trivially
    std::vector<ProjectivePoint> plane_pts;
    for (const auto& p : s.points()) {
        std::vector<Scalar> v;
        for (std::size_t piv : pivots) v.push_back(p.coords()[piv]);
        plane_pts.emplace_back(field, std::move(v));
    }
    PointSet planar(field, 2, std::move(plane_pts));
    return rank(evaluation_matrix(planar, 3)) < 10;
}

inline TrialResult run_trial(const SearchJob& job, const FieldPtr& field,
                             std::size_t index) {
    Rng rng = Rng(job.seed).fork(index);
    TrialResult out;
    unsigned m = job.m_min + static_cast<unsigned>(rng.below(job.m_max - job.m_min + 1));

    std::optional<PointSet> set;
    switch (job.generator) {
        case SearchGenerator::ci_fibers: {
            // admissible (shape, r) pairs whose CB level covers m
            std::vector<std::pair<CiShape, std::size_t>> options;
            for (std::size_t r = job.r_min; r <= job.r_max; ++r) {
                if (r >= static_cast<std::size_t>(m) + 2)
                    options.emplace_back(CiShape::line, r);
                if (r % 2 == 0 && r >= 2 * (static_cast<std::size_t>(m) + 1)) {
                    options.emplace_back(CiShape::smooth_conic, r);
                    options.emplace_back(CiShape::two_lines, r);
                }
            }
            if (options.empty()) return out;
            auto [shape, r] = options[rng.below(options.size())];
            std::size_t b = shape == CiShape::line ? r : r / 2;
            set = embed_planar(ci_planar_points(field, shape, b, rng), job.ambient, rng);
            break;
        }
        case SearchGenerator::projection_fibers: {
            // fibers of the line projection of a surface in a quadric
            // fourfold: d points on the residual line, CB(d-3)
            std::size_t d = static_cast<std::size_t>(m) + 3;
            if (d < job.r_min || d > job.r_max) return out;
            Quadric q = Quadric::hyperbolic(field, 5);
            LinearSubspace line = isotropic_subspace(q, 1, rng);
            HomogeneousForm f =
                random_hypersurface(field, 4, static_cast<unsigned>(d), {}, rng);
            auto fibers = verify_fiber_cb_quadric_line(q, line, f, 1, rng);
            // fibers routinely split only over an extension field; the CB
            // check and the classifier are field-generic, so use them as-is
            if (fibers.empty() || !fibers[0].points) return out;
            set = *fibers[0].points;
            break;
        }
        case SearchGenerator::random_filtered: {
            std::size_t r = job.r_min + rng.below(job.r_max - job.r_min + 1);
            std::vector<ProjectivePoint> pts;
            std::size_t guard = 0;
            while (pts.size() < r) {
                ProjectivePoint p = random_point(field, job.ambient, rng);
                bool fresh = true;
                for (const auto& q : pts)
                    if (q == p) { fresh = false; break; }
                if (fresh) pts.push_back(std::move(p));
                if (++guard > 64 * r) throw field_error("failed to draw distinct points");
            }
            set = PointSet(field, job.ambient, std::move(pts));
            break;
        }
    }

    CbReport cb = cb_check(*set, m);
    if (!cb.holds) return out;  // rejection sampling: not a CB set
    out.found = true;
    out.r = set->size();

    CurveClass cls = classify_degree2(*set);
    out.kind = cls.kind;

    bool within = set->size() <= search_threshold(job.mode, m);
    bool violated = false;
    std::string label = "violation";
    switch (job.mode) {
        case SearchMode::lemma18:
            // a CB(m) set can never have fewer than m+2 points, and within
            // the r <= 2m+1 regime it must be collinear
            violated = set->size() < static_cast<std::size_t>(m) + 2 ||
                       (within && cls.kind != CurveKind::line);
            break;
        case SearchMode::thm19:
            violated = within && cls.kind == CurveKind::none;
            break;
        case SearchMode::remark111:
            // two-line covers of CB(m) sets must carry >= m+1 points per line
            if (cls.kind == CurveKind::two_lines)
                for (std::size_t c : cls.per_line_counts)
                    violated = violated || c < static_cast<std::size_t>(m) + 1;
            break;
        case SearchMode::q73: {
            if (within) {
                out.q73_tested = true;
                out.q73_contained = contained_in_plane_cubic(*set);
                violated = !out.q73_contained;
                label = "candidate counterexample";
            }
            break;
        }
    }
    if (job.invert_implication) violated = !violated;
    if (violated)
        out.violation = SearchViolation{index, job.seed, m, *set, std::move(cb),
                                        std::move(cls), label};
    return out;
}

}  // namespace detail

// Deterministic multi-worker search: trial i always runs with the RNG
// forked from (seed, i), and results merge in index order, so the outcome
// is independent of the worker count.
inline SearchOutcome run_search(const SearchJob& job, std::size_t workers = 1) {
    if (job.mode == SearchMode::q73 && job.q73_degree != 3)
        throw field_error("only degree-3 exploratory containment is supported");
    if (job.m_min < 1 || job.m_min > job.m_max) throw field_error("invalid m range");
    if (job.r_min < 2 || job.r_min > job.r_max) throw field_error("invalid r range");
    if (job.r_max > search_threshold(job.mode, job.m_max))
        throw field_error("r range exceeds the mode's threshold formula");
    if (job.p <= 2 * std::max<std::uint64_t>(job.m_max, job.r_max))
        throw field_error("characteristic too small for a faithful CB check");
    if (job.generator == SearchGenerator::projection_fibers && job.ambient != 4)
        throw field_error("projection_fibers generates fibers in P^4");
    if (workers == 0) workers = 1;

    auto field = Field::prime(job.p);
    auto start = std::chrono::steady_clock::now();

    std::vector<detail::TrialResult> results(job.trials);
    auto run_slice = [&](std::size_t w) {
        for (std::size_t i = w; i < job.trials; i += workers)
            results[i] = detail::run_trial(job, field, i);
    };
    if (workers == 1) {
        run_slice(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_slice, w);
        for (auto& t : pool) t.join();
    }

    SearchOutcome out;
    out.trials_run = job.trials;
    for (auto& res : results) {
        if (!res.found) continue;
        ++out.cb_sets_found;
        ++out.histogram[res.r][static_cast<std::size_t>(res.kind)];
        if (res.q73_tested) {
            ++out.q73_tested;
            if (res.q73_contained) ++out.q73_contained;
        }
        if (res.violation) out.violations.push_back(std::move(*res.violation));
    }
    auto stop = std::chrono::steady_clock::now();
    out.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
    out.trials_per_second =
        out.elapsed_seconds > 0 ? job.trials / out.elapsed_seconds : 0.0;
    return out;
}

// Throughput comparison between the single-elimination CB path and the
// reference path with one elimination per removed point, on identical
// random point sets; used as a performance regression gate.
struct ThroughputReport {
    std::size_t sets = 0;
    double fast_seconds = 0.0, naive_seconds = 0.0;
    double speedup = 0.0;
};

inline ThroughputReport cb_speedup_benchmark(const FieldPtr& field, std::size_t ambient,
                                             std::size_t r, unsigned m, std::size_t sets,
                                             std::uint64_t seed) {
    Rng rng(seed);
    // the search workload consists of CB sets, so benchmark on genuine CB
    // inputs: r >= m+2 distinct points on a random line
    std::vector<PointSet> inputs;
    for (std::size_t s = 0; s < sets; ++s) {
        ProjectivePoint a = detail::random_point(field, ambient, rng);
        ProjectivePoint b = detail::random_point(field, ambient, rng);
        std::vector<ProjectivePoint> pts = {a};
        std::size_t guard = 0;
        while (pts.size() < r) {
            Scalar t = field->random(rng);
            std::vector<Scalar> v;
            for (std::size_t i = 0; i <= ambient; ++i)
                v.push_back(a.coords()[i] + t * b.coords()[i]);
            ProjectivePoint p(field, std::move(v));
            bool fresh = true;
            for (const auto& q : pts)
                if (q == p) { fresh = false; break; }
            if (fresh) pts.push_back(std::move(p));
            if (++guard > 64 * r) throw field_error("field too small for benchmark sets");
        }
        inputs.emplace_back(field, ambient, std::move(pts));
    }
    ThroughputReport rep;
    rep.sets = sets;
    auto time = [&](auto&& f) {
        auto start = std::chrono::steady_clock::now();
        for (const auto& s : inputs) {
            CbReport r1 = f(s, m);
            (void)r1;
        }
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    };
    rep.fast_seconds = time([](const PointSet& s, unsigned mm) { return cb_check(s, mm); });
    rep.naive_seconds =
        time([](const PointSet& s, unsigned mm) { return cb_check_naive(s, mm); });
    rep.speedup = rep.fast_seconds > 0 ? rep.naive_seconds / rep.fast_seconds : 0.0;
    return rep;
}

}  // namespace cbkit
