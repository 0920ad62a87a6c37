#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbkit/bounds.hpp"
#include "cbkit/cayley_bacharach.hpp"
#include "cbkit/curve_class.hpp"
#include "cbkit/fano.hpp"
#include "cbkit/projection.hpp"
#include "cbkit/search.hpp"

namespace cbkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "cbkit/1";

// ---------------------------------------------------------------- fields

inline Json field_to_json(const FieldPtr& f) {
    Json j;
    if (!f->finite()) {
        j["kind"] = "rational";
    } else if (f->ext_degree() == 1) {
        j["kind"] = "prime";
        j["p"] = f->characteristic();
    } else {
        // extension fields are reconstructed from (p, degree): the modulus
        // choice is deterministic (lexicographically first monic irreducible)
        j["kind"] = "extension";
        j["p"] = f->characteristic();
        j["degree"] = f->ext_degree();
    }
    return j;
}

inline FieldPtr field_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rational") return Field::rationals();
    if (kind == "prime") return Field::prime(j.at("p").get<std::uint64_t>());
    if (kind == "extension")
        return Field::extension(j.at("p").get<std::uint64_t>(),
                                j.at("degree").get<unsigned>());
    throw field_error("unknown field kind in JSON: " + kind);
}

// Accepts the CLI shorthand too: "101", "Q", "101^2".
inline FieldPtr field_from_spec(const std::string& spec) {
    if (spec == "Q" || spec == "rational") return Field::rationals();
    std::size_t caret = spec.find('^');
    try {
        if (caret == std::string::npos) return Field::prime(std::stoull(spec));
        return Field::extension(std::stoull(spec.substr(0, caret)),
                                static_cast<unsigned>(std::stoul(spec.substr(caret + 1))));
    } catch (const std::logic_error&) {
        throw field_error("unparsable field spec: " + spec);
    }
}

// ---------------------------------------------------------------- points

inline Json point_set_to_json(const PointSet& s) {
    Json j;
    j["field"] = field_to_json(s.field());
    j["dim"] = s.ambient_dim();
    Json pts = Json::array();
    for (const auto& p : s.points()) {
        Json row = Json::array();
        for (const auto& c : p.coords()) row.push_back(c.to_string());
        pts.push_back(std::move(row));
    }
    j["points"] = std::move(pts);
    return j;
}

inline PointSet point_set_from_json(const Json& j) {
    FieldPtr field = field_from_json(j.at("field"));
    std::size_t dim = j.at("dim").get<std::size_t>();
    std::vector<ProjectivePoint> pts;
    for (const auto& row : j.at("points")) {
        std::vector<Scalar> coords;
        for (const auto& c : row) coords.push_back(field->parse(c.get<std::string>()));
        if (coords.size() != dim + 1)
            throw field_error("point has the wrong number of coordinates");
        pts.emplace_back(field, std::move(coords));
    }
    return PointSet(field, dim, std::move(pts));
}

// ---------------------------------------------------------------- forms

namespace detail {

inline std::string exponent_key(const std::vector<unsigned>& expv) {
    std::string key;
    for (std::size_t i = 0; i < expv.size(); ++i) {
        if (i) key += ',';
        key += std::to_string(expv[i]);
    }
    return key;
}

inline std::vector<unsigned> exponent_from_key(const std::string& key) {
    std::vector<unsigned> expv;
    std::stringstream ss(key);
    std::string tok;
    while (std::getline(ss, tok, ',')) expv.push_back(static_cast<unsigned>(std::stoul(tok)));
    return expv;
}

}  // namespace detail

inline Json form_to_json(const HomogeneousForm& f) {
    Json j;
    j["vars"] = f.num_vars();
    j["degree"] = f.degree();
    Json coeffs = Json::object();
    for (const auto& [expv, c] : f.terms()) coeffs[detail::exponent_key(expv)] = c.to_string();
    j["coeffs"] = std::move(coeffs);
    return j;
}

inline HomogeneousForm form_from_json(const FieldPtr& field, const Json& j) {
    HomogeneousForm f(field, j.at("vars").get<std::size_t>(), j.at("degree").get<unsigned>());
    for (const auto& [key, val] : j.at("coeffs").items())
        f.set_coeff(detail::exponent_from_key(key), field->parse(val.get<std::string>()));
    return f;
}

inline Json binary_form_to_json(const BinaryForm& f) {
    Json coeffs = Json::array();
    for (std::size_t i = 0; i <= f.degree(); ++i) coeffs.push_back(f.coeff(i).to_string());
    return coeffs;
}

inline Json scalar_list_to_json(const std::vector<Scalar>& v) {
    Json out = Json::array();
    for (const auto& c : v) out.push_back(c.to_string());
    return out;
}

// ---------------------------------------------------------------- subspaces, pencils

inline Json subspace_to_json(const LinearSubspace& v) {
    Json rows = Json::array();
    for (const auto& row : v.basis()) rows.push_back(scalar_list_to_json(row));
    Json j;
    j["num_vars"] = v.num_vars();
    j["basis"] = std::move(rows);
    return j;
}

inline LinearSubspace subspace_from_json(const FieldPtr& field, const Json& j) {
    std::vector<std::vector<Scalar>> rows;
    for (const auto& row : j.at("basis")) {
        std::vector<Scalar> r;
        for (const auto& c : row) r.push_back(field->parse(c.get<std::string>()));
        rows.push_back(std::move(r));
    }
    return LinearSubspace(field, rows);
}

inline Json matrix_to_json(const ExactMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ExactMatrix matrix_from_json(const FieldPtr& field, const Json& j) {
    std::size_t rows = j.size();
    std::size_t cols = rows ? j.at(0).size() : 0;
    ExactMatrix m(field, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k)
            m.at(i, k) = field->parse(j.at(i).at(k).get<std::string>());
    return m;
}

inline Json pencil_to_json(const QuadricPencil& pencil) {
    Json j;
    j["field"] = field_to_json(pencil.m1().field());
    j["m1"] = matrix_to_json(pencil.m1());
    j["m2"] = matrix_to_json(pencil.m2());
    return j;
}

inline QuadricPencil pencil_from_json(const Json& j) {
    FieldPtr field = field_from_json(j.at("field"));
    return QuadricPencil(matrix_from_json(field, j.at("m1")),
                         matrix_from_json(field, j.at("m2")));
}

inline Json pencil_discriminant_to_json(const PencilDiscriminant& pd) {
    Json j;
    Json disc = Json::array();
    for (long i = 0; i <= pd.discriminant.degree(); ++i)
        disc.push_back(pd.discriminant.coeff(static_cast<std::size_t>(i)).to_string());
    j["discriminant"] = std::move(disc);
    Json members = Json::array();
    for (const auto& sm : pd.singular_members) {
        Json e;
        e["root"] = sm.t.to_string();
        e["root_field"] = field_to_json(sm.t.field());
        e["root_degree"] = sm.root_degree;
        e["member_rank"] = sm.member_rank;
        members.push_back(std::move(e));
    }
    j["singular_members"] = std::move(members);
    j["check_infinity"] = pd.check_infinity;
    j["smooth_base_locus"] = pd.smooth_z;
    return j;
}

// ---------------------------------------------------------------- verdicts

inline Json cb_report_to_json(const CbReport& r) {
    Json j;
    j["m"] = r.m;
    j["holds"] = r.holds;
    if (r.failing_point) j["failing_point"] = *r.failing_point;
    if (r.witness_form) j["witness"] = form_to_json(*r.witness_form);
    Json ranks = Json::array();
    for (const auto& [full, minus] : r.ranks) ranks.push_back(Json::array({full, minus}));
    j["ranks"] = std::move(ranks);
    return j;
}

inline Json curve_class_to_json(const CurveClass& c) {
    Json j;
    j["kind"] = curve_kind_name(c.kind);
    Json lines = Json::array();
    for (const auto& l : c.lines) {
        Json forms = Json::array();
        for (const auto& f : l.forms) forms.push_back(scalar_list_to_json(f));
        lines.push_back(std::move(forms));
    }
    j["lines"] = std::move(lines);
    j["per_line_counts"] = c.per_line_counts;
    if (c.conic) {
        Json w;
        Json pf = Json::array();
        for (const auto& f : c.conic->plane_forms) pf.push_back(scalar_list_to_json(f));
        w["plane_forms"] = std::move(pf);
        w["conic"] = form_to_json(c.conic->conic);
        j["conic"] = std::move(w);
    }
    return j;
}

inline Json degree_report_to_json(const DegreeReport& r) {
    Json j;
    j["symbolic_degree"] = r.symbolic_degree;
    j["base_locus_drop"] = r.base_locus_drop;
    if (r.case_tag) j["case"] = ci22_case_name(*r.case_tag);
    j["samples_checked"] = r.samples_checked;
    return j;
}

inline Json fiber_sample_to_json(const FiberSample& s) {
    Json j;
    Json carrier = Json::array();
    for (const auto& f : s.carrier) carrier.push_back(binary_form_to_json(f));
    j["carrier"] = std::move(carrier);
    j["target"] = scalar_list_to_json(s.target);
    j["ext_degree"] = s.ext_degree;
    j["residue_degrees"] = s.residue_degrees;
    if (s.points) j["points"] = point_set_to_json(*s.points);
    if (s.cb) j["cb"] = cb_report_to_json(*s.cb);
    j["cb_vacuous"] = s.cb_vacuous;
    return j;
}

// ---------------------------------------------------------------- bounds

inline Json bounds_query_to_json(const BoundsQuery& q) {
    Json j;
    j["family"] = bounds_family_name(q.family);
    if (q.n) j["n"] = q.n;
    if (q.family != BoundsFamily::product) j["d"] = q.d;
    if (q.family == BoundsFamily::grassmannian) {
        j["k"] = q.k;
        j["m"] = q.m;
    }
    if (q.family == BoundsFamily::product) {
        j["factor_dims"] = q.factor_dims;
        j["factor_degrees"] = q.factor_degrees;
    }
    j["contains_line"] = q.contains_line;
    j["contains_conic"] = q.contains_conic;
    return j;
}

inline BoundsQuery bounds_query_from_json(const Json& j) {
    BoundsQuery q;
    auto fam = bounds_family_from_name(j.at("family").get<std::string>());
    if (!fam) throw field_error("unknown bounds family");
    q.family = *fam;
    if (j.contains("n")) q.n = j.at("n").get<unsigned>();
    if (j.contains("d")) q.d = j.at("d").get<unsigned>();
    if (j.contains("k")) q.k = j.at("k").get<unsigned>();
    if (j.contains("m")) q.m = j.at("m").get<unsigned>();
    if (j.contains("factor_dims"))
        q.factor_dims = j.at("factor_dims").get<std::vector<unsigned>>();
    if (j.contains("factor_degrees"))
        q.factor_degrees = j.at("factor_degrees").get<std::vector<unsigned>>();
    if (j.contains("contains_line")) q.contains_line = j.at("contains_line").get<bool>();
    if (j.contains("contains_conic")) q.contains_conic = j.at("contains_conic").get<bool>();
    return q;
}

inline Json bounds_verdict_to_json(const BoundsVerdict& v) {
    Json j;
    j["adjunction_exponent"] = v.adjunction_exponent;
    j["lower"] = Json{{"value", v.lower.value}, {"provenance", v.lower.provenance}};
    j["upper"] = Json{{"value", v.upper.value}, {"provenance", v.upper.provenance}};
    if (v.exact) {
        j["exact"] = *v.exact;
        j["exact_provenance"] = v.exact_provenance;
    }
    j["hypothesis_ok"] = v.hypothesis_ok;
    j["violated_hypotheses"] = v.violated_hypotheses;
    return j;
}

// ---------------------------------------------------------------- search

inline Json search_job_to_json(const SearchJob& job) {
    Json j;
    j["mode"] = search_mode_name(job.mode);
    if (job.mode == SearchMode::q73) j["q73_degree"] = job.q73_degree;
    j["p"] = job.p;
    j["ambient"] = job.ambient;
    j["m_min"] = job.m_min;
    j["m_max"] = job.m_max;
    j["r_min"] = job.r_min;
    j["r_max"] = job.r_max;
    j["trials"] = job.trials;
    j["seed"] = job.seed;
    j["generator"] = search_generator_name(job.generator);
    return j;
}

inline SearchJob search_job_from_json(const Json& j) {
    SearchJob job;
    auto mode = search_mode_from_name(j.at("mode").get<std::string>());
    if (!mode) throw field_error("unknown search mode");
    job.mode = *mode;
    if (j.contains("q73_degree")) job.q73_degree = j.at("q73_degree").get<unsigned>();
    if (j.contains("p")) job.p = j.at("p").get<std::uint64_t>();
    if (j.contains("ambient")) job.ambient = j.at("ambient").get<std::size_t>();
    job.m_min = j.at("m_min").get<unsigned>();
    job.m_max = j.at("m_max").get<unsigned>();
    job.r_min = j.at("r_min").get<std::size_t>();
    job.r_max = j.at("r_max").get<std::size_t>();
    if (j.contains("trials")) job.trials = j.at("trials").get<std::size_t>();
    if (j.contains("seed")) job.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("generator")) {
        auto gen = search_generator_from_name(j.at("generator").get<std::string>());
        if (!gen) throw field_error("unknown search generator");
        job.generator = *gen;
    }
    return job;
}

inline Json search_violation_to_json(const SearchViolation& v) {
    Json j;
    j["trial_index"] = v.trial_index;
    j["seed"] = v.seed;
    j["m"] = v.m;
    j["points"] = point_set_to_json(v.points);
    j["cb"] = cb_report_to_json(v.cb);
    j["classification"] = curve_class_to_json(v.classification);
    j["label"] = v.label;
    return j;
}

// The timestamp-free projection of an outcome; elapsed wall-clock numbers
// are reported separately so byte-level reproducibility can exclude them.
inline Json search_outcome_to_json(const SearchOutcome& out, bool with_timing = true) {
    Json j;
    j["trials_run"] = out.trials_run;
    j["cb_sets_found"] = out.cb_sets_found;
    Json viols = Json::array();
    for (const auto& v : out.violations) viols.push_back(search_violation_to_json(v));
    j["violations"] = std::move(viols);
    Json hist = Json::object();
    for (const auto& [r, counts] : out.histogram) {
        Json row;
        row["line"] = counts[0];
        row["two_lines"] = counts[1];
        row["smooth_conic"] = counts[2];
        row["none"] = counts[3];
        hist[std::to_string(r)] = std::move(row);
    }
    j["histogram"] = std::move(hist);
    j["q73_tested"] = out.q73_tested;
    j["q73_contained"] = out.q73_contained;
    if (with_timing) {
        j["elapsed_seconds"] = out.elapsed_seconds;
        j["trials_per_second"] = out.trials_per_second;
    }
    return j;
}

// ---------------------------------------------------------------- documents

inline Json with_schema(Json body) {
    Json doc;
    doc["schema"] = kSchemaTag;
    for (auto& [key, value] : body.items()) doc[key] = std::move(value);
    return doc;
}

}  // namespace cbkit
