#include <catch2/catch_amalgamated.hpp>

#include "cbkit/json_io.hpp"

using namespace cbkit;

TEST_CASE("field specs and JSON round-trip") {
    for (const auto& spec : {"101", "Q", "101^2"}) {
        FieldPtr f = field_from_spec(spec);
        FieldPtr back = field_from_json(field_to_json(f));
        CHECK(f->same(*back));
    }
    CHECK(field_from_spec("rational")->same(*Field::rationals()));
    CHECK_THROWS_AS(field_from_spec("abc"), field_error);

    Json j = field_to_json(Field::prime(101));
    CHECK(j["kind"] == "prime");
    CHECK(j["p"] == 101);
}

TEST_CASE("point sets round-trip in the documented format") {
    auto f = Field::prime(101);
    PointSet s(f, 2,
               {ProjectivePoint::from_ints(f, {1, 0, 0}), ProjectivePoint::from_ints(f, {0, 1, 0}),
                ProjectivePoint::from_ints(f, {1, 1, 1})});
    Json j = point_set_to_json(s);
    CHECK(j["field"]["kind"] == "prime");
    CHECK(j["dim"] == 2);
    CHECK(j["points"][0] == Json::array({"1", "0", "0"}));
    PointSet back = point_set_from_json(j);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == s[i]);

    // extension-field coordinates survive the round trip
    auto e = Field::extension(101, 2);
    std::vector<Scalar> c0 = {e->from_residues({1, 2}), e->one(), e->zero()};
    PointSet ext(e, 2, {ProjectivePoint(e, c0), ProjectivePoint::from_ints(e, {0, 0, 1})});
    PointSet ext_back = point_set_from_json(point_set_to_json(ext));
    CHECK(ext_back[0] == ext[0]);

    // rationals use exact fraction strings
    auto q = Field::rationals();
    PointSet rs(q, 1, {ProjectivePoint(q, {q->parse("1/3"), q->one()}),
                       ProjectivePoint::from_ints(q, {1, 0})});
    CHECK(point_set_from_json(point_set_to_json(rs))[0] == rs[0]);
}

TEST_CASE("forms round-trip with exponent-string keys") {
    auto f = Field::prime(101);
    HomogeneousForm form(f, 3, 3);
    form.set_coeff({2, 0, 1}, f->from_int(5));
    form.set_coeff({0, 3, 0}, f->from_int(100));
    Json j = form_to_json(form);
    CHECK(j["coeffs"]["2,0,1"] == "5");
    CHECK(j["coeffs"]["0,3,0"] == "100");
    HomogeneousForm back = form_from_json(f, j);
    CHECK(back.terms() == form.terms());
}

TEST_CASE("verdict serializers expose the documented fields") {
    auto f = Field::prime(101);
    // 4 collinear points: CB(2) holds
    std::vector<ProjectivePoint> pts;
    for (long t : {0, 1, 2, 3}) pts.push_back(ProjectivePoint::from_ints(f, {1, t, 0}));
    PointSet s(f, 2, pts);
    Json cb = cb_report_to_json(cb_check(s, 2));
    CHECK(cb["m"] == 2);
    CHECK(cb["holds"] == true);
    CHECK(cb["ranks"].size() == 4);

    // a failing check carries the witness form
    PointSet bad(f, 2,
                 {ProjectivePoint::from_ints(f, {1, 0, 0}), ProjectivePoint::from_ints(f, {0, 1, 0}),
                  ProjectivePoint::from_ints(f, {0, 0, 1})});
    Json cbf = cb_report_to_json(cb_check(bad, 1));
    CHECK(cbf["holds"] == false);
    CHECK(cbf.contains("failing_point"));
    CHECK(cbf.contains("witness"));

    Json cls = curve_class_to_json(classify_degree2(s));
    CHECK(cls["kind"] == "line");
    CHECK(cls["lines"].size() == 1);
    CHECK(cls["per_line_counts"] == Json::array({4}));
}

TEST_CASE("projection reports and fiber samples serialize") {
    auto f = Field::prime(101);
    Rng rng(5);
    Quadric q = Quadric::hyperbolic(f, 5);
    LinearSubspace line = isotropic_subspace(q, 1, rng);
    HomogeneousForm g = random_hypersurface(f, 4, 4, {}, rng);
    DegreeReport rep = degree_quadric_line(q, line, g, rng);
    Json j = degree_report_to_json(rep);
    CHECK(j["symbolic_degree"] == 4);
    CHECK(j["base_locus_drop"] == 0);
    CHECK(!j.contains("case"));

    auto fibers = verify_fiber_cb_quadric_line(q, line, g, 3, rng);
    REQUIRE(!fibers.empty());
    Json fs = fiber_sample_to_json(fibers[0]);
    CHECK(fs["carrier"].size() == 5);  // one parametrization coefficient list per variable
    CHECK(fs["target"].size() == 3);  // image point in P^2 after projecting from a line
    CHECK(fs.contains("cb") != fs["cb_vacuous"].get<bool>());
}

TEST_CASE("pencil serializers round-trip the Gram matrices") {
    auto f = Field::prime(101);
    ExactMatrix m2(f, 6, 6);
    for (std::size_t i = 0; i < 6; ++i) m2.at(i, i) = f->from_int(static_cast<long>(i + 1));
    QuadricPencil pencil(ExactMatrix::identity(f, 6), m2);
    Json j = pencil_to_json(pencil);
    QuadricPencil back = pencil_from_json(j);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t k = 0; k < 6; ++k) {
            CHECK(back.m1().at(i, k) == pencil.m1().at(i, k));
            CHECK(back.m2().at(i, k) == pencil.m2().at(i, k));
        }
    Rng rng(3);
    Json pd = pencil_discriminant_to_json(pencil_discriminant(pencil, rng));
    CHECK(pd["discriminant"].size() == 7);
    CHECK(pd["singular_members"].size() == 6);
    CHECK(pd["smooth_base_locus"] == true);
}

TEST_CASE("bounds queries and verdicts round-trip") {
    BoundsQuery q{BoundsFamily::quadric, 2, 4};
    Json jq = bounds_query_to_json(q);
    BoundsQuery back = bounds_query_from_json(jq);
    CHECK(back.family == q.family);
    CHECK(back.n == q.n);
    CHECK(back.d == q.d);

    Json jv = bounds_verdict_to_json(irr_bounds(q));
    CHECK(jv["exact"] == 4);
    CHECK(jv["hypothesis_ok"] == true);
    CHECK(jv["lower"]["value"].get<std::size_t>() <= jv["upper"]["value"].get<std::size_t>());

    BoundsQuery prod;
    prod.family = BoundsFamily::product;
    prod.factor_dims = {1, 2};
    prod.factor_degrees = {5, 6};
    BoundsQuery pback = bounds_query_from_json(bounds_query_to_json(prod));
    CHECK(pback.factor_dims == prod.factor_dims);
    CHECK(pback.factor_degrees == prod.factor_degrees);
}

TEST_CASE("search jobs and outcomes serialize deterministically") {
    SearchJob job;
    job.mode = SearchMode::lemma18;
    job.m_min = job.m_max = 2;
    job.r_min = 4;
    job.r_max = 5;
    job.trials = 200;
    job.seed = 7;
    SearchJob back = search_job_from_json(search_job_to_json(job));
    CHECK(back.mode == job.mode);
    CHECK(back.r_max == job.r_max);
    CHECK(back.seed == job.seed);

    SearchOutcome out = run_search(job);
    Json a = search_outcome_to_json(out, /*with_timing=*/false);
    Json b = search_outcome_to_json(run_search(job), /*with_timing=*/false);
    CHECK(a.dump() == b.dump());  // byte-identical without the timing fields
    CHECK(a["violations"].empty());
    CHECK(a["cb_sets_found"] == 200);
}

TEST_CASE("schema tag wraps documents") {
    Json body;
    body["holds"] = true;
    Json doc = with_schema(body);
    CHECK(doc["schema"] == "cbkit/1");
    CHECK(doc["holds"] == true);
    // schema comes first in the ordered document
    CHECK(doc.begin().key() == "schema");
}
