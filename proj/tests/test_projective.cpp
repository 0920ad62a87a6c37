#include <catch2/catch_amalgamated.hpp>

#include "cbkit/projective.hpp"

using namespace cbkit;

TEST_CASE("point normalization and set construction") {
    auto f = Field::prime(101);
    ProjectivePoint p(f, {f->from_int(2), f->from_int(4), f->from_int(6)});
    CHECK(p.coords()[0] == f->one());
    CHECK(p.coords()[1] == f->from_int(2));
    CHECK(p.coords()[2] == f->from_int(3));
    // normalization is idempotent
    ProjectivePoint q(f, p.coords());
    CHECK(p == q);

    CHECK_THROWS_AS(ProjectivePoint(f, {f->zero(), f->zero()}), field_error);
    CHECK_THROWS_AS(PointSet(f, 1,
                             {ProjectivePoint::from_ints(f, {1, 2}),
                              ProjectivePoint::from_ints(f, {2, 4})}),
                    field_error);
}

TEST_CASE("monomial basis is graded-lex with descending exponents") {
    MonomialBasis b(3, 2);
    CHECK(b.size() == binomial(4, 2));
    CHECK(b[0] == std::vector<unsigned>({2, 0, 0}));
    CHECK(b[1] == std::vector<unsigned>({1, 1, 0}));
    CHECK(b[b.size() - 1] == std::vector<unsigned>({0, 0, 2}));
    for (const auto& mono : b.monomials()) {
        unsigned total = 0;
        for (unsigned e : mono) total += e;
        CHECK(total == 2);
    }
}

TEST_CASE("evaluation matrix examples") {
    auto f = Field::prime(101);
    PointSet single(f, 2, {ProjectivePoint::from_ints(f, {1, 7, 9})});
    ExactMatrix m1 = evaluation_matrix(single, 1);
    REQUIRE(m1.rows() == 1);
    REQUIRE(m1.cols() == 3);
    CHECK(m1.at(0, 0) == f->one());
    CHECK(m1.at(0, 1) == f->from_int(7));
    CHECK(m1.at(0, 2) == f->from_int(9));

    PointSet frame(f, 2,
                   {ProjectivePoint::from_ints(f, {1, 0, 0}),
                    ProjectivePoint::from_ints(f, {0, 1, 0}),
                    ProjectivePoint::from_ints(f, {0, 0, 1}),
                    ProjectivePoint::from_ints(f, {1, 1, 1})});
    CHECK(rank(evaluation_matrix(frame, 1)) == 3);

    // twisted points lie on the conic xz - y^2, which forces a nullvector
    std::vector<ProjectivePoint> conic_pts;
    for (long t = 0; t <= 5; ++t)
        conic_pts.push_back(ProjectivePoint::from_ints(f, {1, t, t * t}));
    PointSet conic(f, 2, std::move(conic_pts));
    ExactMatrix ev = evaluation_matrix(conic, 2);
    CHECK(rank(ev) == 5);
    CHECK(rank(ev) + nullspace_basis(ev).size() == ev.cols());

    CHECK_THROWS_AS(evaluation_matrix(frame, 0), field_error);
}

TEST_CASE("evaluation matrix rank is representative independent") {
    auto f = Field::prime(101);
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ProjectivePoint> pts, scaled;
        for (int i = 0; i < 5; ++i) {
            std::vector<Scalar> v;
            for (int j = 0; j < 4; ++j) v.push_back(f->random(rng));
            bool zero = true;
            for (const auto& c : v) zero = zero && c.is_zero();
            if (zero) v[0] = f->one();
            Scalar lambda = f->from_int(1 + static_cast<long>(rng.below(100)));
            std::vector<Scalar> w = v;
            for (auto& c : w) c *= lambda;
            pts.emplace_back(f, std::move(v));
            scaled.emplace_back(f, std::move(w));
        }
        try {
            PointSet a(f, 3, pts), b(f, 3, scaled);
            CHECK(rank(evaluation_matrix(a, 2)) == rank(evaluation_matrix(b, 2)));
        } catch (const field_error&) {
            continue;  // duplicate draw
        }
    }
}

TEST_CASE("form evaluation") {
    auto f = Field::prime(101);
    MonomialBasis b(3, 2);
    HomogeneousForm conic(f, 3, 2);
    conic.set_coeff({1, 0, 1}, f->one());
    conic.set_coeff({0, 2, 0}, f->from_int(-1));
    CHECK(conic.evaluate(ProjectivePoint::from_ints(f, {1, 2, 4})).is_zero());

    HomogeneousForm cube(f, 3, 3);
    cube.set_coeff({3, 0, 0}, f->one());
    CHECK(cube.evaluate(ProjectivePoint::from_ints(f, {0, 1, 0})).is_zero());

    CHECK_THROWS_AS(conic.set_coeff({1, 1, 1}, f->one()), field_error);

    // scaling the raw input scales the value by lambda^deg
    Rng rng(77);
    std::vector<Scalar> v = {f->random(rng), f->random(rng), f->one()};
    Scalar lambda = f->from_int(1 + static_cast<long>(rng.below(100)));
    std::vector<Scalar> w = v;
    for (auto& c : w) c *= lambda;
    CHECK(conic.evaluate_raw(w) == lambda * lambda * conic.evaluate_raw(v));
}

TEST_CASE("multihomogeneous forms evaluate and restrict") {
    auto f = Field::prime(101);
    // bidegree (1,1) on P^1 x P^1: x0*y0 - x1*y1
    MultiHomogeneousForm g(f, {1, 1}, {1, 1});
    g.set_coeff({1, 0, 1, 0}, f->one());
    g.set_coeff({0, 1, 0, 1}, f->from_int(-1));
    CHECK(g.evaluate({ProjectivePoint::from_ints(f, {1, 1}),
                      ProjectivePoint::from_ints(f, {1, 1})})
              .is_zero());
    CHECK(!g.evaluate({ProjectivePoint::from_ints(f, {1, 2}),
                       ProjectivePoint::from_ints(f, {1, 1})})
               .is_zero());

    // restrict along ([s:t], fixed [1:3]): (s) * 1 - (t) * 3
    std::vector<std::vector<BinaryForm>> carriers = {
        {BinaryForm::linear(f, f->one(), f->zero()),
         BinaryForm::linear(f, f->zero(), f->one())},
        {BinaryForm::constant(f, f->one()), BinaryForm::constant(f, f->from_int(3))}};
    BinaryForm r = g.restrict_to(carriers);
    REQUIRE(r.degree() == 1);
    CHECK(r.coeff(0) == f->one());
    CHECK(r.coeff(1) == f->from_int(-3));
}

TEST_CASE("substitute_linear restricts a form to a plane") {
    auto f = Field::prime(101);
    HomogeneousForm conic(f, 3, 2);
    conic.set_coeff({1, 0, 1}, f->one());
    conic.set_coeff({0, 2, 0}, f->from_int(-1));
    // plane x = y inside P^2, coordinates (u, v): substitute x=u, y=u, z=v
    std::vector<std::vector<Scalar>> L = {
        {f->one(), f->zero()}, {f->one(), f->zero()}, {f->zero(), f->one()}};
    HomogeneousForm restricted = conic.substitute_linear(L, 2);
    // u*v - u^2
    CHECK(restricted.evaluate_raw({f->one(), f->one()}).is_zero());
    CHECK(restricted.evaluate_raw({f->one(), f->from_int(2)}) == f->one());
}

TEST_CASE("random hypersurface honors constraints") {
    auto f = Field::prime(101);
    Rng rng(13);

    ProjectivePoint p = ProjectivePoint::from_ints(f, {1, 0, 0});
    HomogeneousForm line = random_hypersurface(f, 2, 1, {{p, true}}, rng);
    CHECK(line.evaluate(p).is_zero());

    // three collinear points determine the line through them up to scale
    std::vector<PointConstraint> cs;
    for (long t = 0; t <= 2; ++t)
        cs.push_back({ProjectivePoint::from_ints(f, {1, t, 2 * t}), true});
    HomogeneousForm l2 = random_hypersurface(f, 2, 1, cs, rng);
    for (const auto& c : cs) CHECK(l2.evaluate(c.point).is_zero());
    // 2y - z up to scale: coefficient of x must vanish
    CHECK(l2.terms().find({1, 0, 0}) == l2.terms().end());

    // unconstrained forms rarely vanish at a fixed point
    int zeros = 0;
    for (int i = 0; i < 50; ++i) {
        HomogeneousForm h = random_hypersurface(f, 2, 2, {}, rng);
        if (h.evaluate(ProjectivePoint::from_ints(f, {1, 5, 9})).is_zero()) ++zeros;
    }
    CHECK(zeros <= 5);

    // non-vanishing constraints are enforced by rejection
    HomogeneousForm h = random_hypersurface(
        f, 2, 2, {{p, true}, {ProjectivePoint::from_ints(f, {0, 1, 0}), false}}, rng);
    CHECK(h.evaluate(p).is_zero());
    CHECK(!h.evaluate(ProjectivePoint::from_ints(f, {0, 1, 0})).is_zero());
}

TEST_CASE("points on a degree-m hypersurface never give full column rank") {
    auto f = Field::prime(101);
    Rng rng(21);
    HomogeneousForm h = random_hypersurface(f, 2, 2, {}, rng);
    // collect rational points of V(h) by scanning a chart
    std::vector<ProjectivePoint> pts;
    for (long y = 0; y < 101 && pts.size() < 8; ++y)
        for (long z = 0; z < 101 && pts.size() < 8; ++z) {
            ProjectivePoint p = ProjectivePoint::from_ints(f, {1, y, z});
            if (h.evaluate(p).is_zero()) pts.push_back(p);
        }
    REQUIRE(pts.size() >= 4);
    PointSet s(f, 2, std::move(pts));
    CHECK(rank(evaluation_matrix(s, 2)) <= binomial(4, 2) - 1);
}
