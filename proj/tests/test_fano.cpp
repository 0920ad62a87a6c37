#include <catch2/catch_amalgamated.hpp>

#include "cbkit/fano.hpp"

using namespace cbkit;

namespace {

ExactMatrix diag(const FieldPtr& f, std::vector<long> entries) {
    ExactMatrix m(f, entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m.at(i, i) = f->from_int(entries[i]);
    return m;
}

}  // namespace

TEST_CASE("quadric containment") {
    auto f = Field::prime(101);
    Quadric q = Quadric::hyperbolic(f, 6);
    CHECK(q.smooth());
    CHECK(quadric_contains(q, LinearSubspace::span_of_coordinates(f, 6, {0, 2, 4})));
    CHECK(!quadric_contains(q, LinearSubspace::span_of_coordinates(f, 6, {0, 1})));

    // the quadric form agrees with the Gram matrix
    HomogeneousForm form = q.form();
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        std::vector<Scalar> v;
        for (int j = 0; j < 6; ++j) v.push_back(f->random(rng));
        CHECK(form.evaluate_raw(v) == q.evaluate(v));
    }
}

TEST_CASE("isotropic subspaces") {
    auto f = Field::prime(101);
    Rng rng(303);
    Quadric q = Quadric::hyperbolic(f, 6);
    LinearSubspace plane = isotropic_subspace(q, 2, rng);
    CHECK(plane.dim_projective() == 2);
    CHECK(quadric_contains(q, plane));

    // a singular rank-5 member still contains planes
    Quadric singular(diag(f, {0, 1, -1, 2, -2, 3}));
    CHECK(singular.rank() == 5);
    LinearSubspace p2 = isotropic_subspace(singular, 2, rng);
    CHECK(quadric_contains(singular, p2));

    // projective dimension above the Witt bound is rejected
    CHECK_THROWS_AS(isotropic_subspace(q, 3, rng), field_error);

    // anisotropic binary form x^2 - 2 y^2 (2 is a non-residue mod 101)
    Quadric aniso(diag(f, {1, -2}));
    CHECK_THROWS_AS(isotropic_subspace(aniso, 0, rng), field_error);
}

TEST_CASE("pencil discriminant for the diagonal reference pencil") {
    auto f = Field::prime(101);
    Rng rng(55);
    QuadricPencil pencil(ExactMatrix::identity(f, 6), diag(f, {1, 2, 3, 4, 5, 6}));
    PencilDiscriminant pd = pencil_discriminant(pencil, rng);
    UniPoly expected = UniPoly::from_ints(f, {1});
    for (long i = 1; i <= 6; ++i) expected = expected * UniPoly::from_ints(f, {1, i});
    CHECK(pd.discriminant == expected);
    REQUIRE(pd.singular_members.size() == 6);
    for (const auto& sm : pd.singular_members) {
        CHECK(sm.root_degree == 1);
        CHECK(sm.member_rank == 5);
    }
    CHECK(pd.smooth_z);
    CHECK(!pd.check_infinity);

    // constant discriminant: singular members only at infinity
    QuadricPencil constant(ExactMatrix::identity(f, 6), ExactMatrix(f, 6, 6));
    PencilDiscriminant pc = pencil_discriminant(constant, rng);
    CHECK(pc.discriminant.degree() == 0);
    CHECK(pc.singular_members.empty());
    CHECK(pc.check_infinity);
    CHECK(!pc.smooth_z);

    // a rank-4 member forces a non-smooth base locus
    QuadricPencil bad(diag(f, {1, 1, 1, 1, 0, 0}), ExactMatrix::identity(f, 6));
    PencilDiscriminant pb = pencil_discriminant(bad, rng);
    CHECK(bad.member(f->zero()).rank() == 4);
    CHECK(!pb.smooth_z);
}

TEST_CASE("residual quadric recovers the construction parameter") {
    auto f = Field::prime(101);
    Rng rng(777);
    QuadricPencil pencil(ExactMatrix::identity(f, 6), diag(f, {1, 2, 3, 4, 5, 6}));
    REQUIRE(pencil_discriminant(pencil, rng).smooth_z);

    int recovered = 0;
    for (long t = 0; t < 30 && recovered < 10; ++t) {
        Quadric member = pencil.member(f->from_int(t));
        if (member.rank() < 6) continue;
        std::optional<LinearSubspace> plane;
        try {
            plane = isotropic_subspace(member, 2, rng);
        } catch (const field_error&) {
            continue;  // non-split member carries no planes
        }
        PencilParameter param = residual_quadric(pencil, *plane);
        REQUIRE(!param.infinity);
        CHECK(param.t == f->from_int(t));
        ++recovered;
    }
    CHECK(recovered >= 5);

    // plane inside the member at infinity
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            LinearSubspace plane = isotropic_subspace(pencil.member_infinity(), 2, rng);
            PencilParameter param = residual_quadric(pencil, plane);
            CHECK(param.infinity);
            break;
        } catch (const field_error&) {
            continue;
        }
    }
}

TEST_CASE("Plücker embedding") {
    auto f = Field::prime(101);
    PluckerModel gr24(2, 4);
    CHECK(gr24.ambient_dim() == 5);
    ProjectivePoint p = plucker_embed(gr24, LinearSubspace::span_of_coordinates(f, 4, {0, 1}));
    CHECK(p == ProjectivePoint::from_ints(f, {1, 0, 0, 0, 0, 0}));

    // basis change of the same subspace gives the same normalized point
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::vector<Scalar>> rows(2, std::vector<Scalar>(4, f->zero()));
        for (auto& row : rows)
            for (auto& c : row) c = f->random(rng);
        std::optional<LinearSubspace> v;
        try {
            v = LinearSubspace(f, rows);
        } catch (const field_error&) {
            continue;  // dependent draw
        }
        ProjectivePoint a = plucker_embed(gr24, *v);
        // mix the basis: (r0, r0 + 3 r1)
        std::vector<std::vector<Scalar>> mixed = rows;
        for (std::size_t j = 0; j < 4; ++j)
            mixed[1][j] = rows[0][j] + f->from_int(3) * rows[1][j];
        ProjectivePoint b = plucker_embed(gr24, LinearSubspace(f, mixed));
        CHECK(a == b);
        // the Plücker quadric p01 p23 - p02 p13 + p03 p12 = 0
        const auto& c = a.coords();
        CHECK((c[0] * c[5] - c[1] * c[4] + c[2] * c[3]).is_zero());
    }

    CHECK_THROWS_AS(PluckerModel(0, 4), field_error);
    CHECK_THROWS_AS(plucker_embed(gr24, LinearSubspace::span_of_coordinates(f, 4, {0})),
                    field_error);
}

TEST_CASE("Segre embedding") {
    auto f = Field::prime(101);
    SegreModel m({1, 2});
    CHECK(m.ambient_dim() == 5);
    ProjectivePoint p = segre_embed(m, {ProjectivePoint::from_ints(f, {1, 0}),
                                        ProjectivePoint::from_ints(f, {1, 0, 0})});
    CHECK(p == ProjectivePoint::from_ints(f, {1, 0, 0, 0, 0, 0}));

    // scaling any factor's raw input leaves the normalized image fixed, and
    // the image satisfies the 2x2 minor relations
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Scalar> a = {f->one(), f->random(rng)};
        std::vector<Scalar> b = {f->one(), f->random(rng), f->random(rng)};
        ProjectivePoint pa(f, a), pb(f, b);
        ProjectivePoint img = segre_embed(m, {pa, pb});
        std::vector<Scalar> a2 = a;
        for (auto& c : a2) c *= f->from_int(7);
        CHECK(segre_embed(m, {ProjectivePoint(f, a2), pb}) == img);
        // coordinates form the 2x3 matrix (x_i y_j); all 2x2 minors vanish
        const auto& c = img.coords();
        CHECK((c[0] * c[4] - c[1] * c[3]).is_zero());
        CHECK((c[0] * c[5] - c[2] * c[3]).is_zero());
        CHECK((c[1] * c[5] - c[2] * c[4]).is_zero());
    }
}
