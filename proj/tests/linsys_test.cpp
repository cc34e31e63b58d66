#include <gtest/gtest.h>

#include "property_checks.hpp"

using namespace surjective;

namespace {

const FieldDesc& gf2() { return build_field(2); }

CubicForm form(const FieldDesc& f, std::string_view s) { return CubicForm::parse(FieldRing(f), s); }

PointConfig five_points() { return PointConfig({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {2, 3, 1}}); }
PointConfig six_points() { return PointConfig({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {2, 3, 1}, {3, 2, 1}}); }

// Brute-force oracle: common zeros of minimal degree d found by evaluating
// at every point of P^2(GF(p^d)).
std::map<unsigned, std::vector<ProjPoint>> brute_locus(const std::vector<CubicForm>& forms, unsigned max_degree) {
    std::map<unsigned, std::vector<ProjPoint>> out;
    const std::uint64_t p = field_of(forms.front()).characteristic();
    for (unsigned d = 1; d <= max_degree; ++d) {
        for (const auto& pt : enumerate_p2(build_field(p, d))) {
            if (minimal_degree(pt) != d) continue;
            bool all = true;
            for (const auto& g : forms) all = all && eval_form(g, pt).is_zero();
            if (all) out[d].push_back(pt);
        }
    }
    return out;
}

}  // namespace

TEST(PointConfig, ParsesAndRejects) {
    const auto cfg = PointConfig::parse("1:0:0\n0:1:0\n# comment\n\n0:0:1\n");
    EXPECT_EQ(cfg.points().size(), 3u);
    EXPECT_EQ(cfg.delta(), 6);
    EXPECT_THROW(PointConfig::parse("1:0:0\n2:0:0\n"), std::invalid_argument);
    EXPECT_THROW(PointConfig::parse("0:0:0\n"), std::invalid_argument);
    EXPECT_THROW(PointConfig::parse("1,0,0\n"), std::invalid_argument);
    EXPECT_THROW(PointConfig(std::vector<PointConfig::IntPoint>{}), std::invalid_argument);
}

TEST(PointConfig, CollinearTriples) {
    const PointConfig cfg({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}});
    ASSERT_EQ(cfg.collinear_triples().size(), 1u);
    EXPECT_EQ(cfg.collinear_triples()[0], (std::array<std::size_t, 3>{0, 1, 2}));
}

TEST(VanishingCubics, FivePointsModTwo) {
    const CubicSystem s = vanishing_cubics(five_points(), gf2());
    EXPECT_EQ(s.dim(), 5u);
    for (std::size_t i = 0; i < 5; ++i)
        for (const auto& g : s.basis) EXPECT_TRUE(eval_form(g, five_points().reduced(i, gf2())).is_zero());
}

TEST(VanishingCubics, OnePoint) {
    const CubicSystem s = vanishing_cubics(PointConfig({{1, 0, 0}}), gf2());
    EXPECT_EQ(s.dim(), 9u);
    for (const auto& g : s.basis) EXPECT_EQ(g[0], 0u);
}

TEST(VanishingCubics, SixPointsModTwo) { EXPECT_EQ(vanishing_cubics(six_points(), gf2()).dim(), 4u); }

TEST(VanishingCubics, GeneralPositionOverSeven) {
    EXPECT_EQ(vanishing_cubics(five_points(), build_field(7)).dim(), 5u);
    EXPECT_EQ(vanishing_cubics(six_points(), build_field(7)).dim(), 4u);
}

TEST(ListedBasis, Dimensions) {
    EXPECT_EQ(paper_lambda(LambdaCase::five_point, gf2()).dim(), 5u);
    EXPECT_EQ(paper_lambda(LambdaCase::six_point, gf2()).dim(), 4u);
}

TEST(ListedBasis, FivePointBasisVanishesAtCoordinatePoints) {
    for (const auto& g : paper_lambda(LambdaCase::five_point, gf2()).basis)
        for (const auto& c : {std::array<Elem, 3>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})
            EXPECT_TRUE(eval_form(g, ProjPoint(gf2(), c)).is_zero());
}

TEST(ListedBasis, ListedBasisMissesReducedPoint) {
    // x^2y + y^2z does not vanish at [0:1:1], the reduction of [2:3:1].
    const CubicForm g = paper_lambda(LambdaCase::five_point, gf2()).basis[0];
    EXPECT_EQ(eval_form(g, ProjPoint(gf2(), {0, 1, 1})).code(), 1u);
}

TEST(IntegerGenerators, VanishOnThePointsOverSeven) {
    const FieldDesc& f = build_field(7);
    for (const auto& [c, cfg] : {std::pair{LambdaCase::five_point, five_points()}, {LambdaCase::six_point, six_points()}})
        for (const auto& row : integer_generators(c)) {
            const auto g = CubicForm::from_integers(FieldRing(f), row);
            for (std::size_t i = 0; i < cfg.points().size(); ++i) EXPECT_TRUE(eval_form(g, cfg.reduced(i, f)).is_zero());
        }
}

TEST(IntegerGenerators, ReductionsHaveExpectedRank) {
    EXPECT_EQ(reduce_integer_generators(LambdaCase::five_point, gf2()).dim(), 5u);
    EXPECT_EQ(reduce_integer_generators(LambdaCase::six_point, gf2()).dim(), 4u);
    EXPECT_EQ(reduce_integer_generators(LambdaCase::five_point, build_field(7)).dim(), 5u);
}

TEST(IntegerGenerators, SpanEqualsListedBasesModTwo) {
    const auto r = checks::fixture_spans_agree();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(IntegerGenerators, SpanEqualsVanishingCubicsOverSeven) {
    const FieldDesc& f = build_field(7);
    EXPECT_EQ(span_key(reduce_integer_generators(LambdaCase::five_point, f)),
              span_key(vanishing_cubics(five_points(), f)));
    EXPECT_EQ(span_key(reduce_integer_generators(LambdaCase::six_point, f)),
              span_key(vanishing_cubics(six_points(), f)));
}

TEST(MakePlane, DistinguishedTripleAccepted) {
    const CubicSystem s = paper_lambda(LambdaCase::five_point, gf2());
    const auto made = make_plane(s, {1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {1, 1, 0, 0, 1});
    ASSERT_TRUE(std::holds_alternative<Plane>(made));
    EXPECT_EQ(std::get<Plane>(made).forms[2], form(gf2(), "x^2*y + x*y^2 + x*z^2 + y*z^2"));
}

TEST(MakePlane, Rejections) {
    const CubicSystem s = paper_lambda(LambdaCase::five_point, gf2());
    const std::vector<Elem> v = {1, 0, 0, 0, 0}, t = {0, 0, 0, 0, 1};
    EXPECT_EQ(std::get<PlaneRejection>(make_plane(s, v, v, t)), PlaneRejection::rank_deficient);
    // x^2y + y^2z, xy^2 + y^2z, xyz are all divisible by y.
    EXPECT_EQ(std::get<PlaneRejection>(make_plane(s, v, {0, 1, 0, 0, 0}, {0, 0, 0, 1, 0})),
              PlaneRejection::common_factor);
    EXPECT_THROW(make_plane(s, v, t, {1, 1}), std::invalid_argument);
}

TEST(BaseLocus, DistinguishedPlaneContainsCoordinatePoints) {
    const CubicSystem s = paper_lambda(LambdaCase::five_point, gf2());
    const Plane plane = std::get<Plane>(make_plane(s, {1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {1, 1, 0, 0, 1}));
    const BaseLocus bl = base_locus(plane.forms);
    ASSERT_FALSE(bl.positive_dimensional);
    const auto& rational = bl.points_by_degree.at(1);
    for (const auto& c : {std::array<Elem, 3>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})
        EXPECT_NE(std::find(rational.begin(), rational.end(), ProjPoint(gf2(), c)), rational.end());
}

TEST(BaseLocus, SharedFactorIsPositiveDimensional) {
    const BaseLocus bl = base_locus({form(gf2(), "x^3 + x*y*z"), form(gf2(), "x*z^2")});
    EXPECT_TRUE(bl.positive_dimensional);
    EXPECT_TRUE(bl.points_by_degree.empty());
}

TEST(BaseLocus, CubesMeetOnce) {
    const BaseLocus bl = base_locus({form(build_field(3), "x^3"), form(build_field(3), "y^3")});
    EXPECT_EQ(bl.geometric_count(), 1u);
    EXPECT_EQ(bl.points_by_degree.at(1).front(), ProjPoint(build_field(3), {0, 0, 1}));
}

TEST(BaseLocus, ConjugatePointsAreListed) {
    // [0:1:0] with multiplicity 3 and one orbit of six conjugate points.
    const FieldDesc& f = gf2();
    const std::vector<CubicForm> forms = {form(f, "x^2*z + x*y*z + y^2*z"), form(f, "x^3 + y^2*z + z^3")};
    const BaseLocus bl = base_locus(forms, 6);
    EXPECT_EQ(bl.points_by_degree, brute_locus(forms, 6));
    ASSERT_TRUE(bl.points_by_degree.count(6));
    EXPECT_EQ(bl.points_by_degree.at(6).size(), 6u);
    EXPECT_EQ(bl.closed_point_count(), 2u);
    EXPECT_LE(bl.geometric_count(), 9u);
}

TEST(BaseLocus, AgreesWithBruteForceOnRandomPairs) {
    for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 6}, {3, 4}, {5, 2}}) {
        const FieldDesc& f = build_field(p);
        Rng rng(100 + p);
        for (int i = 0; i < 25; ++i) {
            const std::vector<CubicForm> forms = {checks::random_nonzero_form(f, rng),
                                                  checks::random_nonzero_form(f, rng)};
            if (common_factor_all(forms)) continue;
            const BaseLocus bl = base_locus(forms, k);
            EXPECT_EQ(bl.points_by_degree, brute_locus(forms, k))
                << "p=" << p << ": " << forms[0].to_string() << " ; " << forms[1].to_string();
            EXPECT_LE(bl.geometric_count(), 9u);
        }
    }
}

TEST(BaseLocus, RejectsExtensionForms) {
    const FieldDesc& f4 = build_field(2, 2);
    EXPECT_THROW(base_locus({form(f4, "x^3"), form(f4, "y^3")}), std::invalid_argument);
}

TEST(SpanKey, IndependentOfBasisChoice) {
    const CubicSystem s = paper_lambda(LambdaCase::five_point, gf2());
    CubicSystem t = s;
    t.basis[0] = s.basis[0] + s.basis[1];
    std::swap(t.basis[2], t.basis[4]);
    EXPECT_EQ(span_key(s), span_key(t));
}
