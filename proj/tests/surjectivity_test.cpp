#include <gtest/gtest.h>

#include "property_checks.hpp"

using namespace surjective;

namespace {

const FieldDesc& gf2() { return build_field(2); }

Plane five_plane(const std::vector<Elem>& v, const std::vector<Elem>& u, const std::vector<Elem>& t) {
    return std::get<Plane>(make_plane(paper_lambda(LambdaCase::five_point, gf2()), v, u, t));
}

Plane distinguished_plane() { return five_plane({1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {1, 1, 0, 0, 1}); }

Plane six_identity_plane() {
    return std::get<Plane>(make_plane(paper_lambda(LambdaCase::six_point, gf2()), {1, 0, 0, 0}, {0, 1, 0, 0},
                                      {0, 0, 0, 1}));
}

// Oracle for the forward image: evaluate the map at every source point over
// GF(p^d) for d <= bound and collect rational images.
std::set<ProjPoint> brute_image(const Plane& plane, unsigned bound) {
    std::set<ProjPoint> img;
    const FieldDesc& base = *plane.field;
    for (unsigned d = 1; d <= bound; ++d) {
        const FieldDesc& ext = build_field(base.characteristic(), d);
        for (const auto& s : enumerate_p2(ext)) {
            std::array<Elem, 3> c;
            for (std::size_t j = 0; j < 3; ++j) c[j] = eval_form(plane.forms[j], s).code();
            if (c == std::array<Elem, 3>{0, 0, 0}) continue;
            const ProjPoint t(ext, c);
            if (minimal_degree(t) == 1) img.insert(ProjPoint(base, t.coords()));
        }
    }
    return img;
}

}  // namespace

TEST(VectorAt, LexicographicOrder) {
    const FieldDesc& f = build_field(3);
    EXPECT_EQ(vector_at(f, 3, 0), (std::vector<Elem>{0, 0, 0}));
    EXPECT_EQ(vector_at(f, 3, 1), (std::vector<Elem>{0, 0, 1}));
    EXPECT_EQ(vector_at(f, 3, 3), (std::vector<Elem>{0, 1, 0}));
    EXPECT_EQ(vector_at(f, 3, 26), (std::vector<Elem>{2, 2, 2}));
    EXPECT_EQ(vector_count(f, 3), 27u);
}

TEST(TestPencil, DependentPairIsPositiveDimensional) {
    const Plane pl = distinguished_plane();
    EXPECT_EQ(test_pencil(pl, {1, 0, 1}, {1, 0, 1}).status, PencilStatus::positive_dimensional);
    EXPECT_EQ(test_pencil(pl, {0, 0, 0}, {1, 0, 0}).status, PencilStatus::positive_dimensional);
}

TEST(TestPencil, DistinguishedPlaneHasNoUnrulyPencil) {
    const Plane pl = distinguished_plane();
    const std::uint64_t n = vector_count(gf2(), 3);
    for (std::uint64_t ia = 0; ia < n; ++ia)
        for (std::uint64_t ib = 0; ib < n; ++ib)
            EXPECT_NE(test_pencil(pl, vector_at(gf2(), 3, ia), vector_at(gf2(), 3, ib)).status, PencilStatus::unruly);
}

TEST(TestPencil, WitnessIsAPencilBasePointOffThePlaneLocus) {
    const Plane pl = distinguished_plane();
    const UnrulyVerdict v = test_pencil(pl, {1, 0, 0}, {0, 1, 0});
    if (v.status == PencilStatus::not_unruly) {
        ASSERT_TRUE(v.witness.has_value());
        const PencilSpec pen = make_pencil(pl, {1, 0, 0}, {0, 1, 0});
        EXPECT_TRUE(eval_form(pen.forms[0], *v.witness).is_zero());
        EXPECT_TRUE(eval_form(pen.forms[1], *v.witness).is_zero());
        EXPECT_FALSE(vanishes_on_plane(pl, *v.witness));
    }
}

TEST(TestPencil, SixPointPlaneHasUnrulyPencil) {
    const SurjectivityLabel l = label_plane(six_identity_plane(), 9, true);
    EXPECT_FALSE(l.unruly_pencils.empty());
    for (const auto& pen : l.unruly_pencils)
        EXPECT_EQ(test_pencil(six_identity_plane(), pen.a, pen.b).status, PencilStatus::unruly);
}

TEST(LabelPlane, Examples) {
    EXPECT_EQ(label_plane(distinguished_plane()).value, 1);
    EXPECT_EQ(label_plane(six_identity_plane()).value, 0);
}

TEST(LabelPlane, UnrulyPencilsHaveSameBaseLocusAsPlane) {
    const Plane pl = six_identity_plane();
    const BaseLocus plane_locus = base_locus(pl.forms);
    for (const auto& pen : label_plane(pl, 9, true).unruly_pencils) {
        const BaseLocus bl = base_locus({pen.forms[0], pen.forms[1]});
        EXPECT_EQ(bl.points_by_degree, plane_locus.points_by_degree);
    }
}

TEST(ForwardOracle, DistinguishedPlaneIsOnto) { EXPECT_TRUE(forward_oracle(distinguished_plane()).empty()); }

TEST(ForwardOracle, SixPointPlaneMissesATarget) { EXPECT_FALSE(forward_oracle(six_identity_plane()).empty()); }

TEST(ForwardOracle, UncoveredTargetsAreOutsideTheBruteForceImage) {
    for (const Plane& pl : {six_identity_plane(), distinguished_plane()}) {
        const auto img = brute_image(pl, 6);
        const auto uncovered = forward_oracle(pl, 6);
        for (const auto& t : uncovered) EXPECT_FALSE(img.count(t)) << t.to_string();
        for (const auto& t : img) EXPECT_EQ(std::find(uncovered.begin(), uncovered.end(), t), uncovered.end());
    }
}

TEST(ForwardOracle, ImageOfARationalSourceIsCovered) {
    const CubicSystem sys = reduce_integer_generators(LambdaCase::five_point, build_field(3));
    Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        std::array<std::vector<Elem>, 3> vut;
        for (auto& w : vut) {
            w.resize(sys.dim());
            for (auto& e : w) e = uniform_below(rng, 3);
        }
        const auto made = make_plane(sys, vut[0], vut[1], vut[2]);
        if (!std::holds_alternative<Plane>(made)) continue;
        const Plane& pl = std::get<Plane>(made);
        const auto uncovered = forward_oracle(pl, 4);
        for (const auto& s : enumerate_p2(build_field(3))) {
            std::array<Elem, 3> c;
            for (std::size_t j = 0; j < 3; ++j) c[j] = eval_form(pl.forms[j], s).code();
            if (c == std::array<Elem, 3>{0, 0, 0}) continue;
            EXPECT_EQ(std::find(uncovered.begin(), uncovered.end(), ProjPoint(build_field(3), c)), uncovered.end());
        }
    }
}

// Both sides truncate at the same extension degree, which keeps them
// comparable while keeping the source scan over GF(3^d) small.
TEST(Equivalence, RandomPlanesOverThree) {
    const CubicSystem sys = reduce_integer_generators(LambdaCase::five_point, build_field(3));
    Rng rng(21);
    int checked = 0;
    while (checked < 8) {
        std::array<std::vector<Elem>, 3> vut;
        for (auto& w : vut) {
            w.resize(sys.dim());
            for (auto& e : w) e = uniform_below(rng, 3);
        }
        const auto made = make_plane(sys, vut[0], vut[1], vut[2]);
        if (!std::holds_alternative<Plane>(made)) continue;
        const Plane& pl = std::get<Plane>(made);
        EXPECT_EQ(label_plane(pl, 5).value == 1, forward_oracle(pl, 5).empty());
        ++checked;
    }
}

TEST(Bezout, PencilsOfBothSystemsHaveAtMostNineBasePoints) {
    for (const auto c : {LambdaCase::five_point, LambdaCase::six_point}) {
        const auto r = checks::bezout_bound(c);
        EXPECT_TRUE(r.ok) << r.detail;
        EXPECT_GT(r.cases, 0u);
    }
}

TEST(SevenPoints, GeneralPositionDetectsCollinearity) {
    const FieldDesc& f = build_field(11);
    EXPECT_FALSE(in_general_position(PointConfig({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}}), f));
    EXPECT_TRUE(in_general_position(PointConfig({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}}), f));
    // Six points on the conic xz = y^2.
    EXPECT_FALSE(in_general_position(
        PointConfig({{1, 0, 0}, {0, 0, 1}, {1, 1, 1}, {1, 2, 4}, {1, 3, 9}, {1, 4, 16}, {2, 3, 7}}), f));
}

TEST(SevenPoints, RandomConfigurationsAreGeneral) {
    const FieldDesc& f = build_field(11);
    Rng rng(5);
    for (int i = 0; i < 3; ++i) {
        const PointConfig cfg = random_seven_points(f, rng);
        EXPECT_EQ(cfg.points().size(), 7u);
        EXPECT_TRUE(in_general_position(cfg, f));
        EXPECT_EQ(vanishing_cubics(cfg, f).dim(), 3u);
    }
    EXPECT_THROW(random_seven_points(build_field(2), rng, 50), std::runtime_error);
}

TEST(SevenPoints, SpecialPositionIsRejected) {
    // Seven points on a line impose only four conditions.
    const PointConfig cfg({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 2, 0}, {1, 3, 0}, {1, 4, 0}, {1, 5, 0}});
    EXPECT_THROW(find_unruly_seven_points(cfg, build_field(11)), std::invalid_argument);
    EXPECT_THROW(PointConfig({{1, 0, 0}, {1, 0, 0}}), std::invalid_argument);
}

TEST(SevenPoints, SearchRunsOnARandomConfiguration) {
    const FieldDesc& f = build_field(11);
    Rng rng(3);
    const PointConfig cfg = random_seven_points(f, rng);
    const auto pen = find_unruly_seven_points(cfg, f);
    if (pen) {
        const Plane pl = std::get<Plane>(make_plane(vanishing_cubics(cfg, f), {1, 0, 0}, {0, 1, 0}, {0, 0, 1}));
        EXPECT_EQ(test_pencil(pl, pen->a, pen->b).status, PencilStatus::unruly);
    }
}
