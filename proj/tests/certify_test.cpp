#include <gtest/gtest.h>

#include "property_checks.hpp"

using namespace surjective;
using certify_detail::cst;
using certify_detail::var;
using certify_detail::A;
using certify_detail::B;
using certify_detail::X;

namespace {

RationalPoly ab_poly(std::initializer_list<std::pair<std::array<int, 2>, int>> terms) {
    RationalPoly p;
    for (const auto& [e, c] : terms)
        p = p + cst(c) * var(A).pow(static_cast<unsigned>(e[0])) * var(B).pow(static_cast<unsigned>(e[1]));
    return p;
}

Rational eval_ab(const RationalPoly& p, const Rational& a, const Rational& b) {
    const RationalPoly v = p.substitute(A, cst(a)).substitute(B, cst(b));
    EXPECT_LE(v.total_degree(), 0);
    return v.is_zero() ? Rational(0) : v.leading_term().second;
}

Rational eval_q(const std::vector<RationalPoly>& c, const Rational& x, const Rational& a, const Rational& b) {
    Rational s = 0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * x + eval_ab(c[k], a, b);
    return s;
}

}  // namespace

TEST(ExplicitMap, NamedPreimages) {
    const auto five = explicit_map(LambdaCase::five_point);
    EXPECT_TRUE(check_point_image(five, {0, 1, -2}, {1, 0, 0}));
    EXPECT_TRUE(check_point_image(five, {1, 0, 1}, {0, 0, 1}));
    EXPECT_TRUE(check_point_image(five, {0, 1, 1}, {1, 0, 3}));
    EXPECT_TRUE(check_point_image(five, {0, 1, 3}, {1, 0, 5}));
    EXPECT_TRUE(check_point_image(five, {1, 1, 0}, {1, 0, 2}));
    const auto six = explicit_map(LambdaCase::six_point);
    EXPECT_TRUE(check_point_image(six, {-2, 1, -2}, {1, 0, 0}));
    EXPECT_TRUE(check_point_image(six, {-1, 1, -1}, {0, 0, 1}));
    EXPECT_FALSE(check_point_image(six, {-1, 1, -1}, {1, 0, 0}));
}

TEST(ExplicitMap, IndeterminacyIsRejected) {
    const auto five = explicit_map(LambdaCase::five_point);
    for (const RationalPoint& p : {RationalPoint{1, 0, 0}, RationalPoint{0, 1, 0}, RationalPoint{0, 0, 1}})
        EXPECT_TRUE(in_indeterminacy(five, p));
    EXPECT_THROW(check_point_image(five, {0, 1, 0}, {1, 0, 2}), std::invalid_argument);
    EXPECT_THROW(check_point_image(five, {0, 0, 0}, {1, 0, 2}), std::invalid_argument);
}

TEST(ExplicitMap, ComponentsLieInTheFixtureSpanModTwo) {
    const FieldDesc& f = build_field(2);
    for (const auto c : {LambdaCase::five_point, LambdaCase::six_point}) {
        const CubicSystem sys = paper_lambda(c, f);
        for (const auto& g : explicit_map(c).components) {
            CubicSystem extended = sys;
            extended.basis.push_back(CubicForm::from_integers(FieldRing(f), [&] {
                std::array<std::int64_t, 10> row{};
                for (std::size_t i = 0; i < 10; ++i) row[i] = g[i].convert_to<std::int64_t>();
                return row;
            }()));
            EXPECT_EQ(span_key(extended), span_key(sys));
        }
    }
}

TEST(Quartic, FivePointCoefficients) {
    const auto q = derive_quartic(LambdaCase::five_point);
    ASSERT_EQ(q.size(), 5u);
    EXPECT_EQ(q[0], var(A) + cst(1));
    EXPECT_EQ(q, claimed_quartic(LambdaCase::five_point));
    EXPECT_EQ(q, derive_quartic(LambdaCase::five_point, QuarticSource::from_map));
    // a = b = 0 gives x^4 + x^3 - x + 1.
    std::vector<Rational> at0;
    for (const auto& c : q) at0.push_back(eval_ab(c, 0, 0));
    EXPECT_EQ(at0, (std::vector<Rational>{1, -1, 0, 1, 1}));
    EXPECT_EQ(eval_q(q, 1, 0, 0), 2);
}

TEST(Quartic, SixPointCoefficients) {
    const auto q = derive_quartic(LambdaCase::six_point);
    EXPECT_EQ(q, claimed_quartic(LambdaCase::six_point));
    EXPECT_EQ(q[2], ab_poly({{{2, 0}, 1}, {{1, 0}, -4}}));
    const auto own = derive_quartic(LambdaCase::six_point, QuarticSource::from_map);
    const std::vector<RationalPoly> want = {
        ab_poly({{{1, 1}, -1}, {{0, 1}, -1}}),
        ab_poly({{{2, 0}, 2}, {{1, 0}, 1}, {{0, 1}, 1}}),
        ab_poly({{{2, 0}, 1}, {{1, 0}, -4}, {{0, 0}, -1}}),
        ab_poly({{{0, 0}, 2}, {{1, 0}, -2}}),
        cst(1),
    };
    EXPECT_EQ(own, want);
}

// Oracle: substitute the chart parametrization into the map at exact
// rational points and compare with x q(x).
TEST(Quartic, AgreesWithDirectSubstitution) {
    Rng rng(6);
    auto small = [&] { return Rational(static_cast<int>(uniform_below(rng, 13)) - 6, 1 + static_cast<int>(uniform_below(rng, 4))); };
    const auto five = explicit_map(LambdaCase::five_point);
    const auto six = explicit_map(LambdaCase::six_point);
    const auto q5 = derive_quartic(LambdaCase::five_point, QuarticSource::from_map);
    const auto q6 = derive_quartic(LambdaCase::six_point, QuarticSource::from_map);
    for (int i = 0; i < 200; ++i) {
        const Rational a = small(), b = small(), x = small();
        {
            const RationalPoint img = five({x, a * x - x * x, 1});
            EXPECT_EQ(img[2] - b * img[1], x * eval_q(q5, x, a, b));
        }
        const Rational den = 1 + a - x;
        if (den == 0) continue;
        const RationalPoint img = six({x, 1, (a * x - x * x) / den});
        EXPECT_EQ((img[2] - b * img[1]) * den * den, x * eval_q(q6, x, a, b));
    }
}

TEST(SpecialCases, LineFamilies) {
    const auto cert5 = check_line_family(LambdaCase::five_point);
    EXPECT_TRUE(cert5.passed()) << cert5.report();
    ASSERT_FALSE(cert5.notes.empty());
    EXPECT_NE(cert5.notes[0].find("[1:1:0]"), std::string::npos) << cert5.notes[0];
    const auto cert6 = check_line_family(LambdaCase::six_point);
    EXPECT_TRUE(cert6.passed()) << cert6.report();
    // y = -1/2 leaves residual 1/4 in y^2 + 2(1-a)y + (1-a).
    const Rational y(-1, 2);
    for (int a = -5; a <= 5; ++a) EXPECT_EQ(y * y + 2 * (1 - a) * y + (1 - a), Rational(1, 4));
}

TEST(SpecialCases, SixPointEvaluationAtOnePlusA) {
    const auto q = derive_quartic(LambdaCase::six_point);
    for (int a = -4; a <= 4; ++a)
        for (int b = -3; b <= 3; ++b) EXPECT_EQ(eval_q(q, 1 + a, a, b), a * a + 3 * a + 2);
}

TEST(Verify, BothMapsPass) {
    for (const auto c : {LambdaCase::five_point, LambdaCase::six_point}) {
        const Certificate cert = verify(c);
        EXPECT_TRUE(cert.passed()) << cert.report();
        EXPECT_GE(cert.checks.size(), 8u);
        EXPECT_NE(cert.report().find(": PASS"), std::string::npos);
    }
}

TEST(Verify, FivePointNotesRecordTheStatedReductions) {
    const Certificate cert = check_special_cases(LambdaCase::five_point);
    EXPECT_TRUE(cert.passed()) << cert.report();
    EXPECT_EQ(cert.notes.size(), 2u);
}

TEST(SolveRoots, QuadraticWithComplexRoots) {
    auto r = solve_roots({3, 2, 1});
    ASSERT_EQ(r.size(), 2u);
    std::sort(r.begin(), r.end(), [](Complex u, Complex v) { return u.imag() < v.imag(); });
    EXPECT_NEAR(std::abs(r[0] - Complex(-1, -std::sqrt(2.0))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r[1] - Complex(-1, std::sqrt(2.0))), 0.0, 1e-12);
}

TEST(SolveRoots, RealAndZeroRoots) {
    auto r = solve_roots({-1, 0, 1});
    std::sort(r.begin(), r.end(), [](Complex u, Complex v) { return u.real() < v.real(); });
    EXPECT_NEAR(std::abs(r[0] + 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r[1] - 1.0), 0.0, 1e-12);
    EXPECT_EQ(solve_roots({0, 0, 0, 0, 1}), std::vector<Complex>(4, 0.0));
    EXPECT_THROW(solve_roots({5}), std::invalid_argument);
    EXPECT_THROW(solve_roots({1, std::numeric_limits<double>::quiet_NaN(), 1}), std::invalid_argument);
}

TEST(SolveRoots, RepeatedRootIsClustered) {
    // (x - 2)^3 (x + 1)
    const auto r = solve_roots({-8, 4, 6, -5, 1});
    ASSERT_EQ(r.size(), 4u);
    int near_two = 0;
    for (const auto& z : r) near_two += std::abs(z - 2.0) < 1e-4;
    EXPECT_EQ(near_two, 3);
}

TEST(SolveRoots, ProductOfRootsMatchesConstantTerm) {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        std::vector<Complex> c;
        for (int k = 0; k < 5; ++k) c.emplace_back(uniform_real(rng, -5, 5), uniform_real(rng, -5, 5));
        c.back() = 1;
        const auto r = solve_roots(c);
        ASSERT_EQ(r.size(), 4u);
        Complex prod = 1;
        for (const auto& z : r) {
            prod *= z;
            EXPECT_LT(std::abs(horner(c, z)), 1e-9);
        }
        EXPECT_LT(std::abs(prod - c[0]), 1e-8 * (1 + std::abs(c[0])));
    }
}

TEST(NumericPreimage, OriginTarget) {
    for (const auto c : {LambdaCase::five_point, LambdaCase::six_point}) {
        const auto pre = numeric_preimage(c, 0, 0);
        EXPECT_LT(pre.residual, 1e-9);
        EXPECT_LT(projective_residual(eval_map(explicit_map(c), pre.source), {0, 1, 0}), 1e-9);
    }
}

TEST(NumericPreimage, RandomTargets) {
    for (const auto c : {LambdaCase::five_point, LambdaCase::six_point}) {
        const ExplicitMap f = explicit_map(c);
        for (std::uint64_t i = 0; i < 1000; ++i) {
            Rng rng(task_seed(42, i));
            const auto [a, b] = random_target(rng, 10);
            const auto pre = numeric_preimage(c, a, b);
            // Recompute the residual independently of the solver.
            EXPECT_LT(projective_residual(eval_map(f, pre.source), {a, 1, b}), 1e-9) << a << ' ' << b;
        }
    }
}

TEST(NumericPreimage, IntegerPowersOfZero) {
    EXPECT_EQ(ipow(0.0, 0), Complex(1));
    EXPECT_EQ(ipow(Complex(0, 1), 3), Complex(0, -1));
}

TEST(NumericPreimage, ResidualIsProjective) {
    EXPECT_EQ(projective_residual({1, 2, 3}, {2, 4, 6}), 0.0);
    EXPECT_GT(projective_residual({1, 0, 0}, {0, 1, 0}), 0.5);
    EXPECT_TRUE(std::isinf(projective_residual({0, 0, 0}, {0, 1, 0})));
}
