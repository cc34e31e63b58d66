#include <gtest/gtest.h>

#include <filesystem>

#include "property_checks.hpp"

using namespace surjective;

namespace {

const std::string distinguished_line = "((1, 0, 0, 0, 0), (0, 0, 0, 1, 0), (1, 1, 0, 0, 1)): 1";

const std::vector<DatasetRecord>& five_dataset() {
    static const std::vector<DatasetRecord> records = enumerate_triples(EnumConfig{});
    return records;
}

EnumConfig six_config() {
    EnumConfig cfg;
    cfg.lambda = LambdaCase::six_point;
    return cfg;
}

}  // namespace

TEST(Filter, NormOneVectorsOverTwo) {
    const FieldDesc& f = build_field(2);
    std::size_t n = 0;
    for (std::uint64_t i = 0; i < 32; ++i) {
        const auto v = vector_at(f, 5, i);
        if (dot(f, v, v) == 1) {
            ++n;
            EXPECT_EQ(std::count(v.begin(), v.end(), 1) % 2, 1);
        }
    }
    EXPECT_EQ(n, 16u);
}

TEST(Filter, StrictIsSubsetOfNorm) {
    const FieldDesc& f = build_field(3);
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        std::array<std::vector<Elem>, 3> vut;
        for (auto& w : vut) w = vector_at(f, 3, uniform_below(rng, 27));
        if (passes_filter(f, FilterMode::strict_orthonormal, vut)) {
            EXPECT_TRUE(passes_filter(f, FilterMode::norm_only, vut));
        }
        EXPECT_TRUE(passes_filter(f, FilterMode::none, vut));
    }
    EXPECT_TRUE(passes_filter(f, FilterMode::strict_orthonormal, {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}));
    EXPECT_FALSE(passes_filter(f, FilterMode::strict_orthonormal, {{{1, 0, 0}, {1, 1, 1}, {0, 0, 1}}}));
}

TEST(Enumerate, FivePointContainsDistinguishedRecord) {
    const auto& records = five_dataset();
    const DatasetRecord want{{{{1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {1, 1, 0, 0, 1}}}, 1};
    EXPECT_NE(std::find(records.begin(), records.end(), want), records.end());
    EXPECT_EQ(format_record(want), distinguished_line);
}

TEST(Enumerate, FivePointIsLexicographicAndFiltered) {
    const auto& records = five_dataset();
    const FieldDesc& f = build_field(2);
    ASSERT_FALSE(records.empty());
    for (std::size_t i = 1; i < records.size(); ++i) EXPECT_LT(records[i - 1].vut, records[i].vut);
    for (const auto& r : records) EXPECT_TRUE(passes_filter(f, FilterMode::norm_only, r.vut));
    const auto s = stats(records);
    EXPECT_EQ(s.count, s.positives + s.negatives);
    EXPECT_LT(s.positive_rate, 0.5);
    EXPECT_GT(s.positives, 0u);
}

TEST(Enumerate, FivePointMatchesUncachedComputation) {
    // Every triple is checked independently, without span memoization.
    const CubicSystem sys = paper_lambda(LambdaCase::five_point, build_field(2));
    const FieldDesc& f = *sys.field;
    std::vector<DatasetRecord> brute;
    for (std::uint64_t iv = 0; iv < 32; ++iv)
        for (std::uint64_t iu = 0; iu < 32; ++iu)
            for (std::uint64_t it = 0; it < 32; ++it) {
                const std::array<std::vector<Elem>, 3> vut = {vector_at(f, 5, iv), vector_at(f, 5, iu),
                                                              vector_at(f, 5, it)};
                if (!passes_filter(f, FilterMode::norm_only, vut)) continue;
                const auto made = make_plane(sys, vut[0], vut[1], vut[2]);
                if (!std::holds_alternative<Plane>(made)) continue;
                brute.push_back({vut, -1});
            }
    const auto& records = five_dataset();
    ASSERT_EQ(records.size(), brute.size());
    for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(records[i].vut, brute[i].vut);
    // Labels recomputed plane by plane.
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const Plane pl = std::get<Plane>(make_plane(sys, r.vut[0], r.vut[1], r.vut[2]));
        EXPECT_EQ(label_plane(pl).value, r.label) << format_record(r);
    }
}

TEST(Enumerate, SixPointLabelsAreAllZero) {
    const auto records = enumerate_triples(six_config());
    ASSERT_FALSE(records.empty());
    for (const auto& r : records) EXPECT_EQ(r.label, 0) << format_record(r);
    EXPECT_EQ(stats(records).positive_rate, 0.0);
}

TEST(Enumerate, WorkerCountDoesNotChangeOutput) {
    EnumConfig cfg = six_config();
    cfg.filter = FilterMode::none;
    cfg.jobs = 1;
    const auto one = enumerate_triples(cfg);
    cfg.jobs = 3;
    EXPECT_EQ(enumerate_triples(cfg), one);
}

TEST(Enumerate, CustomSystem) {
    EnumConfig cfg;
    cfg.custom = paper_lambda(LambdaCase::six_point, build_field(2));
    EXPECT_EQ(enumerate_triples(cfg), enumerate_triples(six_config()));
}

TEST(Enumerate, OtherPrimesUseReducedGenerators) {
    EnumConfig cfg;
    cfg.p = 3;
    EXPECT_EQ(span_key(system_for(cfg)), span_key(reduce_integer_generators(LambdaCase::five_point, build_field(3))));
}

TEST(Format, OneTuplesKeepTheirComma) {
    EXPECT_EQ(format_record({{{{1}, {0}, {2}}}, 0}), "((1,), (0,), (2,)): 0");
    EXPECT_EQ(parse_record("((1,), (0,), (2,)): 0", 1), (DatasetRecord{{{{1}, {0}, {2}}}, 0}));
}

TEST(Format, ParseRejectsMalformedLines) {
    for (const char* bad : {
             "((1, 0), (0, 1), (1, 1)): 2",
             "((1, 0), (0, 1), (1, 1)): 1 ",
             "((1, 0), (0, 1), (1, 1)):1",
             "((01, 0), (0, 1), (1, 1)): 1",
             "((1, 0), (0, 1), (1, 1, 0)): 1",
             "((1,0), (0, 1), (1, 1)): 1",
             "((1), (0), (1)): 1",
             "",
         })
        EXPECT_THROW(parse_record(bad, 7), ParseError) << bad;
    try {
        parse_record("((1, 0), (0, 1), (1, 1)): 5", 12);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 12u);
        EXPECT_NE(std::string(e.what()).find("line 12"), std::string::npos);
    }
}

TEST(Format, EmptyListGivesEmptyFile) {
    std::ostringstream os;
    write_output({}, os);
    EXPECT_EQ(os.str(), "");
    std::istringstream is("");
    EXPECT_TRUE(read_output(is).empty());
}

TEST(Format, MissingTrailingNewlineIsAnError) {
    std::istringstream is(distinguished_line);
    EXPECT_THROW(read_output(is), ParseError);
}

TEST(Format, RoundTrip) {
    const auto r = checks::output_round_trip(five_dataset());
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Format, FileRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "surjective_dataset_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "output.txt").string();
    const auto records = enumerate_triples(six_config());
    write_output(records, path);
    EXPECT_EQ(read_output(path), records);
    std::filesystem::remove_all(dir);
}
