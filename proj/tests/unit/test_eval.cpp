#include <gtest/gtest.h>

#include "fridgr/error.hpp"
#include "fridgr/eval.hpp"
#include "support/tempdir.hpp"

using namespace fridgr;

namespace {

struct Corpus {
    std::vector<GeneratedQA> questions;
    std::map<std::int64_t, Scene> scenes;
};

Corpus make_corpus(const TemplateSet& templates, const DistributionProfile& p, std::int64_t n, std::uint64_t seed) {
    const auto split = generate_split({"t", n}, seed, 30, templates, Lexicon::builtin(), p, {});
    Corpus c;
    for (std::size_t i = 0; i < split.scenes.size(); ++i) {
        c.scenes.emplace(split.scenes[i].scene_id(), split.scenes[i]);
        c.questions.insert(c.questions.end(), split.questions[i].begin(), split.questions[i].end());
    }
    return c;
}

}  // namespace

TEST(Eval, ConstantNoOnExistenceQuestions) {
    const auto c = make_corpus(TemplateSet::builtin().only(Head::Exist), DistributionProfile::original(), 600, 1);
    const Answerer always_no = [](const std::string&, const Scene&) { return Answer{YesNo{false}}; };
    const auto r = evaluate_answerer(always_no, c.questions, c.scenes);
    EXPECT_EQ(r.total, 18000u);
    EXPECT_NEAR(r.accuracy(), 0.5, 0.02);
    EXPECT_EQ(r.refused, 0u);
    EXPECT_EQ(r.slices.count("count"), 0u);
    EXPECT_EQ(r.slices.at("existence").total, r.total);
}

TEST(Eval, ExtendedParserIsPerfect) {
    const auto c = make_corpus(TemplateSet::builtin(), DistributionProfile::modified(), 100, 2);
    const auto r = evaluate_answerer(parser_answerer(GrammarMode::Extended), c.questions, c.scenes);
    EXPECT_EQ(r.correct, r.total);
    EXPECT_TRUE(r.error_samples.empty());
    for (const auto& [name, s] : r.slices) EXPECT_EQ(s.correct, s.total) << name;
}

TEST(Eval, OriginalParserRefusesShortForms) {
    const auto c = make_corpus(TemplateSet::builtin(), DistributionProfile::modified(), 100, 3);
    const auto r = evaluate_answerer(parser_answerer(GrammarMode::Original), c.questions, c.scenes);
    const auto& short_slice = r.slices.at("short");
    const auto& long_slice = r.slices.at("long");
    EXPECT_EQ(short_slice.correct, 0u);
    EXPECT_EQ(long_slice.correct, long_slice.total);
    EXPECT_EQ(r.refused, short_slice.total);
    EXPECT_EQ(r.refusals_by_kind.at("OutOfGrammar"), short_slice.total);
    EXPECT_EQ(r.error_samples.size(), kMaxErrorSamples);
    EXPECT_NEAR(r.accuracy(), double(long_slice.total) / double(r.total), 1e-12);
}

TEST(Eval, SlicesCoverFilters) {
    const auto c = make_corpus(TemplateSet::builtin(), DistributionProfile::original(), 50, 4);
    const auto r = evaluate_answerer(parser_answerer(GrammarMode::Extended), c.questions, c.scenes);
    for (const char* s : {"existence", "count", "size", "freshness", "category", "class", "subject", "long"}) {
        EXPECT_GT(r.slices.count(s), 0u) << s;
    }
    EXPECT_EQ(r.slices.at("existence").total + r.slices.at("count").total, r.total);
    const auto j = r.to_json();
    EXPECT_EQ(j.at("total"), r.total);
    EXPECT_NE(r.to_table().find("accuracy"), std::string::npos);
}

TEST(Eval, MissingScene) {
    auto c = make_corpus(TemplateSet::builtin(), DistributionProfile::original(), 3, 5);
    c.scenes.erase(1);
    try {
        evaluate_answerer(parser_answerer(GrammarMode::Extended), c.questions, c.scenes);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingScene);
    }
}

TEST(Eval, FileEntryPoint) {
    TempDir dir;
    DatasetConfig cfg;
    cfg.splits = {{"test", 20}};
    cfg.output_directory = dir.path();
    const auto m = generate_dataset(cfg);
    const auto r = evaluate_answerer(parser_answerer(GrammarMode::Original), dir / m.splits[0].questions_file,
                                     dir / m.splits[0].scenes_file);
    EXPECT_EQ(r.total, 600u);
    EXPECT_EQ(r.correct, 600u);
}

TEST(ShiftExperiment, SmallRun) {
    ShiftExperimentConfig cfg;
    cfg.master_seed = 9;
    cfg.scenes_per_set = 60;
    const auto r = distribution_shift_experiment(cfg);
    EXPECT_DOUBLE_EQ(r.accuracy(GrammarMode::Original, "original"), 1.0);
    EXPECT_DOUBLE_EQ(r.accuracy(GrammarMode::Extended, "original"), 1.0);
    EXPECT_DOUBLE_EQ(r.accuracy(GrammarMode::Extended, "modified"), 1.0);
    // Original grammar gets the long forms right and nothing else.
    EXPECT_NEAR(r.accuracy(GrammarMode::Original, "modified"), 1.0 - r.modified_short_fraction, 1e-12);
    EXPECT_NE(r.original_set_seed, r.modified_set_seed);
    const auto j = r.to_json();
    EXPECT_EQ(j["accuracy"]["extended"]["modified"], 1.0);
    EXPECT_NE(r.to_table().find("extended"), std::string::npos);
}

TEST(ShiftExperiment, RejectsEmptyConfig) {
    ShiftExperimentConfig cfg;
    cfg.scenes_per_set = 0;
    EXPECT_THROW(distribution_shift_experiment(cfg), Error);
}
