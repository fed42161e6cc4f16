#include <gtest/gtest.h>

#include <set>

#include "fridgr/dataset.hpp"
#include "fridgr/error.hpp"
#include "support/oracle.hpp"
#include "support/tempdir.hpp"

using namespace fridgr;

namespace {

DatasetConfig small_config(const std::filesystem::path& out, std::string profile = "original") {
    DatasetConfig c;
    c.master_seed = 1234;
    c.splits = {{"train", 30}, {"val", 10}, {"test", 10}};
    c.qa_per_scene = 30;
    c.profile_name = std::move(profile);
    c.output_directory = out;
    return c;
}

std::vector<GeneratedQA> corpus(const DistributionProfile& p, std::int64_t scenes, std::uint64_t seed) {
    const auto split = generate_split({"x", scenes}, seed, 30, TemplateSet::builtin(), Lexicon::builtin(), p, {});
    std::vector<GeneratedQA> out;
    for (const auto& l : split.questions) out.insert(out.end(), l.begin(), l.end());
    return out;
}

}  // namespace

TEST(Records, SceneJsonRoundTrip) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto scene = generate_scene(s, {}, static_cast<std::int64_t>(s));
        EXPECT_EQ(scene_from_json(scene_to_json(scene)), scene);
        EXPECT_EQ(scene_from_json(nlohmann::json::parse(scene_to_json(scene).dump())), scene);
    }
}

TEST(Records, QaJsonRoundTrip) {
    const auto scene = generate_scene(3);
    Rng rng(3);
    for (const auto& qa : generate_qa_set(scene, 30, TemplateSet::builtin(), Lexicon::builtin(),
                                          DistributionProfile::modified(), rng)) {
        EXPECT_EQ(qa_from_json(qa_to_json(qa)), qa);
    }
}

TEST(Records, SchemaErrors) {
    auto code_of = [](const nlohmann::json& j) {
        try {
            qa_from_json(j);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::Internal;
    };
    const auto scene = generate_scene(3);
    Rng rng(3);
    const auto good = qa_to_json(generate_qa_set(scene, 1, TemplateSet::builtin(), Lexicon::builtin(),
                                                 DistributionProfile::original(), rng)[0]);
    auto missing = good;
    missing.erase("answer");
    EXPECT_EQ(code_of(missing), Errc::Schema);
    auto bad_program = good;
    bad_program["program"] = "exist colour=red";
    EXPECT_EQ(code_of(bad_program), Errc::Schema);
    auto wrong_type = good;
    wrong_type["program"] = "count class=apple";
    wrong_type["answer"] = "yes";
    EXPECT_EQ(code_of(wrong_type), Errc::Schema);

    auto bad_scene = scene_to_json(scene);
    bad_scene["objects"][0]["class"] = "kiwi";
    EXPECT_THROW(scene_from_json(bad_scene), Error);
}

TEST(Dataset, DefaultSplitCounts) {
    const auto desk = default_splits(DatasetScale::Desk);
    ASSERT_EQ(desk.size(), 3u);
    EXPECT_EQ(desk[0].scene_count, 600);
    EXPECT_EQ(desk[1].scene_count, 100);
    EXPECT_EQ(desk[2].scene_count, 100);
    EXPECT_EQ(default_splits(DatasetScale::Paper)[0].scene_count, 60000);
}

TEST(Dataset, ConfigValidation) {
    TempDir dir;
    auto c = small_config(dir.path());
    c.splits = {{"train", 0}};
    EXPECT_THROW(c.validate(), Error);
    c = small_config(dir.path());
    c.splits = {{"a", 1}, {"a", 1}};
    EXPECT_THROW(c.validate(), Error);
    c = small_config(dir.path(), "weird");
    EXPECT_THROW(c.validate(), Error);
    c = small_config(dir.path());
    c.qa_per_scene = 0;
    EXPECT_THROW(c.validate(), Error);
}

TEST(Dataset, SingleSceneSingleQuestion) {
    TempDir dir;
    auto c = small_config(dir.path());
    c.splits = {{"only", 1}};
    c.qa_per_scene = 1;
    const auto m = generate_dataset(c);
    ASSERT_EQ(m.splits.size(), 1u);
    EXPECT_EQ(m.splits[0].qa_count, 1u);
    const auto qs = read_questions_file(dir / m.splits[0].questions_file);
    ASSERT_EQ(qs.size(), 1u);
    EXPECT_EQ(qs[0].scene_id, 0);
    EXPECT_EQ(read_scenes_file(dir / m.splits[0].scenes_file).count(0), 1u);
}

TEST(Dataset, FilesAreDeterministicAndVerified) {
    TempDir a, b;
    auto ca = small_config(a.path(), "modified");
    auto cb = small_config(b.path(), "modified");
    ca.threads = 1;
    cb.threads = 4;
    const auto ma = generate_dataset(ca);
    const auto mb = generate_dataset(cb);
    ASSERT_EQ(ma.splits.size(), 3u);
    for (std::size_t i = 0; i < ma.splits.size(); ++i) {
        EXPECT_EQ(ma.splits[i].scenes_sha256, mb.splits[i].scenes_sha256);
        EXPECT_EQ(ma.splits[i].questions_sha256, mb.splits[i].questions_sha256);
        EXPECT_EQ(read_text_file(a / ma.splits[i].scenes_file), read_text_file(b / mb.splits[i].scenes_file));
        EXPECT_EQ(sha256_hex(read_text_file(a / ma.splits[i].questions_file)), ma.splits[i].questions_sha256);
    }
    EXPECT_EQ(read_text_file(a / "manifest.json"), read_text_file(b / "manifest.json"));

    // Every record is sound against the independent evaluator and references a scene of its split.
    std::set<std::string> scene_digests;
    std::size_t scenes_total = 0;
    for (const auto& s : ma.splits) {
        const auto scenes = read_scenes_file(a / s.scenes_file);
        EXPECT_EQ(scenes.size(), std::size_t(s.scene_count));
        for (const auto& [id, sc] : scenes) {
            auto j = scene_to_json(sc);
            j.erase("scene_id");
            j.erase("seed");
            scene_digests.insert(sha256_hex(j.dump()));
            ++scenes_total;
        }
        const auto qs = read_questions_file(a / s.questions_file);
        EXPECT_EQ(qs.size(), s.qa_count);
        for (const auto& qa : qs) {
            auto it = scenes.find(qa.scene_id);
            ASSERT_NE(it, scenes.end());
            const auto& f = qa.program.filters;
            oracle::Query q{qa.program.head == Head::Count ? "count" : "exist",
                            f.size() ? std::string(to_token(*f.size())) : "",
                            f.freshness() ? std::string(to_token(*f.freshness())) : "",
                            f.category() ? std::string(to_token(*f.category())) : "",
                            f.object_class() ? std::string(to_token(*f.object_class())) : ""};
            EXPECT_EQ(answer_text(qa.answer), oracle::answer(q, oracle::objects_of(it->second)));
        }
    }
    // No scene appears in two splits.
    EXPECT_EQ(scene_digests.size(), scenes_total);
}

TEST(Dataset, ScenesFileEmbedsQuestions) {
    TempDir dir;
    const auto m = generate_dataset(small_config(dir.path()));
    const auto j = nlohmann::json::parse(read_text_file(dir / m.splits[0].scenes_file));
    EXPECT_EQ(j.at("kind"), "scenes");
    ASSERT_FALSE(j.at("scenes").empty());
    EXPECT_EQ(j["scenes"][0]["questions"].size(), 30u);
    const auto manifest = nlohmann::json::parse(read_text_file(dir / "manifest.json"));
    EXPECT_EQ(manifest.at("schema_version"), kDatasetSchemaVersion);
}

TEST(Dataset, SplitSeedsDiffer) {
    EXPECT_NE(split_seed(1, "train"), split_seed(1, "val"));
    EXPECT_NE(split_seed(1, "train"), split_seed(2, "train"));
}

TEST(Files, MissingAndMalformed) {
    TempDir dir;
    EXPECT_THROW(read_questions_file(dir / "nope.json"), Error);
    write_text_file(dir / "bad.json", "{not json");
    try {
        read_questions_file(dir / "bad.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Schema);
    }
    write_text_file(dir / "scenes.json", R"({"schema_version":1,"kind":"scenes","scenes":[]})");
    EXPECT_THROW(read_questions_file(dir / "scenes.json"), Error);
}

TEST(Stats, EmptyFile) {
    TempDir dir;
    write_text_file(dir / "empty.json", "");
    const auto s = corpus_stats(dir / "empty.json");
    EXPECT_EQ(s.total, 0u);
    EXPECT_EQ(s.short_forms, 0u);
    EXPECT_EQ(s.positive, 0u);
    EXPECT_EQ(s.short_fraction(), 0.0);
    for (const auto& [mask, n] : s.mask_histogram) EXPECT_EQ(n, 0u) << mask;
    EXPECT_EQ(s.to_json().at("total"), 0);
}

TEST(Stats, ModifiedShortFraction) {
    const auto stats = corpus_stats(corpus(DistributionProfile::modified(), 400, 5));
    EXPECT_EQ(stats.total, 12000u);
    EXPECT_NEAR(stats.short_fraction(), 0.65, 0.02);
    EXPECT_EQ(stats.short_forms + stats.long_forms, stats.total);
}

TEST(Stats, MaskHistogramsDiffer) {
    const auto a = corpus_stats(corpus(DistributionProfile::original(), 300, 6));
    const auto b = corpus_stats(corpus(DistributionProfile::modified(), 300, 7));
    EXPECT_GT(mask_tv_distance(a, b), 0.2);
    EXPECT_NEAR(mask_tv_distance(a, a), 0.0, 1e-12);
    double total = 0;
    for (const auto& [k, v] : a.mask_distribution()) total += v;
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_EQ(a.mask_distribution().size(), 16u);
}

TEST(Stats, TableMentionsCounts) {
    const auto s = corpus_stats(corpus(DistributionProfile::original(), 10, 8));
    const auto t = s.to_table();
    EXPECT_NE(t.find("300"), std::string::npos);
    EXPECT_NE(t.find("ZMCS"), std::string::npos);
}
