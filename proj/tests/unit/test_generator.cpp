#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fridgr/error.hpp"
#include "fridgr/question_generator.hpp"
#include "fridgr/scene_generator.hpp"
#include "support/oracle.hpp"
#include "support/scenes.hpp"

using namespace fridgr;

namespace {

const QuestionTemplate& exist_template() { return *TemplateSet::builtin().find("exist"); }

const TemplateForm& form_with_text(const QuestionTemplate& t, const std::string& text) {
    for (const auto& f : t.forms)
        if (f.text == text) return f;
    throw std::runtime_error("no form " + text);
}

int single_variable(int index) { return index == 1 || index == 2 || index == 4 || index == 8; }

}  // namespace

TEST(Masks, IndexAndText) {
    VariableMask m{true, true, false, true};
    EXPECT_EQ(m.index(), 13);
    EXPECT_EQ(m.to_string(), "ZM-S");
    EXPECT_EQ(VariableMask::parse("ZM-S"), m);
    EXPECT_EQ(VariableMask::from_index(13), m);
    EXPECT_FALSE(VariableMask::parse("MZ-S").has_value());
    for (int i = 0; i < 16; ++i) EXPECT_EQ(VariableMask::from_index(i).index(), i);
}

TEST(Profiles, PresetsAreValid) {
    for (const auto& p : {DistributionProfile::original(), DistributionProfile::modified()}) {
        EXPECT_NO_THROW(p.validate());
        double total = 0;
        for (double w : p.mask_weights) total += w;
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
    EXPECT_DOUBLE_EQ(DistributionProfile::modified().short_form_probability, 0.65);
    EXPECT_LT(DistributionProfile::original().short_form_probability, 0.5);
    EXPECT_THROW(DistributionProfile::by_name("other"), Error);
    auto bad = DistributionProfile::original();
    bad.mask_weights[0] += 0.5;
    EXPECT_THROW(bad.validate(), Error);
}

TEST(Profiles, ModifiedFavoursSingleVariableMasks) {
    double orig = 0, mod = 0;
    for (int i = 0; i < 16; ++i) {
        if (!single_variable(i)) continue;
        orig += DistributionProfile::original().mask_weights[i];
        mod += DistributionProfile::modified().mask_weights[i];
    }
    EXPECT_GT(mod, orig);
}

TEST(SampleMask, AllMassOnFullMask) {
    DistributionProfile p = DistributionProfile::original();
    p.mask_weights.fill(0.0);
    p.mask_weights[15] = 1.0;
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_mask(p, rng).to_string(), "ZMCS");
}

TEST(SampleMask, FrequenciesMatchWeights) {
    for (const auto& p : {DistributionProfile::original(), DistributionProfile::modified()}) {
        Rng rng(derive_seed(5, p.name));
        std::array<int, 16> hist{};
        constexpr int kDraws = 100000;
        for (int i = 0; i < kDraws; ++i) ++hist[sample_mask(p, rng).index()];
        for (int i = 0; i < 16; ++i) {
            EXPECT_NEAR(double(hist[i]) / kDraws, p.mask_weights[i], 0.01) << p.name << " mask " << i;
        }
    }
}

TEST(Render, FullMaskLongForm) {
    const auto& form = form_with_text(exist_template(), "do i have {Z} {M} {C} {S}");
    Rng rng(1);
    QuestionValues v{Size::Large, Freshness::Fresh, std::nullopt, ObjectClass::Banana};
    EXPECT_EQ(render_question(form, v, Lexicon::builtin(), 0.0, rng), "do i have large fresh bananas");
}

TEST(Render, SubjectSubstitution) {
    const auto& form = form_with_text(exist_template(), "do i have {Z} {M} {C} {S}");
    Rng rng(1);
    QuestionValues v{std::nullopt, Freshness::Fresh, std::nullopt, std::nullopt};
    EXPECT_EQ(render_question(form, v, Lexicon::builtin(), 0.0, rng), "do i have fresh products");
}

TEST(Render, SingularForms) {
    const auto& form = form_with_text(exist_template(), "is there {Z} {M} {C} {S}");
    Rng rng(1);
    QuestionValues v{Size::Small, std::nullopt, Category::Drink, std::nullopt};
    EXPECT_EQ(render_question(form, v, Lexicon::builtin(), 0.0, rng), "is there small drink");
}

TEST(Render, SynonymsComeFromLexicon) {
    const auto& form = form_with_text(exist_template(), "do i have {Z} {M} {C} {S}");
    Rng rng(3);
    std::set<std::string> seen;
    QuestionValues v{Size::Large, std::nullopt, std::nullopt, ObjectClass::CokeCan};
    for (int i = 0; i < 200; ++i) seen.insert(render_question(form, v, Lexicon::builtin(), 1.0, rng));
    for (const auto& q : seen) EXPECT_EQ(q.find("large"), std::string::npos) << q;
    EXPECT_TRUE(seen.count("do i have giant soda cans"));
}

TEST(Tautology, CategoryWithOwnClassIsRepaired) {
    Rng rng(1);
    QuestionValues v{std::nullopt, Freshness::Fresh, Category::Fruit, ObjectClass::Banana};
    const auto d = avoid_tautology(v, rng);
    EXPECT_EQ(d.outcome, TautologyOutcome::Repair);
    EXPECT_EQ(d.values, (QuestionValues{std::nullopt, Freshness::Fresh, std::nullopt, ObjectClass::Banana}));
    const auto& form = form_with_text(exist_template(), "do i have {Z} {M} {C} {S}");
    EXPECT_EQ(render_question(form, d.values, Lexicon::builtin(), 0.0, rng), "do i have fresh bananas");
}

TEST(Tautology, CategoryOnlyAccepted) {
    Rng rng(1);
    QuestionValues v{std::nullopt, std::nullopt, Category::Fruit, std::nullopt};
    const auto d = avoid_tautology(v, rng);
    EXPECT_EQ(d.outcome, TautologyOutcome::Accept);
    EXPECT_EQ(d.values, v);
}

TEST(Tautology, CrossCategoryRedrawsInside) {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        QuestionValues v{std::nullopt, std::nullopt, Category::Drink, ObjectClass::Banana};
        const auto d = avoid_tautology(v, rng);
        EXPECT_EQ(d.outcome, TautologyOutcome::Repair);
        ASSERT_TRUE(d.values.object_class.has_value());
        EXPECT_EQ(category_of(*d.values.object_class), Category::Drink);
        EXPECT_FALSE(d.values.category.has_value());
    }
}

TEST(Instantiate, AnswerMatchesOracle) {
    const auto& lex = Lexicon::builtin();
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto scene = generate_scene(derive_seed(31, s));
        const auto objs = oracle::objects_of(scene);
        Rng rng(s);
        for (const auto& tmpl : TemplateSet::builtin().templates()) {
            for (int m = 0; m < 16; ++m) {
                try {
                    const auto qa = instantiate(tmpl, VariableMask::from_index(m), scene, lex,
                                                DistributionProfile::modified(), rng);
                    const auto& f = qa.program.filters;
                    oracle::Query q{tmpl.head == Head::Count ? "count" : "exist",
                                    f.size() ? std::string(to_token(*f.size())) : "",
                                    f.freshness() ? std::string(to_token(*f.freshness())) : "",
                                    f.category() ? std::string(to_token(*f.category())) : "",
                                    f.object_class() ? std::string(to_token(*f.object_class())) : ""};
                    EXPECT_EQ(answer_text(qa.answer), oracle::answer(q, objs)) << qa.question_text;
                } catch (const Error& e) {
                    EXPECT_EQ(e.code(), Errc::UnsatisfiableMask);
                }
            }
        }
    }
}

TEST(Instantiate, UnsatisfiableWhenFormLacksSlot) {
    const auto set = TemplateSet::parse(
        "template t exist\n"
        "\"do i have {Z} {M} {C} {S}\" long\n"
        "\"what about {S}\" short\n");
    const auto scene = generate_scene(1);
    Rng rng(1);
    InstantiateOptions opts;
    opts.form_length = FormLength::Short;
    try {
        instantiate(set.templates()[0], *VariableMask::parse("-M--"), scene, Lexicon::builtin(),
                    DistributionProfile::original(), rng, opts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnsatisfiableMask);
    }
}

TEST(Instantiate, StrictPolarityOnEmptyScene) {
    Rng rng(1);
    InstantiateOptions opts;
    opts.want_positive = true;
    opts.allow_polarity_fallback = false;
    EXPECT_THROW(instantiate(exist_template(), *VariableMask::parse("---S"), Scene{}, Lexicon::builtin(),
                             DistributionProfile::original(), rng, opts),
                 Error);
}

TEST(GenerateQaSet, ExactCount) {
    const auto scene = generate_scene(8);
    Rng rng(8);
    for (const auto& p : {DistributionProfile::original(), DistributionProfile::modified()}) {
        const auto qa = generate_qa_set(scene, 30, TemplateSet::builtin(), Lexicon::builtin(), p, rng);
        EXPECT_EQ(qa.size(), 30u);
    }
}

TEST(GenerateQaSet, EmptySceneFallsBackToNegative) {
    auto p = DistributionProfile::original();
    p.target_positive_fraction = 1.0;
    Rng rng(2);
    const auto qa = generate_qa_set(Scene{}, 1, TemplateSet::builtin(), Lexicon::builtin(), p, rng);
    ASSERT_EQ(qa.size(), 1u);
    EXPECT_FALSE(is_positive(qa[0].answer));
}

TEST(GenerateQaSet, RejectsBadArguments) {
    Rng rng(2);
    const auto scene = generate_scene(2);
    EXPECT_THROW(generate_qa_set(scene, 0, TemplateSet::builtin(), Lexicon::builtin(),
                                 DistributionProfile::original(), rng),
                 Error);
    EXPECT_THROW(generate_qa_set(scene, 5, TemplateSet::parse(""), Lexicon::builtin(),
                                 DistributionProfile::original(), rng),
                 Error);
}

TEST(GenerateQaSet, Deterministic) {
    const auto scene = generate_scene(44);
    Rng a(9), b(9);
    const auto p = DistributionProfile::modified();
    EXPECT_EQ(generate_qa_set(scene, 30, TemplateSet::builtin(), Lexicon::builtin(), p, a),
              generate_qa_set(scene, 30, TemplateSet::builtin(), Lexicon::builtin(), p, b));
}

TEST(GenerateQaSet, CorpusProperties) {
    for (const auto& p : {DistributionProfile::original(), DistributionProfile::modified()}) {
        std::size_t total = 0, positive = 0, short_forms = 0;
        for (std::uint64_t s = 0; s < 1000; ++s) {
            const auto scene = generate_scene(derive_seed(77, s), {}, static_cast<std::int64_t>(s));
            Rng rng(derive_seed(78, s));
            for (const auto& qa : generate_qa_set(scene, 30, TemplateSet::builtin(), Lexicon::builtin(), p, rng)) {
                ++total;
                positive += is_positive(qa.answer);
                short_forms += qa.form_length == FormLength::Short;
                const auto& f = qa.program.filters;
                // Soundness, no category+class pair, and effective mask agrees with the program.
                EXPECT_EQ(qa.answer, evaluate(qa.program, scene));
                EXPECT_FALSE(f.category() && f.object_class()) << qa.question_text;
                EXPECT_EQ(qa.mask.size, f.size().has_value());
                EXPECT_EQ(qa.mask.freshness, f.freshness().has_value());
                EXPECT_EQ(qa.mask.category, f.category().has_value());
                EXPECT_EQ(qa.mask.object_class, f.object_class().has_value());
                // Freshness only where the scope can hold perishables.
                if (f.freshness()) {
                    if (f.object_class()) EXPECT_TRUE(is_perishable(*f.object_class()));
                    if (f.category()) EXPECT_TRUE(category_has_perishables(*f.category()));
                }
                EXPECT_EQ(qa.scene_id, scene.scene_id());
            }
        }
        EXPECT_EQ(total, 30000u);
        EXPECT_NEAR(double(positive) / double(total), p.target_positive_fraction, 0.1) << p.name;
        EXPECT_NEAR(double(short_forms) / double(total), p.short_form_probability, 0.02) << p.name;
    }
}
