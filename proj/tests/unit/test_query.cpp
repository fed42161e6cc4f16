#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <functional>
#include <set>

#include "fridgr/error.hpp"
#include "fridgr/query.hpp"
#include "fridgr/scene_generator.hpp"
#include "support/oracle.hpp"
#include "support/scenes.hpp"

using namespace fridgr;

namespace {

SceneObject make_object(ObjectClass cls, Size size, Freshness f) {
    const Point2 p{0.5, 0.5};
    return SceneObject(0, cls, size, f, p, footprint_radius(cls, size), project_bbox(cls, size, p));
}

QueryProgram program(const std::string& text) { return parse_program_text(text); }

}  // namespace

TEST(Matches, LargeFreshBanana) {
    const auto o = make_object(ObjectClass::Banana, Size::Large, Freshness::Fresh);
    const auto f = FilterSet::make(Size::Large, Freshness::Fresh, std::nullopt, ObjectClass::Banana);
    EXPECT_TRUE(matches(o, f));
    EXPECT_FALSE(matches(o, f.with_size(Size::Small)));
}

TEST(Matches, EmptyFiltersMatchEverything) {
    for (auto c : kAllClasses) EXPECT_TRUE(matches(make_object(c, Size::Small, Freshness::Fresh), FilterSet{}));
}

TEST(Matches, AgreesWithReferencePredicateOnFullCrossProduct) {
    for (auto c : kAllClasses)
        for (auto z : kAllSizes)
            for (auto m : kAllFreshness) {
                if (m == Freshness::Expired && !is_perishable(c)) continue;
                const auto o = make_object(c, z, m);
                const oracle::Object ref{std::string(to_token(c)), oracle::category_table().at(std::string(to_token(c))),
                                         std::string(to_token(z)), std::string(to_token(m))};
                for (const auto& q : oracle::all_tuples()) {
                    if (!q.consistent() || q.head != "count") continue;
                    const bool expected = oracle::answer(q, {ref}) == "1";
                    EXPECT_EQ(matches(o, program(q.text()).filters), expected) << q.text();
                }
            }
}

TEST(FilterSet, InconsistentPairRejected) {
    try {
        FilterSet::make(std::nullopt, std::nullopt, Category::Vegetable, ObjectClass::Banana);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InconsistentFilters);
    }
    EXPECT_THROW(FilterSet{}.with_class(ObjectClass::Banana).with_category(Category::Drink), Error);
    EXPECT_NO_THROW(FilterSet{}.with_class(ObjectClass::Banana).with_category(Category::Fruit));
}

TEST(Evaluate, MeatAndBananaScene) {
    const auto scene = testing_scenes::meat_and_banana_scene();
    EXPECT_EQ(evaluate(program("count freshness=expired"), scene), Answer{Number{3}});
    EXPECT_EQ(evaluate(program("exist category=vegetable"), scene), Answer{YesNo{false}});
    EXPECT_EQ(evaluate(program("count category=ingredient"), scene), Answer{Number{3}});
    EXPECT_EQ(evaluate(program("count freshness=expired class=meat"), scene), Answer{Number{2}});
}

TEST(Evaluate, EmptyScene) {
    const Scene empty;
    for (const auto& p : enumerate_programs()) {
        if (p.head == Head::Count) {
            EXPECT_EQ(evaluate(p, empty), Answer{Number{0}});
        } else {
            EXPECT_EQ(evaluate(p, empty), Answer{YesNo{false}});
        }
    }
}

TEST(Evaluate, FreshMatchesNonPerishables) {
    const auto scene = testing_scenes::make_scene(
        {{ObjectClass::Donut}, {ObjectClass::Milk}, {ObjectClass::Apple, Size::Large, Freshness::Expired}});
    EXPECT_EQ(evaluate(program("count freshness=fresh"), scene), Answer{Number{2}});
}

TEST(Evaluate, RedundantCategoryEqualsClassOnly) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto scene = generate_scene(derive_seed(21, s));
        for (auto c : kAllClasses) {
            const auto with_cat = FilterSet{}.with_class(c).with_category(category_of(c));
            EXPECT_EQ(count_matching(scene, with_cat), count_matching(scene, FilterSet{}.with_class(c)));
        }
    }
}

TEST(Evaluate, ExistCountConsistency) {
    const auto programs = enumerate_programs();
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto scene = generate_scene(derive_seed(22, s));
        for (const auto& p : programs) {
            if (p.head != Head::Exist) continue;
            const bool exists = std::get<YesNo>(evaluate(p, scene)).value;
            const auto n = std::get<Number>(evaluate(QueryProgram{p.filters, Head::Count}, scene)).value;
            EXPECT_EQ(exists, n > 0);
            EXPECT_LE(n, scene.size());
        }
    }
}

TEST(Evaluate, FilterMonotonicity) {
    const auto programs = enumerate_programs();
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto scene = generate_scene(derive_seed(23, s));
        for (const auto& p : programs) {
            if (p.head != Head::Count) continue;
            const auto base = count_matching(scene, p.filters);
            const auto& f = p.filters;
            for (auto z : kAllSizes)
                if (!f.size()) EXPECT_LE(count_matching(scene, f.with_size(z)), base);
            for (auto m : kAllFreshness)
                if (!f.freshness()) EXPECT_LE(count_matching(scene, f.with_freshness(m)), base);
            for (auto c : kAllCategories)
                if (!f.category() && FilterSet::consistent(c, f.object_class()))
                    EXPECT_LE(count_matching(scene, f.with_category(c)), base);
            for (auto c : kAllClasses)
                if (!f.object_class() && FilterSet::consistent(f.category(), c))
                    EXPECT_LE(count_matching(scene, f.with_class(c)), base);
        }
    }
}

TEST(Evaluate, FilterOrderIrrelevant) {
    // Apply the four checks one at a time in every permutation and compare survivors.
    const auto programs = enumerate_programs();
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto scene = generate_scene(derive_seed(24, s));
        for (const auto& p : programs) {
            if (p.head != Head::Count) continue;
            const auto& f = p.filters;
            std::array<std::function<bool(const SceneObject&)>, 4> checks = {
                [&](const SceneObject& o) { return !f.size() || o.size() == *f.size(); },
                [&](const SceneObject& o) { return !f.freshness() || o.freshness() == *f.freshness(); },
                [&](const SceneObject& o) { return !f.category() || o.category() == *f.category(); },
                [&](const SceneObject& o) { return !f.object_class() || o.object_class() == *f.object_class(); },
            };
            std::array<int, 4> order = {0, 1, 2, 3};
            const auto expected = count_matching(scene, f);
            do {
                std::vector<const SceneObject*> alive;
                for (const auto& o : scene.objects()) alive.push_back(&o);
                for (int i : order) {
                    std::erase_if(alive, [&](const SceneObject* o) { return !checks[i](*o); });
                }
                EXPECT_EQ(alive.size(), expected);
            } while (std::next_permutation(order.begin(), order.end()));
        }
    }
}

TEST(ProgramText, RoundTripsEveryProgram) {
    const auto programs = enumerate_programs();
    EXPECT_EQ(programs.size(), 612u);
    std::set<std::string> texts;
    for (const auto& p : programs) {
        const auto t = to_program_text(p);
        texts.insert(t);
        EXPECT_EQ(parse_program_text(t), p);
    }
    EXPECT_EQ(texts.size(), programs.size());
    EXPECT_EQ(to_program_text(program("count size=large class=banana")), "count size=large class=banana");
}

TEST(ProgramText, EnumerationIsExactlyTheConsistentTuples) {
    std::set<std::string> expected;
    for (const auto& q : oracle::all_tuples())
        if (q.consistent()) expected.insert(q.text());
    std::set<std::string> got;
    for (const auto& p : enumerate_programs()) got.insert(to_program_text(p));
    EXPECT_EQ(got, expected);
    EXPECT_EQ(oracle::all_tuples().size(), 1620u);
}

TEST(ProgramText, Malformed) {
    auto code_of = [](const std::string& t) {
        try {
            parse_program_text(t);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::Internal;
    };
    EXPECT_EQ(code_of(""), Errc::Schema);
    EXPECT_EQ(code_of("maybe class=apple"), Errc::Schema);
    EXPECT_EQ(code_of("exist colour=red"), Errc::Schema);
    EXPECT_EQ(code_of("exist class=kiwi"), Errc::Schema);
    EXPECT_EQ(code_of("exist class=apple size=large"), Errc::Schema);
    EXPECT_EQ(code_of("exist category=drink class=apple"), Errc::InconsistentFilters);
}

TEST(Answers, TextRoundTrip) {
    EXPECT_EQ(answer_text(YesNo{true}), "yes");
    EXPECT_EQ(answer_text(Number{12}), "12");
    EXPECT_EQ(answer_from_text("no"), Answer{YesNo{false}});
    EXPECT_EQ(answer_from_text("7"), Answer{Number{7}});
    EXPECT_THROW(answer_from_text("-1"), Error);
    EXPECT_THROW(answer_from_text("maybe"), Error);
    EXPECT_TRUE(is_positive(Number{1}));
    EXPECT_FALSE(is_positive(YesNo{false}));
}
