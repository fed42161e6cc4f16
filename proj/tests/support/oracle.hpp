// Reference semantics for tests. Deliberately shares no code with the query module: it
// works on token spellings and carries its own class -> category table.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fridgr/scene.hpp"

namespace oracle {

inline const std::map<std::string, std::string>& category_table() {
    static const std::map<std::string, std::string> table = {
        {"donut", "dessert"}, {"coke-can", "drink"},  {"coke-bottle", "drink"}, {"beer", "drink"},
        {"apple", "fruit"},   {"banana", "fruit"},    {"lemon", "fruit"},       {"orange", "fruit"},
        {"pear", "fruit"},    {"egg", "ingredient"},  {"meat", "ingredient"},   {"milk", "ingredient"},
        {"tomato", "vegetable"}, {"fish", "ingredient"},
    };
    return table;
}

inline const std::vector<std::string> kSizes = {"small", "large"};
inline const std::vector<std::string> kFreshness = {"fresh", "expired"};
inline const std::vector<std::string> kCategories = {"dessert", "drink", "fruit", "vegetable", "ingredient"};
inline const std::vector<std::string> kClasses = {"donut", "coke-can", "coke-bottle", "beer", "apple",
                                                  "banana", "lemon", "orange", "pear", "egg",
                                                  "meat", "milk", "tomato", "fish"};

struct Object {
    std::string cls, category, size, freshness;
};

inline std::vector<Object> objects_of(const fridgr::Scene& scene) {
    std::vector<Object> out;
    for (const auto& o : scene.objects()) {
        const std::string cls(fridgr::to_token(o.object_class()));
        out.push_back({cls, category_table().at(cls), std::string(fridgr::to_token(o.size())),
                       std::string(fridgr::to_token(o.freshness()))});
    }
    return out;
}

// "" means the filter is off.
struct Query {
    std::string head;  // "exist" | "count"
    std::string size, freshness, category, cls;

    bool consistent() const { return category.empty() || cls.empty() || category_table().at(cls) == category; }

    // Same layout as the library's program text, rebuilt here by hand.
    std::string text() const {
        std::string t = head;
        if (!size.empty()) t += " size=" + size;
        if (!freshness.empty()) t += " freshness=" + freshness;
        if (!category.empty()) t += " category=" + category;
        if (!cls.empty()) t += " class=" + cls;
        return t;
    }
};

inline std::string answer(const Query& q, const std::vector<Object>& objects) {
    std::uint64_t n = 0;
    for (const auto& o : objects) {
        if (!q.size.empty() && o.size != q.size) continue;
        if (!q.freshness.empty() && o.freshness != q.freshness) continue;
        if (!q.category.empty() && o.category != q.category) continue;
        if (!q.cls.empty() && o.cls != q.cls) continue;
        ++n;
    }
    if (q.head == "count") return std::to_string(n);
    return n > 0 ? "yes" : "no";
}

// The raw 3 x 3 x 6 x 15 x 2 = 1,620 tuples, consistent or not.
inline std::vector<Query> all_tuples() {
    auto with_off = [](const std::vector<std::string>& v) {
        std::vector<std::string> out{""};
        out.insert(out.end(), v.begin(), v.end());
        return out;
    };
    std::vector<Query> out;
    for (const auto& z : with_off(kSizes))
        for (const auto& m : with_off(kFreshness))
            for (const auto& c : with_off(kCategories))
                for (const auto& s : with_off(kClasses))
                    for (const std::string head : {"exist", "count"}) out.push_back({head, z, m, c, s});
    return out;
}

}  // namespace oracle
