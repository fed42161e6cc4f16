#include "fridgr/query.hpp"

#include <charconv>
#include <sstream>

#include "fridgr/error.hpp"

namespace fridgr {

namespace {

void require_consistent(std::optional<Category> category, std::optional<ObjectClass> cls) {
    if (!FilterSet::consistent(category, cls)) {
        throw Error(Errc::InconsistentFilters, "class '" + std::string(to_token(*cls)) +
                                                   "' is not in category '" +
                                                   std::string(to_token(*category)) + "'");
    }
}

template <typename T>
std::vector<std::optional<T>> with_none(const auto& values) {
    std::vector<std::optional<T>> out{std::nullopt};
    for (auto v : values) out.emplace_back(v);
    return out;
}

}  // namespace

FilterSet FilterSet::make(std::optional<Size> size, std::optional<Freshness> freshness,
                          std::optional<Category> category, std::optional<ObjectClass> cls) {
    require_consistent(category, cls);
    FilterSet f;
    f.size_ = size;
    f.freshness_ = freshness;
    f.category_ = category;
    f.class_ = cls;
    return f;
}

FilterSet FilterSet::with_size(std::optional<Size> v) const {
    FilterSet f = *this;
    f.size_ = v;
    return f;
}

FilterSet FilterSet::with_freshness(std::optional<Freshness> v) const {
    FilterSet f = *this;
    f.freshness_ = v;
    return f;
}

FilterSet FilterSet::with_category(std::optional<Category> v) const {
    require_consistent(v, class_);
    FilterSet f = *this;
    f.category_ = v;
    return f;
}

FilterSet FilterSet::with_class(std::optional<ObjectClass> v) const {
    require_consistent(category_, v);
    FilterSet f = *this;
    f.class_ = v;
    return f;
}

std::string answer_text(const Answer& a) {
    if (const auto* yn = std::get_if<YesNo>(&a)) return yn->value ? "yes" : "no";
    return std::to_string(std::get<Number>(a).value);
}

Answer answer_from_text(std::string_view text) {
    if (text == "yes") return YesNo{true};
    if (text == "no") return YesNo{false};
    std::uint64_t n = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, n);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw Error(Errc::Schema, "not an answer: '" + std::string(text) + "'");
    }
    return Number{n};
}

bool is_positive(const Answer& a) noexcept {
    if (const auto* yn = std::get_if<YesNo>(&a)) return yn->value;
    return std::get<Number>(a).value > 0;
}

bool matches(const SceneObject& o, const FilterSet& f) noexcept {
    if (f.size() && o.size() != *f.size()) return false;
    if (f.freshness() && o.freshness() != *f.freshness()) return false;
    if (f.category() && o.category() != *f.category()) return false;
    if (f.object_class() && o.object_class() != *f.object_class()) return false;
    return true;
}

std::uint64_t count_matching(const Scene& scene, const FilterSet& filters) noexcept {
    std::uint64_t n = 0;
    for (const auto& o : scene.objects()) {
        if (matches(o, filters)) ++n;
    }
    return n;
}

Answer evaluate(const QueryProgram& program, const Scene& scene) noexcept {
    const auto n = count_matching(scene, program.filters);
    if (program.head == Head::Count) return Number{n};
    return YesNo{n > 0};
}

std::string to_program_text(const QueryProgram& p) {
    std::string out = p.head == Head::Count ? "count" : "exist";
    const auto& f = p.filters;
    if (f.size()) (out += " size=") += to_token(*f.size());
    if (f.freshness()) (out += " freshness=") += to_token(*f.freshness());
    if (f.category()) (out += " category=") += to_token(*f.category());
    if (f.object_class()) (out += " class=") += to_token(*f.object_class());
    return out;
}

QueryProgram parse_program_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string word;
    if (!(in >> word)) throw Error(Errc::Schema, "empty program text");
    QueryProgram p;
    if (word == "count") {
        p.head = Head::Count;
    } else if (word == "exist") {
        p.head = Head::Exist;
    } else {
        throw Error(Errc::Schema, "unknown program head '" + word + "'");
    }
    std::optional<Size> size;
    std::optional<Freshness> freshness;
    std::optional<Category> category;
    std::optional<ObjectClass> cls;
    int last_key = -1;
    while (in >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) throw Error(Errc::Schema, "expected key=value, got '" + word + "'");
        const std::string_view key(word.data(), eq);
        const std::string_view value(word.data() + eq + 1, word.size() - eq - 1);
        int key_rank = -1;
        bool ok = false;
        if (key == "size") {
            key_rank = 0;
            size = size_from_token(value);
            ok = size.has_value();
        } else if (key == "freshness") {
            key_rank = 1;
            freshness = freshness_from_token(value);
            ok = freshness.has_value();
        } else if (key == "category") {
            key_rank = 2;
            category = category_from_token(value);
            ok = category.has_value();
        } else if (key == "class") {
            key_rank = 3;
            cls = class_from_token(value);
            ok = cls.has_value();
        }
        if (key_rank < 0) throw Error(Errc::Schema, "unknown filter key in '" + word + "'");
        if (!ok) throw Error(Errc::Schema, "unknown filter value in '" + word + "'");
        if (key_rank <= last_key) throw Error(Errc::Schema, "filters out of canonical order");
        last_key = key_rank;
    }
    p.filters = FilterSet::make(size, freshness, category, cls);
    return p;
}

std::vector<QueryProgram> enumerate_programs() {
    std::vector<QueryProgram> out;
    const auto sizes = with_none<Size>(kAllSizes);
    const auto freshness = with_none<Freshness>(kAllFreshness);
    const auto categories = with_none<Category>(kAllCategories);
    const auto classes = with_none<ObjectClass>(kAllClasses);
    for (auto head : {Head::Exist, Head::Count}) {
        for (const auto& z : sizes) {
            for (const auto& m : freshness) {
                for (const auto& c : categories) {
                    for (const auto& s : classes) {
                        if (!FilterSet::consistent(c, s)) continue;
                        out.push_back(QueryProgram{FilterSet::make(z, m, c, s), head});
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace fridgr
