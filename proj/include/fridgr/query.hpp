#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fridgr/scene.hpp"

namespace fridgr {

/// Conjunction of optional property filters. A category and a class that disagree
/// (e.g. vegetable + banana) cannot be constructed.
class FilterSet {
public:
    FilterSet() = default;

    /// Throws Error(InconsistentFilters) if category_of(cls) != category.
    static FilterSet make(std::optional<Size> size, std::optional<Freshness> freshness,
                          std::optional<Category> category, std::optional<ObjectClass> cls);

    /// True when the pair can coexist in one FilterSet.
    static bool consistent(std::optional<Category> category, std::optional<ObjectClass> cls) noexcept {
        return !category || !cls || category_of(*cls) == *category;
    }

    const std::optional<Size>& size() const noexcept { return size_; }
    const std::optional<Freshness>& freshness() const noexcept { return freshness_; }
    const std::optional<Category>& category() const noexcept { return category_; }
    const std::optional<ObjectClass>& object_class() const noexcept { return class_; }

    FilterSet with_size(std::optional<Size> v) const;
    FilterSet with_freshness(std::optional<Freshness> v) const;
    FilterSet with_category(std::optional<Category> v) const;
    FilterSet with_class(std::optional<ObjectClass> v) const;

    bool empty() const noexcept { return !size_ && !freshness_ && !category_ && !class_; }
    int filter_count() const noexcept {
        return int(size_.has_value()) + int(freshness_.has_value()) + int(category_.has_value()) +
               int(class_.has_value());
    }

    friend bool operator==(const FilterSet&, const FilterSet&) = default;

private:
    std::optional<Size> size_;
    std::optional<Freshness> freshness_;
    std::optional<Category> category_;
    std::optional<ObjectClass> class_;
};

enum class Head : std::uint8_t { Exist, Count };

struct QueryProgram {
    FilterSet filters;
    Head head = Head::Exist;

    friend bool operator==(const QueryProgram&, const QueryProgram&) = default;
};

struct YesNo {
    bool value = false;
    friend bool operator==(const YesNo&, const YesNo&) = default;
};
struct Number {
    std::uint64_t value = 0;
    friend bool operator==(const Number&, const Number&) = default;
};

using Answer = std::variant<YesNo, Number>;

/// "yes" / "no" / decimal count.
std::string answer_text(const Answer& a);
/// Inverse of answer_text; throws Error(Schema) on anything else.
Answer answer_from_text(std::string_view text);
/// yes, or a non-zero count.
bool is_positive(const Answer& a) noexcept;

bool matches(const SceneObject& object, const FilterSet& filters) noexcept;
std::uint64_t count_matching(const Scene& scene, const FilterSet& filters) noexcept;
Answer evaluate(const QueryProgram& program, const Scene& scene) noexcept;

/// Head token followed by filter tokens in size, freshness, category, class order,
/// e.g. "count size=large class=banana".
std::string to_program_text(const QueryProgram& program);
/// Throws Error(Schema) on malformed text, Error(InconsistentFilters) on contradictory filters.
QueryProgram parse_program_text(std::string_view text);

/// Every constructible program (consistent category/class pairs only), in a fixed order.
std::vector<QueryProgram> enumerate_programs();

}  // namespace fridgr
