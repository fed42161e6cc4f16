#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fridgr {

enum class ObjectClass : std::uint8_t {
    Donut,
    CokeCan,
    CokeBottle,
    Beer,
    Apple,
    Banana,
    Lemon,
    Orange,
    Pear,
    Egg,
    Meat,
    Milk,
    Tomato,
    Fish,
};

enum class Category : std::uint8_t { Dessert, Drink, Fruit, Vegetable, Ingredient };
enum class Freshness : std::uint8_t { Fresh, Expired };
enum class Size : std::uint8_t { Small, Large };

inline constexpr std::size_t kClassCount = 14;
inline constexpr std::size_t kCategoryCount = 5;

inline constexpr std::array<ObjectClass, kClassCount> kAllClasses = {
    ObjectClass::Donut, ObjectClass::CokeCan, ObjectClass::CokeBottle, ObjectClass::Beer,
    ObjectClass::Apple, ObjectClass::Banana,  ObjectClass::Lemon,      ObjectClass::Orange,
    ObjectClass::Pear,  ObjectClass::Egg,     ObjectClass::Meat,       ObjectClass::Milk,
    ObjectClass::Tomato, ObjectClass::Fish,
};
inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::Dessert, Category::Drink, Category::Fruit, Category::Vegetable, Category::Ingredient,
};
inline constexpr std::array<Freshness, 2> kAllFreshness = {Freshness::Fresh, Freshness::Expired};
inline constexpr std::array<Size, 2> kAllSizes = {Size::Small, Size::Large};

constexpr Category category_of(ObjectClass c) noexcept {
    switch (c) {
        case ObjectClass::Donut:
            return Category::Dessert;
        case ObjectClass::CokeCan:
        case ObjectClass::CokeBottle:
        case ObjectClass::Beer:
            return Category::Drink;
        case ObjectClass::Apple:
        case ObjectClass::Banana:
        case ObjectClass::Lemon:
        case ObjectClass::Orange:
        case ObjectClass::Pear:
            return Category::Fruit;
        case ObjectClass::Tomato:
            return Category::Vegetable;
        case ObjectClass::Egg:
        case ObjectClass::Meat:
        case ObjectClass::Milk:
        case ObjectClass::Fish:
            return Category::Ingredient;
    }
    return Category::Ingredient;
}

constexpr bool is_perishable(ObjectClass c) noexcept {
    return c == ObjectClass::Apple || c == ObjectClass::Banana || c == ObjectClass::Meat;
}

/// True if some class of the category can be expired.
constexpr bool category_has_perishables(Category cat) noexcept {
    for (auto c : kAllClasses) {
        if (category_of(c) == cat && is_perishable(c)) return true;
    }
    return false;
}

// Canonical tokens. These are the spellings used in dataset files, program text and
// the lexicon's "canon" records.
std::string_view to_token(ObjectClass c) noexcept;
std::string_view to_token(Category c) noexcept;
std::string_view to_token(Freshness f) noexcept;
std::string_view to_token(Size s) noexcept;

std::optional<ObjectClass> class_from_token(std::string_view token) noexcept;
std::optional<Category> category_from_token(std::string_view token) noexcept;
std::optional<Freshness> freshness_from_token(std::string_view token) noexcept;
std::optional<Size> size_from_token(std::string_view token) noexcept;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool is_valid() const noexcept {
        return x_min >= 0.0 && y_min >= 0.0 && x_max <= 1.0 && y_max <= 1.0 && x_min < x_max &&
               y_min < y_max;
    }
    friend bool operator==(const BBox&, const BBox&) = default;
};

/// One labelled object on the shelf. Construction enforces the freshness rule: only
/// perishable classes may be expired.
class SceneObject {
public:
    SceneObject(int id, ObjectClass cls, Size size, Freshness freshness, Point2 position,
                double footprint_radius, BBox bbox);

    int id() const noexcept { return id_; }
    ObjectClass object_class() const noexcept { return class_; }
    Category category() const noexcept { return category_of(class_); }
    Size size() const noexcept { return size_; }
    Freshness freshness() const noexcept { return freshness_; }
    Point2 position() const noexcept { return position_; }
    double footprint_radius() const noexcept { return footprint_radius_; }
    const BBox& bbox() const noexcept { return bbox_; }

    friend bool operator==(const SceneObject&, const SceneObject&) = default;

private:
    int id_;
    ObjectClass class_;
    Size size_;
    Freshness freshness_;
    Point2 position_;
    double footprint_radius_;
    BBox bbox_;
};

enum class Direction : std::uint8_t { LeftOf, RightOf, InFrontOf, Behind };
inline constexpr std::array<Direction, 4> kAllDirections = {
    Direction::LeftOf, Direction::RightOf, Direction::InFrontOf, Direction::Behind};
std::string_view to_token(Direction d) noexcept;

/// relations[direction][a] lists every b such that "a <direction> b".
struct Relationships {
    std::array<std::vector<std::vector<int>>, 4> relations;

    const std::vector<std::vector<int>>& of(Direction d) const noexcept {
        return relations[static_cast<std::size_t>(d)];
    }
    std::vector<std::vector<int>>& of(Direction d) noexcept {
        return relations[static_cast<std::size_t>(d)];
    }
    friend bool operator==(const Relationships&, const Relationships&) = default;
};

/// Ground-truth scene graph. Object ids must be 0..n-1 in order; relationships must be
/// irreflexive and pairwise converse (left-of/right-of, in-front-of/behind).
class Scene {
public:
    Scene() = default;
    Scene(std::int64_t scene_id, std::uint64_t seed, std::vector<SceneObject> objects,
          Relationships relationships);

    std::int64_t scene_id() const noexcept { return scene_id_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::span<const SceneObject> objects() const noexcept { return objects_; }
    const Relationships& relationships() const noexcept { return relationships_; }
    std::size_t size() const noexcept { return objects_.size(); }
    bool empty() const noexcept { return objects_.empty(); }

    Scene with_id(std::int64_t scene_id) const;

    friend bool operator==(const Scene&, const Scene&) = default;

private:
    std::int64_t scene_id_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<SceneObject> objects_;
    Relationships relationships_;
};

}  // namespace fridgr
