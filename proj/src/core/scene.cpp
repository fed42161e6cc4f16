#include "fridgr/scene.hpp"

#include <algorithm>
#include <string>

#include "fridgr/error.hpp"

namespace fridgr {

namespace {

constexpr std::array<std::string_view, kClassCount> kClassTokens = {
    "donut", "coke-can", "coke-bottle", "beer", "apple", "banana", "lemon",
    "orange", "pear", "egg", "meat", "milk", "tomato", "fish",
};
constexpr std::array<std::string_view, kCategoryCount> kCategoryTokens = {
    "dessert", "drink", "fruit", "vegetable", "ingredient",
};
constexpr std::array<std::string_view, 2> kFreshnessTokens = {"fresh", "expired"};
constexpr std::array<std::string_view, 2> kSizeTokens = {"small", "large"};
constexpr std::array<std::string_view, 4> kDirectionTokens = {"left_of", "right_of",
                                                              "in_front_of", "behind"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& table, std::string_view token) {
    for (std::size_t i = 0; i < N; ++i) {
        if (table[i] == token) return static_cast<Enum>(i);
    }
    return std::nullopt;
}

Direction converse(Direction d) {
    switch (d) {
        case Direction::LeftOf:
            return Direction::RightOf;
        case Direction::RightOf:
            return Direction::LeftOf;
        case Direction::InFrontOf:
            return Direction::Behind;
        case Direction::Behind:
            return Direction::InFrontOf;
    }
    return d;
}

}  // namespace

std::string_view to_token(ObjectClass c) noexcept { return kClassTokens[static_cast<std::size_t>(c)]; }
std::string_view to_token(Category c) noexcept { return kCategoryTokens[static_cast<std::size_t>(c)]; }
std::string_view to_token(Freshness f) noexcept { return kFreshnessTokens[static_cast<std::size_t>(f)]; }
std::string_view to_token(Size s) noexcept { return kSizeTokens[static_cast<std::size_t>(s)]; }
std::string_view to_token(Direction d) noexcept { return kDirectionTokens[static_cast<std::size_t>(d)]; }

std::optional<ObjectClass> class_from_token(std::string_view token) noexcept {
    return lookup<ObjectClass>(kClassTokens, token);
}
std::optional<Category> category_from_token(std::string_view token) noexcept {
    return lookup<Category>(kCategoryTokens, token);
}
std::optional<Freshness> freshness_from_token(std::string_view token) noexcept {
    return lookup<Freshness>(kFreshnessTokens, token);
}
std::optional<Size> size_from_token(std::string_view token) noexcept {
    return lookup<Size>(kSizeTokens, token);
}

SceneObject::SceneObject(int id, ObjectClass cls, Size size, Freshness freshness, Point2 position,
                         double footprint_radius, BBox bbox)
    : id_(id),
      class_(cls),
      size_(size),
      freshness_(freshness),
      position_(position),
      footprint_radius_(footprint_radius),
      bbox_(bbox) {
    if (freshness == Freshness::Expired && !is_perishable(cls)) {
        throw Error(Errc::InvalidArgument,
                    "class '" + std::string(to_token(cls)) + "' cannot be expired");
    }
    if (!bbox.is_valid()) {
        throw Error(Errc::InvalidArgument, "object " + std::to_string(id) + " has a degenerate bbox");
    }
    if (position.x < 0.0 || position.x > 1.0 || position.y < 0.0 || position.y > 1.0) {
        throw Error(Errc::InvalidArgument, "object " + std::to_string(id) + " is off the shelf");
    }
    if (!(footprint_radius > 0.0)) {
        throw Error(Errc::InvalidArgument, "footprint radius must be positive");
    }
}

Scene::Scene(std::int64_t scene_id, std::uint64_t seed, std::vector<SceneObject> objects,
             Relationships relationships)
    : scene_id_(scene_id),
      seed_(seed),
      objects_(std::move(objects)),
      relationships_(std::move(relationships)) {
    const auto n = objects_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (objects_[i].id() != static_cast<int>(i)) {
            throw Error(Errc::InvalidArgument, "object ids must be 0..n-1 in order");
        }
    }
    for (auto d : kAllDirections) {
        const auto& rel = relationships_.of(d);
        if (rel.size() != n) {
            throw Error(Errc::InvalidArgument,
                        "relationship map '" + std::string(to_token(d)) + "' has wrong arity");
        }
        const auto& conv = relationships_.of(converse(d));
        for (std::size_t a = 0; a < n; ++a) {
            for (int b : rel[a]) {
                if (b < 0 || static_cast<std::size_t>(b) >= n) {
                    throw Error(Errc::InvalidArgument, "relationship references unknown object");
                }
                if (static_cast<std::size_t>(b) == a) {
                    throw Error(Errc::InvalidArgument, "relationships must be irreflexive");
                }
                const auto& back = conv[static_cast<std::size_t>(b)];
                if (std::find(back.begin(), back.end(), static_cast<int>(a)) == back.end()) {
                    throw Error(Errc::InvalidArgument, "relationships must be pairwise converse");
                }
            }
        }
    }
}

Scene Scene::with_id(std::int64_t scene_id) const {
    Scene copy = *this;
    copy.scene_id_ = scene_id;
    return copy;
}

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::PlacementExhausted: return "PlacementExhausted";
        case Errc::TemplateSyntax: return "TemplateSyntaxError";
        case Errc::DuplicateTemplateId: return "DuplicateTemplateId";
        case Errc::UnsatisfiableMask: return "UnsatisfiableMask";
        case Errc::OutOfGrammar: return "OutOfGrammar";
        case Errc::UnknownToken: return "UnknownToken";
        case Errc::InconsistentFilters: return "InconsistentFilters";
        case Errc::EmptyQuery: return "EmptyQuery";
        case Errc::QueueFull: return "QueueFull";
        case Errc::UnknownRequestId: return "UnknownRequestId";
        case Errc::Schema: return "SchemaError";
        case Errc::MissingScene: return "MissingScene";
        case Errc::Io: return "IoError";
        case Errc::SoundnessViolation: return "SoundnessViolation";
        case Errc::ServiceStopped: return "ServiceStopped";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace fridgr
