#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "fridgr/rng.hpp"
#include "fridgr/scene.hpp"

namespace fridgr {

struct SceneConfig {
    int min_objects = 3;
    int max_objects = 10;
    double expired_probability = 0.3;  // applied to perishable classes only
    double large_probability = 0.5;
    double min_center_separation = 0.08;
    int max_placement_attempts = 50;

    /// Throws Error(InvalidConfig) when the config is unusable.
    void validate() const;
};

struct Placement {
    Point2 position;
    double footprint_radius = 0.0;
    BBox bbox;
};

/// Image-space box for an object of the given class and size standing at a shelf position.
BBox project_bbox(ObjectClass cls, Size size, Point2 position) noexcept;
double footprint_radius(ObjectClass cls, Size size) noexcept;

/// Rejection-samples a shelf position whose center keeps min_center_separation from every
/// existing center. Throws Error(PlacementExhausted) after max_placement_attempts misses.
Placement place_object(std::span<const SceneObject> existing, ObjectClass cls, Size size, Rng& rng,
                       const SceneConfig& config);

/// The separation test place_object applies to each candidate.
bool placement_accepted(std::span<const SceneObject> existing, Point2 candidate,
                        const SceneConfig& config) noexcept;

/// a left-of b iff a.x < b.x; a in-front-of b iff a.y < b.y.
Relationships compute_relationships(std::span<const SceneObject> objects);

/// Deterministic in (seed, config). Retries the whole scene with derived sub-seeds up to
/// 10 times when placement is exhausted.
Scene generate_scene(std::uint64_t seed, const SceneConfig& config = {}, std::int64_t scene_id = 0);

/// SVG schematic of the shelf: one <g class="glyph ..."> per object positioned on its bbox.
std::string render_schematic(const Scene& scene);

}  // namespace fridgr
