#include "fridgr/scene_generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "fridgr/error.hpp"

namespace fridgr {

namespace {

struct ClassGeometry {
    double height;  // image-height fraction of a large object at the reference depth
    double aspect;  // width / height
    double footprint;
    const char* fill;
    bool round;
};

// Indexed by ObjectClass.
constexpr std::array<ClassGeometry, kClassCount> kGeometry = {{
    {0.10, 1.60, 0.050, "#d9a066", true},   // donut
    {0.16, 0.55, 0.030, "#c8102e", false},  // coke-can
    {0.30, 0.30, 0.035, "#a50f24", false},  // coke-bottle
    {0.26, 0.32, 0.035, "#b8860b", false},  // beer
    {0.12, 1.00, 0.040, "#d62d20", true},   // apple
    {0.10, 2.00, 0.060, "#ffe135", true},   // banana
    {0.09, 1.20, 0.035, "#fff44f", true},   // lemon
    {0.12, 1.00, 0.040, "#ff8c00", true},   // orange
    {0.15, 0.75, 0.040, "#d1e231", true},   // pear
    {0.08, 0.80, 0.025, "#f5f0e1", true},   // egg
    {0.08, 1.80, 0.060, "#b5485d", false},  // meat
    {0.28, 0.45, 0.045, "#fafafa", false},  // milk
    {0.11, 1.05, 0.040, "#ff6347", true},   // tomato
    {0.07, 2.60, 0.070, "#8fa9b8", true},   // fish
}};

constexpr double kSmallScale = 0.7;
constexpr double kShelfMargin = 0.05;
constexpr int kSceneRetries = 10;
constexpr int kSvgWidth = 640;
constexpr int kSvgHeight = 480;

const ClassGeometry& geometry(ObjectClass cls) { return kGeometry[static_cast<std::size_t>(cls)]; }

double size_scale(Size s) { return s == Size::Large ? 1.0 : kSmallScale; }

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string darken(const char* hex) {
    unsigned r = 0, g = 0, b = 0;
    std::sscanf(hex, "#%02x%02x%02x", &r, &g, &b);
    char out[16];
    std::snprintf(out, sizeof out, "#%02x%02x%02x", (r * 45 / 100) & 0xff, (g * 45 / 100) & 0xff,
                  (b * 45 / 100) & 0xff);
    return out;
}

void append_number(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    out += buf;
}

Scene try_generate(std::uint64_t seed, const SceneConfig& config, std::int64_t scene_id) {
    Rng rng(seed);
    const auto count = static_cast<int>(rng.between(config.min_objects, config.max_objects));
    std::vector<SceneObject> objects;
    objects.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const auto cls = kAllClasses[rng.below(kClassCount)];
        const Size size = rng.bernoulli(config.large_probability) ? Size::Large : Size::Small;
        Freshness freshness = Freshness::Fresh;
        if (is_perishable(cls) && rng.bernoulli(config.expired_probability)) {
            freshness = Freshness::Expired;
        }
        const Placement p = place_object(objects, cls, size, rng, config);
        objects.emplace_back(i, cls, size, freshness, p.position, p.footprint_radius, p.bbox);
    }
    auto relationships = compute_relationships(objects);
    return Scene(scene_id, seed, std::move(objects), std::move(relationships));
}

}  // namespace

void SceneConfig::validate() const {
    if (min_objects <= 0) throw Error(Errc::InvalidConfig, "min_objects must be > 0");
    if (max_objects < min_objects) throw Error(Errc::InvalidConfig, "max_objects must be >= min_objects");
    auto is_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!is_prob(expired_probability) || !is_prob(large_probability)) {
        throw Error(Errc::InvalidConfig, "probabilities must lie in [0, 1]");
    }
    if (min_center_separation < 0.0 || min_center_separation >= 1.0) {
        throw Error(Errc::InvalidConfig, "min_center_separation must lie in [0, 1)");
    }
    if (max_placement_attempts <= 0) throw Error(Errc::InvalidConfig, "max_placement_attempts must be > 0");
}

double footprint_radius(ObjectClass cls, Size size) noexcept {
    return geometry(cls).footprint * size_scale(size);
}

BBox project_bbox(ObjectClass cls, Size size, Point2 position) noexcept {
    const auto& g = geometry(cls);
    // Smaller y is nearer the door: lower in the image and drawn larger.
    const double depth_scale = 0.8 + 0.4 * (1.0 - position.y);
    const double h = g.height * size_scale(size) * depth_scale;
    const double w = h * g.aspect;
    const double cx = 0.08 + 0.84 * position.x;
    const double base = 0.40 + 0.55 * (1.0 - position.y);
    return BBox{clamp01(cx - w / 2), clamp01(base - h), clamp01(cx + w / 2), clamp01(base)};
}

bool placement_accepted(std::span<const SceneObject> existing, Point2 candidate,
                        const SceneConfig& config) noexcept {
    const double min_sq = config.min_center_separation * config.min_center_separation;
    return std::none_of(existing.begin(), existing.end(), [&](const SceneObject& o) {
        const double dx = o.position().x - candidate.x;
        const double dy = o.position().y - candidate.y;
        return dx * dx + dy * dy < min_sq;
    });
}

Placement place_object(std::span<const SceneObject> existing, ObjectClass cls, Size size, Rng& rng,
                       const SceneConfig& config) {
    if (existing.size() >= static_cast<std::size_t>(config.max_objects)) {
        throw Error(Errc::InvalidArgument, "scene already holds max_objects objects");
    }
    for (int attempt = 0; attempt < config.max_placement_attempts; ++attempt) {
        const Point2 candidate{rng.uniform(kShelfMargin, 1.0 - kShelfMargin),
                               rng.uniform(kShelfMargin, 1.0 - kShelfMargin)};
        if (placement_accepted(existing, candidate, config)) {
            return Placement{candidate, footprint_radius(cls, size), project_bbox(cls, size, candidate)};
        }
    }
    throw Error(Errc::PlacementExhausted,
                "could not place object after " + std::to_string(config.max_placement_attempts) +
                    " attempts");
}

Relationships compute_relationships(std::span<const SceneObject> objects) {
    const auto n = objects.size();
    Relationships rel;
    for (auto& m : rel.relations) m.assign(n, {});
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const auto pa = objects[a].position();
            const auto pb = objects[b].position();
            const int ib = static_cast<int>(b);
            if (pa.x < pb.x) rel.of(Direction::LeftOf)[a].push_back(ib);
            if (pa.x > pb.x) rel.of(Direction::RightOf)[a].push_back(ib);
            if (pa.y < pb.y) rel.of(Direction::InFrontOf)[a].push_back(ib);
            if (pa.y > pb.y) rel.of(Direction::Behind)[a].push_back(ib);
        }
    }
    return rel;
}

Scene generate_scene(std::uint64_t seed, const SceneConfig& config, std::int64_t scene_id) {
    config.validate();
    std::uint64_t attempt_seed = seed;
    for (int retry = 0; retry <= kSceneRetries; ++retry) {
        try {
            Scene s = try_generate(attempt_seed, config, scene_id);
            if (retry == 0) return s;
            // Keep the caller's seed on the record; the derived seed is reproducible from it.
            return Scene(scene_id, seed, {s.objects().begin(), s.objects().end()}, s.relationships());
        } catch (const Error& e) {
            if (e.code() != Errc::PlacementExhausted) throw;
            attempt_seed = derive_seed(seed, static_cast<std::uint64_t>(retry + 1));
        }
    }
    throw Error(Errc::PlacementExhausted,
                "scene generation failed after " + std::to_string(kSceneRetries) + " retries");
}

std::string render_schematic(const Scene& scene) {
    std::string out;
    out.reserve(512 + scene.size() * 256);
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\" data-scene-id=\"";
    out += std::to_string(scene.scene_id());
    out += "\">\n";
    out += "<rect class=\"shelf\" x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#e8eef2\"/>\n";
    out += "<rect class=\"shelf-plate\" x=\"0\" y=\"192\" width=\"640\" height=\"264\" fill=\"#cfd8dc\"/>\n";

    // Back to front so nearer objects overlap the ones behind them.
    std::vector<std::size_t> order(scene.size());
    std::iota(order.begin(), order.end(), 0);
    const auto objs = scene.objects();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return objs[a].position().y > objs[b].position().y;
    });

    for (std::size_t idx : order) {
        const auto& o = objs[idx];
        const auto& g = geometry(o.object_class());
        const bool expired = o.freshness() == Freshness::Expired;
        const auto& b = o.bbox();
        const double x = b.x_min * kSvgWidth;
        const double y = b.y_min * kSvgHeight;
        const double w = (b.x_max - b.x_min) * kSvgWidth;
        const double h = (b.y_max - b.y_min) * kSvgHeight;

        out += "<g class=\"glyph ";
        out += to_token(o.object_class());
        out += ' ';
        out += to_token(o.size());
        out += expired ? " expired" : " fresh";
        out += "\" data-id=\"";
        out += std::to_string(o.id());
        out += "\">";
        const std::string fill = expired ? darken(g.fill) : std::string(g.fill);
        if (g.round) {
            out += "<ellipse cx=\"";
            append_number(out, x + w / 2);
            out += "\" cy=\"";
            append_number(out, y + h / 2);
            out += "\" rx=\"";
            append_number(out, w / 2);
            out += "\" ry=\"";
            append_number(out, h / 2);
        } else {
            out += "<rect x=\"";
            append_number(out, x);
            out += "\" y=\"";
            append_number(out, y);
            out += "\" width=\"";
            append_number(out, w);
            out += "\" height=\"";
            append_number(out, h);
            out += "\" rx=\"3";
        }
        out += "\" fill=\"" + fill + "\" stroke=\"#333\" stroke-width=\"";
        out += expired ? "2" : "1";
        out += "\"/><text x=\"";
        append_number(out, x + w / 2);
        out += "\" y=\"";
        append_number(out, y + h + 11);
        out += "\" font-size=\"10\" text-anchor=\"middle\">";
        out += to_token(o.object_class());
        out += "</text></g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace fridgr
