#include "fridgr/dataset.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cmath>
#include <mutex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "fridgr/error.hpp"

namespace fridgr {

using nlohmann::json;

namespace {

template <typename T, typename F>
T decode_enum(const json& j, const char* key, F from_token) {
    const auto& s = j.at(key).get_ref<const std::string&>();
    auto v = from_token(s);
    if (!v) throw Error(Errc::Schema, std::string("bad value for '") + key + "': " + s);
    return *v;
}

std::string split_file_name(const std::string& split, const char* kind) { return split + "." + kind + ".json"; }

json config_echo(const DatasetConfig& c) {
    json splits = json::array();
    for (const auto& s : c.splits) splits.push_back({{"name", s.name}, {"scene_count", s.scene_count}});
    const auto& sc = c.scene_config;
    return {
        {"master_seed", c.master_seed},
        {"profile", c.profile_name},
        {"qa_per_scene", c.qa_per_scene},
        {"splits", splits},
        {"scene_config",
         {{"min_objects", sc.min_objects},
          {"max_objects", sc.max_objects},
          {"expired_probability", sc.expired_probability},
          {"large_probability", sc.large_probability},
          {"min_center_separation", sc.min_center_separation},
          {"max_placement_attempts", sc.max_placement_attempts}}},
    };
}

json parse_json_text(const std::string& text, const std::filesystem::path& path) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::Schema, path.string() + ": " + e.what());
    }
}

void check_header(const json& j, const char* kind, const std::filesystem::path& path) {
    if (!j.is_object() || !j.contains("schema_version") || !j.contains("kind")) {
        throw Error(Errc::Schema, path.string() + ": missing schema header");
    }
    if (j.at("schema_version").get<int>() != kDatasetSchemaVersion) {
        throw Error(Errc::Schema, path.string() + ": unsupported schema version");
    }
    if (j.at("kind").get<std::string>() != kind) {
        throw Error(Errc::Schema, path.string() + ": expected a " + std::string(kind) + " file");
    }
}

}  // namespace

// ---------------------------------------------------------------------------------------
// Records

json scene_to_json(const Scene& scene) {
    json objects = json::array();
    for (const auto& o : scene.objects()) {
        const auto& b = o.bbox();
        objects.push_back({
            {"id", o.id()},
            {"class", to_token(o.object_class())},
            {"category", to_token(o.category())},
            {"size", to_token(o.size())},
            {"freshness", to_token(o.freshness())},
            {"position", {o.position().x, o.position().y}},
            {"footprint_radius", o.footprint_radius()},
            {"bbox", {b.x_min, b.y_min, b.x_max, b.y_max}},
        });
    }
    json rel = json::object();
    for (auto d : kAllDirections) rel[std::string(to_token(d))] = scene.relationships().of(d);
    return {{"scene_id", scene.scene_id()}, {"seed", scene.seed()}, {"objects", objects}, {"relationships", rel}};
}

Scene scene_from_json(const json& j) {
    try {
        std::vector<SceneObject> objects;
        for (const auto& o : j.at("objects")) {
            const auto cls = decode_enum<ObjectClass>(o, "class", class_from_token);
            if (o.contains("category") &&
                o.at("category").get<std::string>() != to_token(category_of(cls))) {
                throw Error(Errc::Schema, "object category disagrees with its class");
            }
            const auto& pos = o.at("position");
            const auto& bb = o.at("bbox");
            if (pos.size() != 2 || bb.size() != 4) throw Error(Errc::Schema, "bad position or bbox arity");
            objects.emplace_back(o.at("id").get<int>(), cls, decode_enum<Size>(o, "size", size_from_token),
                                 decode_enum<Freshness>(o, "freshness", freshness_from_token),
                                 Point2{pos[0].get<double>(), pos[1].get<double>()},
                                 o.at("footprint_radius").get<double>(),
                                 BBox{bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(),
                                      bb[3].get<double>()});
        }
        Relationships rel;
        const auto& jr = j.at("relationships");
        for (auto d : kAllDirections) {
            rel.of(d) = jr.at(std::string(to_token(d))).get<std::vector<std::vector<int>>>();
        }
        return Scene(j.at("scene_id").get<std::int64_t>(), j.at("seed").get<std::uint64_t>(),
                     std::move(objects), std::move(rel));
    } catch (const json::exception& e) {
        throw Error(Errc::Schema, std::string("scene record: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::Schema) throw;
        throw Error(Errc::Schema, std::string("scene record: ") + e.what());
    }
}

json qa_to_json(const GeneratedQA& qa) {
    return {
        {"scene_id", qa.scene_id},
        {"question", qa.question_text},
        {"program", to_program_text(qa.program)},
        {"answer", answer_text(qa.answer)},
        {"template_id", qa.template_id},
        {"form_index", qa.form_index},
        {"form_length", to_token(qa.form_length)},
        {"mask", qa.mask.to_string()},
        {"profile", qa.profile_name},
    };
}

GeneratedQA qa_from_json(const json& j) {
    try {
        GeneratedQA qa;
        qa.scene_id = j.at("scene_id").get<std::int64_t>();
        qa.question_text = j.at("question").get<std::string>();
        try {
            qa.program = parse_program_text(j.at("program").get<std::string>());
        } catch (const Error& e) {
            throw Error(Errc::Schema, std::string("program: ") + e.what());
        }
        qa.answer = answer_from_text(j.at("answer").get<std::string>());
        qa.template_id = j.at("template_id").get<std::string>();
        qa.form_index = j.at("form_index").get<int>();
        qa.form_length = decode_enum<FormLength>(j, "form_length", form_length_from_token);
        auto mask = VariableMask::parse(j.at("mask").get<std::string>());
        if (!mask) throw Error(Errc::Schema, "bad mask");
        qa.mask = *mask;
        qa.profile_name = j.at("profile").get<std::string>();
        const bool is_count = qa.program.head == Head::Count;
        if (is_count != std::holds_alternative<Number>(qa.answer)) {
            throw Error(Errc::Schema, "answer type does not match program head");
        }
        return qa;
    } catch (const json::exception& e) {
        throw Error(Errc::Schema, std::string("question record: ") + e.what());
    }
}

// ---------------------------------------------------------------------------------------
// Generation

std::vector<SplitSpec> default_splits(DatasetScale scale) {
    if (scale == DatasetScale::Paper) return {{"train", 60000}, {"val", 10000}, {"test", 10000}};
    return {{"train", 600}, {"val", 100}, {"test", 100}};
}

void DatasetConfig::validate() const {
    if (splits.empty()) throw Error(Errc::InvalidConfig, "at least one split is required");
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (splits[i].scene_count <= 0) throw Error(Errc::InvalidConfig, "scene_count must be > 0");
        if (splits[i].name.empty()) throw Error(Errc::InvalidConfig, "split name must not be empty");
        for (std::size_t k = 0; k < i; ++k) {
            if (splits[k].name == splits[i].name) throw Error(Errc::InvalidConfig, "duplicate split name");
        }
    }
    if (qa_per_scene == 0) throw Error(Errc::InvalidConfig, "qa_per_scene must be > 0");
    DistributionProfile::by_name(profile_name);
    scene_config.validate();
}

std::uint64_t split_seed(std::uint64_t master_seed, std::string_view split_name) noexcept {
    return derive_seed(master_seed, std::string("split:") + std::string(split_name));
}

std::size_t SplitData::qa_count() const noexcept {
    std::size_t n = 0;
    for (const auto& q : questions) n += q.size();
    return n;
}

SplitData generate_split(const SplitSpec& spec, std::uint64_t seed, std::size_t qa_per_scene,
                         const TemplateSet& templates, const Lexicon& lexicon,
                         const DistributionProfile& profile, const SceneConfig& scene_config,
                         unsigned threads) {
    const auto n = static_cast<std::size_t>(spec.scene_count);
    SplitData data;
    data.name = spec.name;
    data.seed = seed;
    data.scenes.resize(n);
    data.questions.resize(n);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                const std::uint64_t scene_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
                Scene scene = generate_scene(scene_seed, scene_config, static_cast<std::int64_t>(i));
                Rng rng(derive_seed(scene_seed, "qa"));
                auto qas = generate_qa_set(scene, qa_per_scene, templates, lexicon, profile, rng);
                for (const auto& qa : qas) {
                    const auto reparsed = parse_program_text(to_program_text(qa.program));
                    if (reparsed != qa.program || evaluate(reparsed, scene) != qa.answer) {
                        throw Error(Errc::SoundnessViolation,
                                    "answer mismatch in scene " + std::to_string(i) + " for \"" +
                                        qa.question_text + "\"");
                    }
                }
                data.scenes[i] = std::move(scene);
                data.questions[i] = std::move(qas);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return data;
}

std::string scenes_file_text(const SplitData& split, const DatasetConfig& config) {
    std::string out = "{\"schema_version\":" + std::to_string(kDatasetSchemaVersion) +
                      ",\"kind\":\"scenes\",\"split\":" + json(split.name).dump() +
                      ",\"split_seed\":" + std::to_string(split.seed) +
                      ",\"profile\":" + json(config.profile_name).dump() + ",\"scenes\":[\n";
    for (std::size_t i = 0; i < split.scenes.size(); ++i) {
        json j = scene_to_json(split.scenes[i]);
        json qs = json::array();
        for (const auto& qa : split.questions[i]) qs.push_back(qa_to_json(qa));
        j["questions"] = std::move(qs);
        out += j.dump();
        out += i + 1 < split.scenes.size() ? ",\n" : "\n";
    }
    out += "]}\n";
    return out;
}

std::string questions_file_text(const SplitData& split, const DatasetConfig& config) {
    std::string out = "{\"schema_version\":" + std::to_string(kDatasetSchemaVersion) +
                      ",\"kind\":\"questions\",\"split\":" + json(split.name).dump() +
                      ",\"profile\":" + json(config.profile_name).dump() + ",\"questions\":[\n";
    const std::size_t total = split.qa_count();
    std::size_t written = 0;
    for (const auto& list : split.questions) {
        for (const auto& qa : list) {
            out += qa_to_json(qa).dump();
            out += ++written < total ? ",\n" : "\n";
        }
    }
    out += "]}\n";
    return out;
}

json DatasetManifest::to_json() const {
    json splits_json = json::array();
    for (const auto& s : splits) {
        splits_json.push_back({
            {"name", s.name},
            {"seed", s.seed},
            {"scene_count", s.scene_count},
            {"qa_count", s.qa_count},
            {"scenes_file", s.scenes_file},
            {"questions_file", s.questions_file},
            {"scenes_sha256", s.scenes_sha256},
            {"questions_sha256", s.questions_sha256},
        });
    }
    return {{"schema_version", schema_version}, {"config", config_echo(config)}, {"splits", splits_json}};
}

DatasetManifest generate_dataset(const DatasetConfig& config, const TemplateSet& templates,
                                 const Lexicon& lexicon) {
    config.validate();
    const auto profile = DistributionProfile::by_name(config.profile_name);
    std::error_code ec;
    std::filesystem::create_directories(config.output_directory, ec);
    if (ec) throw Error(Errc::Io, "cannot create " + config.output_directory.string() + ": " + ec.message());

    DatasetManifest manifest;
    manifest.config = config;
    for (const auto& spec : config.splits) {
        const auto seed = split_seed(config.master_seed, spec.name);
        const auto split = generate_split(spec, seed, config.qa_per_scene, templates, lexicon, profile,
                                          config.scene_config, config.threads);
        SplitManifest m;
        m.name = spec.name;
        m.seed = seed;
        m.scene_count = spec.scene_count;
        m.qa_count = split.qa_count();
        m.scenes_file = split_file_name(spec.name, "scenes");
        m.questions_file = split_file_name(spec.name, "questions");
        const auto scenes_text = scenes_file_text(split, config);
        const auto questions_text = questions_file_text(split, config);
        m.scenes_sha256 = sha256_hex(scenes_text);
        m.questions_sha256 = sha256_hex(questions_text);
        write_text_file(config.output_directory / m.scenes_file, scenes_text);
        write_text_file(config.output_directory / m.questions_file, questions_text);
        manifest.splits.push_back(std::move(m));
    }
    write_text_file(config.output_directory / "manifest.json", manifest.to_json().dump(2) + "\n");
    return manifest;
}

// ---------------------------------------------------------------------------------------
// Files

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::Internal, "SHA-256 failed");
    }
    std::string hex;
    hex.reserve(len * 2);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

void write_text_file(const std::filesystem::path& path, std::string_view body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<GeneratedQA> read_questions_file(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
    const auto j = parse_json_text(text, path);
    check_header(j, "questions", path);
    std::vector<GeneratedQA> out;
    try {
        for (const auto& r : j.at("questions")) out.push_back(qa_from_json(r));
    } catch (const json::exception& e) {
        throw Error(Errc::Schema, path.string() + ": " + e.what());
    }
    return out;
}

std::map<std::int64_t, Scene> read_scenes_file(const std::filesystem::path& path) {
    const auto j = parse_json_text(read_text_file(path), path);
    check_header(j, "scenes", path);
    std::map<std::int64_t, Scene> out;
    try {
        for (const auto& r : j.at("scenes")) {
            Scene s = scene_from_json(r);
            const auto id = s.scene_id();
            if (!out.emplace(id, std::move(s)).second) {
                throw Error(Errc::Schema, path.string() + ": duplicate scene id " + std::to_string(id));
            }
        }
    } catch (const json::exception& e) {
        throw Error(Errc::Schema, path.string() + ": " + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------------------------
// Statistics

CorpusStats corpus_stats(const std::vector<GeneratedQA>& records) {
    CorpusStats s;
    s.by_head["exist"] = 0;
    s.by_head["count"] = 0;
    for (int i = 0; i < static_cast<int>(kMaskPatterns); ++i) s.mask_histogram[VariableMask::from_index(i).to_string()] = 0;
    for (const auto& r : records) {
        ++s.total;
        ++s.by_head[r.program.head == Head::Count ? "count" : "exist"];
        ++s.by_template[r.template_id];
        (r.form_length == FormLength::Short ? s.short_forms : s.long_forms)++;
        ++s.mask_histogram[r.mask.to_string()];
        if (is_positive(r.answer)) ++s.positive;
    }
    return s;
}

CorpusStats corpus_stats(const std::filesystem::path& questions_file) {
    return corpus_stats(read_questions_file(questions_file));
}

std::map<std::string, double> CorpusStats::mask_distribution() const {
    std::map<std::string, double> out;
    for (int i = 0; i < static_cast<int>(kMaskPatterns); ++i) out[VariableMask::from_index(i).to_string()] = 0.0;
    if (total == 0) return out;
    for (const auto& [mask, count] : mask_histogram) out[mask] = double(count) / double(total);
    return out;
}

double mask_tv_distance(const CorpusStats& a, const CorpusStats& b) {
    const auto da = a.mask_distribution();
    const auto db = b.mask_distribution();
    double sum = 0.0;
    for (const auto& [mask, p] : da) sum += std::abs(p - db.at(mask));
    return sum / 2.0;
}

json CorpusStats::to_json() const {
    return {
        {"total", total},
        {"by_head", by_head},
        {"by_template", by_template},
        {"short_forms", short_forms},
        {"long_forms", long_forms},
        {"short_fraction", short_fraction()},
        {"mask_histogram", mask_histogram},
        {"positive", positive},
        {"positive_fraction", positive_fraction()},
    };
}

std::string CorpusStats::to_table() const {
    std::ostringstream out;
    char buf[128];
    out << "questions          " << total << "\n";
    for (const auto& [head, n] : by_head) {
        std::snprintf(buf, sizeof buf, "  %-16s %zu\n", head.c_str(), n);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "short forms        %zu (%.4f)\n", short_forms, short_fraction());
    out << buf;
    std::snprintf(buf, sizeof buf, "long forms         %zu\n", long_forms);
    out << buf;
    std::snprintf(buf, sizeof buf, "positive answers   %zu (%.4f)\n", positive, positive_fraction());
    out << buf;
    out << "mask histogram\n";
    for (const auto& [mask, n] : mask_histogram) {
        std::snprintf(buf, sizeof buf, "  %s  %zu\n", mask.c_str(), n);
        out << buf;
    }
    return out.str();
}

}  // namespace fridgr
