#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fridgr/question_generator.hpp"
#include "fridgr/scene_generator.hpp"

namespace fridgr {

inline constexpr int kDatasetSchemaVersion = 1;

// JSON encoding of the ground-truth and question records. Decoders throw Error(Schema).
nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);
nlohmann::json qa_to_json(const GeneratedQA& qa);
GeneratedQA qa_from_json(const nlohmann::json& j);

struct SplitSpec {
    std::string name;
    std::int64_t scene_count = 0;
};

enum class DatasetScale : std::uint8_t { Desk, Paper };

/// 600/100/100 scenes (desk) or 60,000/10,000/10,000 (paper).
std::vector<SplitSpec> default_splits(DatasetScale scale);

struct DatasetConfig {
    std::uint64_t master_seed = 0;
    std::vector<SplitSpec> splits = default_splits(DatasetScale::Desk);
    std::size_t qa_per_scene = 30;
    std::string profile_name = "original";
    std::filesystem::path output_directory;
    SceneConfig scene_config;
    /// Worker threads for generation; 0 picks the hardware concurrency. Output does not
    /// depend on it.
    unsigned threads = 0;

    void validate() const;
};

/// Seed of a split, derived from the master seed and the split name.
std::uint64_t split_seed(std::uint64_t master_seed, std::string_view split_name) noexcept;

struct SplitData {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<Scene> scenes;
    std::vector<std::vector<GeneratedQA>> questions;  // parallel to scenes

    std::size_t qa_count() const noexcept;
};

/// Generates one split in memory. Each (scene, question list) is a pure function of the
/// split seed and the scene index. Re-verifies every answer and throws
/// Error(SoundnessViolation) on a mismatch.
SplitData generate_split(const SplitSpec& spec, std::uint64_t seed, std::size_t qa_per_scene,
                         const TemplateSet& templates, const Lexicon& lexicon,
                         const DistributionProfile& profile, const SceneConfig& scene_config,
                         unsigned threads = 0);

struct SplitManifest {
    std::string name;
    std::uint64_t seed = 0;
    std::int64_t scene_count = 0;
    std::size_t qa_count = 0;
    std::string scenes_file;
    std::string questions_file;
    std::string scenes_sha256;
    std::string questions_sha256;
};

struct DatasetManifest {
    int schema_version = kDatasetSchemaVersion;
    DatasetConfig config;
    std::vector<SplitManifest> splits;

    nlohmann::json to_json() const;
};

/// Writes <split>.scenes.json, <split>.questions.json per split and manifest.json into
/// the output directory. Identical configs produce byte-identical files.
DatasetManifest generate_dataset(const DatasetConfig& config, const TemplateSet& templates = TemplateSet::builtin(),
                                 const Lexicon& lexicon = Lexicon::builtin());

/// Serialized file bodies (exactly what generate_dataset writes).
std::string scenes_file_text(const SplitData& split, const DatasetConfig& config);
std::string questions_file_text(const SplitData& split, const DatasetConfig& config);

std::string sha256_hex(std::string_view data);

/// Flat list of question records from a questions file. An empty (zero-byte) file yields no
/// records. Throws Error(Io) or Error(Schema).
std::vector<GeneratedQA> read_questions_file(const std::filesystem::path& path);
/// Scenes by id from a scenes file. Throws Error(Io) or Error(Schema).
std::map<std::int64_t, Scene> read_scenes_file(const std::filesystem::path& path);

struct CorpusStats {
    std::size_t total = 0;
    std::map<std::string, std::size_t> by_head;      // "exist", "count"
    std::map<std::string, std::size_t> by_template;
    std::size_t short_forms = 0;
    std::size_t long_forms = 0;
    std::map<std::string, std::size_t> mask_histogram;  // keyed by VariableMask::to_string()
    std::size_t positive = 0;

    double short_fraction() const noexcept { return total ? double(short_forms) / double(total) : 0.0; }
    double positive_fraction() const noexcept { return total ? double(positive) / double(total) : 0.0; }
    /// Relative frequency per mask pattern; all 16 patterns present.
    std::map<std::string, double> mask_distribution() const;

    nlohmann::json to_json() const;
    std::string to_table() const;
};

CorpusStats corpus_stats(const std::vector<GeneratedQA>& records);
CorpusStats corpus_stats(const std::filesystem::path& questions_file);

/// Total-variation distance between two mask distributions.
double mask_tv_distance(const CorpusStats& a, const CorpusStats& b);

void write_text_file(const std::filesystem::path& path, std::string_view body);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fridgr
