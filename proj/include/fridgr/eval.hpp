#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fridgr/dataset.hpp"
#include "fridgr/parser.hpp"

namespace fridgr {

/// Answers a question about a scene. Throwing fridgr::Error means "no answer"; the item is
/// scored as incorrect.
using Answerer = std::function<Answer(const std::string& question, const Scene& scene)>;

/// normalize -> parse(mode) -> evaluate.
Answerer parser_answerer(GrammarMode mode, const Lexicon& lexicon = Lexicon::builtin());

struct SliceScore {
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy() const noexcept { return total ? double(correct) / double(total) : 0.0; }
};

struct ErrorSample {
    std::string question;
    std::string expected;
    std::string got;  // answer text, or the error name and message
};

struct EvalReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t refused = 0;  // answerer raised an error
    std::map<std::string, std::size_t> refusals_by_kind;
    /// "existence", "count", "size", "freshness", "category", "class", "subject",
    /// "short", "long"; only slices with at least one item appear.
    std::map<std::string, SliceScore> slices;
    std::vector<ErrorSample> error_samples;

    double accuracy() const noexcept { return total ? double(correct) / double(total) : 0.0; }
    nlohmann::json to_json() const;
    std::string to_table() const;
};

inline constexpr std::size_t kMaxErrorSamples = 20;

/// Scores every record by exact answer match. Throws Error(MissingScene) when a record
/// references a scene that is not present.
EvalReport evaluate_answerer(const Answerer& answerer, const std::vector<GeneratedQA>& questions,
                             const std::map<std::int64_t, Scene>& scenes);

/// File-based entry point; throws Error(Schema) / Error(MissingScene) / Error(Io).
EvalReport evaluate_answerer(const Answerer& answerer, const std::filesystem::path& questions_file,
                             const std::filesystem::path& scenes_file);

struct ShiftExperimentConfig {
    std::uint64_t master_seed = 0;
    std::int64_t scenes_per_set = 100;
    std::size_t qa_per_scene = 30;
};

/// 2x2 accuracy table: {ORIGINAL, EXTENDED} grammar x {"original", "modified"} test set.
struct ShiftReport {
    ShiftExperimentConfig config;
    std::uint64_t original_set_seed = 0;
    std::uint64_t modified_set_seed = 0;
    /// cells.at(grammar).at(profile)
    std::map<std::string, std::map<std::string, EvalReport>> cells;
    double modified_short_fraction = 0.0;

    double accuracy(GrammarMode grammar, std::string_view profile) const;
    nlohmann::json to_json() const;
    std::string to_table() const;
};

ShiftReport distribution_shift_experiment(const ShiftExperimentConfig& config,
                                          const TemplateSet& templates = TemplateSet::builtin(),
                                          const Lexicon& lexicon = Lexicon::builtin());

}  // namespace fridgr
