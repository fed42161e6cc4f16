#include "fridgr/eval.hpp"

#include <cstdio>
#include <sstream>

#include "fridgr/error.hpp"

namespace fridgr {

using nlohmann::json;

namespace {

void score(EvalReport& r, std::string_view slice, bool ok) {
    auto& s = r.slices[std::string(slice)];
    ++s.total;
    if (ok) ++s.correct;
}

std::map<std::int64_t, Scene> index_scenes(const std::vector<Scene>& scenes) {
    std::map<std::int64_t, Scene> out;
    for (const auto& s : scenes) out.emplace(s.scene_id(), s);
    return out;
}

std::vector<GeneratedQA> flatten(const SplitData& split) {
    std::vector<GeneratedQA> out;
    out.reserve(split.qa_count());
    for (const auto& list : split.questions) out.insert(out.end(), list.begin(), list.end());
    return out;
}

}  // namespace

Answerer parser_answerer(GrammarMode mode, const Lexicon& lexicon) {
    return [mode, &lexicon](const std::string& question, const Scene& scene) {
        return evaluate(parse_question(question, mode, lexicon), scene);
    };
}

EvalReport evaluate_answerer(const Answerer& answerer, const std::vector<GeneratedQA>& questions,
                             const std::map<std::int64_t, Scene>& scenes) {
    EvalReport r;
    for (const auto& qa : questions) {
        auto it = scenes.find(qa.scene_id);
        if (it == scenes.end()) {
            throw Error(Errc::MissingScene, "question references missing scene " + std::to_string(qa.scene_id));
        }
        std::string got;
        bool ok = false;
        try {
            const Answer a = answerer(qa.question_text, it->second);
            ok = a == qa.answer;
            got = answer_text(a);
        } catch (const Error& e) {
            ++r.refused;
            ++r.refusals_by_kind[errc_name(e.code())];
            got = std::string(errc_name(e.code())) + ": " + e.what();
        }
        ++r.total;
        if (ok) ++r.correct;

        const auto& f = qa.program.filters;
        score(r, qa.program.head == Head::Count ? "count" : "existence", ok);
        if (f.size()) score(r, "size", ok);
        if (f.freshness()) score(r, "freshness", ok);
        if (f.category()) score(r, "category", ok);
        if (f.object_class()) score(r, "class", ok);
        if (!f.category() && !f.object_class()) score(r, "subject", ok);
        score(r, to_token(qa.form_length), ok);

        if (!ok && r.error_samples.size() < kMaxErrorSamples) {
            r.error_samples.push_back({qa.question_text, answer_text(qa.answer), std::move(got)});
        }
    }
    return r;
}

EvalReport evaluate_answerer(const Answerer& answerer, const std::filesystem::path& questions_file,
                             const std::filesystem::path& scenes_file) {
    return evaluate_answerer(answerer, read_questions_file(questions_file), read_scenes_file(scenes_file));
}

json EvalReport::to_json() const {
    json slices_json = json::object();
    for (const auto& [name, s] : slices) {
        slices_json[name] = {{"total", s.total}, {"correct", s.correct}, {"accuracy", s.accuracy()}};
    }
    json samples = json::array();
    for (const auto& e : error_samples) {
        samples.push_back({{"question", e.question}, {"expected", e.expected}, {"got", e.got}});
    }
    return {
        {"total", total},         {"correct", correct},   {"accuracy", accuracy()},
        {"refused", refused},     {"refusals_by_kind", refusals_by_kind},
        {"slices", slices_json},  {"error_samples", samples},
    };
}

std::string EvalReport::to_table() const {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "accuracy  %.4f  (%zu / %zu, %zu refused)\n", accuracy(), correct, total, refused);
    out << buf;
    for (const auto& [name, s] : slices) {
        std::snprintf(buf, sizeof buf, "  %-10s %.4f  (%zu / %zu)\n", name.c_str(), s.accuracy(), s.correct, s.total);
        out << buf;
    }
    return out.str();
}

double ShiftReport::accuracy(GrammarMode grammar, std::string_view profile) const {
    return cells.at(std::string(to_token(grammar))).at(std::string(profile)).accuracy();
}

json ShiftReport::to_json() const {
    json cells_json = json::object();
    for (const auto& [grammar, row] : cells) {
        for (const auto& [profile, report] : row) cells_json[grammar][profile] = report.to_json();
    }
    return {
        {"master_seed", config.master_seed},
        {"scenes_per_set", config.scenes_per_set},
        {"qa_per_scene", config.qa_per_scene},
        {"original_set_seed", original_set_seed},
        {"modified_set_seed", modified_set_seed},
        {"modified_short_fraction", modified_short_fraction},
        {"accuracy",
         {{"original", {{"original", accuracy(GrammarMode::Original, "original")},
                        {"modified", accuracy(GrammarMode::Original, "modified")}}},
          {"extended", {{"original", accuracy(GrammarMode::Extended, "original")},
                        {"modified", accuracy(GrammarMode::Extended, "modified")}}}}},
        {"cells", cells_json},
    };
}

std::string ShiftReport::to_table() const {
    std::ostringstream out;
    char buf[160];
    out << "                      test set\n";
    out << "grammar        original    modified\n";
    for (auto mode : {GrammarMode::Original, GrammarMode::Extended}) {
        std::snprintf(buf, sizeof buf, "%-12s  %8.2f%%   %8.2f%%\n", std::string(to_token(mode)).c_str(),
                      100.0 * accuracy(mode, "original"), 100.0 * accuracy(mode, "modified"));
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "short forms in modified set: %.2f%%\n", 100.0 * modified_short_fraction);
    out << buf;
    return out.str();
}

ShiftReport distribution_shift_experiment(const ShiftExperimentConfig& config, const TemplateSet& templates,
                                          const Lexicon& lexicon) {
    if (config.scenes_per_set <= 0 || config.qa_per_scene == 0) {
        throw Error(Errc::InvalidConfig, "shift experiment needs scenes and questions");
    }
    ShiftReport report;
    report.config = config;
    report.original_set_seed = derive_seed(config.master_seed, "shift:original-test");
    report.modified_set_seed = derive_seed(config.master_seed, "shift:modified-test");

    const SplitSpec spec{"test", config.scenes_per_set};
    const SceneConfig scene_config;
    const auto original = generate_split(spec, report.original_set_seed, config.qa_per_scene, templates,
                                         lexicon, DistributionProfile::original(), scene_config);
    const auto modified = generate_split(spec, report.modified_set_seed, config.qa_per_scene, templates,
                                         lexicon, DistributionProfile::modified(), scene_config);

    const auto original_questions = flatten(original);
    const auto modified_questions = flatten(modified);
    const auto original_scenes = index_scenes(original.scenes);
    const auto modified_scenes = index_scenes(modified.scenes);
    report.modified_short_fraction = corpus_stats(modified_questions).short_fraction();

    for (auto mode : {GrammarMode::Original, GrammarMode::Extended}) {
        const auto answerer = parser_answerer(mode, lexicon);
        auto& row = report.cells[std::string(to_token(mode))];
        row["original"] = evaluate_answerer(answerer, original_questions, original_scenes);
        row["modified"] = evaluate_answerer(answerer, modified_questions, modified_scenes);
    }
    return report;
}

}  // namespace fridgr
