// Command-line front end. Talks to the library only through fridgr.h.
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "fridgr/fridgr.h"

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

int report_failure(fridgr_status status) {
    std::fprintf(stderr, "error: %s: %s\n", fridgr_status_name(status), fridgr_last_error());
    return status == FRIDGR_IO ? 3 : 2;
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { fridgr_string_free(ptr); }
    char** out() { return &ptr; }
    const char* get() const { return ptr ? ptr : ""; }
};

struct Language {
    fridgr_language* ptr = nullptr;
    ~Language() { fridgr_language_free(ptr); }
};

bool write_file(const std::string& path, const char* body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body << '\n';
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
        return false;
    }
    return true;
}

fridgr_grammar grammar_from(const std::string& name) {
    return name == "extended" ? FRIDGR_GRAMMAR_EXTENDED : FRIDGR_GRAMMAR_ORIGINAL;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fridge scene question answering: data generation, evaluation and serving"};
    app.require_subcommand(1);

    std::string templates_path, lexicon_path;
    app.add_option("--templates", templates_path, "Template file (default: built-in)")->check(CLI::ExistingFile);
    app.add_option("--lexicon", lexicon_path, "Lexicon file (default: built-in)")->check(CLI::ExistingFile);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a dataset (scenes, questions, manifest)");
    std::uint64_t gen_seed = 0;
    std::string gen_profile = "original", gen_scale = "desk", gen_out;
    unsigned gen_threads = 0;
    std::uint32_t gen_qa = 0;
    gen->add_option("--seed", gen_seed, "Master seed")->required();
    gen->add_option("--profile", gen_profile)->check(CLI::IsMember({"original", "modified"}));
    gen->add_option("--scale", gen_scale)->check(CLI::IsMember({"desk", "paper"}));
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--threads", gen_threads, "Worker threads (0: all cores)");
    gen->add_option("--qa-per-scene", gen_qa, "Questions per scene (0: default)");

    // stats
    auto* stats = app.add_subcommand("stats", "Corpus statistics for a questions file");
    std::string stats_questions, stats_json;
    stats->add_option("--questions", stats_questions)->required()->check(CLI::ExistingFile);
    stats->add_option("--json", stats_json, "Also write the statistics as JSON");

    // eval
    auto* eval = app.add_subcommand("eval", "Score the rule-based parser on a question set");
    std::string eval_questions, eval_scenes, eval_grammar = "original", eval_report;
    eval->add_option("--questions", eval_questions)->required()->check(CLI::ExistingFile);
    eval->add_option("--scenes", eval_scenes)->required()->check(CLI::ExistingFile);
    eval->add_option("--grammar", eval_grammar)->check(CLI::IsMember({"original", "extended"}));
    eval->add_option("--report", eval_report, "JSON report path");

    // shift-experiment
    auto* shift = app.add_subcommand("shift-experiment", "ORIGINAL vs EXTENDED grammar on both test distributions");
    std::uint64_t shift_seed = 0;
    std::int64_t shift_scenes = 0;
    std::uint32_t shift_qa = 0;
    std::string shift_report;
    shift->add_option("--seed", shift_seed)->required();
    shift->add_option("--scenes", shift_scenes, "Scenes per test set (0: default)");
    shift->add_option("--qa-per-scene", shift_qa, "Questions per scene (0: default)");
    shift->add_option("--report", shift_report, "JSON report path");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP question answering service (port from FRIDGR_PORT)");
    fridgr_service_options sopts;
    fridgr_service_options_init(&sopts);
    std::string host = "127.0.0.1", scene_source = sopts.scene_source, feedback_log, static_dir;
    serve->add_option("--host", host);
    serve->add_option("--max-batch", sopts.max_batch, "Largest batch answered against one snapshot")
        ->check(CLI::PositiveNumber);
    serve->add_option("--queue-bound", sopts.queue_bound, "Pending requests before answering 429")
        ->check(CLI::PositiveNumber);
    serve->add_option("--batch-window-us", sopts.batch_window_us, "How long a batch waits to fill");
    serve->add_option("--scene-source", scene_source)->check(CLI::IsMember({"fixed", "rotating", "live"}));
    serve->add_option("--scene-seed", sopts.scene_seed);
    serve->add_option("--rotate-ms", sopts.rotate_period_ms, "Scene period for the rotating source")
        ->check(CLI::PositiveNumber);
    serve->add_option("--feedback-log", feedback_log, "Append-only feedback log (JSON lines)");
    serve->add_option("--static", static_dir, "Directory served under /")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    Language lang;
    fridgr_status st = (templates_path.empty() && lexicon_path.empty())
                           ? fridgr_language_default(&lang.ptr)
                           : fridgr_language_load(templates_path.empty() ? nullptr : templates_path.c_str(),
                                                  lexicon_path.empty() ? nullptr : lexicon_path.c_str(), &lang.ptr);
    if (st != FRIDGR_OK) return report_failure(st);

    if (*gen) {
        fridgr_dataset_options opts;
        fridgr_dataset_options_init(&opts);
        opts.master_seed = gen_seed;
        opts.profile = gen_profile.c_str();
        opts.scale = gen_scale.c_str();
        opts.output_dir = gen_out.c_str();
        opts.threads = gen_threads;
        opts.qa_per_scene = gen_qa;
        OwnedString manifest;
        st = fridgr_dataset_generate(lang.ptr, &opts, manifest.out());
        if (st != FRIDGR_OK) return report_failure(st);
        std::printf("%s\n", manifest.get());
        return 0;
    }

    if (*stats) {
        OwnedString json, table;
        st = fridgr_corpus_stats(stats_questions.c_str(), json.out(), table.out());
        if (st != FRIDGR_OK) return report_failure(st);
        std::fputs(table.get(), stdout);
        if (!stats_json.empty() && !write_file(stats_json, json.get())) return 3;
        return 0;
    }

    if (*eval) {
        OwnedString json, table;
        st = fridgr_eval(lang.ptr, eval_questions.c_str(), eval_scenes.c_str(), grammar_from(eval_grammar),
                         json.out(), table.out());
        if (st != FRIDGR_OK) return report_failure(st);
        std::printf("grammar %s\n%s", eval_grammar.c_str(), table.get());
        if (!eval_report.empty() && !write_file(eval_report, json.get())) return 3;
        return 0;
    }

    if (*shift) {
        OwnedString json, table;
        st = fridgr_shift_experiment(lang.ptr, shift_seed, shift_scenes, shift_qa, json.out(), table.out());
        if (st != FRIDGR_OK) return report_failure(st);
        std::fputs(table.get(), stdout);
        if (!shift_report.empty() && !write_file(shift_report, json.get())) return 3;
        return 0;
    }

    // serve
    int port = 8080;
    if (const char* env = std::getenv("FRIDGR_PORT")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (!*env || *end || v < 0 || v > 65535) {
            std::fprintf(stderr, "error: FRIDGR_PORT must be a port number, got '%s'\n", env);
            return 2;
        }
        port = static_cast<int>(v);
    }
    sopts.scene_source = scene_source.c_str();
    sopts.feedback_log = feedback_log.empty() ? nullptr : feedback_log.c_str();
    sopts.static_dir = static_dir.empty() ? nullptr : static_dir.c_str();

    fridgr_service* service = nullptr;
    st = fridgr_service_create(lang.ptr, &sopts, &service);
    if (st != FRIDGR_OK) return report_failure(st);
    int bound = 0;
    st = fridgr_service_start(service, host.c_str(), port, &bound);
    if (st != FRIDGR_OK) {
        fridgr_service_free(service);
        return report_failure(st);
    }
    std::printf("listening on http://%s:%d\n", host.c_str(), bound);
    std::fflush(stdout);

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));

    OwnedString final_stats;
    fridgr_service_stop(service);
    if (fridgr_service_stats(service, final_stats.out()) == FRIDGR_OK) std::fprintf(stderr, "%s\n", final_stats.get());
    fridgr_service_free(service);
    return 0;
}
