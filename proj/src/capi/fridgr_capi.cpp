#include "fridgr/fridgr.h"

#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <mutex>
#include <new>
#include <string>
#include <thread>

#include "fridgr/dataset.hpp"
#include "fridgr/error.hpp"
#include "fridgr/eval.hpp"
#include "fridgr/parser.hpp"
#include "fridgr/service.hpp"

struct fridgr_scene {
    fridgr::Scene scene;
};

struct fridgr_language {
    fridgr::TemplateSet templates;
    fridgr::Lexicon lexicon;
};

struct fridgr_service {
    std::shared_ptr<const fridgr_language> language;
    std::unique_ptr<fridgr::QaService> service;
    std::unique_ptr<fridgr::HttpFrontend> frontend;
    std::string static_dir;
    std::size_t http_threads = 64;
    std::thread http_thread;
    std::mutex mutex;
    std::condition_variable stopped_cv;
    bool started = false;
    bool stopped = false;
};

namespace {

thread_local std::string g_last_error;

fridgr_status fail(fridgr_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <typename F>
fridgr_status guarded(F&& body) {
    g_last_error.clear();
    try {
        body();
        return FRIDGR_OK;
    } catch (const fridgr::Error& e) {
        return fail(static_cast<fridgr_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return fail(FRIDGR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FRIDGR_INTERNAL, e.what());
    } catch (...) {
        return fail(FRIDGR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void* p, const char* what) {
    if (!p) throw fridgr::Error(fridgr::Errc::InvalidArgument, std::string(what) + " must not be NULL");
}

fridgr::GrammarMode grammar_of(fridgr_grammar g) {
    switch (g) {
        case FRIDGR_GRAMMAR_ORIGINAL: return fridgr::GrammarMode::Original;
        case FRIDGR_GRAMMAR_EXTENDED: return fridgr::GrammarMode::Extended;
    }
    throw fridgr::Error(fridgr::Errc::InvalidArgument, "unknown grammar mode");
}

void emit(char** json_out, char** table_out, const std::string& json, const std::string& table) {
    char* j = json_out ? dup_string(json) : nullptr;
    char* t = nullptr;
    try {
        t = table_out ? dup_string(table) : nullptr;
    } catch (...) {
        std::free(j);
        throw;
    }
    if (json_out) *json_out = j;
    if (table_out) *table_out = t;
}

}  // namespace

extern "C" {

const char* fridgr_version(void) { return "1.0.0"; }

const char* fridgr_status_name(fridgr_status status) {
    if (status == FRIDGR_OK) return "Ok";
    return fridgr::errc_name(static_cast<fridgr::Errc>(static_cast<int>(status)));
}

const char* fridgr_last_error(void) { return g_last_error.c_str(); }

void fridgr_string_free(char* s) { std::free(s); }

fridgr_status fridgr_scene_generate(uint64_t seed, int64_t scene_id, fridgr_scene** out) {
    return guarded([&] {
        require(out, "out");
        *out = new fridgr_scene{fridgr::generate_scene(seed, {}, scene_id)};
    });
}

fridgr_status fridgr_scene_from_json(const char* json, fridgr_scene** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        const auto parsed = nlohmann::json::parse(json, nullptr, false);
        if (parsed.is_discarded()) throw fridgr::Error(fridgr::Errc::Schema, "scene is not valid JSON");
        *out = new fridgr_scene{fridgr::scene_from_json(parsed)};
    });
}

fridgr_status fridgr_scene_to_json(const fridgr_scene* scene, char** out) {
    return guarded([&] {
        require(scene, "scene");
        require(out, "out");
        *out = dup_string(fridgr::scene_to_json(scene->scene).dump());
    });
}

fridgr_status fridgr_scene_render_svg(const fridgr_scene* scene, char** out) {
    return guarded([&] {
        require(scene, "scene");
        require(out, "out");
        *out = dup_string(fridgr::render_schematic(scene->scene));
    });
}

size_t fridgr_scene_object_count(const fridgr_scene* scene) { return scene ? scene->scene.objects().size() : 0; }

void fridgr_scene_free(fridgr_scene* scene) { delete scene; }

fridgr_status fridgr_language_default(fridgr_language** out) {
    return guarded([&] {
        require(out, "out");
        *out = new fridgr_language{fridgr::TemplateSet::builtin(), fridgr::Lexicon::builtin()};
    });
}

fridgr_status fridgr_language_load(const char* templates_path, const char* lexicon_path, fridgr_language** out) {
    return guarded([&] {
        require(out, "out");
        auto templates = templates_path ? fridgr::TemplateSet::parse(fridgr::read_text_file(templates_path))
                                        : fridgr::TemplateSet::builtin();
        auto lexicon = lexicon_path ? fridgr::Lexicon::parse(fridgr::read_text_file(lexicon_path))
                                    : fridgr::Lexicon::builtin();
        *out = new fridgr_language{std::move(templates), std::move(lexicon)};
    });
}

void fridgr_language_free(fridgr_language* language) { delete language; }

fridgr_status fridgr_parse(const fridgr_language* language, const char* question, fridgr_grammar grammar,
                           char** program_out) {
    return guarded([&] {
        require(language, "language");
        require(question, "question");
        require(program_out, "program_out");
        const auto program = fridgr::parse_question(question, grammar_of(grammar), language->lexicon);
        *program_out = dup_string(fridgr::to_program_text(program));
    });
}

fridgr_status fridgr_ask(const fridgr_language* language, const fridgr_scene* scene, const char* question,
                         fridgr_grammar grammar, char** answer_out) {
    return guarded([&] {
        require(language, "language");
        require(scene, "scene");
        require(question, "question");
        require(answer_out, "answer_out");
        const auto program = fridgr::parse_question(question, grammar_of(grammar), language->lexicon);
        *answer_out = dup_string(fridgr::answer_text(fridgr::evaluate(program, scene->scene)));
    });
}

void fridgr_dataset_options_init(fridgr_dataset_options* options) {
    if (!options) return;
    *options = fridgr_dataset_options{};
    options->profile = "original";
    options->scale = "desk";
    options->output_dir = ".";
}

fridgr_status fridgr_dataset_generate(const fridgr_language* language, const fridgr_dataset_options* options,
                                      char** manifest_json) {
    return guarded([&] {
        require(language, "language");
        require(options, "options");
        require(options->output_dir, "output_dir");
        fridgr::DatasetConfig config;
        config.master_seed = options->master_seed;
        config.profile_name = options->profile ? options->profile : "original";
        const std::string scale = options->scale ? options->scale : "desk";
        if (scale == "desk") {
            config.splits = fridgr::default_splits(fridgr::DatasetScale::Desk);
        } else if (scale == "paper") {
            config.splits = fridgr::default_splits(fridgr::DatasetScale::Paper);
        } else {
            throw fridgr::Error(fridgr::Errc::InvalidArgument, "scale must be desk or paper, got '" + scale + "'");
        }
        if (options->qa_per_scene) config.qa_per_scene = options->qa_per_scene;
        config.threads = options->threads;
        config.output_directory = options->output_dir;
        const auto manifest = fridgr::generate_dataset(config, language->templates, language->lexicon);
        if (manifest_json) *manifest_json = dup_string(manifest.to_json().dump(2));
    });
}

fridgr_status fridgr_corpus_stats(const char* questions_path, char** json_out, char** table_out) {
    return guarded([&] {
        require(questions_path, "questions_path");
        const auto stats = fridgr::corpus_stats(std::filesystem::path(questions_path));
        emit(json_out, table_out, stats.to_json().dump(2), stats.to_table());
    });
}

fridgr_status fridgr_eval(const fridgr_language* language, const char* questions_path, const char* scenes_path,
                          fridgr_grammar grammar, char** json_out, char** table_out) {
    return guarded([&] {
        require(language, "language");
        require(questions_path, "questions_path");
        require(scenes_path, "scenes_path");
        const auto answerer = fridgr::parser_answerer(grammar_of(grammar), language->lexicon);
        auto report = fridgr::evaluate_answerer(answerer, std::filesystem::path(questions_path),
                                                std::filesystem::path(scenes_path));
        auto j = report.to_json();
        j["grammar"] = fridgr::to_token(grammar_of(grammar));
        emit(json_out, table_out, j.dump(2), report.to_table());
    });
}

fridgr_status fridgr_shift_experiment(const fridgr_language* language, uint64_t master_seed, int64_t scenes_per_set,
                                      uint32_t qa_per_scene, char** json_out, char** table_out) {
    return guarded([&] {
        require(language, "language");
        fridgr::ShiftExperimentConfig config;
        config.master_seed = master_seed;
        if (scenes_per_set > 0) config.scenes_per_set = scenes_per_set;
        if (qa_per_scene > 0) config.qa_per_scene = qa_per_scene;
        const auto report = fridgr::distribution_shift_experiment(config, language->templates, language->lexicon);
        emit(json_out, table_out, report.to_json().dump(2), report.to_table());
    });
}

void fridgr_service_options_init(fridgr_service_options* options) {
    if (!options) return;
    const fridgr::ServiceConfig defaults;
    *options = fridgr_service_options{};
    options->queue_bound = defaults.queue_bound;
    options->max_batch = defaults.max_batch;
    options->batch_window_us = static_cast<uint32_t>(defaults.batch_window.count());
    options->snapshot_retention = defaults.snapshot_retention;
    options->scene_source = "rotating";
    options->rotate_period_ms = 10000;
    options->http_threads = 64;
}

fridgr_status fridgr_service_create(const fridgr_language* language, const fridgr_service_options* options,
                                    fridgr_service** out) {
    return guarded([&] {
        require(language, "language");
        require(options, "options");
        require(out, "out");
        fridgr::ServiceConfig config;
        config.queue_bound = options->queue_bound;
        config.max_batch = options->max_batch;
        config.batch_window = std::chrono::microseconds(options->batch_window_us);
        config.snapshot_retention = options->snapshot_retention;
        if (options->feedback_log) config.feedback_log = options->feedback_log;

        const std::string source = options->scene_source ? options->scene_source : "rotating";
        std::unique_ptr<fridgr::SceneSource> scenes;
        if (source == "fixed") {
            scenes = std::make_unique<fridgr::FixedSceneSource>(fridgr::generate_scene(options->scene_seed));
        } else if (source == "rotating") {
            scenes = std::make_unique<fridgr::RotatingSceneSource>(
                options->scene_seed, std::chrono::milliseconds(options->rotate_period_ms));
        } else if (source == "live") {
            scenes = std::make_unique<fridgr::LiveSceneSource>(options->scene_seed);
        } else {
            throw fridgr::Error(fridgr::Errc::InvalidArgument,
                                "scene source must be fixed, rotating or live, got '" + source + "'");
        }

        auto handle = std::make_unique<fridgr_service>();
        handle->language = std::make_shared<const fridgr_language>(*language);
        handle->service = std::make_unique<fridgr::QaService>(config, std::move(scenes), handle->language->lexicon);
        if (options->static_dir) handle->static_dir = options->static_dir;
        if (options->http_threads) handle->http_threads = options->http_threads;
        *out = handle.release();
    });
}

fridgr_status fridgr_service_start(fridgr_service* service, const char* host, int port, int* bound_port) {
    return guarded([&] {
        require(service, "service");
        std::lock_guard lock(service->mutex);
        if (service->started) throw fridgr::Error(fridgr::Errc::InvalidArgument, "service already started");
        service->frontend = std::make_unique<fridgr::HttpFrontend>(*service->service, service->http_threads);
        if (!service->static_dir.empty() && !service->frontend->mount_static(service->static_dir)) {
            throw fridgr::Error(fridgr::Errc::Io, "cannot serve static files from " + service->static_dir);
        }
        const int p = service->frontend->bind(host ? host : "127.0.0.1", port);
        if (p < 0) throw fridgr::Error(fridgr::Errc::Io, "cannot bind port " + std::to_string(port));
        service->service->start();
        service->http_thread = std::thread([frontend = service->frontend.get()] { frontend->serve(); });
        service->frontend->wait_until_ready();
        service->started = true;
        if (bound_port) *bound_port = p;
    });
}

fridgr_status fridgr_service_wait(fridgr_service* service) {
    return guarded([&] {
        require(service, "service");
        std::unique_lock lock(service->mutex);
        service->stopped_cv.wait(lock, [&] { return service->stopped || !service->started; });
    });
}

fridgr_status fridgr_service_stop(fridgr_service* service) {
    return guarded([&] {
        require(service, "service");
        std::thread http;
        {
            std::lock_guard lock(service->mutex);
            if (service->stopped) return;
            service->stopped = true;
            if (service->frontend) service->frontend->stop();
            http = std::move(service->http_thread);
        }
        if (http.joinable()) http.join();
        service->service->stop();
        service->stopped_cv.notify_all();
    });
}

fridgr_status fridgr_service_stats(const fridgr_service* service, char** json_out) {
    return guarded([&] {
        require(service, "service");
        require(json_out, "json_out");
        const auto s = service->service->stats();
        const nlohmann::json j = {
            {"submitted", s.submitted},
            {"answered", s.answered},
            {"batches", s.batches},
            {"feedback", s.feedback},
            {"mean_batch_size", s.mean_batch_size},
            {"max_batch_size", s.max_batch_size},
            {"processing_p50_ms", s.processing_p50_ms},
            {"processing_p99_ms", s.processing_p99_ms},
            {"processing_max_ms", s.processing_max_ms},
        };
        *json_out = dup_string(j.dump(2));
    });
}

void fridgr_service_free(fridgr_service* service) {
    if (!service) return;
    fridgr_service_stop(service);
    delete service;
}

}  // extern "C"
