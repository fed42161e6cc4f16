#include <httplib.h>

#include <nlohmann/json.hpp>

#include "fridgr/error.hpp"
#include "fridgr/service.hpp"

namespace fridgr {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view message) {
    send_json(res, status, {{"error", message}});
}

json response_json(const AskResponse& r) {
    json j = {
        {"request_id", r.request_id},
        {"session_id", r.session_id},
        {"answer_text", r.answer_text},
        {"scene_version", r.scene_version},
        {"snapshot_link", r.snapshot_link},
        {"batch_size", r.batch_size},
        {"timing",
         {{"queue_ms", r.timing.queue_ms},
          {"parse_ms", r.timing.parse_ms},
          {"evaluate_ms", r.timing.evaluate_ms},
          {"total_ms", r.timing.total_ms}}},
    };
    if (r.program_text) j["program_text"] = *r.program_text;
    return j;
}

int status_for(Errc code) {
    switch (code) {
        case Errc::QueueFull: return 429;
        case Errc::ServiceStopped: return 503;
        case Errc::UnknownRequestId: return 404;
        case Errc::InvalidArgument: return 400;
        default: return 500;
    }
}

}  // namespace

struct HttpFrontend::Impl {
    QaService& service;
    httplib::Server server;
    bool bound = false;

    Impl(QaService& s, std::size_t threads) : service(s) {
        server.new_task_queue = [threads] { return new httplib::ThreadPool(std::max<std::size_t>(threads, 1)); };
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
        server.set_keep_alive_max_count(1000);
        routes();
    }

    void routes() {
        server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });

        server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"status", "ok"}});
        });

        server.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
            const auto s = service.stats();
            send_json(res, 200,
                      {{"submitted", s.submitted},
                       {"answered", s.answered},
                       {"batches", s.batches},
                       {"feedback", s.feedback},
                       {"mean_batch_size", s.mean_batch_size},
                       {"max_batch_size", s.max_batch_size},
                       {"processing_p50_ms", s.processing_p50_ms},
                       {"processing_p99_ms", s.processing_p99_ms},
                       {"processing_max_ms", s.processing_max_ms}});
        });

        server.Post("/ask", [this](const httplib::Request& req, httplib::Response& res) {
            const auto received = std::chrono::steady_clock::now();
            const json body = json::parse(req.body, nullptr, false);
            if (!body.is_object() || !body.contains("text") || !body["text"].is_string() ||
                !body.contains("session_id") || !body["session_id"].is_string()) {
                return send_error(res, 400, "expected {\"session_id\": string, \"text\": string}");
            }
            try {
                AskRequest request{body["session_id"].get<std::string>(), body["text"].get<std::string>(), received};
                send_json(res, 200, response_json(service.ask(std::move(request))));
            } catch (const Error& e) {
                send_error(res, status_for(e.code()), e.what());
            }
        });

        server.Get(R"(/snapshot/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
            std::uint64_t version = 0;
            try {
                version = std::stoull(req.matches[1].str());
            } catch (const std::exception&) {
                return send_error(res, 404, "no such snapshot");
            }
            auto svg = service.snapshot_svg(version);
            if (!svg) return send_error(res, 404, "no such snapshot");
            res.set_content(*svg, "image/svg+xml");
        });

        server.Post("/feedback", [this](const httplib::Request& req, httplib::Response& res) {
            const json body = json::parse(req.body, nullptr, false);
            if (!body.is_object() || !body.contains("request_id") || !body["request_id"].is_number_unsigned() ||
                !body.contains("reaction") || !body["reaction"].is_string()) {
                return send_error(res, 400, "expected {\"request_id\": int, \"reaction\": string, \"code\"?: string}");
            }
            try {
                std::string code;
                if (body.contains("code") && body["code"].is_string()) code = body["code"].get<std::string>();
                FeedbackRecord record;
                record.request_id = body["request_id"].get<std::uint64_t>();
                record.reaction = Reaction::parse(body["reaction"].get<std::string>(), code);
                service.record_feedback(record);
                res.status = 204;
            } catch (const Error& e) {
                send_error(res, status_for(e.code()), e.what());
            }
        });
    }
};

HttpFrontend::HttpFrontend(QaService& service, std::size_t threads)
    : impl_(std::make_unique<Impl>(service, threads)) {}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
    if (port == 0) {
        const int p = impl_->server.bind_to_any_port(host);
        impl_->bound = p > 0;
        return impl_->bound ? p : -1;
    }
    impl_->bound = impl_->server.bind_to_port(host, port);
    return impl_->bound ? port : -1;
}

bool HttpFrontend::serve() {
    if (!impl_->bound) return false;
    return impl_->server.listen_after_bind();
}

void HttpFrontend::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpFrontend::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpFrontend::mount_static(const std::filesystem::path& dir) {
    return impl_->server.set_mount_point("/", dir.string());
}

}  // namespace fridgr
