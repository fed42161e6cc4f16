#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fridgr/language.hpp"
#include "fridgr/scene_generator.hpp"

namespace fridgr {

using SteadyTime = std::chrono::steady_clock::time_point;

/// The scene bound to one batch, standing in for a camera capture.
struct SceneSnapshot {
    std::uint64_t version = 0;
    std::shared_ptr<const Scene> scene;
};

class SceneSource {
public:
    virtual ~SceneSource() = default;
    /// Called once per batch.
    virtual SceneSnapshot capture() = 0;
};

/// Always the same scene, version 1.
class FixedSceneSource final : public SceneSource {
public:
    explicit FixedSceneSource(Scene scene);
    SceneSnapshot capture() override;

private:
    SceneSnapshot snapshot_;
};

/// A new seeded scene every `period` of wall time (demo mode).
class RotatingSceneSource final : public SceneSource {
public:
    RotatingSceneSource(std::uint64_t seed, std::chrono::milliseconds period, SceneConfig config = {});
    SceneSnapshot capture() override;

private:
    std::uint64_t seed_;
    std::chrono::milliseconds period_;
    SceneConfig config_;
    SteadyTime started_;
    std::mutex mutex_;
    SceneSnapshot current_;
};

/// A freshly generated scene on every capture.
class LiveSceneSource final : public SceneSource {
public:
    explicit LiveSceneSource(std::uint64_t seed, SceneConfig config = {});
    SceneSnapshot capture() override;

private:
    std::uint64_t seed_;
    SceneConfig config_;
    std::mutex mutex_;
    std::uint64_t captures_ = 0;
};

struct AskRequest {
    std::string session_id;
    std::string text;
    SteadyTime received_at = std::chrono::steady_clock::now();
};

struct Timing {
    double queue_ms = 0.0;
    double parse_ms = 0.0;
    double evaluate_ms = 0.0;
    double total_ms = 0.0;
};

struct AskResponse {
    std::uint64_t request_id = 0;
    std::string session_id;
    std::string answer_text;
    std::optional<std::string> program_text;  // absent when the question was not understood
    std::uint64_t scene_version = 0;
    std::string snapshot_link;
    Timing timing;
    std::uint64_t batch_index = 0;
    std::size_t batch_size = 0;
};

enum class ReactionKind : std::uint8_t { Like, Dislike, Emoji };

struct Reaction {
    ReactionKind kind = ReactionKind::Like;
    std::string emoji_code;  // set for Emoji only

    /// "like", "dislike" or "emoji" plus a non-empty code. Throws Error(InvalidArgument).
    static Reaction parse(std::string_view kind, std::string_view code = {});
    std::string_view kind_token() const noexcept;
};

struct FeedbackRecord {
    std::uint64_t request_id = 0;
    Reaction reaction;
    std::chrono::system_clock::time_point timestamp = std::chrono::system_clock::now();
};

struct ServiceConfig {
    std::size_t queue_bound = 1024;
    std::size_t max_batch = 32;
    /// After the first item arrives the executor waits up to this long for more items.
    std::chrono::microseconds batch_window{2000};
    std::size_t snapshot_retention = 64;
    std::filesystem::path feedback_log;  // empty: feedback is counted but not persisted
};

struct ServiceStats {
    std::uint64_t submitted = 0;
    std::uint64_t answered = 0;
    std::uint64_t batches = 0;
    std::uint64_t feedback = 0;
    double mean_batch_size = 0.0;
    std::size_t max_batch_size = 0;
    double processing_p50_ms = 0.0;  // parse + evaluate per item
    double processing_p99_ms = 0.0;
    double processing_max_ms = 0.0;
};

inline constexpr const char* kApologyText =
    "Sorry, I did not understand that question. You can check the fridge snapshot yourself: ";

/// Queued, batched question answering over a scene source.
///
/// Many threads may call submit/ask/record_feedback concurrently. One executor thread
/// (start()) or one caller at a time (drain_batch) consumes the queue.
class QaService {
public:
    QaService(ServiceConfig config, std::unique_ptr<SceneSource> scenes,
              const Lexicon& lexicon = Lexicon::builtin());
    ~QaService();

    QaService(const QaService&) = delete;
    QaService& operator=(const QaService&) = delete;

    /// Enqueues and returns the request id. Throws Error(QueueFull) when the queue holds
    /// queue_bound items, Error(InvalidArgument) for an empty session id.
    std::uint64_t submit(AskRequest request);

    /// Dequeues up to max_batch items, captures one snapshot for all of them and answers
    /// each. Returns an empty list when the queue is empty.
    std::vector<AskResponse> drain_batch(std::size_t max_batch);

    /// Starts / stops the background executor. stop() answers nothing further and wakes
    /// every waiter with Error(ServiceStopped).
    void start();
    void stop();

    /// submit + wait for the executor's answer.
    AskResponse ask(AskRequest request);

    void record_feedback(const FeedbackRecord& record);

    std::optional<std::string> snapshot_svg(std::uint64_t version) const;
    ServiceStats stats() const;
    const ServiceConfig& config() const noexcept { return config_; }

private:
    struct QueuedItem {
        std::uint64_t request_id;
        AskRequest request;
        bool awaited;
    };

    std::uint64_t enqueue(AskRequest request, bool awaited);
    AskResponse answer_one(const QueuedItem& item, const SceneSnapshot& snap, SteadyTime dequeued);
    void executor_loop();
    void remember_snapshot(const SceneSnapshot& snap);

    ServiceConfig config_;
    std::unique_ptr<SceneSource> scenes_;
    const Lexicon& lexicon_;

    mutable std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::deque<QueuedItem> queue_;
    std::uint64_t next_id_ = 1;
    std::uint64_t submitted_ = 0;
    bool stopping_ = false;

    mutable std::mutex registry_mutex_;
    std::condition_variable registry_cv_;
    std::unordered_map<std::uint64_t, AskResponse> ready_;
    std::unordered_set<std::uint64_t> answered_;
    std::vector<std::size_t> batch_sizes_;
    std::vector<double> processing_ms_;
    bool registry_closed_ = false;

    mutable std::mutex snapshot_mutex_;
    std::map<std::uint64_t, std::string> snapshots_;

    mutable std::mutex feedback_mutex_;
    std::ofstream feedback_out_;
    std::uint64_t feedback_count_ = 0;

    std::mutex drain_mutex_;
    std::thread executor_;
};

/// HTTP front end (POST /ask, GET /snapshot/{v}, POST /feedback, GET /healthz, GET /stats).
class HttpFrontend {
public:
    /// `threads` bounds the number of connections served at once.
    explicit HttpFrontend(QaService& service, std::size_t threads = 64);
    ~HttpFrontend();

    HttpFrontend(const HttpFrontend&) = delete;
    HttpFrontend& operator=(const HttpFrontend&) = delete;

    /// Binds the socket; port 0 picks a free port. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called. Requires a successful bind().
    bool serve();
    /// Blocks until serve() is accepting connections.
    void wait_until_ready() const;
    void stop();
    /// Serves files from a directory under "/" (e.g. a built chat client).
    bool mount_static(const std::filesystem::path& dir);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fridgr
