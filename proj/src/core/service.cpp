#include "fridgr/service.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "fridgr/error.hpp"
#include "fridgr/parser.hpp"

namespace fridgr {

namespace {

double ms_between(SteadyTime a, SteadyTime b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    // Nearest-rank.
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

}  // namespace

// ---------------------------------------------------------------------------------------
// Scene sources

FixedSceneSource::FixedSceneSource(Scene scene)
    : snapshot_{1, std::make_shared<const Scene>(std::move(scene))} {}

SceneSnapshot FixedSceneSource::capture() { return snapshot_; }

RotatingSceneSource::RotatingSceneSource(std::uint64_t seed, std::chrono::milliseconds period, SceneConfig config)
    : seed_(seed), period_(period), config_(config), started_(std::chrono::steady_clock::now()) {
    if (period_.count() <= 0) throw Error(Errc::InvalidConfig, "rotation period must be positive");
    config_.validate();
}

SceneSnapshot RotatingSceneSource::capture() {
    const auto epoch = static_cast<std::uint64_t>((std::chrono::steady_clock::now() - started_) / period_);
    std::lock_guard lock(mutex_);
    if (!current_.scene || current_.version != epoch + 1) {
        auto scene = generate_scene(derive_seed(seed_, epoch), config_, static_cast<std::int64_t>(epoch));
        current_ = {epoch + 1, std::make_shared<const Scene>(std::move(scene))};
    }
    return current_;
}

LiveSceneSource::LiveSceneSource(std::uint64_t seed, SceneConfig config) : seed_(seed), config_(config) {
    config_.validate();
}

SceneSnapshot LiveSceneSource::capture() {
    std::lock_guard lock(mutex_);
    const auto version = ++captures_;
    auto scene = generate_scene(derive_seed(seed_, version), config_, static_cast<std::int64_t>(version));
    return {version, std::make_shared<const Scene>(std::move(scene))};
}

// ---------------------------------------------------------------------------------------
// Feedback

Reaction Reaction::parse(std::string_view kind, std::string_view code) {
    if (kind == "like") return {ReactionKind::Like, {}};
    if (kind == "dislike") return {ReactionKind::Dislike, {}};
    if (kind == "emoji") {
        if (code.empty()) throw Error(Errc::InvalidArgument, "emoji reaction needs a code");
        return {ReactionKind::Emoji, std::string(code)};
    }
    throw Error(Errc::InvalidArgument, "unknown reaction '" + std::string(kind) + "'");
}

std::string_view Reaction::kind_token() const noexcept {
    switch (kind) {
        case ReactionKind::Like: return "like";
        case ReactionKind::Dislike: return "dislike";
        case ReactionKind::Emoji: return "emoji";
    }
    return "like";
}

// ---------------------------------------------------------------------------------------
// Service

QaService::QaService(ServiceConfig config, std::unique_ptr<SceneSource> scenes, const Lexicon& lexicon)
    : config_(std::move(config)), scenes_(std::move(scenes)), lexicon_(lexicon) {
    if (!scenes_) throw Error(Errc::InvalidArgument, "service needs a scene source");
    if (config_.queue_bound == 0 || config_.max_batch == 0) {
        throw Error(Errc::InvalidConfig, "queue bound and max batch must be positive");
    }
    if (!config_.feedback_log.empty()) {
        feedback_out_.open(config_.feedback_log, std::ios::app | std::ios::binary);
        if (!feedback_out_) throw Error(Errc::Io, "cannot open feedback log " + config_.feedback_log.string());
    }
}

QaService::~QaService() { stop(); }

std::uint64_t QaService::enqueue(AskRequest request, bool awaited) {
    if (request.session_id.empty()) throw Error(Errc::InvalidArgument, "session_id must not be empty");
    std::uint64_t id;
    {
        std::lock_guard lock(queue_mutex_);
        if (stopping_) throw Error(Errc::ServiceStopped, "service is stopping");
        if (queue_.size() >= config_.queue_bound) throw Error(Errc::QueueFull, "request queue is full");
        id = next_id_++;
        ++submitted_;
        queue_.push_back(QueuedItem{id, std::move(request), awaited});
    }
    queue_cv_.notify_one();
    return id;
}

std::uint64_t QaService::submit(AskRequest request) { return enqueue(std::move(request), false); }

AskResponse QaService::answer_one(const QueuedItem& item, const SceneSnapshot& snap, SteadyTime dequeued) {
    AskResponse r;
    r.request_id = item.request_id;
    r.session_id = item.request.session_id;
    r.scene_version = snap.version;
    r.snapshot_link = "/snapshot/" + std::to_string(snap.version);
    r.timing.queue_ms = ms_between(item.request.received_at, dequeued);

    const auto parse_start = std::chrono::steady_clock::now();
    std::optional<QueryProgram> program;
    try {
        program = parse_question(item.request.text, GrammarMode::Extended, lexicon_);
    } catch (const ParseError&) {
    }
    const auto parse_end = std::chrono::steady_clock::now();
    r.timing.parse_ms = ms_between(parse_start, parse_end);

    if (program) {
        r.answer_text = answer_text(evaluate(*program, *snap.scene));
        r.program_text = to_program_text(*program);
    } else {
        r.answer_text = std::string(kApologyText) + r.snapshot_link;
    }
    const auto done = std::chrono::steady_clock::now();
    r.timing.evaluate_ms = program ? ms_between(parse_end, done) : 0.0;
    r.timing.total_ms = ms_between(item.request.received_at, done);
    return r;
}

void QaService::remember_snapshot(const SceneSnapshot& snap) {
    std::lock_guard lock(snapshot_mutex_);
    if (snapshots_.count(snap.version)) return;
    snapshots_.emplace(snap.version, render_schematic(*snap.scene));
    while (snapshots_.size() > std::max<std::size_t>(config_.snapshot_retention, 1)) {
        snapshots_.erase(snapshots_.begin());
    }
}

std::vector<AskResponse> QaService::drain_batch(std::size_t max_batch) {
    if (max_batch == 0) throw Error(Errc::InvalidArgument, "max_batch must be >= 1");
    std::lock_guard drain_lock(drain_mutex_);

    std::vector<QueuedItem> batch;
    {
        std::lock_guard lock(queue_mutex_);
        const auto n = std::min(max_batch, queue_.size());
        batch.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            batch.push_back(std::move(queue_.front()));
            queue_.pop_front();
        }
    }
    if (batch.empty()) return {};

    const auto dequeued = std::chrono::steady_clock::now();
    const SceneSnapshot snap = scenes_->capture();
    remember_snapshot(snap);

    std::vector<AskResponse> responses;
    responses.reserve(batch.size());
    for (const auto& item : batch) {
        responses.push_back(answer_one(item, snap, dequeued));
        responses.back().batch_size = batch.size();
    }

    {
        std::lock_guard lock(registry_mutex_);
        const auto batch_index = batch_sizes_.size();
        batch_sizes_.push_back(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            auto& r = responses[i];
            r.batch_index = batch_index;
            answered_.insert(r.request_id);
            processing_ms_.push_back(r.timing.parse_ms + r.timing.evaluate_ms);
            if (batch[i].awaited) ready_.emplace(r.request_id, r);
        }
    }
    registry_cv_.notify_all();
    return responses;
}

void QaService::executor_loop() {
    for (;;) {
        {
            std::unique_lock lock(queue_mutex_);
            queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_) return;
            if (queue_.size() < config_.max_batch && config_.batch_window.count() > 0) {
                queue_cv_.wait_for(lock, config_.batch_window,
                                   [&] { return stopping_ || queue_.size() >= config_.max_batch; });
                if (stopping_) return;
            }
        }
        drain_batch(config_.max_batch);
    }
}

void QaService::start() {
    std::lock_guard lock(queue_mutex_);
    if (executor_.joinable() || stopping_) return;
    executor_ = std::thread([this] { executor_loop(); });
}

void QaService::stop() {
    {
        std::lock_guard lock(queue_mutex_);
        stopping_ = true;
    }
    queue_cv_.notify_all();
    if (executor_.joinable()) executor_.join();
    {
        std::lock_guard lock(registry_mutex_);
        registry_closed_ = true;
    }
    registry_cv_.notify_all();
}

AskResponse QaService::ask(AskRequest request) {
    const auto id = enqueue(std::move(request), true);
    std::unique_lock lock(registry_mutex_);
    registry_cv_.wait(lock, [&] { return registry_closed_ || ready_.count(id) > 0; });
    auto it = ready_.find(id);
    if (it == ready_.end()) throw Error(Errc::ServiceStopped, "service stopped before answering");
    AskResponse r = std::move(it->second);
    ready_.erase(it);
    return r;
}

void QaService::record_feedback(const FeedbackRecord& record) {
    {
        std::lock_guard lock(registry_mutex_);
        if (!answered_.count(record.request_id)) {
            throw Error(Errc::UnknownRequestId, "no answered request with id " + std::to_string(record.request_id));
        }
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(record.timestamp.time_since_epoch()).count();
    nlohmann::json line = {
        {"request_id", record.request_id},
        {"reaction", record.reaction.kind_token()},
        {"timestamp_ms", ms},
    };
    if (record.reaction.kind == ReactionKind::Emoji) line["code"] = record.reaction.emoji_code;
    std::lock_guard lock(feedback_mutex_);
    if (feedback_out_.is_open()) {
        feedback_out_ << line.dump() << '\n';
        feedback_out_.flush();
        if (!feedback_out_) throw Error(Errc::Io, "feedback log write failed");
    }
    ++feedback_count_;
}

std::optional<std::string> QaService::snapshot_svg(std::uint64_t version) const {
    std::lock_guard lock(snapshot_mutex_);
    auto it = snapshots_.find(version);
    if (it == snapshots_.end()) return std::nullopt;
    return it->second;
}

ServiceStats QaService::stats() const {
    ServiceStats s;
    {
        std::lock_guard lock(queue_mutex_);
        s.submitted = submitted_;
    }
    std::vector<double> processing;
    {
        std::lock_guard lock(registry_mutex_);
        s.answered = answered_.size();
        s.batches = batch_sizes_.size();
        std::size_t items = 0;
        for (auto b : batch_sizes_) {
            items += b;
            s.max_batch_size = std::max(s.max_batch_size, b);
        }
        s.mean_batch_size = s.batches ? double(items) / double(s.batches) : 0.0;
        processing = processing_ms_;
    }
    {
        std::lock_guard lock(feedback_mutex_);
        s.feedback = feedback_count_;
    }
    s.processing_p50_ms = percentile(processing, 0.50);
    s.processing_p99_ms = percentile(processing, 0.99);
    s.processing_max_ms = processing.empty() ? 0.0 : *std::max_element(processing.begin(), processing.end());
    return s;
}

}  // namespace fridgr
