#pragma once

// Completion execution: durable JSONL response cache, bounded exponential
// backoff on transient transport failures, per-provider rate limiting, and
// a bounded worker pool. Refusals are data and are never retried.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "silicon/decision_grid.hpp"
#include "silicon/digest.hpp"
#include "silicon/prompt_builder.hpp"

namespace silicon::gateway {

struct TransportError : std::runtime_error {
    explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

struct ProviderError : std::runtime_error {
    explicit ProviderError(const std::string& what) : std::runtime_error(what) {}
};

struct CredentialMissing : std::runtime_error {
    explicit CredentialMissing(const std::string& provider_id)
        : std::runtime_error("no credential in environment for provider '" +
                             provider_id + "' (SILICON_PROVIDER_" + provider_id +
                             "_KEY)") {}
};

enum class Status { ok, refusal, transport_error, provider_error };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::ok: return "ok";
        case Status::refusal: return "refusal";
        case Status::transport_error: return "transport_error";
        default: return "provider_error";
    }
}

inline Status status_from_string(const std::string& s) {
    if (s == "ok") return Status::ok;
    if (s == "refusal") return Status::refusal;
    if (s == "transport_error") return Status::transport_error;
    if (s == "provider_error") return Status::provider_error;
    throw std::invalid_argument("unknown status: " + s);
}

struct CompletionRequest {
    std::string config_id;
    std::string participant_id;
    grid::ModelSpec model;
    grid::SamplingSetting sampling{0.0};
    prompt::PromptUnit prompt;
    std::string template_version;

    std::string cache_key() const {
        return digest::sha256_hex(config_id + "\x1f" + participant_id + "\x1f" +
                                  prompt.unit_id + "\x1f" + template_version +
                                  "\x1f" + prompt.system_text + "\x1f" +
                                  prompt.user_text);
    }
};

struct CompletionResult {
    Status status = Status::transport_error;
    std::string raw_text;
    long long latency_ms = 0;
    int attempt_count = 1;
    long long timestamp_ms = 0;
};

// Providers return ok/refusal/provider_error results and throw
// TransportError for retryable failures.
class Provider {
  public:
    virtual ~Provider() = default;
    virtual CompletionResult complete_once(const CompletionRequest& request) = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_delay{1000};
    double backoff_factor = 4.0;  // 1s, 4s, 16s
    double jitter_fraction = 0.1;
    std::uint64_t jitter_seed = 0;

    std::chrono::milliseconds delay_for_attempt(int attempt,
                                                std::mt19937_64& rng) const {
        double delay = static_cast<double>(base_delay.count());
        for (int i = 1; i < attempt; ++i) delay *= backoff_factor;
        const double jitter =
            1.0 + jitter_fraction * (static_cast<double>(rng() % 2001) / 1000.0 - 1.0);
        return std::chrono::milliseconds(static_cast<long long>(delay * jitter));
    }
};

// Append-only JSONL response log with an in-memory index keyed by
// cache_key. Results are immutable once written; concurrent readers are
// fine, writes are serialized.
class ResponseCache {
  public:
    ResponseCache() = default;

    explicit ResponseCache(std::string path) : path_(std::move(path)) {
        const auto parent = std::filesystem::path(path_).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        load();
    }

    std::optional<CompletionResult> lookup(const std::string& cache_key) const {
        std::lock_guard lock(mutex_);
        auto it = index_.find(cache_key);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    void store(const CompletionRequest& request, const CompletionResult& result) {
        nlohmann::json line;
        line["cache_key"] = request.cache_key();
        line["config_id"] = request.config_id;
        line["participant_id"] = request.participant_id;
        line["unit_id"] = request.prompt.unit_id;
        line["template_version"] = request.template_version;
        line["provider_id"] = request.model.provider_id;
        line["model_id"] = request.model.model_id;
        line["setting"] = grid::setting_token(request.sampling);
        line["status"] = to_string(result.status);
        line["raw_text"] = result.raw_text;
        line["latency_ms"] = result.latency_ms;
        line["attempt_count"] = result.attempt_count;
        line["timestamp_ms"] = result.timestamp_ms;
        std::lock_guard lock(mutex_);
        if (index_.count(request.cache_key())) return;  // first write wins
        index_[request.cache_key()] = result;
        if (!path_.empty()) {
            std::ofstream out(path_, std::ios::app);
            out << line.dump() << "\n";
        }
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return index_.size();
    }

  private:
    void load() {
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line);
            CompletionResult result;
            result.status = status_from_string(j.at("status").get<std::string>());
            result.raw_text = j.at("raw_text").get<std::string>();
            result.latency_ms = j.at("latency_ms").get<long long>();
            result.attempt_count = j.at("attempt_count").get<int>();
            result.timestamp_ms = j.at("timestamp_ms").get<long long>();
            index_[j.at("cache_key").get<std::string>()] = result;
        }
    }

    std::string path_;
    mutable std::mutex mutex_;
    std::map<std::string, CompletionResult> index_;
};

// Enforces a requests-per-minute ceiling per provider by spacing request
// starts at least 60/rpm seconds apart.
class RateLimiter {
  public:
    explicit RateLimiter(double requests_per_minute = 0.0)
        : min_interval_(requests_per_minute > 0.0
                            ? std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::duration<double>(60.0 / requests_per_minute))
                            : std::chrono::milliseconds{0}) {}

    void acquire() {
        if (min_interval_.count() == 0) return;
        std::unique_lock lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        const auto earliest = last_ + min_interval_;
        if (now < earliest) {
            lock.unlock();
            std::this_thread::sleep_for(earliest - now);
            lock.lock();
        }
        last_ = std::max(std::chrono::steady_clock::now(),
                         last_ + min_interval_);
    }

  private:
    std::chrono::milliseconds min_interval_;
    std::mutex mutex_;
    std::chrono::steady_clock::time_point last_{};
};

class Gateway {
  public:
    Gateway(std::shared_ptr<Provider> provider, std::shared_ptr<ResponseCache> cache,
            RetryPolicy retry = {}, double requests_per_minute = 0.0)
        : provider_(std::move(provider)),
          cache_(std::move(cache)),
          retry_(retry),
          limiter_(requests_per_minute),
          jitter_rng_(retry.jitter_seed) {}

    // Cache hit short-circuits without touching the provider; miss runs
    // the call with retries and persists the outcome append-only.
    CompletionResult complete(const CompletionRequest& request) {
        if (auto hit = cache_->lookup(request.cache_key())) return *hit;

        CompletionResult result;
        for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
            limiter_.acquire();
            const auto start = std::chrono::steady_clock::now();
            try {
                result = provider_->complete_once(request);
                result.attempt_count = attempt;
                result.latency_ms =
                    std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
                result.timestamp_ms = now_ms();
                cache_->store(request, result);
                return result;
            } catch (const TransportError& err) {
                result = CompletionResult{Status::transport_error, "", 0, attempt,
                                          now_ms()};
                if (attempt < retry_.max_attempts) {
                    std::chrono::milliseconds delay{};
                    {
                        std::lock_guard lock(rng_mutex_);
                        delay = retry_.delay_for_attempt(attempt, jitter_rng_);
                    }
                    std::this_thread::sleep_for(delay);
                }
            } catch (const ProviderError& err) {
                result = CompletionResult{Status::provider_error, "", 0, attempt,
                                          now_ms()};
                break;
            }
        }
        cache_->store(request, result);
        return result;
    }

    // Bounded-parallel execution preserving input order in the output.
    std::vector<CompletionResult> complete_all(
        const std::vector<CompletionRequest>& requests, int workers = 4) {
        std::vector<CompletionResult> results(requests.size());
        if (workers < 1) workers = 1;
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= requests.size()) return;
                results[i] = complete(requests[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
        return results;
    }

  private:
    static long long now_ms() {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }

    std::shared_ptr<Provider> provider_;
    std::shared_ptr<ResponseCache> cache_;
    RetryPolicy retry_;
    RateLimiter limiter_;
    std::mutex rng_mutex_;
    std::mt19937_64 jitter_rng_;
};

inline std::string credential_env_var(const std::string& provider_id) {
    std::string name = "SILICON_PROVIDER_";
    for (char c : provider_id) name += static_cast<char>(std::toupper(c));
    name += "_KEY";
    return name;
}

}  // namespace silicon::gateway
