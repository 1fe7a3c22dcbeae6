#pragma once

// Chat-completion provider over HTTPS. Sampling models send a temperature;
// reasoning models send a reasoning-effort field and omit temperature.

#include <cstdlib>
#include <map>
#include <string>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "silicon/provider_gateway.hpp"

namespace silicon::gateway {

struct ProviderEndpoint {
    std::string base_url;                      // e.g. https://api.openai.com
    std::string path = "/v1/chat/completions";
};

inline std::map<std::string, ProviderEndpoint> default_endpoints() {
    return {
        {"openai", {"https://api.openai.com"}},
        {"groq", {"https://api.groq.com", "/openai/v1/chat/completions"}},
    };
}

class HttpChatProvider : public Provider {
  public:
    explicit HttpChatProvider(std::map<std::string, ProviderEndpoint> endpoints =
                                  default_endpoints(),
                              int timeout_seconds = 120)
        : endpoints_(std::move(endpoints)), timeout_seconds_(timeout_seconds) {}

    CompletionResult complete_once(const CompletionRequest& request) override {
        const auto it = endpoints_.find(request.model.provider_id);
        if (it == endpoints_.end())
            throw ProviderError("no endpoint for provider: " + request.model.provider_id);
        const char* key = std::getenv(credential_env_var(request.model.provider_id).c_str());
        if (key == nullptr || *key == '\0')
            throw CredentialMissing(request.model.provider_id);

        nlohmann::json body;
        body["model"] = request.model.model_id;
        body["messages"] = nlohmann::json::array(
            {{{"role", "system"}, {"content", request.prompt.system_text}},
             {{"role", "user"}, {"content", request.prompt.user_text}}});
        if (const double* t = std::get_if<double>(&request.sampling))
            body["temperature"] = *t;
        else
            body["reasoning_effort"] =
                grid::to_string(std::get<grid::ReasoningEffort>(request.sampling));

        httplib::Client client(it->second.base_url);
        client.set_connection_timeout(timeout_seconds_);
        client.set_read_timeout(timeout_seconds_);
        httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
        auto res = client.Post(it->second.path, headers, body.dump(), "application/json");
        if (!res)
            throw TransportError("connection failed: " +
                                 httplib::to_string(res.error()));
        if (res->status == 429 || res->status >= 500)
            throw TransportError("retryable HTTP status " + std::to_string(res->status));
        if (res->status != 200)
            throw ProviderError("HTTP status " + std::to_string(res->status) + ": " +
                                res->body);

        CompletionResult result;
        try {
            const auto j = nlohmann::json::parse(res->body);
            result.raw_text =
                j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(std::string("malformed provider response: ") + e.what());
        }
        result.status = result.raw_text.empty() ? Status::provider_error : Status::ok;
        return result;
    }

  private:
    std::map<std::string, ProviderEndpoint> endpoints_;
    int timeout_seconds_;
};

}  // namespace silicon::gateway
