#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "behavior/library.hpp"
#include "planner/prompt.hpp"

namespace planner {

// Backend could not be reached or answered garbage at the transport level.
// Retried once by the generate loop, then surfaced.
struct transport_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Backend is mis-set-up (missing token, exhausted fixtures). Not retried.
struct backend_config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct chat_message {
    std::string role;  // "user" | "assistant"
    std::string content;
};

struct completion {
    std::string text;
    double seconds = 0.0;  // 0 for deterministic backends, so reports stay byte-stable
};

class backend {
  public:
    virtual ~backend() = default;
    virtual completion complete(const prompt_bundle& bundle,
                                std::span<const chat_message> conversation) = 0;
    virtual std::string kind() const = 0;
};

// Chat-completion HTTP endpoint: POSTs {model, messages, temperature} and
// consumes choices[0].message.content. The auth token is read from the
// environment variable named by token_env, never from disk.
class http_backend final : public backend {
  public:
    http_backend(std::string endpoint, std::string model, std::string token_env,
                 double temperature = 0.0);

    completion complete(const prompt_bundle& bundle,
                        std::span<const chat_message> conversation) override;
    std::string kind() const override { return "http"; }

  private:
    std::string endpoint_;
    std::string model_;
    std::string token_env_;
    double temperature_;
};

// Scripted responses consumed in order; exhaustion is a configuration error.
class replay_backend final : public backend {
  public:
    explicit replay_backend(const std::filesystem::path& fixture_dir);
    explicit replay_backend(std::vector<std::string> responses);

    completion complete(const prompt_bundle& bundle,
                        std::span<const chat_message> conversation) override;
    std::string kind() const override { return "replay"; }

    std::size_t consumed() const { return next_; }

  private:
    std::vector<std::string> responses_;
    std::size_t next_ = 0;
};

// Wraps the rule-based template planner as a backend. When no template
// matches it answers in prose (no XML), which the caller's parse/repair loop
// then reports as a failed plan.
class template_backend final : public backend {
  public:
    explicit template_backend(const behavior::library& lib) : lib_(lib) {}

    completion complete(const prompt_bundle& bundle,
                        std::span<const chat_message> conversation) override;
    std::string kind() const override { return "template"; }

  private:
    const behavior::library& lib_;
};

}  // namespace planner
