#include "planner/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "bt/xml.hpp"
#include "planner/template_plan.hpp"
#include "util/strings.hpp"

namespace planner {

// --- http ---------------------------------------------------------------------

http_backend::http_backend(std::string endpoint, std::string model, std::string token_env,
                           double temperature)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      token_env_(std::move(token_env)),
      temperature_(temperature) {
    if (endpoint_.empty()) {
        throw backend_config_error("http backend needs an endpoint URL");
    }
}

completion http_backend::complete(const prompt_bundle&,
                                  std::span<const chat_message> conversation) {
    const std::size_t scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos) {
        throw backend_config_error("endpoint must include a scheme: " + endpoint_);
    }
    const std::size_t path_start = endpoint_.find('/', scheme_end + 3);
    const std::string base =
        path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

    const char* token = std::getenv(token_env_.c_str());
    if (token == nullptr || *token == '\0') {
        throw backend_config_error("environment variable " + token_env_ + " holds no API token");
    }

    nlohmann::json body;
    body["model"] = model_;
    body["temperature"] = temperature_;
    body["messages"] = nlohmann::json::array();
    for (const chat_message& msg : conversation) {
        body["messages"].push_back({{"role", msg.role}, {"content", msg.content}});
    }

    httplib::Client client(base);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    httplib::Headers headers = {{"Authorization", std::string("Bearer ") + token}};

    const auto started = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(path, headers, body.dump(), "application/json");
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);

    if (!res) {
        throw transport_error("request to " + endpoint_ + " failed: " +
                              httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw transport_error("endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
        const nlohmann::json reply = nlohmann::json::parse(res->body);
        return {reply.at("choices").at(0).at("message").at("content").get<std::string>(),
                elapsed.count()};
    } catch (const nlohmann::json::exception& e) {
        throw transport_error(std::string("malformed completion response: ") + e.what());
    }
}

// --- replay -------------------------------------------------------------------

replay_backend::replay_backend(const std::filesystem::path& fixture_dir) {
    if (!std::filesystem::is_directory(fixture_dir)) {
        throw backend_config_error("replay fixture directory not found: " + fixture_dir.string());
    }
    std::vector<std::pair<long, std::filesystem::path>> numbered;
    for (const auto& entry : std::filesystem::directory_iterator(fixture_dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const auto num = util::parse_int(entry.path().stem().string());
        if (!num) {
            throw backend_config_error("replay fixture name is not a number: " +
                                       entry.path().filename().string());
        }
        numbered.emplace_back(*num, entry.path());
    }
    if (numbered.empty()) {
        throw backend_config_error("replay fixture directory is empty: " + fixture_dir.string());
    }
    std::sort(numbered.begin(), numbered.end());
    for (const auto& [num, path] : numbered) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        responses_.push_back(buf.str());
    }
}

replay_backend::replay_backend(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

completion replay_backend::complete(const prompt_bundle&, std::span<const chat_message>) {
    if (next_ >= responses_.size()) {
        throw backend_config_error("replay fixtures exhausted after " +
                                   std::to_string(responses_.size()) + " responses");
    }
    return {responses_[next_++], 0.0};
}

// --- template -----------------------------------------------------------------

completion template_backend::complete(const prompt_bundle& bundle,
                                      std::span<const chat_message>) {
    try {
        return {bt::serialize(template_plan(bundle.instruction, lib_)), 0.0};
    } catch (const no_template_error& e) {
        return {std::string("I cannot plan this task: ") + e.what(), 0.0};
    }
}

}  // namespace planner
