#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace util {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Line-oriented `key = value` configuration. '#' starts a comment, blank lines
// are ignored, later keys override earlier ones.
class config {
  public:
    static config parse(std::string_view text);
    static config load(const std::filesystem::path& file);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, std::string fallback = {}) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;

    void set(std::string key, std::string value);
    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace util
