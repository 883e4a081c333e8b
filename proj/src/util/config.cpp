#include "util/config.hpp"

#include <fstream>
#include <sstream>

#include "util/strings.hpp"

namespace util {

config config::parse(std::string_view text) {
    config out;
    int line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw config_error("config line " + std::to_string(line_no) +
                               ": expected `key = value`");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            throw config_error("config line " + std::to_string(line_no) + ": empty key");
        }
        out.values_[key] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

config config::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw config_error("cannot open config file: " + file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string config::get(const std::string& key, std::string fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double config::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    const auto v = parse_double(it->second);
    if (!v) {
        throw config_error("config key " + key + ": not a number: " + it->second);
    }
    return *v;
}

std::int64_t config::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    const auto v = parse_int(it->second);
    if (!v) {
        throw config_error("config key " + key + ": not an integer: " + it->second);
    }
    return *v;
}

void config::set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

}  // namespace util
