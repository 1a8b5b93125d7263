#include "cosym/config.hpp"

#include <sstream>
#include <stdexcept>

namespace cosym {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::string normalized = value;
    for (char& c : normalized)
        if (c == ',') c = ' ';
    std::istringstream in(normalized);
    std::vector<std::string> items;
    std::string item;
    while (in >> item) items.push_back(item);
    return items;
}

[[noreturn]] void missing(const std::string& key) {
    throw std::invalid_argument("config is missing required key: " + key);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("malformed config line (expected key = value): " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("empty key in config line: " + line);
        cfg.entries_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string KeyValueConfig::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) missing(key);
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (!trim(raw.substr(used)).empty()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' is not a number: " + raw);
    }
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int KeyValueConfig::get_int(const std::string& key) const {
    const double v = get_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw std::invalid_argument("config key '" + key + "' is not an integer");
    return i;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split_list(get_string(key))) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "' has non-numeric entry: " + item);
        }
    }
    return out;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key,
                                                std::vector<double> fallback) const {
    return has(key) ? get_doubles(key) : fallback;
}

std::vector<std::int64_t> KeyValueConfig::get_ints(const std::string& key) const {
    std::vector<std::int64_t> out;
    for (double v : get_doubles(key)) {
        const auto i = static_cast<std::int64_t>(v);
        if (static_cast<double>(i) != v)
            throw std::invalid_argument("config key '" + key + "' has non-integer entry");
        out.push_back(i);
    }
    return out;
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key) const {
    return split_list(get_string(key));
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key,
                                                     std::vector<std::string> fallback) const {
    return has(key) ? get_strings(key) : fallback;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

}  // namespace cosym
