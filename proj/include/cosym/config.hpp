#pragma once

// Key-value text config: one `key = value` per line, `#` starts a comment.
// Values may be scalars or whitespace/comma separated lists.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cosym {

class KeyValueConfig {
  public:
    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig parse(const std::string& text);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
    std::vector<std::int64_t> get_ints(const std::string& key) const;
    std::vector<std::string> get_strings(const std::string& key) const;
    std::vector<std::string> get_strings(const std::string& key,
                                         std::vector<std::string> fallback) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

}  // namespace cosym
