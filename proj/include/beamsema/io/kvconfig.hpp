// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_IO_KVCONFIG_HPP
#define BEAMSEMA_IO_KVCONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace beamsema::io {

// Sectioned key = value text config:
//
//   # comment
//   [section]
//   key = value
//   list_key = 1, 2, 3
//
// Section and key order are preserved on serialize so written configs are
// byte-stable.
class KvConfig {
  public:
    static KvConfig parse_string(const std::string& text);
    static KvConfig parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;

    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;

    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;

    std::vector<std::string> get_list(const std::string& section, const std::string& key) const;
    std::vector<int> get_int_list(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    std::vector<std::string> sections() const;
    std::vector<std::string> keys(const std::string& section) const;

    std::string serialize() const;
    void write_file(const std::string& path) const;

  private:
    struct Entry {
        std::string key;
        std::string value;
    };
    struct Section {
        std::string name;
        std::vector<Entry> entries;
    };
    std::vector<Section> sections_;

    const std::string* find(const std::string& section, const std::string& key) const;
};

std::string trim(const std::string& s);

}  // namespace beamsema::io

#endif
