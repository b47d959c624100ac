// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/io/kvconfig.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beamsema::io {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

KvConfig KvConfig::parse_string(const std::string& text) {
    KvConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string current;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config: unterminated section header at line " +
                                            std::to_string(line_no));
            current = trim(t.substr(1, t.size() - 2));
            cfg.sections_.push_back({current, {}});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(line_no));
        if (cfg.sections_.empty()) cfg.sections_.push_back({"", {}});
        cfg.sections_.back().entries.push_back({trim(t.substr(0, eq)), trim(t.substr(eq + 1))});
    }
    return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

const std::string* KvConfig::find(const std::string& section, const std::string& key) const {
    for (const auto& sec : sections_)
        if (sec.name == section)
            for (const auto& e : sec.entries)
                if (e.key == key) return &e.value;
    return nullptr;
}

bool KvConfig::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string KvConfig::get(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) throw std::invalid_argument("config: missing [" + section + "] " + key);
    return *v;
}

std::string KvConfig::get_or(const std::string& section, const std::string& key,
                             const std::string& fallback) const {
    const std::string* v = find(section, key);
    return v ? *v : fallback;
}

double KvConfig::get_double(const std::string& section, const std::string& key) const {
    const std::string raw = get(section, key);
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (trim(raw.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config: [" + section + "] " + key + " is not a number: " + raw);
}

double KvConfig::get_double_or(const std::string& section, const std::string& key,
                               double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t KvConfig::get_int(const std::string& section, const std::string& key) const {
    const std::string raw = get(section, key);
    try {
        std::size_t used = 0;
        const long long v = std::stoll(raw, &used);
        if (trim(raw.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config: [" + section + "] " + key + " is not an integer: " + raw);
}

std::int64_t KvConfig::get_int_or(const std::string& section, const std::string& key,
                                  std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<std::string> KvConfig::get_list(const std::string& section, const std::string& key) const {
    const std::string raw = get(section, key);
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::vector<int> KvConfig::get_int_list(const std::string& section, const std::string& key) const {
    std::vector<int> out;
    for (const auto& s : get_list(section, key)) {
        try {
            out.push_back(std::stoi(s));
        } catch (const std::exception&) {
            throw std::invalid_argument("config: [" + section + "] " + key +
                                        " has a non-integer item: " + s);
        }
    }
    return out;
}

void KvConfig::set(const std::string& section, const std::string& key, const std::string& value) {
    for (auto& sec : sections_)
        if (sec.name == section) {
            for (auto& e : sec.entries)
                if (e.key == key) {
                    e.value = value;
                    return;
                }
            sec.entries.push_back({key, value});
            return;
        }
    sections_.push_back({section, {{key, value}}});
}

std::vector<std::string> KvConfig::sections() const {
    std::vector<std::string> out;
    for (const auto& s : sections_) out.push_back(s.name);
    return out;
}

std::vector<std::string> KvConfig::keys(const std::string& section) const {
    std::vector<std::string> out;
    for (const auto& s : sections_)
        if (s.name == section)
            for (const auto& e : s.entries) out.push_back(e.key);
    return out;
}

std::string KvConfig::serialize() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& sec : sections_) {
        if (!first) out << "\n";
        first = false;
        if (!sec.name.empty()) out << "[" << sec.name << "]\n";
        for (const auto& e : sec.entries) out << e.key << " = " << e.value << "\n";
    }
    return out.str();
}

void KvConfig::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << serialize();
    if (!out) throw std::runtime_error("config: write failed: " + path);
}

}  // namespace beamsema::io
