#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rdlab/errors.hpp"

namespace rdlab::cli {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

const Table* Config::find(const std::string& kind, const std::string& id) const {
    for (const auto& t : tables)
        if (t.kind == kind && t.id == id) return &t;
    return nullptr;
}

std::vector<const Table*> Config::all(const std::string& kind) const {
    std::vector<const Table*> out;
    for (const auto& t : tables)
        if (t.kind == kind) out.push_back(&t);
    return out;
}

Config parse_config(std::string_view text, const std::string& path) {
    static const std::set<std::string> kinds{"term", "operator", "scenario", "run"};
    Config cfg;
    cfg.path = path;
    cfg.text = std::string(text);
    std::istringstream in(cfg.text);
    std::string raw;
    int lineno = 0;
    Table* cur = nullptr;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(path, lineno, "unterminated table header");
            std::string name = trim(line.substr(1, line.size() - 2));
            std::string kind = name, id;
            auto dot = name.find('.');
            if (dot != std::string::npos) {
                kind = name.substr(0, dot);
                id = name.substr(dot + 1);
            }
            if (!kinds.count(kind)) fail(path, lineno, "unknown table kind '" + kind + "'");
            if (kind != "run" && !valid_name(id)) fail(path, lineno, "table '" + name + "' needs an id");
            if (cfg.find(kind, id)) fail(path, lineno, "duplicate table '" + name + "'");
            cfg.tables.push_back({kind, id, {}, lineno});
            cur = &cfg.tables.back();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(path, lineno, "expected key = value");
        if (!cur) fail(path, lineno, "key outside of a table");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!valid_name(key)) fail(path, lineno, "bad key '" + key + "'");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        else if (!value.empty() && (value.front() == '"' || value.back() == '"'))
            fail(path, lineno, "unbalanced quotes");
        if (cur->values.count(key)) fail(path, lineno, "duplicate key '" + key + "'");
        cur->values[key] = value;
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

double parse_number(const std::string& text, const std::string& where) {
    std::string t = trim(text);
    if (t == "inf" || t == "+inf") return INFINITY;
    if (t == "-inf") return -INFINITY;
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || std::isnan(v))
        throw ConfigError(where + ": '" + text + "' is not a number");
    return v;
}

double get_number(const Block& b, const std::string& key, double fallback) {
    auto it = b.find(key);
    return it == b.end() ? fallback : parse_number(it->second, key);
}

int get_int(const Block& b, const std::string& key, int fallback) {
    auto it = b.find(key);
    if (it == b.end()) return fallback;
    double v = parse_number(it->second, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": '" + it->second + "' is not an integer");
    return static_cast<int>(v);
}

std::string get_string(const Block& b, const std::string& key, const std::string& fallback) {
    auto it = b.find(key);
    return it == b.end() ? fallback : it->second;
}

bool get_bool(const Block& b, const std::string& key, bool fallback) {
    auto it = b.find(key);
    if (it == b.end()) return fallback;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + it->second + "'");
}

std::vector<std::string> get_string_list(const Block& b, const std::string& key,
                                         const std::vector<std::string>& fallback) {
    auto it = b.find(key);
    if (it == b.end()) return fallback;
    std::string s = trim(it->second);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw ConfigError(key + ": unterminated list");
        s = s.substr(1, s.size() - 2);
    }
    std::vector<std::string> out;
    std::string item;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(item));
            item.clear();
        } else {
            item += c;
        }
    }
    if (!trim(item).empty()) out.push_back(trim(item));
    for (auto& e : out)
        if (e.size() >= 2 && e.front() == '"' && e.back() == '"') e = e.substr(1, e.size() - 2);
    return out;
}

std::vector<double> get_list(const Block& b, const std::string& key, const std::vector<double>& fallback) {
    if (!b.count(key)) return fallback;
    std::vector<double> out;
    for (const auto& s : get_string_list(b, key, {})) out.push_back(parse_number(s, key));
    return out;
}

}  // namespace rdlab::cli
