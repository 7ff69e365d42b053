#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rdlab::cli {

using Block = std::map<std::string, std::string>;

/// One [kind.id] table of the config file, in file order.
struct Table {
    std::string kind;  // term | operator | scenario | run
    std::string id;
    Block values;
    int line = 0;
};

struct Config {
    std::string path;
    std::string text;
    std::vector<Table> tables;

    const Table* find(const std::string& kind, const std::string& id) const;
    std::vector<const Table*> all(const std::string& kind) const;
};

/// TOML-like text: [kind.id] headers, key = value lines, '#' comments, optional double quotes.
/// Throws ConfigError with the line number on anything malformed.
Config parse_config(std::string_view text, const std::string& path = "<string>");
Config load_config(const std::string& path);

double get_number(const Block& b, const std::string& key, double fallback);
int get_int(const Block& b, const std::string& key, int fallback);
std::string get_string(const Block& b, const std::string& key, const std::string& fallback);
bool get_bool(const Block& b, const std::string& key, bool fallback);
/// "[1, 2, 3]" or "1, 2, 3"
std::vector<double> get_list(const Block& b, const std::string& key, const std::vector<double>& fallback);
std::vector<std::string> get_string_list(const Block& b, const std::string& key,
                                         const std::vector<std::string>& fallback);

double parse_number(const std::string& text, const std::string& where);

}  // namespace rdlab::cli
