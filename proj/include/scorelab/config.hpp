#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scorelab {

// Sectioned key = value text:
//
//   # comment
//   [section]
//   key = value
//
// Keys before the first header belong to section "". Sections and keys keep
// their file order; a repeated key overwrites the earlier value.
class Config {
public:
    using Entries = std::vector<std::pair<std::string, std::string>>;

    static Config parse(std::istream& in);
    static Config parse_string(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;
    std::optional<std::string> find(const std::string& section, const std::string& key) const;

    // Typed getters throw InvalidArgument naming section.key on a bad value.
    std::string get(const std::string& section, const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& section, const std::string& key, std::size_t fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    // Comma-separated list, e.g. "10, 32, 32, 10".
    std::vector<std::size_t> get_sizes(const std::string& section, const std::string& key,
                                       std::vector<std::size_t> fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const;

    void set(const std::string& section, const std::string& key, const std::string& value);
    void erase_section(const std::string& section);

    const std::vector<std::pair<std::string, Entries>>& sections() const { return sections_; }
    std::string str() const;
    friend bool operator==(const Config&, const Config&) = default;

private:
    std::vector<std::pair<std::string, Entries>> sections_;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace scorelab
