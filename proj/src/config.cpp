#include "scorelab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "scorelab/errors.hpp"

namespace scorelab {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

template <class T>
T parse_number(const std::string& text, const std::string& section, const std::string& key) {
    T v{};
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw InvalidArgument("config " + where(section, key) + ": cannot parse '" + text + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    if (!out.empty() && out.back().empty() && text.back() == ',') out.pop_back();
    return out;
}

}  // namespace

Config Config::parse(std::istream& in) {
    Config cfg;
    std::string section;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t[0] == '[') {
            if (t.back() != ']') throw ParseError("unterminated section header", row, line.find('[') + 1);
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            if (section.empty()) throw ParseError("empty section name", row, 1);
            if (!cfg.has_section(section)) cfg.sections_.emplace_back(section, Entries{});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", row, 1);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ParseError("missing key before '='", row, eq + 1);
        cfg.set(section, key, trim(std::string_view(line).substr(eq + 1)));
    }
    return cfg;
}

Config Config::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file " + path);
    return parse(in);
}

bool Config::has_section(const std::string& section) const {
    for (const auto& [name, _] : sections_)
        if (name == section) return true;
    return false;
}

std::optional<std::string> Config::find(const std::string& section, const std::string& key) const {
    for (const auto& [name, entries] : sections_) {
        if (name != section) continue;
        for (const auto& [k, v] : entries)
            if (k == key) return v;
    }
    return std::nullopt;
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key).has_value(); }

std::string Config::get(const std::string& section, const std::string& key, const std::string& fallback) const {
    return find(section, key).value_or(fallback);
}

std::string Config::require(const std::string& section, const std::string& key) const {
    auto v = find(section, key);
    if (!v) throw InvalidArgument("config is missing " + where(section, key));
    return *v;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
    const auto v = find(section, key);
    return v ? parse_number<double>(*v, section, key) : fallback;
}

std::size_t Config::get_size(const std::string& section, const std::string& key, std::size_t fallback) const {
    const auto v = find(section, key);
    return v ? parse_number<std::size_t>(*v, section, key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const {
    const auto v = find(section, key);
    return v ? parse_number<std::uint64_t>(*v, section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const auto v = find(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw InvalidArgument("config " + where(section, key) + ": expected a boolean, got '" + *v + "'");
}

std::vector<std::size_t> Config::get_sizes(const std::string& section, const std::string& key,
                                           std::vector<std::size_t> fallback) const {
    const auto v = find(section, key);
    if (!v) return fallback;
    std::vector<std::size_t> out;
    for (const auto& item : split_list(*v)) out.push_back(parse_number<std::size_t>(item, section, key));
    return out;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const {
    const auto v = find(section, key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(*v)) out.push_back(parse_number<double>(item, section, key));
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    for (auto& [name, entries] : sections_) {
        if (name != section) continue;
        for (auto& [k, v] : entries)
            if (k == key) {
                v = value;
                return;
            }
        entries.emplace_back(key, value);
        return;
    }
    sections_.emplace_back(section, Entries{{key, value}});
}

void Config::erase_section(const std::string& section) {
    std::erase_if(sections_, [&](const auto& s) { return s.first == section; });
}

std::string Config::str() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, entries] : sections_) {
        if (!first) out << '\n';
        first = false;
        if (!name.empty()) out << '[' << name << "]\n";
        for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
    }
    return out.str();
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace scorelab
