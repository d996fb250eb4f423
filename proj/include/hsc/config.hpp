#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace hsc {

inline constexpr const char* kVersion = "1.0.0";

// Flat key/value view of an INI-style experiment file: "[section]" headers,
// "key = value" lines, '#' or ';' comments.  Keys are stored as
// "section.key"; values keep their literal text.
class ExperimentConfig {
public:
    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_stream(std::istream& is);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    std::string get_string(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    long get_long(const std::string& key, long def) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
    // Missing key -> ConfigError.
    std::string require(const std::string& key) const;

    // Positive-value accessor for physical parameters.
    double require_positive(const std::string& key, double def) const;

    // FNV-1a over the sorted normalized "key=value" lines.
    std::uint64_t hash() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

} // namespace hsc
