#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace oscilab {

/// CSV table with shortest-round-trip float formatting, so identical doubles
/// always serialize to identical bytes.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& values);
    const std::string& body() const { return body_; }
    std::string str() const;
    void write(const std::filesystem::path& path) const;

    static std::string format_double(double v);

private:
    std::vector<std::string> columns_;
    std::string body_;
};

/// FNV-1a 64-bit over bytes, hex-encoded; used for config hashes and replay
/// comparisons.
std::uint64_t fnv1a(const std::string& bytes);
std::string fnv1a_hex(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);

}  // namespace oscilab
