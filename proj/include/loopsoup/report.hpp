// CSV and number formatting helpers for run artifacts.  Conversions print
// with 17 significant digits (exact double round trip), statistics with 6.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace loopsoup {

std::string fmt_conversion(double v);  // %.17g
std::string fmt_stat(double v);        // %.6g

// RFC-4180-style field quoting: fields containing comma, quote or newline
// are wrapped in double quotes with embedded quotes doubled.
std::string csv_escape(const std::string& field);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const;
    void save(const std::string& path) const;
};

// FNV-1a 64-bit, used to fingerprint manifests.
std::uint64_t fnv1a64(const std::string& data);
std::string hash_hex(std::uint64_t h);

}  // namespace loopsoup
