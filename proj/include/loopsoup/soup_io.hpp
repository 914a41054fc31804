// Soup serialization: a line-oriented text format and a compact
// little-endian binary format.  Both round-trip loops bit for bit.

#pragma once

#include <iosfwd>
#include <string>

#include "loopsoup/soup.hpp"

namespace loopsoup {

void write_soup_text(std::ostream& os, const LoopSoup& soup);
LoopSoup read_soup_text(std::istream& is);

void write_soup_binary(std::ostream& os, const LoopSoup& soup);
LoopSoup read_soup_binary(std::istream& is);

void save_soup(const std::string& path, const LoopSoup& soup, bool binary);
LoopSoup load_soup(const std::string& path);

}  // namespace loopsoup
