#pragma once

#include <filesystem>
#include <string>

#include "diagbound/network.hpp"

namespace diagbound {

// Network document:
//   {"mode": "noisy-or-leaky" | "tabular-nps",
//    "diseases": [{"name", "prior"}, ...],
//    "findings": [{"name", "leak", "links": [{"disease", "q"}, ...]}
//               | {"name", "parents": [...], "table": [...]}, ...]}
// Disease references are indices; a name string is accepted on input.
//
// Case document: {"positive": [finding names], "negative": [finding names]}

Network parse_network(const std::string& text);
std::string serialize_network(const Network& network);

Evidence parse_case(const Network& network, const std::string& text);
std::string serialize_case(const Network& network, const Evidence& evidence);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);

inline Network load_network(const std::filesystem::path& path) {
  return parse_network(read_text_file(path));
}
inline Evidence load_case(const Network& network,
                          const std::filesystem::path& path) {
  return parse_case(network, read_text_file(path));
}

}  // namespace diagbound
