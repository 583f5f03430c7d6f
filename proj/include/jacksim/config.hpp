#pragma once

#include <cstdint>
#include <string>

#include "jacksim/network.hpp"

namespace jacksim {

// JSON network description; schema documented in the README. Serialization is
// lossless: load(save(spec)) reproduces every field bit-for-bit.
NetworkSpec network_from_json(const std::string& text);
std::string network_to_json(const NetworkSpec& spec);

NetworkSpec load_network(const std::string& file);
void save_network(const NetworkSpec& spec, const std::string& file);

// FNV-1a over the canonical serialized form; stamped into output files so
// results can be traced back to their exact configuration.
std::uint64_t config_hash(const NetworkSpec& spec);

}  // namespace jacksim
