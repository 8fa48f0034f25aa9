#pragma once

#include <string>

#include "lgelu/network.hpp"

namespace lgelu {

// Binary network checkpoint: magic, format version, activation kind, then per
// layer the weight matrix, bias vector and hardness state. All 64-bit values
// round-trip bit-exactly. Little-endian on disk.
void save_checkpoint(const NetworkState& net, const std::string& path);
NetworkState load_checkpoint(const std::string& path);

}  // namespace lgelu
