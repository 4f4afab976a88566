#pragma once

#include <string>

namespace miohint {

// Hex-encoded SHA-256 digest.
std::string sha256_hex(const std::string& data);

}  // namespace miohint
