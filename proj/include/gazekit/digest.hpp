#pragma once

#include <string>

namespace gazekit {

/// SHA-256 of `data`, lowercase hex.
std::string sha256_hex(const std::string& data);

}  // namespace gazekit
