#ifndef REACHCERT_UTIL_HPP
#define REACHCERT_UTIL_HPP

#include <cstdint>
#include <string>

namespace reachcert {

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

// Reads a whole file; throws std::runtime_error when missing.
std::string read_file(const std::string& path);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace reachcert

#endif
