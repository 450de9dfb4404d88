#pragma once

#include <string>

namespace cinnamon::telemonitor {

inline constexpr int kDefaultPbkdf2Iterations = 100000;

/// "pbkdf2-sha256$<iterations>$<salt hex>$<digest hex>" with a fresh 16-byte salt.
std::string hash_credential(const std::string& credential, int iterations = kDefaultPbkdf2Iterations);

/// Constant-time comparison against a hash produced by hash_credential.
bool verify_credential(const std::string& credential, const std::string& stored);

/// Hex string of `bytes` cryptographically random bytes.
std::string random_token(std::size_t bytes = 32);

}  // namespace cinnamon::telemonitor
