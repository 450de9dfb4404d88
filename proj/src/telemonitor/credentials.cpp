#include "cinnamon/telemonitor/credentials.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <stdexcept>
#include <vector>

#include "cinnamon/errors.hpp"

namespace cinnamon::telemonitor {

namespace {

constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kDigestBytes = 32;

std::string to_hex(const std::vector<unsigned char>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

std::vector<unsigned char> from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw ParseError("odd-length hex string");
  const auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw ParseError("invalid hex digit");
  };
  std::vector<unsigned char> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<unsigned char>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

std::vector<unsigned char> random_bytes(std::size_t n) {
  std::vector<unsigned char> out(n);
  if (RAND_bytes(out.data(), static_cast<int>(n)) != 1) throw std::runtime_error("RAND_bytes failed");
  return out;
}

std::vector<unsigned char> derive(const std::string& credential, const std::vector<unsigned char>& salt,
                                  int iterations) {
  std::vector<unsigned char> out(kDigestBytes);
  if (PKCS5_PBKDF2_HMAC(credential.data(), static_cast<int>(credential.size()), salt.data(),
                        static_cast<int>(salt.size()), iterations, EVP_sha256(), static_cast<int>(out.size()),
                        out.data()) != 1) {
    throw std::runtime_error("PBKDF2 failed");
  }
  return out;
}

}  // namespace

std::string hash_credential(const std::string& credential, int iterations) {
  if (iterations < 1) throw ValidationError("PBKDF2 iterations must be >= 1");
  const auto salt = random_bytes(kSaltBytes);
  return "pbkdf2-sha256$" + std::to_string(iterations) + "$" + to_hex(salt) + "$" +
         to_hex(derive(credential, salt, iterations));
}

bool verify_credential(const std::string& credential, const std::string& stored) {
  const auto a = stored.find('$');
  const auto b = stored.find('$', a + 1);
  const auto c = stored.find('$', b + 1);
  if (a == std::string::npos || b == std::string::npos || c == std::string::npos) return false;
  if (stored.substr(0, a) != "pbkdf2-sha256") return false;
  try {
    const int iterations = std::stoi(stored.substr(a + 1, b - a - 1));
    const auto salt = from_hex(stored.substr(b + 1, c - b - 1));
    const auto expected = from_hex(stored.substr(c + 1));
    if (iterations < 1 || expected.size() != kDigestBytes) return false;
    const auto actual = derive(credential, salt, iterations);
    return CRYPTO_memcmp(actual.data(), expected.data(), kDigestBytes) == 0;
  } catch (const std::exception&) {
    return false;
  }
}

std::string random_token(std::size_t bytes) { return to_hex(random_bytes(bytes)); }

}  // namespace cinnamon::telemonitor
