#include "ks/strip.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <ctime>
#include <stdexcept>

namespace ks {

SamplerSeed SamplerSeed::from_entropy() {
  struct {
    std::int64_t wall_ns;
    std::int64_t pid;
    std::int64_t cpu;
  } material{
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::system_clock::now().time_since_epoch())
          .count(),
      static_cast<std::int64_t>(::getpid()),
      static_cast<std::int64_t>(std::clock()),
  };

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(&material, sizeof material, digest, &len, EVP_sha256(), nullptr) != 1 || len < 8)
    throw std::runtime_error("SHA-256 failed while deriving a seed");
  std::uint64_t seed = 0;
  std::memcpy(&seed, digest, sizeof seed);
  return {seed, Provenance::Entropy};
}

}  // namespace ks
