#include "forge/config.hpp"

#include <cstdlib>  // for getenv, strtoull

namespace forge {

  std::size_t cap_from_env(std::size_t fallback) {
    char const* raw = std::getenv("FORGE_CAP");
    if (raw == nullptr || *raw == '\0') {
      return fallback;
    }
    char*              end   = nullptr;
    unsigned long long value = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || value == 0) {
      return fallback;
    }
    return static_cast<std::size_t>(value);
  }

}  // namespace forge
