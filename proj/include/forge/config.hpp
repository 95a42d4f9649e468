#ifndef FORGE_CONFIG_HPP_
#define FORGE_CONFIG_HPP_

#include <cstddef>  // for size_t

namespace forge {

  // Default vertex cap for automorphism and isomorphism search.
  inline constexpr std::size_t kAutomorphismCap = 12;

  // Default vertex cap for endomorphism enumeration.
  inline constexpr std::size_t kEndomorphismCap = 7;

  // Largest monoid for which a full multiplication table is built.
  inline constexpr std::size_t kMonoidCap = 4096;

  // Returns the value of FORGE_CAP if it is set to a positive integer,
  // and fallback otherwise.
  std::size_t cap_from_env(std::size_t fallback);

}  // namespace forge

#endif  // FORGE_CONFIG_HPP_
