#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lpdisc {

/// Every random draw in the harness comes from one of these.
using Stream = std::mt19937_64;

/// Purpose of a derived stream. Part of the stream key so that, e.g., the
/// noise and tie-break streams of the same trial never coincide.
enum class StreamTag : std::uint64_t {
  likelihoods = 1,
  realization = 2,
  split = 3,
  noise = 4,
  ties = 5,
  external = 6,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Hash (master seed, tag, coordinates) into a 64-bit stream key. The key
/// depends only on its arguments, never on the order streams are requested.
inline std::uint64_t stream_key(std::uint64_t master_seed, StreamTag tag,
                                std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = detail::splitmix64(master_seed);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(tag));
  for (auto c : coords) {
    h = detail::splitmix64(h ^ detail::splitmix64(c + 0x632be59bd9b4e019ULL));
  }
  return h;
}

inline Stream make_stream(std::uint64_t key) {
  std::seed_seq seq{static_cast<std::uint32_t>(key),
                    static_cast<std::uint32_t>(key >> 32)};
  return Stream(seq);
}

inline Stream derive_stream(std::uint64_t master_seed, StreamTag tag,
                            std::initializer_list<std::uint64_t> coords) {
  return make_stream(stream_key(master_seed, tag, coords));
}

}  // namespace lpdisc
