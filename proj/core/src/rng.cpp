#include "rrie/rng.hpp"

namespace rrie {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t stream_key(std::uint64_t master, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

}  // namespace

Rng::Rng(std::uint64_t master, std::uint64_t stream)
    : record_{master, stream}, engine_(stream_key(master, stream)) {}

Rng Rng::fork() { return Rng(record_.master, engine_()); }

}  // namespace rrie
