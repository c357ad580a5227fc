#include "sdde/seed.hpp"

namespace sdde {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t path_index, StreamTag tag) {
  const std::uint64_t stream = splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(tag) * 0xd1b54a32d192ed03ULL));
  return splitmix64(stream ^ splitmix64(path_index));
}

}  // namespace sdde
