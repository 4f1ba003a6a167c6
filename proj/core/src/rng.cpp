#include "gei/rng.hpp"

namespace gei {

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = splitmix64(root ^ 0x6a09e667f3bcc908ULL);
    for (std::uint64_t c : path) {
        h = splitmix64(h ^ splitmix64(c + 0x3c6ef372fe94f82bULL));
    }
    return h;
}

}  // namespace gei
