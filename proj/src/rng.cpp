#include "qse/rng.hpp"

namespace qse {

RngStream make_stream(std::uint64_t master_seed, std::uint64_t sweep_point,
                      std::uint64_t replicate_index) {
    constexpr std::uint64_t cap = 1ULL << 32;
    if (sweep_point >= cap || replicate_index >= cap)
        throw std::invalid_argument("make_stream: index exceeds 2^32 cap");
    return RngStream{master_seed, (sweep_point << 32) | replicate_index};
}

} // namespace qse
