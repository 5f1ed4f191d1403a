#ifndef QSE_RNG_HPP
#define QSE_RNG_HPP

#include <cstdint>
#include <stdexcept>

namespace qse {

// Identifies one reproducible random stream. Streams are value-like:
// cheap to copy and safe to hand to another thread.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

// stream_id = sweep_point * 2^32 + replicate_index. Injective as long as
// both indices stay below 2^32; checked.
RngStream make_stream(std::uint64_t master_seed, std::uint64_t sweep_point,
                      std::uint64_t replicate_index);

namespace detail {
// splitmix64 finalizer (Steele, Lea, Flood 2014)
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
} // namespace detail

// Counter-based generator: output i of a stream is mix(mix(key1 + i*phi) ^ key2)
// where (key1, key2) are derived from (master_seed, stream_id). Drawing the
// n-th value never requires generating the preceding ones of other streams,
// so replicate i at sweep point j is reproducible under any work partition.
class CounterRng {
public:
    explicit CounterRng(RngStream stream)
        : key1_(detail::mix64(stream.master_seed) ^
                detail::mix64(stream.stream_id + 0x9e3779b97f4a7c15ULL)),
          key2_(detail::mix64(stream.master_seed + 0x6a09e667f3bcc909ULL) ^
                detail::mix64(~stream.stream_id)) {}

    std::uint64_t next_u64() {
        std::uint64_t c = counter_++;
        return detail::mix64(detail::mix64(key1_ + c * 0x9e3779b97f4a7c15ULL) ^ key2_);
    }

    // uniform on (0, 1]
    double next_unit_positive() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // uniform on [0, 1)
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key1_;
    std::uint64_t key2_;
    std::uint64_t counter_ = 0;
};

} // namespace qse

#endif
