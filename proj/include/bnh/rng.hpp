#pragma once
#include <cstdint>
#include <gmpxx.h>

namespace bnh {

// Deterministic across platforms; std::uniform_int_distribution is not.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound > 0
    uint64_t below(uint64_t bound) {
        uint64_t mask = ~0ULL;
        if (bound > 1) {
            mask = (1ULL << (64 - __builtin_clzll(bound - 1))) - 1;
        } else {
            return 0;
        }
        for (;;) {
            uint64_t v = next() & mask;
            if (v < bound) return v;
        }
    }

    // uniform in [lo, hi] inclusive
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool coin() { return next() & 1; }

    // nonzero integer with |v| <= mag
    mpz_class nonzero(long mag) {
        long v = range(1, mag);
        return coin() ? mpz_class(v) : mpz_class(-v);
    }

private:
    uint64_t state_;
};

} // namespace bnh
