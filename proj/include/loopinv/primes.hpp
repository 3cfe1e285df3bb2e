#pragma once

// 64-bit prime utilities: deterministic Miller-Rabin (exact below 2^64) and
// seeded random prime generation. Shared by the factorizer and the modular
// evaluation fast path.

#include <cstdint>
#include <random>

namespace loopinv {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic for all 64-bit inputs with this witness set.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Random prime with exactly `bits` bits drawn from the given generator.
inline uint64_t random_prime(std::mt19937_64& rng, int bits) {
    const uint64_t lo = 1ull << (bits - 1);
    const uint64_t hi = (bits == 64) ? ~0ull : (1ull << bits) - 1;
    std::uniform_int_distribution<uint64_t> dist(lo, hi);
    while (true) {
        uint64_t cand = dist(rng) | 1;
        if (is_prime_u64(cand)) return cand;
    }
}

}  // namespace loopinv
