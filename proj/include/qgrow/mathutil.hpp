#pragma once

#include <cmath>
#include <cstdint>

namespace qgrow {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// binom(n, k) through log-gammas; stable up to the dim = 64 truncations used here.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k == 0 || k == n) return 1.0;
    return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

// Regularized lower incomplete gamma P(n+1, x) for integer shape,
// i.e. 1 - e^{-x} sum_{k=0}^{n} x^k / k!.
inline double gamma_p_int(int n, double x) {
    if (x <= 0.0) return 0.0;
    double term = std::exp(-x);  // k = 0
    double tail = term;
    for (int k = 1; k <= n; ++k) {
        term *= x / k;
        tail += term;
    }
    // Large x underflows e^{-x} to 0; the limit P -> 1 is correct there.
    double p = 1.0 - tail;
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

// SplitMix64, used to derive independent per-worker RNG seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0x85ebca6b0c2b2ae3ULL * (stream + 1);
    return splitmix64(s);
}

}  // namespace qgrow
