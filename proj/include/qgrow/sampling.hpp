#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qgrow/fock.hpp"

namespace qgrow {

/// One QHD outcome: the phase-space point alpha = x + iy.
struct QuadratureSample {
    double x = 0.0;
    double y = 0.0;
};

struct SampleMeta {
    std::uint64_t seed = 0;
    std::string source;
    std::uint32_t generation = 0;
    int workers = 1;
};

struct SampleSet {
    std::vector<QuadratureSample> samples;
    SampleMeta meta;

    std::size_t count() const { return samples.size(); }
};

struct Moments {
    Complex mean;
    Eigen::Matrix2d covariance;
};

struct SamplerDiagnostics {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    double envelope_constant = 0.0;

    double acceptance_rate() const {
        return proposals ? double(accepted) / double(proposals) : 0.0;
    }
};

/// Husimi Q(alpha) = <alpha| rho |alpha> / pi, evaluated with the raw
/// truncated coherent projection (no renormalization).
double q_value(const DensityMatrix& rho, Complex alpha);

/// Mean and covariance of the Q distribution of rho, from operator moments.
Moments q_moments(const DensityMatrix& rho);

/// Draws `count` i.i.d. samples from Q via rejection sampling under a single
/// bivariate Gaussian envelope (covariance inflated 1.5x, margin 1.2x, 5-sigma
/// grid search for the envelope constant).
///
/// RNG contract: each worker w owns an independent mt19937_64 stream seeded
/// with derive_stream_seed(seed, w); normals come from Box-Muller on 53-bit
/// uniforms. Output is bit-identical for fixed (rho, count, seed, workers).
SampleSet sample_q(const DensityMatrix& rho, std::size_t count, std::uint64_t seed,
                   int workers = 1, SamplerDiagnostics* diag = nullptr);

/// Unbiased sample mean and covariance; needs count >= 2.
Moments empirical_moments(const SampleSet& set);

}  // namespace qgrow
