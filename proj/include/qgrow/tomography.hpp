#pragma once

#include <vector>

#include "qgrow/fock.hpp"
#include "qgrow/sampling.hpp"

namespace qgrow {

struct ReconstructionConfig {
    int dim = 15;
    int max_iters = 2000;
    double rel_tol = 1e-8;
    double dilution = 0.5;  // damping weight of the RrhoR update
    int threads = 1;
};

struct ReconstructionResult {
    DensityMatrix rho;
    std::vector<double> loglik_trace;  // mean log-likelihood per sample, per iteration
    int iterations = 0;
    bool converged = false;
};

/// Mean per-sample log-likelihood (1/N) sum_i ln[ <alpha_i|rho|alpha_i> / pi ].
/// Throws numerical_error (with the sample index) if any probability is <= 0.
double log_likelihood(const DensityMatrix& rho, const SampleSet& set);

/// One damped RrhoR expectation-maximization step:
/// R = (1/N) sum_i Pi_i / Tr(Pi_i rho), candidate = R rho R / Tr(R rho R),
/// return normalize((1-d) rho + d candidate), symmetrized.
DensityMatrix maxlik_step(const DensityMatrix& rho, const SampleSet& set, double dilution);

/// Iterate maxlik_step from the maximally mixed state until the relative
/// change of the mean log-likelihood drops below rel_tol or max_iters.
ReconstructionResult maxlik_reconstruct(const SampleSet& set, const ReconstructionConfig& config);

}  // namespace qgrow
