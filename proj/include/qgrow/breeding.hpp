#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qgrow/fock.hpp"
#include "qgrow/sampling.hpp"

namespace qgrow {

struct BreedingConfig {
    double nbar = 1.3;
    int steps = 1;
    // Optional per-step thresholds; entries beyond its length fall back to nbar.
    std::vector<double> per_step_nbar;

    double threshold_for_step(int step) const {
        if (step < static_cast<int>(per_step_nbar.size())) return per_step_nbar[step];
        return nbar;
    }
};

struct BreedingStats {
    std::size_t input_count = 0;
    std::size_t pair_count = 0;
    std::size_t accepted_count = 0;
    double acceptance_fraction = 0.0;
    bool empty_output_warning = false;
};

/// The 50:50 virtual beam splitter of the post-processing protocol:
/// plus = (a+b)/sqrt(2), minus = (a-b)/sqrt(2).
std::pair<QuadratureSample, QuadratureSample> virtual_bs(const QuadratureSample& a,
                                                         const QuadratureSample& b);

/// One growing step: pair consecutive samples (2j, 2j+1), keep the plus-port
/// point iff |alpha_minus|^2 < nbar. Minus-port samples of accepted events are
/// discarded unless `keep_minus` is given.
std::pair<SampleSet, BreedingStats> breed_step(const SampleSet& set, double nbar,
                                               std::vector<QuadratureSample>* keep_minus = nullptr);

/// Repeated breed_step, threading output to input. Stops early (with the
/// warning flag set on the last stats) if a step yields fewer than 2 samples.
std::vector<std::pair<SampleSet, BreedingStats>> breed_iterate(const SampleSet& set,
                                                               const BreedingConfig& config);

/// Fock-diagonal heralding weights gamma_n = P(n+1, nbar) (regularized lower
/// incomplete gamma) for acceptance inside the disc |alpha|^2 < nbar.
std::vector<double> herald_povm_weights(double nbar, int dim);

/// U (rho1 x rho2) U^dag for the balanced beam splitter; composite index
/// k = m*dim + n with m the first mode. The unitary is cached per dim.
DensityMatrix bs_two_mode(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Exact-state counterpart of breed_step: interfere two copies of rho, herald
/// on low energy in the second output, return the normalized conditional state
/// and the success probability.
std::pair<DensityMatrix, double> breed_oracle(const DensityMatrix& rho, double nbar);

}  // namespace qgrow
