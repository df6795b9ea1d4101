#pragma once

#include <filesystem>
#include <string>

#include "qgrow/fock.hpp"
#include "qgrow/quasiprob.hpp"
#include "qgrow/sampling.hpp"

namespace qgrow {

// SampleSet binary layout: magic "QHDSAMP1", LE u64 count, u64 seed,
// u32 generation, u32 reserved, then count (f64 x, f64 y) pairs.
void write_sample_set(const SampleSet& set, const std::filesystem::path& path);
SampleSet read_sample_set(const std::filesystem::path& path);

// CSV alternative with header "x,y"; accepted on input, selectable on output.
void write_sample_set_csv(const SampleSet& set, const std::filesystem::path& path);

// Dispatches on contents (magic bytes vs CSV header).
SampleSet read_sample_set_any(const std::filesystem::path& path);

// Text matrix format: header "DIM <n>", then n lines of n comma-separated
// "re+imi" literals at 17 significant digits (round-trips bit-faithfully).
void write_density_matrix(const DensityMatrix& rho, const std::filesystem::path& path);
DensityMatrix read_density_matrix(const std::filesystem::path& path);

// Grid CSV with header "x,y,value", row-major (x fastest); a sidecar
// "<path>.meta.json" carries bounds, resolution, overflow and a source tag.
void write_grid(const PhaseSpaceGrid& grid, const std::filesystem::path& path,
                const std::string& source);
PhaseSpaceGrid read_grid(const std::filesystem::path& path);

void write_loglik_trace(const std::vector<double>& trace, const std::filesystem::path& path);

}  // namespace qgrow
