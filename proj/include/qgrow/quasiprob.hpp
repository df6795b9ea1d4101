#pragma once

#include <string>
#include <vector>

#include "qgrow/fock.hpp"
#include "qgrow/sampling.hpp"

namespace qgrow {

struct GridSpec {
    double x_min = -5.0, x_max = 5.0;
    double y_min = -5.0, y_max = 5.0;
    int nx = 201, ny = 201;
};

/// Rectangular raster of quasi-probability values, row-major with x fastest.
/// Function grids (q_grid, wigner_grid) sample at nx evenly spaced nodes
/// including both endpoints; histogram_q uses nx cells with values at centers.
struct PhaseSpaceGrid {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> values;  // values[j * nx + i] at (x_i, y_j)
    double cell_dx = 0.0, cell_dy = 0.0;
    double overflow_fraction = 0.0;  // histogram_q only
    bool cell_centered = false;      // true for histograms

    double& at(int i, int j) { return values[std::size_t(j) * nx + i]; }
    double at(int i, int j) const { return values[std::size_t(j) * nx + i]; }
    double x_of(int i) const {
        return cell_centered ? x_min + (i + 0.5) * cell_dx
                             : x_min + (x_max - x_min) * i / (nx - 1);
    }
    double y_of(int j) const {
        return cell_centered ? y_min + (j + 0.5) * cell_dy
                             : y_min + (y_max - y_min) * j / (ny - 1);
    }
};

PhaseSpaceGrid q_grid(const DensityMatrix& rho, const GridSpec& spec);

/// Wigner function via the displaced-parity formula
/// W(alpha) = (2/pi) sum_{m,n} rho_mn (-1)^m <n|D(2 alpha)|m>, with the
/// displacement matrix elements from an associated-Laguerre recurrence.
PhaseSpaceGrid wigner_grid(const DensityMatrix& rho, const GridSpec& spec);

double wigner_point(const DensityMatrix& rho, Complex alpha);

/// (2/pi) * parity(rho); exact, no grid.
double wigner_at_origin(const DensityMatrix& rho);

/// Integral of the negative part: sum over nodes of max(0, -value) * cell area.
double negativity_volume(const PhaseSpaceGrid& grid);

struct CatFit {
    double alpha = 0.0;
    double fidelity = 0.0;
    int parity = -1;              // -1 odd cat family, +1 even
    bool no_cat_warning = false;  // all probed fidelities < 0.05
};

/// Golden-section search for the cat amplitude maximizing fidelity against
/// both the odd and even cat families over [0.05, sqrt(dim)], refined to
/// 1e-4; the better of the two fits is returned. Both families are probed
/// because each breeding step flips the cat parity.
CatFit fit_cat_amplitude(const DensityMatrix& rho);

/// Normalized 2D histogram, counts / (N * cell area); out-of-bounds samples
/// land in overflow_fraction.
PhaseSpaceGrid histogram_q(const SampleSet& set, const GridSpec& spec);

}  // namespace qgrow
