#include "qgrow/quasiprob.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgrow/errors.hpp"
#include "qgrow/mathutil.hpp"

namespace qgrow {

namespace {

void check_spec(const GridSpec& spec) {
    if (!(spec.x_min < spec.x_max && spec.y_min < spec.y_max))
        throw std::domain_error("grid: bounds must be ordered");
    if (spec.nx < 2 || spec.ny < 2) throw std::domain_error("grid: need at least 2 nodes per axis");
}

PhaseSpaceGrid empty_grid(const GridSpec& spec) {
    PhaseSpaceGrid g;
    g.x_min = spec.x_min;
    g.x_max = spec.x_max;
    g.y_min = spec.y_min;
    g.y_max = spec.y_max;
    g.nx = spec.nx;
    g.ny = spec.ny;
    g.cell_dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
    g.cell_dy = (spec.y_max - spec.y_min) / (spec.ny - 1);
    g.values.assign(std::size_t(spec.nx) * spec.ny, 0.0);
    return g;
}

// <row|D(beta)|col> for all rows/cols < dim. Laguerre recurrence in the
// polynomial degree for each diagonal offset; stable up to dim 64.
Eigen::MatrixXcd displacement_matrix(Complex beta, int dim) {
    Eigen::MatrixXcd d(dim, dim);
    double x = std::norm(beta);
    double pre = std::exp(-0.5 * x);
    for (int off = 0; off < dim; ++off) {
        // L_k^{(off)}(x), k = 0 .. dim-1-off
        double lkm1 = 0.0;
        double lk = 1.0;
        Complex beta_off = std::pow(beta, off);
        Complex mbconj_off = std::pow(-std::conj(beta), off);
        for (int k = 0; k + off < dim; ++k) {
            int m = k + off;  // larger index
            double scale = pre * std::exp(0.5 * (log_factorial(k) - log_factorial(m)));
            d(m, k) = scale * beta_off * lk;
            if (off > 0) d(k, m) = scale * mbconj_off * lk;
            double lkp1 = ((2.0 * k + 1.0 + off - x) * lk - (k + off) * lkm1) / (k + 1.0);
            lkm1 = lk;
            lk = lkp1;
        }
    }
    return d;
}

double wigner_from_displacement(const DensityMatrix& rho, const Eigen::MatrixXcd& d) {
    int dim = rho.dim();
    Complex acc(0.0, 0.0);
    for (int m = 0; m < dim; ++m) {
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int n = 0; n < dim; ++n) acc += sign * rho.m(m, n) * d(n, m);
    }
    return (2.0 / std::numbers::pi) * acc.real();
}

}  // namespace

PhaseSpaceGrid q_grid(const DensityMatrix& rho, const GridSpec& spec) {
    check_spec(spec);
    PhaseSpaceGrid g = empty_grid(spec);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) g.at(i, j) = q_value(rho, Complex(g.x_of(i), g.y_of(j)));
    return g;
}

PhaseSpaceGrid wigner_grid(const DensityMatrix& rho, const GridSpec& spec) {
    check_spec(spec);
    PhaseSpaceGrid g = empty_grid(spec);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) g.at(i, j) = wigner_point(rho, Complex(g.x_of(i), g.y_of(j)));
    return g;
}

double wigner_point(const DensityMatrix& rho, Complex alpha) {
    return wigner_from_displacement(rho, displacement_matrix(2.0 * alpha, rho.dim()));
}

double wigner_at_origin(const DensityMatrix& rho) {
    return (2.0 / std::numbers::pi) * parity(rho);
}

double negativity_volume(const PhaseSpaceGrid& grid) {
    double acc = 0.0;
    for (double v : grid.values)
        if (v < 0.0) acc -= v;
    return acc * grid.cell_dx * grid.cell_dy;
}

namespace {

CatFit fit_one_family(const DensityMatrix& rho, int parity) {
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    int dim = rho.dim();
    auto f = [&](double alpha) {
        return fidelity(rho, parity < 0 ? odd_cat(alpha, dim) : even_cat(alpha, dim));
    };

    // Coarse scan first; golden-section assumes unimodality only locally.
    double lo = 0.05, hi = std::sqrt(double(dim));
    double best_a = lo, best_f = -1.0;
    const int scan = 64;
    for (int i = 0; i <= scan; ++i) {
        double a = lo + (hi - lo) * i / scan;
        double v = f(a);
        if (v > best_f) {
            best_f = v;
            best_a = a;
        }
    }
    double step = (hi - lo) / scan;
    double a = std::max(lo, best_a - step);
    double b = std::min(hi, best_a + step);
    double c = b - golden * (b - a);
    double d = a + golden * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-4) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - golden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + golden * (b - a);
            fd = f(d);
        }
    }
    CatFit fit;
    fit.alpha = 0.5 * (a + b);
    fit.fidelity = f(fit.alpha);
    fit.parity = parity;
    return fit;
}

}  // namespace

CatFit fit_cat_amplitude(const DensityMatrix& rho) {
    CatFit odd = fit_one_family(rho, -1);
    CatFit even = fit_one_family(rho, +1);
    CatFit fit = even.fidelity > odd.fidelity ? even : odd;
    fit.no_cat_warning = fit.fidelity < 0.05;
    return fit;
}

PhaseSpaceGrid histogram_q(const SampleSet& set, const GridSpec& spec) {
    check_spec(spec);
    if (set.count() == 0) throw std::domain_error("histogram_q: empty sample set");
    PhaseSpaceGrid g = empty_grid(spec);
    // Histogram semantics: nx * ny cells; node (i, j) reports the density of
    // cell [x_min + i dx, x_min + (i+1) dx) x [...].
    g.cell_dx = (spec.x_max - spec.x_min) / spec.nx;
    g.cell_dy = (spec.y_max - spec.y_min) / spec.ny;
    g.cell_centered = true;
    std::size_t overflow = 0;
    for (const auto& s : set.samples) {
        int i = int(std::floor((s.x - spec.x_min) / g.cell_dx));
        int j = int(std::floor((s.y - spec.y_min) / g.cell_dy));
        if (i < 0 || i >= spec.nx || j < 0 || j >= spec.ny) {
            ++overflow;
            continue;
        }
        g.at(i, j) += 1.0;
    }
    double norm = double(set.count()) * g.cell_dx * g.cell_dy;
    for (double& v : g.values) v /= norm;
    g.overflow_fraction = double(overflow) / double(set.count());
    return g;
}

}  // namespace qgrow
