#include "qgrow/fock.hpp"

#include <cmath>
#include <stdexcept>

#include "qgrow/errors.hpp"
#include "qgrow/mathutil.hpp"

namespace qgrow {

namespace {

constexpr double kTruncationNormFloor = 0.999;

FockVector finalize(Eigen::VectorXcd c) {
    FockVector out;
    double norm2 = c.squaredNorm();
    if (norm2 <= 0.0) throw degenerate_input_error("state vanishes within the truncation");
    out.truncation_warning = std::sqrt(norm2) < kTruncationNormFloor;
    out.c = c / std::sqrt(norm2);
    return out;
}

}  // namespace

Eigen::VectorXcd coherent_coefficients(Complex alpha, int dim) {
    if (dim < 1) throw std::domain_error("coherent_state: dim must be >= 1");
    Eigen::VectorXcd c(dim);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c[n] = c[n - 1] * alpha / std::sqrt(double(n));
    return c;
}

FockVector coherent_state(Complex alpha, int dim) {
    return finalize(coherent_coefficients(alpha, dim));
}

FockVector squeezed_vacuum(double r, int dim) {
    if (dim < 2) throw std::domain_error("squeezed_vacuum: dim must be >= 2");
    double t = std::tanh(r);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
    // c_{2m} = tanh(r)^m sqrt((2m)!)/(2^m m!) / sqrt(cosh r); the positive
    // sign puts the squeezing on the y quadrature in this convention.
    double amp = 1.0 / std::sqrt(std::cosh(r));
    c[0] = amp;
    for (int m = 1; 2 * m < dim; ++m) {
        amp *= t * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
        c[2 * m] = amp;
    }
    return finalize(std::move(c));
}

FockVector odd_cat(double alpha, int dim) {
    if (alpha <= 0.0) throw degenerate_input_error("odd_cat: alpha = 0 gives the zero vector");
    if (dim < 2) throw std::domain_error("odd_cat: dim must be >= 2");
    Eigen::VectorXcd plus = coherent_coefficients(Complex(alpha, 0.0), dim);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
    double norm_const = 1.0 / std::sqrt(2.0 * (1.0 - std::exp(-2.0 * alpha * alpha)));
    for (int n = 1; n < dim; n += 2) c[n] = 2.0 * norm_const * plus[n];
    // Pre-renormalization norm carries the truncation diagnostics.
    return finalize(std::move(c));
}

FockVector even_cat(double alpha, int dim) {
    if (alpha < 0.0) throw std::domain_error("even_cat: alpha must be >= 0");
    if (dim < 1) throw std::domain_error("even_cat: dim must be >= 1");
    Eigen::VectorXcd plus = coherent_coefficients(Complex(alpha, 0.0), dim);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
    double norm_const = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * alpha * alpha)));
    for (int n = 0; n < dim; n += 2) c[n] = 2.0 * norm_const * plus[n];
    return finalize(std::move(c));
}

FockVector subtract_photon(const FockVector& state) {
    int d = state.dim();
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(d);
    for (int n = 0; n + 1 < d; ++n) c[n] = std::sqrt(double(n + 1)) * state.c[n + 1];
    if (c.squaredNorm() < 1e-24)
        throw degenerate_input_error("subtract_photon: no support on n >= 1");
    FockVector out;
    out.c = c / c.norm();
    out.truncation_warning = state.truncation_warning;
    return out;
}

DensityMatrix density_from_pure(const FockVector& state) {
    DensityMatrix rho;
    rho.m = state.c * state.c.adjoint();
    rho.truncation_warning = state.truncation_warning;
    return rho;
}

DensityMatrix apply_loss(const DensityMatrix& rho, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("apply_loss: eta must be in (0, 1]");
    int d = rho.dim();
    if (eta == 1.0) return rho;
    DensityMatrix out;
    out.truncation_warning = rho.truncation_warning;
    out.m = Eigen::MatrixXcd::Zero(d, d);
    // rho'_{mn} = sum_k sqrt(C(m+k,k) C(n+k,k)) eta^{(m+n)/2} (1-eta)^k rho_{m+k,n+k}
    for (int k = 0; k < d; ++k) {
        double lk = k * std::log1p(-eta);
        for (int m = 0; m + k < d; ++m) {
            for (int n = 0; n + k < d; ++n) {
                double lw = 0.5 * (log_factorial(m + k) - log_factorial(m) +
                                   log_factorial(n + k) - log_factorial(n)) -
                            log_factorial(k) + 0.5 * (m + n) * std::log(eta) + lk;
                out.m(m, n) += std::exp(lw) * rho.m(m + k, n + k);
            }
        }
    }
    return out;
}

double fidelity(const DensityMatrix& rho, const FockVector& psi) {
    if (rho.dim() != psi.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    double f = (psi.c.adjoint() * rho.m * psi.c)(0, 0).real();
    if (f < 0.0) f = 0.0;
    if (f > 1.0) f = 1.0;
    return f;
}

double mean_photon_number(const DensityMatrix& rho) {
    double s = 0.0;
    for (int n = 0; n < rho.dim(); ++n) s += n * rho.m(n, n).real();
    return s;
}

double parity(const DensityMatrix& rho) {
    double s = 0.0;
    for (int n = 0; n < rho.dim(); ++n) s += (n % 2 == 0 ? 1.0 : -1.0) * rho.m(n, n).real();
    return s;
}

double n_qc_from_squeeze(SqueezeFactor beta) {
    if (!(beta.beta > 0.0)) throw std::domain_error("n_qc_from_squeeze: beta must be > 0");
    return (beta.beta + 1.0 / beta.beta) / 4.0 - 0.5;
}

double purity(const DensityMatrix& rho) {
    return (rho.m * rho.m).trace().real();
}

void validate(const DensityMatrix& rho) {
    int d = rho.dim();
    if (d < 1) throw numerical_error("DensityMatrix: empty");
    double herm = (rho.m - rho.m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) throw numerical_error("DensityMatrix: not Hermitian");
    if (std::abs(rho.trace() - 1.0) > 1e-9) throw numerical_error("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw numerical_error("DensityMatrix: negative eigenvalue");
}

}  // namespace qgrow
