#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qgrow {

using Complex = std::complex<double>;

/// Pure state as a truncated coefficient vector over the photon-number basis.
/// Constructors renormalize after truncation; `truncation_warning` is set when
/// the pre-renormalization norm fell below 0.999 (state leaks past the cutoff).
struct FockVector {
    Eigen::VectorXcd c;
    bool truncation_warning = false;

    int dim() const { return static_cast<int>(c.size()); }
    double squared_norm() const { return c.squaredNorm(); }
};

/// Hermitian trace-one operator in the truncated Fock basis.
struct DensityMatrix {
    Eigen::MatrixXcd m;
    bool truncation_warning = false;

    int dim() const { return static_cast<int>(m.rows()); }
    double trace() const { return m.trace().real(); }
};

/// Squeeze factor beta = Var(X_vac) / Var(X_theta), dimensionless, > 0.
struct SqueezeFactor {
    double beta;
};

// Raw truncated projection of |alpha> onto the first `dim` Fock states,
// NOT renormalized. This is what Q-function evaluation needs.
Eigen::VectorXcd coherent_coefficients(Complex alpha, int dim);

FockVector coherent_state(Complex alpha, int dim);

// Squeezed vacuum with the squeezed quadrature along y (Im alpha), so the
// even coefficients are real positive for r > 0.
FockVector squeezed_vacuum(double r, int dim);

// N (|alpha> - |-alpha>) with N = [2(1 - e^{-2 alpha^2})]^{-1/2}; odd Fock
// support only. Throws degenerate_input_error for alpha = 0.
FockVector odd_cat(double alpha, int dim);

// N (|alpha> + |-alpha>); even Fock support. The breeding step flips cat
// parity, so grown states are compared against this family.
FockVector even_cat(double alpha, int dim);

// Annihilation operator followed by renormalization.
FockVector subtract_photon(const FockVector& state);

DensityMatrix density_from_pure(const FockVector& state);

// Photon-loss channel with transmissivity eta in (0, 1], in Kraus form.
DensityMatrix apply_loss(const DensityMatrix& rho, double eta);

// <psi| rho |psi>, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const FockVector& psi);

double mean_photon_number(const DensityMatrix& rho);

// Sum_n (-1)^n rho_nn.
double parity(const DensityMatrix& rho);

// Quantum-correlated photon number (beta + 1/beta)/4 - 1/2.
double n_qc_from_squeeze(SqueezeFactor beta);

double purity(const DensityMatrix& rho);

// Enforce the invariants of a valid state: Hermitian to 1e-10, trace within
// 1e-9 of one, eigenvalues >= -1e-9. Throws numerical_error on violation.
void validate(const DensityMatrix& rho);

}  // namespace qgrow
