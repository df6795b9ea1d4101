#include "qgrow/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "qgrow/errors.hpp"
#include "qgrow/mathutil.hpp"

namespace qgrow {

namespace {

constexpr double kCovInflation = 1.5;
constexpr double kEnvelopeMargin = 1.2;
constexpr double kSearchSigmas = 5.0;
constexpr int kSearchGrid = 64;

double uniform53(std::mt19937_64& rng) {
    return ((rng() >> 11) + 0.5) * 0x1p-53;  // (0, 1)
}

// Box-Muller, fully specified so streams are reproducible across platforms.
void normal_pair(std::mt19937_64& rng, double& z0, double& z1) {
    double u1 = uniform53(rng);
    double u2 = uniform53(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * std::numbers::pi * u2);
    z1 = r * std::sin(2.0 * std::numbers::pi * u2);
}

struct GaussianProposal {
    Eigen::Vector2d mean;
    Eigen::Matrix2d chol;      // lower Cholesky factor of the covariance
    Eigen::Matrix2d precision;
    double log_norm;           // log of the density prefactor

    double log_pdf(const Eigen::Vector2d& p) const {
        Eigen::Vector2d d = p - mean;
        return log_norm - 0.5 * d.dot(precision * d);
    }
};

GaussianProposal make_proposal(const Moments& mom) {
    GaussianProposal prop;
    prop.mean << mom.mean.real(), mom.mean.imag();
    Eigen::Matrix2d cov = kCovInflation * mom.covariance;
    Eigen::LLT<Eigen::Matrix2d> llt(cov);
    if (llt.info() != Eigen::Success)
        throw numerical_error("sample_q: proposal covariance not positive definite");
    prop.chol = llt.matrixL();
    prop.precision = cov.inverse();
    prop.log_norm = -std::log(2.0 * std::numbers::pi * std::sqrt(cov.determinant()));
    return prop;
}

}  // namespace

double q_value(const DensityMatrix& rho, Complex alpha) {
    Eigen::VectorXcd v = coherent_coefficients(alpha, rho.dim());
    double q = (v.adjoint() * rho.m * v)(0, 0).real() / std::numbers::pi;
    return q < 0.0 ? 0.0 : q;
}

Moments q_moments(const DensityMatrix& rho) {
    int d = rho.dim();
    Complex a_mean(0.0, 0.0), a2_mean(0.0, 0.0);
    double n_mean = 0.0;
    for (int n = 0; n + 1 < d; ++n) a_mean += std::sqrt(n + 1.0) * rho.m(n + 1, n);
    for (int n = 0; n + 2 < d; ++n) a2_mean += std::sqrt((n + 1.0) * (n + 2.0)) * rho.m(n + 2, n);
    for (int n = 0; n < d; ++n) n_mean += n * rho.m(n, n).real();

    // Anti-normally ordered moments: E_Q[alpha] = <a>, E_Q[alpha^2] = <a^2>,
    // E_Q[|alpha|^2] = <n> + 1.
    Moments mom;
    mom.mean = a_mean;
    double ex2 = 0.5 * a2_mean.real() + 0.5 * (n_mean + 1.0);
    double ey2 = -0.5 * a2_mean.real() + 0.5 * (n_mean + 1.0);
    double exy = 0.5 * a2_mean.imag();
    mom.covariance << ex2 - a_mean.real() * a_mean.real(), exy - a_mean.real() * a_mean.imag(),
        exy - a_mean.real() * a_mean.imag(), ey2 - a_mean.imag() * a_mean.imag();
    return mom;
}

SampleSet sample_q(const DensityMatrix& rho, std::size_t count, std::uint64_t seed, int workers,
                   SamplerDiagnostics* diag) {
    if (count == 0) throw std::domain_error("sample_q: count must be >= 1");
    if (workers < 1) throw std::domain_error("sample_q: workers must be >= 1");

    Moments mom = q_moments(rho);
    GaussianProposal prop = make_proposal(mom);

    // Envelope constant from a coarse grid scan of Q / proposal over 5 sigma.
    double sx = kSearchSigmas * std::sqrt(prop.chol(0, 0) * prop.chol(0, 0));
    double sy = kSearchSigmas * std::sqrt(prop.precision.inverse()(1, 1));
    double ratio_max = 0.0;
    for (int i = 0; i < kSearchGrid; ++i) {
        double x = prop.mean[0] - sx + 2.0 * sx * i / (kSearchGrid - 1);
        for (int j = 0; j < kSearchGrid; ++j) {
            double y = prop.mean[1] - sy + 2.0 * sy * j / (kSearchGrid - 1);
            double q = q_value(rho, Complex(x, y));
            double p = std::exp(prop.log_pdf(Eigen::Vector2d(x, y)));
            if (q > 0.0 && q / p > ratio_max) ratio_max = q / p;
        }
    }
    if (ratio_max <= 0.0) throw numerical_error("sample_q: Q vanished on the search box");
    const double envelope = kEnvelopeMargin * ratio_max;

    SampleSet out;
    out.samples.resize(count);
    out.meta.seed = seed;
    out.meta.generation = 0;
    out.meta.workers = workers;
    out.meta.source = "sample_q";

    std::vector<SamplerDiagnostics> per_worker(workers);
    auto run_worker = [&](int w) {
        std::size_t begin = count * w / workers;
        std::size_t end = count * (w + 1) / workers;
        std::mt19937_64 rng(derive_stream_seed(seed, static_cast<std::uint64_t>(w)));
        SamplerDiagnostics& d = per_worker[w];
        for (std::size_t i = begin; i < end;) {
            double z0, z1;
            normal_pair(rng, z0, z1);
            Eigen::Vector2d pt = prop.mean + prop.chol * Eigen::Vector2d(z0, z1);
            double u = uniform53(rng);
            double q = q_value(rho, Complex(pt[0], pt[1]));
            double bound = envelope * std::exp(prop.log_pdf(pt));
            ++d.proposals;
            if (q > bound * (1.0 + 1e-9))
                throw numerical_error("sample_q: envelope violated at (" +
                                      std::to_string(pt[0]) + ", " + std::to_string(pt[1]) + ")");
            if (u * bound <= q) {
                out.samples[i] = {pt[0], pt[1]};
                ++d.accepted;
                ++i;
            }
        }
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (int w = 0; w < workers; ++w) threads.emplace_back(run_worker, w);
        for (auto& t : threads) t.join();
    }

    if (diag) {
        *diag = {};
        diag->envelope_constant = envelope;
        for (const auto& d : per_worker) {
            diag->proposals += d.proposals;
            diag->accepted += d.accepted;
        }
    }
    return out;
}

Moments empirical_moments(const SampleSet& set) {
    std::size_t n = set.count();
    if (n < 2) throw std::domain_error("empirical_moments: need at least 2 samples");
    double mx = 0.0, my = 0.0;
    for (const auto& s : set.samples) {
        mx += s.x;
        my += s.y;
    }
    mx /= double(n);
    my /= double(n);
    double cxx = 0.0, cyy = 0.0, cxy = 0.0;
    for (const auto& s : set.samples) {
        cxx += (s.x - mx) * (s.x - mx);
        cyy += (s.y - my) * (s.y - my);
        cxy += (s.x - mx) * (s.y - my);
    }
    Moments mom;
    mom.mean = Complex(mx, my);
    mom.covariance << cxx / (n - 1.0), cxy / (n - 1.0), cxy / (n - 1.0), cyy / (n - 1.0);
    return mom;
}

}  // namespace qgrow
