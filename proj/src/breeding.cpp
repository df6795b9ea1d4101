#include "qgrow/breeding.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "qgrow/errors.hpp"
#include "qgrow/mathutil.hpp"

namespace qgrow {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// <m, N-m| U |p, q> for the balanced beam splitter taking
// a^dag -> (a^dag + b^dag)/sqrt(2), b^dag -> (a^dag - b^dag)/sqrt(2).
double bs_amplitude(int m, int p, int q) {
    int total = p + q;
    int n = total - m;
    if (m < 0 || n < 0) return 0.0;
    double sum = 0.0;
    for (int j = std::max(0, m - q); j <= std::min(p, m); ++j) {
        int k = m - j;
        double term = binomial(p, j) * binomial(q, k);
        sum += ((q - k) % 2 == 0) ? term : -term;
    }
    double lw = 0.5 * (log_factorial(m) + log_factorial(n) - log_factorial(p) - log_factorial(q));
    return std::pow(kInvSqrt2, total) * std::exp(lw) * sum;
}

const Eigen::MatrixXd& bs_unitary(int dim) {
    static std::map<int, Eigen::MatrixXd> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;

    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dim * dim, dim * dim);
    // Photon number is conserved; fill blockwise per total N.
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q)
            for (int m = 0; m < dim; ++m) {
                int n = p + q - m;
                if (n < 0 || n >= dim) continue;
                u(m * dim + n, p * dim + q) = bs_amplitude(m, p, q);
            }
    return cache.emplace(dim, std::move(u)).first->second;
}

}  // namespace

std::pair<QuadratureSample, QuadratureSample> virtual_bs(const QuadratureSample& a,
                                                         const QuadratureSample& b) {
    QuadratureSample plus{kInvSqrt2 * (a.x + b.x), kInvSqrt2 * (a.y + b.y)};
    QuadratureSample minus{kInvSqrt2 * (a.x - b.x), kInvSqrt2 * (a.y - b.y)};
    return {plus, minus};
}

std::pair<SampleSet, BreedingStats> breed_step(const SampleSet& set, double nbar,
                                               std::vector<QuadratureSample>* keep_minus) {
    if (set.count() < 2) throw std::domain_error("breed_step: need at least 2 samples");
    BreedingStats stats;
    stats.input_count = set.count();
    stats.pair_count = set.count() / 2;

    SampleSet out;
    out.meta = set.meta;
    out.meta.generation = set.meta.generation + 1;
    out.meta.source = "breed_step(" + set.meta.source + ")";
    out.samples.reserve(stats.pair_count);
    for (std::size_t j = 0; j < stats.pair_count; ++j) {
        auto [plus, minus] = virtual_bs(set.samples[2 * j], set.samples[2 * j + 1]);
        if (minus.x * minus.x + minus.y * minus.y < nbar) {
            out.samples.push_back(plus);
            if (keep_minus) keep_minus->push_back(minus);
        }
    }
    stats.accepted_count = out.samples.size();
    stats.acceptance_fraction =
        stats.pair_count ? double(stats.accepted_count) / double(stats.pair_count) : 0.0;
    stats.empty_output_warning = stats.accepted_count == 0;
    return {std::move(out), stats};
}

std::vector<std::pair<SampleSet, BreedingStats>> breed_iterate(const SampleSet& set,
                                                               const BreedingConfig& config) {
    if (config.steps < 1) throw std::domain_error("breed_iterate: steps must be >= 1");
    std::vector<std::pair<SampleSet, BreedingStats>> result;
    const SampleSet* current = &set;
    for (int s = 0; s < config.steps; ++s) {
        if (current->count() < 2) {
            if (!result.empty()) result.back().second.empty_output_warning = true;
            break;
        }
        result.push_back(breed_step(*current, config.threshold_for_step(s)));
        current = &result.back().first;
    }
    return result;
}

std::vector<double> herald_povm_weights(double nbar, int dim) {
    if (nbar < 0.0) throw std::domain_error("herald_povm_weights: nbar must be >= 0");
    std::vector<double> gamma(dim);
    for (int n = 0; n < dim; ++n) gamma[n] = gamma_p_int(n, nbar);
    return gamma;
}

DensityMatrix bs_two_mode(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    int d = rho1.dim();
    if (rho2.dim() != d) throw std::invalid_argument("bs_two_mode: dimension mismatch");
    const Eigen::MatrixXd& u = bs_unitary(d);
    Eigen::MatrixXcd kron(d * d, d * d);
    for (int m = 0; m < d; ++m)
        for (int p = 0; p < d; ++p)
            kron.block(m * d, p * d, d, d) = rho1.m(m, p) * rho2.m;
    DensityMatrix out;
    out.m = u * kron * u.transpose();
    out.truncation_warning = rho1.truncation_warning || rho2.truncation_warning;
    return out;
}

std::pair<DensityMatrix, double> breed_oracle(const DensityMatrix& rho, double nbar) {
    int d = rho.dim();
    DensityMatrix joint = bs_two_mode(rho, rho);
    std::vector<double> gamma = herald_povm_weights(nbar, d);

    // rho_out[m][m'] = sum_n gamma_n joint[(m,n)][(m',n)] / P
    DensityMatrix out;
    out.truncation_warning = rho.truncation_warning;
    out.m = Eigen::MatrixXcd::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp) {
            Complex acc(0.0, 0.0);
            for (int n = 0; n < d; ++n) acc += gamma[n] * joint.m(m * d + n, mp * d + n);
            out.m(m, mp) = acc;
        }
    double p = out.m.trace().real();
    if (p < 1e-12) throw degenerate_input_error("breed_oracle: heralding probability below 1e-12");
    out.m /= p;
    return {std::move(out), p};
}

}  // namespace qgrow
