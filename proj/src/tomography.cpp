#include "qgrow/tomography.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qgrow/errors.hpp"

namespace qgrow {

namespace {

constexpr std::size_t kBlockRows = 1 << 15;

// Rows are the raw truncated coherent projections <n|alpha_i>.
Eigen::MatrixXcd coherent_rows(const SampleSet& set, int dim) {
    Eigen::MatrixXcd v(set.count(), dim);
    for (std::size_t i = 0; i < set.count(); ++i) {
        Complex alpha(set.samples[i].x, set.samples[i].y);
        Complex a = std::exp(-0.5 * std::norm(alpha));
        v(i, 0) = a;
        for (int n = 1; n < dim; ++n) {
            a *= alpha / std::sqrt(double(n));
            v(i, n) = a;
        }
    }
    return v;
}

struct IterationAccum {
    Eigen::MatrixXcd r;   // (1/N) sum_i |a_i><a_i| / <a_i|rho|a_i>, unnormalized by pi
    double sum_log_q = 0.0;
    std::ptrdiff_t bad_index = -1;
};

// One pass over a row range: probabilities, log-likelihood sum, R contribution.
IterationAccum accumulate_range(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& rho,
                                std::size_t begin, std::size_t end) {
    int dim = static_cast<int>(v.cols());
    IterationAccum acc;
    acc.r = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t b = begin; b < end; b += kBlockRows) {
        std::size_t rows = std::min(kBlockRows, end - b);
        auto vb = v.middleRows(b, rows);
        Eigen::MatrixXcd a = vb.conjugate() * rho;  // rows: <a_i| rho
        Eigen::VectorXd q = a.cwiseProduct(vb).rowwise().sum().real();
        for (std::size_t i = 0; i < rows; ++i) {
            if (!(q[i] > 0.0)) {
                acc.bad_index = static_cast<std::ptrdiff_t>(b + i);
                return acc;
            }
            acc.sum_log_q += std::log(q[i]);
        }
        a = q.cwiseInverse().asDiagonal() * vb;  // reuse the block buffer
        acc.r.noalias() += vb.transpose() * a.conjugate();
    }
    return acc;
}

IterationAccum accumulate(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& rho, int threads) {
    std::size_t n = v.rows();
    if (threads <= 1) return accumulate_range(v, rho, 0, n);
    std::vector<IterationAccum> parts(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            parts[t] = accumulate_range(v, rho, n * t / threads, n * (t + 1) / threads);
        });
    for (auto& t : pool) t.join();
    // Combine in thread-index order so results do not depend on scheduling.
    IterationAccum total = std::move(parts[0]);
    for (int t = 1; t < threads; ++t) {
        if (total.bad_index >= 0) return total;
        if (parts[t].bad_index >= 0) return parts[t];
        total.r += parts[t].r;
        total.sum_log_q += parts[t].sum_log_q;
    }
    return total;
}

struct StepOutcome {
    Eigen::MatrixXcd rho;
    double loglik;  // of the input state
};

StepOutcome em_step(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& rho, double dilution,
                    int threads) {
    std::size_t n = v.rows();
    IterationAccum acc = accumulate(v, rho, threads);
    if (acc.bad_index >= 0)
        throw numerical_error("maxlik: zero likelihood at sample " + std::to_string(acc.bad_index) +
                              " (truncation dim too small?)");
    double loglik = acc.sum_log_q / double(n) - std::log(std::numbers::pi);
    Eigen::MatrixXcd r = acc.r / double(n);
    Eigen::MatrixXcd cand = r * rho * r;
    cand /= cand.trace().real();
    Eigen::MatrixXcd next = (1.0 - dilution) * rho + dilution * cand;
    next = 0.5 * (next + next.adjoint()).eval();
    next /= next.trace().real();
    return {std::move(next), loglik};
}

}  // namespace

double log_likelihood(const DensityMatrix& rho, const SampleSet& set) {
    if (set.count() == 0) throw std::domain_error("log_likelihood: empty sample set");
    double sum = 0.0;
    for (std::size_t i = 0; i < set.count(); ++i) {
        double q = q_value(rho, Complex(set.samples[i].x, set.samples[i].y));
        if (!(q > 0.0))
            throw numerical_error("log_likelihood: zero likelihood at sample " + std::to_string(i));
        sum += std::log(q);
    }
    return sum / double(set.count());
}

DensityMatrix maxlik_step(const DensityMatrix& rho, const SampleSet& set, double dilution) {
    if (!(dilution > 0.0 && dilution <= 1.0))
        throw std::domain_error("maxlik_step: dilution must be in (0, 1]");
    Eigen::MatrixXcd v = coherent_rows(set, rho.dim());
    DensityMatrix out;
    out.m = em_step(v, rho.m, dilution, 1).rho;
    return out;
}

ReconstructionResult maxlik_reconstruct(const SampleSet& set, const ReconstructionConfig& config) {
    if (config.dim < 2) throw std::domain_error("maxlik_reconstruct: dim must be >= 2");
    if (config.max_iters < 1) throw std::domain_error("maxlik_reconstruct: max_iters must be >= 1");
    if (!(config.rel_tol > 0.0)) throw std::domain_error("maxlik_reconstruct: rel_tol must be > 0");
    if (!(config.dilution > 0.0 && config.dilution <= 1.0))
        throw std::domain_error("maxlik_reconstruct: dilution must be in (0, 1]");
    if (set.count() < 100) throw std::domain_error("maxlik_reconstruct: need at least 100 samples");

    Eigen::MatrixXcd v = coherent_rows(set, config.dim);
    Eigen::MatrixXcd rho =
        Eigen::MatrixXcd::Identity(config.dim, config.dim) / double(config.dim);

    ReconstructionResult result;
    result.loglik_trace.reserve(config.max_iters);
    double prev = 0.0;
    for (int it = 0; it < config.max_iters; ++it) {
        StepOutcome step = em_step(v, rho, config.dilution, config.threads);
        rho = std::move(step.rho);
        result.loglik_trace.push_back(step.loglik);
        result.iterations = it + 1;
        if (it > 0 && std::abs(step.loglik - prev) < config.rel_tol * std::abs(step.loglik)) {
            result.converged = true;
            break;
        }
        prev = step.loglik;
    }
    result.rho.m = std::move(rho);
    return result;
}

}  // namespace qgrow
