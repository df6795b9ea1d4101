#pragma once

// Test-only oracles and statistics helpers. Independent of the library code
// paths they check: plain Fock sums, quadrature, and textbook special
// functions only.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace testsupport {

// Regularized lower incomplete gamma P(a, x) for real a > 0
// (series for x < a+1, continued fraction otherwise).
inline double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Upper tail p-value of a chi-squared statistic with k degrees of freedom.
inline double chi2_pvalue(double stat, int dof) {
    return 1.0 - gamma_p(0.5 * dof, 0.5 * stat);
}

// Pearson chi-squared against expected probabilities; bins with expected
// count < 5 are pooled into one.
struct Chi2Result {
    double stat = 0.0;
    int dof = 0;
    double pvalue = 1.0;
};

inline Chi2Result chi2_test(const std::vector<double>& observed,
                            const std::vector<double>& expected_probs, double total) {
    Chi2Result r;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = expected_probs[i] * total;
        if (e < 5.0) {
            pooled_obs += observed[i];
            pooled_exp += e;
            continue;
        }
        r.stat += (observed[i] - e) * (observed[i] - e) / e;
        ++used;
    }
    if (pooled_exp > 0.0) {
        r.stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++used;
    }
    r.dof = used - 1;
    r.pvalue = r.dof > 0 ? chi2_pvalue(r.stat, r.dof) : 1.0;
    return r;
}

// Fock-sum oracle for <n> of a pure coefficient vector.
inline double mean_n_of(const Eigen::VectorXcd& c) {
    double s = 0.0;
    for (int n = 0; n < c.size(); ++n) s += n * std::norm(c[n]);
    return s;
}

// Midpoint 2D quadrature of a phase-space function over a box.
template <class F>
double integrate_2d(F&& f, double lo, double hi, int n) {
    double h = (hi - lo) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            acc += f(lo + (i + 0.5) * h, lo + (j + 0.5) * h);
    return acc * h * h;
}

}  // namespace testsupport
