#include "treecut/stats.hpp"

#include <algorithm>
#include <cmath>

#include "treecut/errors.hpp"

namespace treecut::stats {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty()) throw InvalidArgument("EmpiricalDistribution: need at least one sample");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double x) const {
    auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::mean() const { return moment(1); }

double EmpiricalDistribution::moment(int order) const {
    double s = 0;
    for (double x : samples_) s += std::pow(x, order);
    return s / static_cast<double>(samples_.size());
}

double rayleigh_cdf(double x) {
    if (x <= 0) return 0.0;  // negative inputs clamp to 0 by convention
    return -std::expm1(-x * x / 2);
}

double chi2k_cdf(int k, double x) {
    if (k < 1) throw InvalidArgument("chi2k_cdf: k must be >= 1");
    if (x <= 0) return 0.0;
    // Regularized lower gamma at integer shape k:
    // P(k, u) = 1 - e^{-u} sum_{j<k} u^j/j!  with u = x^2/2.
    double u = x * x / 2;
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < k; ++j) {
        term *= u / j;
        sum += term;
    }
    double tail = std::exp(-u) * sum;
    return tail >= 1.0 ? 0.0 : 1.0 - tail;
}

double chi2k_density(int k, double x) {
    if (k < 1) throw InvalidArgument("chi2k_density: k must be >= 1");
    if (x <= 0) return 0.0;
    double log_factorial = std::lgamma(k);
    double logd = (1 - k) * std::log(2.0) + (2 * k - 1) * std::log(x) - x * x / 2 - log_factorial;
    return std::exp(logd);
}

double ReferenceLaw::cdf(double x) const {
    double z = x / scale;
    return kind == Kind::rayleigh ? rayleigh_cdf(z) : chi2k_cdf(k, z);
}

double ReferenceLaw::density(double x) const {
    double z = x / scale;
    double d = kind == Kind::rayleigh ? chi2k_density(1, z) : chi2k_density(k, z);
    return d / scale;
}

double ReferenceLaw::moment_closed_form(int order) const {
    int kk = kind == Kind::rayleigh ? 1 : k;
    // E[X^p] for chi with 2k dof: 2^{p/2} Gamma(k + p/2) / Gamma(k).
    double m = std::exp(0.5 * order * std::log(2.0) + std::lgamma(kk + order / 2.0) -
                        std::lgamma(kk));
    return m * std::pow(scale, order);
}

double ks_distance(const EmpiricalDistribution& samples,
                   const std::function<double(double)>& cdf) {
    const auto& xs = samples.samples();
    auto n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max(d, (static_cast<double>(i) + 1) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return d;
}

double ks_distance(const EmpiricalDistribution& samples, const ReferenceLaw& law) {
    return ks_distance(samples, [&](double x) { return law.cdf(x); });
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    const auto& xa = a.samples();
    const auto& xb = b.samples();
    double na = static_cast<double>(xa.size()), nb = static_cast<double>(xb.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < xa.size() && j < xb.size()) {
        double x = std::min(xa[i], xb[j]);
        while (i < xa.size() && xa[i] <= x) ++i;
        while (j < xb.size() && xb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6 * (fa + 4 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    double lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15;
    return adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tolerance) {
    double m = (a + b) / 2;
    double fa = f(a), fb = f(b), fm = f(m);
    return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tolerance, 48);
}

double moment_check(const EmpiricalDistribution& samples, const ReferenceLaw& law, int order) {
    if (order < 1 || order > 2) throw InvalidArgument("moment_check: order must be 1 or 2");
    // The laws here have sub-Gaussian tails; [0, 16*scale] is far past any mass.
    double hi = 16 * law.scale * std::sqrt(static_cast<double>(law.k));
    double law_moment = integrate(
        [&](double x) { return std::pow(x, order) * law.density(x); }, 0.0, hi, 1e-10);
    return std::abs(samples.moment(order) - law_moment) / law_moment;
}

double igamma_upper_regularized(double a, double x) {
    if (x < 0 || a <= 0) throw InvalidArgument("igamma_upper_regularized: bad arguments");
    bool integral = std::abs(a - std::round(a)) < 1e-12;
    bool half = std::abs(a - std::floor(a) - 0.5) < 1e-12;
    if (!integral && !half)
        throw InvalidArgument("igamma_upper_regularized: shape must be integer or half-integer");
    // Climb from the base case with Q(a+1,x) = Q(a,x) + x^a e^{-x} / Gamma(a+1),
    // accumulating the correction terms in log space for stability.
    double base = integral ? 1.0 : 0.5;
    double q = integral ? std::exp(-x) : std::erfc(std::sqrt(x));
    for (double s = base; s + 0.5 < a + 0.25; s += 1.0) {
        double log_term = s * std::log(x) - x - std::lgamma(s + 1);
        q += std::exp(log_term);
    }
    return std::min(1.0, q);
}

double chi_square_pvalue(double stat, double df) {
    if (stat <= 0) return 1.0;
    return igamma_upper_regularized(df / 2, stat / 2);
}

double chi_square_statistic(const std::vector<long long>& observed,
                            const std::vector<double>& expected) {
    if (observed.size() != expected.size())
        throw InvalidArgument("chi_square_statistic: size mismatch");
    double stat = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0)) throw InvalidArgument("chi_square_statistic: expected must be > 0");
        double d = static_cast<double>(observed[i]) - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

}  // namespace treecut::stats
