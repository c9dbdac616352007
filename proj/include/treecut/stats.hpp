#pragma once

#include <functional>
#include <vector>

namespace treecut::stats {

// Sorted sample set with empirical-CDF queries.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    const std::vector<double>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double cdf(double x) const;
    double mean() const;
    double moment(int order) const;

private:
    std::vector<double> samples_;  // ascending
};

// Reference limit law: standard Rayleigh, or the chi law with 2k degrees of
// freedom (k = 1 is Rayleigh).  `scale` stretches the variable: X ~ law
// means X/scale has the standard law.
struct ReferenceLaw {
    enum class Kind { rayleigh, chi2k };
    Kind kind = Kind::rayleigh;
    int k = 1;
    double scale = 1.0;

    static ReferenceLaw rayleigh(double scale = 1.0) { return {Kind::rayleigh, 1, scale}; }
    static ReferenceLaw chi_2k(int k, double scale = 1.0) { return {Kind::chi2k, k, scale}; }

    double cdf(double x) const;
    double density(double x) const;
    // Exact moments via lgamma (used as a cross-check on the quadrature).
    double moment_closed_form(int order) const;
};

// CDF of the standard Rayleigh law: 1 - exp(-x^2/2) for x >= 0, 0 below.
double rayleigh_cdf(double x);

// CDF of the chi law with 2k degrees of freedom at x >= 0: the regularized
// lower incomplete gamma at integer shape k, evaluated as a finite sum.
double chi2k_cdf(int k, double x);
double chi2k_density(int k, double x);

// Kolmogorov-Smirnov sup distance between the empirical CDF and a law.
double ks_distance(const EmpiricalDistribution& samples, const ReferenceLaw& law);
double ks_distance(const EmpiricalDistribution& samples,
                   const std::function<double(double)>& cdf);

// Two-sample KS distance.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

// |empirical moment - law moment| / law moment, with the law moment computed
// by quadrature of the density (order 1 or 2).
double moment_check(const EmpiricalDistribution& samples, const ReferenceLaw& law, int order);

// Adaptive Simpson quadrature on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance = 1e-10);

// Upper regularized incomplete gamma Q(a, x) for integer or half-integer a;
// backs the chi-square p-values.
double igamma_upper_regularized(double a, double x);

// P(ChiSquare(df) >= stat).
double chi_square_pvalue(double stat, double df);

// Pearson statistic against given expected counts (must be positive).
double chi_square_statistic(const std::vector<long long>& observed,
                            const std::vector<double>& expected);

}  // namespace treecut::stats
