#pragma once

#include <utility>
#include <vector>

namespace apollo {

// Special functions backing the tests below. Series / continued-fraction
// evaluations to near machine precision; the studentized range CDF is an
// adaptive double integration to 1e-6 absolute.
namespace specfun {

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x);
double norm_cdf(double x);
double norm_pdf(double x);
// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_upper_p(double statistic, double df);
// Upper tail of the F distribution.
double f_upper_p(double f, double df1, double df2);
// P[Q <= q] for the studentized range of k groups with df error degrees of
// freedom.
double studentized_range_cdf(double q, int k, double df);

} // namespace specfun

struct ChiSquareResult {
    double statistic = 0.0;
    double p = 1.0;
    double df = 1.0;
    // A margin of the table is zero: the statistic is undefined and p is 1
    // by convention.
    bool degenerate = false;
};

// Pearson chi-square on the 2x2 table [[a.correct, a.wrong],
// [b.correct, b.wrong]]. Yates' continuity correction is on by default:
// recomputing the reference post-hoc statistics from their published
// correct/wrong counts matches only with the correction applied.
ChiSquareResult chi_square_2x2(std::pair<long, long> group_a, std::pair<long, long> group_b,
                               bool yates = true);

// Pearson omnibus over a k x 2 (correct, wrong) table, df = k-1.
ChiSquareResult chi_square_omnibus(const std::vector<std::pair<long, long>>& groups);

// Each p multiplied by the family size, capped at 1.
std::vector<double> bonferroni(std::vector<double> p_values);

struct AnovaResult {
    double f = 0.0;
    double df1 = 0.0;
    double df2 = 0.0;
    double p = 1.0;
};

// One-way fixed-effects ANOVA. Requires >= 2 groups with >= 2 observations
// each (throws Error otherwise). Zero within-variance yields F=+inf, p=0
// when the group means differ and F=0, p=1 when the groups are identical
// constants.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

struct TukeyResult {
    // Symmetric k x k matrices; diagonal p = 1, q = 0.
    std::vector<std::vector<double>> p;
    std::vector<std::vector<double>> q;
};

// Tukey's HSD over all group pairs:
//   q_ij = |mean_i - mean_j| / sqrt(MSW/2 * (1/n_i + 1/n_j))
// with p from the studentized range distribution (k groups, N-k df).
TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups);

} // namespace apollo
