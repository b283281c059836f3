#include "apollo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "apollo/errors.hpp"

namespace apollo {

namespace specfun {

namespace {

constexpr double kTiny = 1e-300;

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 1000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h;
}

// Recursive adaptive Simpson with Richardson refinement.
template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 40) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

// P[range of k iid standard normals <= w].
double normal_range_cdf(double w, int k) {
    if (w <= 0) return 0.0;
    const auto integrand = [&](double z) {
        const double span = norm_cdf(z) - norm_cdf(z - w);
        return norm_pdf(z) * std::pow(span, k - 1);
    };
    const double value = double(k) * adaptive_simpson(integrand, -9.0, 9.0, 1e-10);
    return std::clamp(value, 0.0, 1.0);
}

} // namespace

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (a <= 0.0) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_continued_fraction(a, x);
}

double inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                 b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double chi_square_upper_p(double statistic, double df) {
    if (statistic <= 0.0) return 1.0;
    return gamma_q(df / 2.0, statistic / 2.0);
}

double f_upper_p(double f, double df1, double df2) {
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    return inc_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

double studentized_range_cdf(double q, int k, double df) {
    if (q <= 0.0) return 0.0;
    if (k < 2) throw Error("studentized range needs k >= 2");
    if (df > 1e6) return normal_range_cdf(q, k); // S -> 1
    // Density of S = sqrt(chi2_df / df):
    //   f(s) = 2 (df/2)^(df/2) / Gamma(df/2) * s^(df-1) * exp(-df s^2 / 2)
    const double log_const =
        std::log(2.0) + 0.5 * df * std::log(0.5 * df) - std::lgamma(0.5 * df);
    const auto log_density = [&](double s) {
        return log_const + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
    };
    const double mode = df > 1.0 ? std::sqrt((df - 1.0) / df) : 0.25;
    const double log_peak = log_density(mode);
    const double step = std::max(0.02, 4.0 / std::sqrt(df));
    double hi = mode;
    while (log_density(hi) - log_peak > -46.0 && hi < mode + 60.0) hi += step;
    double lo = mode;
    while (lo - step > 1e-12 && log_density(lo - step) - log_peak > -46.0) lo -= step;
    lo = std::max(lo - step, 1e-12);

    const auto integrand = [&](double s) {
        const double ld = log_density(s);
        if (ld - log_peak < -50.0) return 0.0;
        return std::exp(ld) * normal_range_cdf(q * s, k);
    };
    const double value = adaptive_simpson(integrand, lo, hi, 2.5e-7);
    return std::clamp(value, 0.0, 1.0);
}

} // namespace specfun

ChiSquareResult chi_square_2x2(std::pair<long, long> group_a, std::pair<long, long> group_b,
                               bool yates) {
    ChiSquareResult result;
    result.df = 1.0;
    const double row1 = double(group_a.first + group_a.second);
    const double row2 = double(group_b.first + group_b.second);
    const double col1 = double(group_a.first + group_b.first);
    const double col2 = double(group_a.second + group_b.second);
    const double n = row1 + row2;
    if (row1 <= 0 || row2 <= 0 || col1 <= 0 || col2 <= 0) {
        result.degenerate = true;
        return result; // statistic 0, p 1
    }
    const double observed[2][2] = {{double(group_a.first), double(group_a.second)},
                                   {double(group_b.first), double(group_b.second)}};
    const double rows[2] = {row1, row2};
    const double cols[2] = {col1, col2};
    double statistic = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double expected = rows[i] * cols[j] / n;
            double dev = std::fabs(observed[i][j] - expected);
            if (yates) dev = std::max(0.0, dev - 0.5);
            statistic += dev * dev / expected;
        }
    }
    result.statistic = statistic;
    result.p = specfun::chi_square_upper_p(statistic, 1.0);
    return result;
}

ChiSquareResult chi_square_omnibus(const std::vector<std::pair<long, long>>& groups) {
    ChiSquareResult result;
    result.df = groups.size() > 1 ? double(groups.size() - 1) : 1.0;
    double col1 = 0, col2 = 0, n = 0;
    for (const auto& [correct, wrong] : groups) {
        if (correct + wrong <= 0) {
            result.degenerate = true;
            return result;
        }
        col1 += double(correct);
        col2 += double(wrong);
        n += double(correct + wrong);
    }
    if (groups.size() < 2 || col1 <= 0 || col2 <= 0) {
        result.degenerate = true;
        return result;
    }
    double statistic = 0.0;
    for (const auto& [correct, wrong] : groups) {
        const double row = double(correct + wrong);
        const double expected1 = row * col1 / n;
        const double expected2 = row * col2 / n;
        statistic += (correct - expected1) * (correct - expected1) / expected1;
        statistic += (wrong - expected2) * (wrong - expected2) / expected2;
    }
    result.statistic = statistic;
    result.p = specfun::chi_square_upper_p(statistic, result.df);
    return result;
}

std::vector<double> bonferroni(std::vector<double> p_values) {
    const double m = double(p_values.size());
    for (double& p : p_values) p = std::min(1.0, p * m);
    return p_values;
}

namespace {

struct GroupSummary {
    std::vector<double> means;
    std::vector<std::size_t> sizes;
    double grand_mean = 0.0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    std::size_t total = 0;
};

GroupSummary summarize(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw Error("ANOVA needs at least 2 groups");
    GroupSummary s;
    double sum = 0.0;
    for (const auto& group : groups) {
        if (group.size() < 2) throw Error("ANOVA needs at least 2 observations per group");
        double group_sum = 0.0;
        for (double x : group) group_sum += x;
        s.means.push_back(group_sum / double(group.size()));
        s.sizes.push_back(group.size());
        s.total += group.size();
        sum += group_sum;
    }
    s.grand_mean = sum / double(s.total);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double dm = s.means[i] - s.grand_mean;
        s.ss_between += double(s.sizes[i]) * dm * dm;
        for (double x : groups[i]) {
            const double d = x - s.means[i];
            s.ss_within += d * d;
        }
    }
    return s;
}

} // namespace

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
    const GroupSummary s = summarize(groups);
    AnovaResult result;
    result.df1 = double(groups.size() - 1);
    result.df2 = double(s.total - groups.size());
    if (s.ss_within <= 0.0) {
        if (s.ss_between > 0.0) {
            result.f = std::numeric_limits<double>::infinity();
            result.p = 0.0;
        } else {
            result.f = 0.0;
            result.p = 1.0;
        }
        return result;
    }
    result.f = (s.ss_between / result.df1) / (s.ss_within / result.df2);
    result.p = specfun::f_upper_p(result.f, result.df1, result.df2);
    return result;
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups) {
    const GroupSummary s = summarize(groups);
    const std::size_t k = groups.size();
    const double df2 = double(s.total - k);
    const double msw = s.ss_within / df2;

    TukeyResult result;
    result.p.assign(k, std::vector<double>(k, 1.0));
    result.q.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double diff = std::fabs(s.means[i] - s.means[j]);
            double q, p;
            if (msw <= 0.0) {
                q = diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
                p = diff > 0.0 ? 0.0 : 1.0;
            } else {
                const double se =
                    std::sqrt(msw * 0.5 * (1.0 / double(s.sizes[i]) + 1.0 / double(s.sizes[j])));
                q = diff / se;
                p = 1.0 - specfun::studentized_range_cdf(q, int(k), df2);
                p = std::clamp(p, 0.0, 1.0);
            }
            result.q[i][j] = result.q[j][i] = q;
            result.p[i][j] = result.p[j][i] = p;
        }
    }
    return result;
}

} // namespace apollo
