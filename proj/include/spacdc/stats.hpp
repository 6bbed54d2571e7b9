#ifndef SPACDC_STATS_HPP
#define SPACDC_STATS_HPP

#include <cstddef>
#include <vector>

namespace spacdc {

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Rejection threshold for the two-sample KS test at the given significance:
/// c(alpha) * sqrt((n1+n2)/(n1*n2)) with c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical(std::size_t n1, std::size_t n2, double alpha);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> values);

}  // namespace spacdc

#endif
