#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "multiaff/nb2.hpp"

namespace multiaff::nbrm {

// "***" p < 0.001, "**" p < 0.01, "*" p < 0.05, otherwise "".
std::string significance_stars(double p);

// Two-sided p-value of a standard normal statistic.
double two_sided_p(double z);

struct WaldStats {
    Eigen::VectorXd z;
    Eigen::VectorXd p;
    std::vector<std::string> stars;
};

WaldStats wald_stats(const Eigen::VectorXd& beta, const Eigen::VectorXd& se);
// Requires fit.converged.
WaldStats wald_stats(const FitResult& fit);

// Expected percent change in the count for a unit increase: 100 (e^beta - 1).
double percent_change(double beta);

// McFadden: 1 - loglik / loglik_null. Throws InvalidInput if loglik_null == 0.
double pseudo_r2(double loglik, double loglik_null);
double pseudo_r2(const FitResult& fit);

struct VifReport {
    std::vector<std::string> columns;        // non-intercept columns
    std::vector<std::optional<double>> vif;  // nullopt: exact collinearity (infinite VIF)
};

// VIF_j = 1 / (1 - R2_j), R2_j from OLS of column j on the other columns plus
// an intercept. Requires at least two non-intercept columns.
VifReport vif(const RegressionInput& input);

}  // namespace multiaff::nbrm
