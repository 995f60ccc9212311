#pragma once

// NB2 negative binomial regression (variance mu + alpha * mu^2) fitted by
// Newton-Raphson on (beta, ln alpha).

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace multiaff::nbrm {

struct RegressionInput {
    Eigen::VectorXd y;                 // non-negative integer counts
    Eigen::MatrixXd x;                 // n_obs x p design, intercept included as a column of ones
    std::vector<std::string> columns;  // p names

    Eigen::Index n_obs() const { return y.size(); }
    // Throws InvalidInput on shape mismatch, negative/non-integer y or non-finite x.
    void validate() const;
};

struct FitOptions {
    int max_iterations = 100;
    double rel_loglik_tol = 1e-10;
    double grad_tol = 1e-6;
    double armijo_c = 1e-4;
    int max_halvings = 60;
    double min_alpha = 1e-8;  // lower bound on alpha; reaching it means a Poisson-like fit
    bool fit_null = true;     // also fit the intercept-only model for loglik_null
};

struct FitResult {
    std::vector<std::string> columns;
    Eigen::VectorXd beta;
    double alpha = 0.0;
    Eigen::VectorXd se;
    Eigen::VectorXd z;
    Eigen::VectorXd p;
    std::vector<std::string> stars;
    Eigen::VectorXd pct_change;
    double loglik = 0.0;
    double loglik_null = 0.0;
    double pseudo_r2 = 0.0;
    Eigen::Index n_obs = 0;
    bool converged = false;
    int iterations = 0;
    bool alpha_at_bound = false;
    double grad_norm = 0.0;  // infinity norm over (beta, ln alpha) at the returned point
};

// Sum over observations of
//   lnG(y+1/a) - lnG(1/a) - lnG(y+1) + y ln(a mu) - (y+1/a) ln(1 + a mu),  mu = exp(x'beta).
// Evaluated in a form that stays accurate as alpha -> 0 (Poisson limit).
double nb2_loglik(const Eigen::VectorXd& beta, double alpha, const RegressionInput& input);

// Gradient of nb2_loglik with respect to (beta, ln alpha); size p + 1.
Eigen::VectorXd nb2_gradient(const Eigen::VectorXd& beta, double alpha, const RegressionInput& input);

// Hessian with respect to (beta, ln alpha); (p+1) x (p+1).
Eigen::MatrixXd nb2_hessian(const Eigen::VectorXd& beta, double alpha, const RegressionInput& input);

// Poisson log-likelihood sum(y ln mu - mu - lnG(y+1)).
double poisson_loglik(const Eigen::VectorXd& beta, const RegressionInput& input);

// Poisson regression by IRLS; used to initialise the NB2 fit.
Eigen::VectorXd poisson_irls(const RegressionInput& input, int max_iterations = 50);

// Throws NumericalError for a rank-deficient design, InvalidInput for a
// constant non-intercept column or invalid data. Non-convergence is reported
// through FitResult::converged, not an exception.
FitResult nb2_fit(const RegressionInput& input, const FitOptions& options = {});

}  // namespace multiaff::nbrm
