#include "multiaff/inference.hpp"

#include <algorithm>
#include <cmath>

#include "multiaff/error.hpp"

namespace multiaff::nbrm {

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

double two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

WaldStats wald_stats(const Eigen::VectorXd& beta, const Eigen::VectorXd& se) {
    WaldStats w;
    w.z = beta.cwiseQuotient(se);
    w.p.resize(beta.size());
    for (Eigen::Index k = 0; k < beta.size(); ++k) {
        w.p[k] = two_sided_p(w.z[k]);
        w.stars.push_back(significance_stars(w.p[k]));
    }
    return w;
}

WaldStats wald_stats(const FitResult& fit) {
    if (!fit.converged) throw InvalidInput("wald_stats: fit did not converge");
    return wald_stats(fit.beta, fit.se);
}

double percent_change(double beta) { return 100.0 * std::expm1(beta); }

double pseudo_r2(double loglik, double loglik_null) {
    if (loglik_null == 0.0) throw InvalidInput("pseudo_r2: null log-likelihood is zero");
    return 1.0 - loglik / loglik_null;
}

double pseudo_r2(const FitResult& fit) { return pseudo_r2(fit.loglik, fit.loglik_null); }

namespace {

bool is_intercept(const Eigen::VectorXd& col) { return (col.array() == 1.0).all(); }

}  // namespace

VifReport vif(const RegressionInput& input) {
    const Eigen::Index n = input.x.rows();
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < input.x.cols(); ++j)
        if (!is_intercept(input.x.col(j))) cols.push_back(j);
    if (cols.size() < 2) throw InvalidInput("vif: need at least two non-intercept columns");

    VifReport out;
    for (auto j : cols) {
        out.columns.push_back(j < static_cast<Eigen::Index>(input.columns.size()) ? input.columns[j]
                                                                                  : "x" + std::to_string(j));
        const Eigen::VectorXd target = input.x.col(j);
        Eigen::MatrixXd others(n, static_cast<Eigen::Index>(cols.size()));
        others.col(0).setOnes();
        Eigen::Index c = 1;
        for (auto k : cols)
            if (k != j) others.col(c++) = input.x.col(k);

        const double mean = target.mean();
        const double sst = (target.array() - mean).square().sum();
        if (!(sst > 0.0)) {
            out.vif.push_back(std::nullopt);
            continue;
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(others);
        const Eigen::VectorXd coef = cod.solve(target);
        const double ssr = (target - others * coef).squaredNorm();
        const double r2 = std::max(0.0, 1.0 - ssr / sst);
        if (r2 >= 1.0 - 1e-10) out.vif.push_back(std::nullopt);
        else out.vif.push_back(1.0 / (1.0 - r2));
    }
    return out;
}

}  // namespace multiaff::nbrm
