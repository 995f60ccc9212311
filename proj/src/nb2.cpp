#include "multiaff/nb2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "multiaff/error.hpp"
#include "multiaff/inference.hpp"

namespace multiaff::nbrm {

namespace {

// Counts above this use gamma-function differences instead of exact sums.
constexpr double kSumLimit = 2000.0;
constexpr double kMaxEta = 700.0;

// (log1p(x) - x/(1+x)) / x^2
double g_over_x2(double x) {
    if (x < 1e-3) return 0.5 + x * (-2.0 / 3 + x * (3.0 / 4 + x * (-4.0 / 5 + x * (5.0 / 6))));
    return (std::log1p(x) - x / (1 + x)) / (x * x);
}

// (x^2/(1+x)^2 - 2 (log1p(x) - x/(1+x))) / x^3
double h_over_x3(double x) {
    if (x < 1e-3)
        return -2.0 / 3 + x * (3.0 / 2 + x * (-12.0 / 5 + x * (10.0 / 3 + x * (-30.0 / 7))));
    const double q = x / (1 + x);
    return (q * q - 2 * (std::log1p(x) - q)) / (x * x * x);
}

// s0 = lnG(y+r) - lnG(r) + y ln a = sum_{j<y} ln(1 + a j)
// s1 = d s0 / da, s2 = d^2 s0 / da^2
struct CountSums {
    double s0 = 0, s1 = 0, s2 = 0;
};

CountSums count_sums(double y, double a, int order) {
    CountSums s;
    if (y <= kSumLimit) {
        const int n = static_cast<int>(y);
        for (int j = 1; j < n; ++j) {
            const double d = 1.0 + a * j;
            s.s0 += std::log1p(a * j);
            if (order >= 1) s.s1 += j / d;
            if (order >= 2) s.s2 -= (j / d) * (j / d);
        }
        return s;
    }
    const double r = 1.0 / a;
    s.s0 = std::lgamma(y + r) - std::lgamma(r) + y * std::log(a);
    if (order >= 1) {
        const double dpsi = boost::math::digamma(y + r) - boost::math::digamma(r);
        s.s1 = -dpsi / (a * a) + y / a;
        if (order >= 2) {
            const double dpsi1 = boost::math::trigamma(y + r) - boost::math::trigamma(r);
            s.s2 = 2 * dpsi / (a * a * a) + dpsi1 / (a * a * a * a) - y / (a * a);
        }
    }
    return s;
}

double checked_eta(double eta) {
    if (!std::isfinite(eta) || eta > kMaxEta) throw InvalidInput("non-finite linear predictor");
    return eta;
}

struct Evaluation {
    double loglik = 0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

// order 0: loglik; 1: + gradient; 2: + Hessian. Parameters are (beta, ln alpha).
Evaluation evaluate(const Eigen::VectorXd& beta, double alpha, const RegressionInput& in, int order) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be positive and finite");
    const Eigen::Index n = in.x.rows(), p = in.x.cols();
    if (beta.size() != p) throw InvalidInput("beta has the wrong length");
    const Eigen::VectorXd eta = in.x * beta;
    const double a = alpha;

    Evaluation ev;
    if (order >= 1) ev.grad = Eigen::VectorXd::Zero(p + 1);
    if (order >= 2) ev.hess = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd w_eta(order >= 1 ? n : 0), w_eta2(order >= 2 ? n : 0), w_cross(order >= 2 ? n : 0);
    double d_a = 0, d_aa = 0;

    for (Eigen::Index i = 0; i < n; ++i) {
        const double y = in.y[i];
        const double e = checked_eta(eta[i]);
        const double mu = std::exp(e);
        const double x = a * mu;
        const double l1p = std::log1p(x);
        const auto s = count_sums(y, a, order);
        ev.loglik += s.s0 + y * e - std::lgamma(y + 1) - y * l1p - l1p / a;
        if (order >= 1) {
            const double denom = 1 + x;
            w_eta[i] = (y - mu) / denom;
            d_a += s.s1 - y * mu / denom + mu * mu * g_over_x2(x);
            if (order >= 2) {
                w_eta2[i] = -mu * (1 + a * y) / (denom * denom);
                w_cross[i] = -mu * (y - mu) / (denom * denom);
                d_aa += s.s2 + y * mu * mu / (denom * denom) + mu * mu * mu * h_over_x3(x);
            }
        }
    }
    if (order >= 1) {
        ev.grad.head(p) = in.x.transpose() * w_eta;
        ev.grad[p] = a * d_a;
    }
    if (order >= 2) {
        ev.hess.topLeftCorner(p, p) = in.x.transpose() * w_eta2.asDiagonal() * in.x;
        const Eigen::VectorXd cross = a * (in.x.transpose() * w_cross);
        ev.hess.block(0, p, p, 1) = cross;
        ev.hess.block(p, 0, 1, p) = cross.transpose();
        ev.hess(p, p) = a * d_a + a * a * d_aa;
    }
    if (!std::isfinite(ev.loglik)) throw InvalidInput("non-finite log-likelihood");
    return ev;
}

bool is_ones(const Eigen::VectorXd& col) { return (col.array() == 1.0).all(); }

void check_design(const RegressionInput& in) {
    const Eigen::Index p = in.x.cols();
    if (p == 0) throw InvalidInput("design has no columns");
    if (in.x.rows() <= p) throw InsufficientData("fewer observations than parameters");
    bool has_intercept = false;
    for (Eigen::Index j = 0; j < p; ++j) has_intercept |= is_ones(in.x.col(j));
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto col = in.x.col(j);
        if (!is_ones(col) && has_intercept && (col.array() == col[0]).all())
            throw InvalidInput("column '" + (j < static_cast<Eigen::Index>(in.columns.size()) ? in.columns[j]
                                                                                              : std::to_string(j)) +
                               "' is constant");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(in.x);
    if (qr.rank() < p) throw NumericalError("rank-deficient design matrix");
}

struct Optimum {
    Eigen::VectorXd beta;
    double theta = 0;
    Evaluation ev;
    bool converged = false;
    bool at_bound = false;
    int iterations = 0;
};

Optimum newton(const RegressionInput& in, const FitOptions& opt) {
    const Eigen::Index p = in.x.cols();
    const double theta_min = std::log(opt.min_alpha);

    Optimum st;
    st.beta = poisson_irls(in);
    {
        const Eigen::VectorXd mu = (in.x * st.beta).array().min(kMaxEta).exp();
        const double num = ((in.y - mu).array().square() - mu.array()).sum();
        const double den = mu.squaredNorm();
        double a0 = den > 0 ? num / den : 1.0;
        if (!std::isfinite(a0)) a0 = 1.0;
        st.theta = std::log(std::clamp(a0, 1e-4, 10.0));
    }

    auto loglik_at = [&](const Eigen::VectorXd& b, double th) {
        try {
            return evaluate(b, std::exp(th), in, 0).loglik;
        } catch (const InvalidInput&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    double prev_loglik = std::numeric_limits<double>::quiet_NaN();
    for (st.iterations = 0; st.iterations <= opt.max_iterations; ++st.iterations) {
        st.ev = evaluate(st.beta, std::exp(st.theta), in, 2);
        Eigen::VectorXd g = st.ev.grad;
        st.at_bound = st.theta <= theta_min && g[p] <= 0;
        if (st.at_bound) g[p] = 0;
        const double gnorm = g.lpNorm<Eigen::Infinity>();
        const double loglik = st.ev.loglik;
        if (std::isfinite(prev_loglik) &&
            std::abs(loglik - prev_loglik) / std::max(1.0, std::abs(loglik)) < opt.rel_loglik_tol &&
            gnorm < opt.grad_tol) {
            st.converged = true;
            break;
        }
        if (st.iterations == opt.max_iterations) break;

        // Newton direction on the free parameters, with a diagonal shift if
        // the negative Hessian is not positive definite.
        const Eigen::Index free = st.at_bound ? p : p + 1;
        Eigen::MatrixXd neg_h = -st.ev.hess.topLeftCorner(free, free);
        const Eigen::VectorXd gf = g.head(free);
        Eigen::VectorXd d;
        double shift = 0;
        for (int attempt = 0; attempt < 40; ++attempt) {
            Eigen::LLT<Eigen::MatrixXd> llt(neg_h + shift * Eigen::MatrixXd::Identity(free, free));
            if (llt.info() == Eigen::Success) {
                d = llt.solve(gf);
                if (d.allFinite()) break;
            }
            shift = shift == 0 ? 1e-8 * std::max(1.0, neg_h.diagonal().cwiseAbs().maxCoeff()) : shift * 10;
            d.resize(0);
        }
        if (d.size() == 0) break;

        Eigen::VectorXd step = Eigen::VectorXd::Zero(p + 1);
        step.head(free) = d;
        const double slope = g.dot(step);
        // Once the predicted gain is below the rounding noise of the loglik,
        // the line search cannot tell steps apart; take the pure Newton step.
        const double noise = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(loglik));
        if (slope >= 0 && slope < noise) {
            Eigen::VectorXd b = st.beta + step.head(p);
            const double th = std::max(theta_min, st.theta + step[p]);
            if (std::isfinite(loglik_at(b, th))) {
                st.beta = std::move(b);
                st.theta = th;
                prev_loglik = loglik;
                continue;
            }
        }
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
            Eigen::VectorXd b = st.beta + t * step.head(p);
            double th = std::max(theta_min, st.theta + t * step[p]);
            const double cand = loglik_at(b, th);
            if (std::isfinite(cand) && cand >= loglik + opt.armijo_c * t * slope) {
                st.beta = std::move(b);
                st.theta = th;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No further ascent possible in floating point.
            st.converged = gnorm < opt.grad_tol * std::max(1.0, std::abs(loglik));
            break;
        }
        prev_loglik = loglik;
    }
    return st;
}

}  // namespace

void RegressionInput::validate() const {
    if (x.rows() != y.size()) throw InvalidInput("design and response have different lengths");
    if (!columns.empty() && static_cast<Eigen::Index>(columns.size()) != x.cols())
        throw InvalidInput("column names do not match the design");
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double v = y[i];
        if (!std::isfinite(v) || v < 0 || v != std::floor(v))
            throw InvalidInput("response must be non-negative integer counts");
    }
    if (!x.allFinite()) throw InvalidInput("design contains non-finite values");
}

double nb2_loglik(const Eigen::VectorXd& beta, double alpha, const RegressionInput& input) {
    input.validate();
    return evaluate(beta, alpha, input, 0).loglik;
}

Eigen::VectorXd nb2_gradient(const Eigen::VectorXd& beta, double alpha, const RegressionInput& input) {
    input.validate();
    return evaluate(beta, alpha, input, 1).grad;
}

Eigen::MatrixXd nb2_hessian(const Eigen::VectorXd& beta, double alpha, const RegressionInput& input) {
    input.validate();
    return evaluate(beta, alpha, input, 2).hess;
}

double poisson_loglik(const Eigen::VectorXd& beta, const RegressionInput& input) {
    input.validate();
    const Eigen::VectorXd eta = input.x * beta;
    double ll = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double y = input.y[i];
        ll += y * eta[i] - std::exp(eta[i]) - std::lgamma(y + 1);
    }
    return ll;
}

Eigen::VectorXd poisson_irls(const RegressionInput& in, int max_iterations) {
    const Eigen::Index p = in.x.cols();
    Eigen::VectorXd mu = (in.y.array() + 0.5).matrix();
    Eigen::VectorXd eta = mu.array().log().matrix();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    for (int it = 0; it < max_iterations; ++it) {
        const Eigen::VectorXd z = eta + (in.y - mu).cwiseQuotient(mu);
        const Eigen::MatrixXd xtw = in.x.transpose() * mu.asDiagonal();
        const Eigen::VectorXd next = (xtw * in.x).ldlt().solve(xtw * z);
        if (!next.allFinite()) break;
        const double change = (next - beta).lpNorm<Eigen::Infinity>();
        beta = next;
        eta = (in.x * beta).cwiseMin(kMaxEta);
        mu = eta.array().exp().max(1e-10).matrix();
        if (change < 1e-8) break;
    }
    return beta;
}

FitResult nb2_fit(const RegressionInput& input, const FitOptions& options) {
    input.validate();
    check_design(input);
    const Eigen::Index p = input.x.cols();

    const Optimum opt = newton(input, options);

    FitResult fit;
    fit.columns = input.columns;
    fit.beta = opt.beta;
    fit.alpha = std::exp(opt.theta);
    fit.loglik = opt.ev.loglik;
    fit.n_obs = input.n_obs();
    fit.converged = opt.converged;
    fit.iterations = opt.iterations;
    fit.alpha_at_bound = opt.at_bound;
    {
        Eigen::VectorXd g = opt.ev.grad;
        if (opt.at_bound) g[p] = 0;
        fit.grad_norm = g.lpNorm<Eigen::Infinity>();
    }

    // Observed information over (beta, ln alpha); beta block of its inverse.
    // With alpha pinned at its lower bound only the beta block is used.
    const Eigen::Index k = opt.at_bound ? p : p + 1;
    const Eigen::MatrixXd info = -opt.ev.hess.topLeftCorner(k, k);
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) {
        if (fit.converged) throw NumericalError("Hessian is not negative definite at the optimum");
        fit.se = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::quiet_NaN());
    } else {
        const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(k, k));
        fit.se = cov.diagonal().head(p).cwiseSqrt();
    }

    auto w = wald_stats(fit.beta, fit.se);
    fit.z = w.z;
    fit.p = w.p;
    fit.stars = w.stars;
    fit.pct_change = fit.beta.unaryExpr([](double b) { return percent_change(b); });

    const bool intercept_only = p == 1 && is_ones(input.x.col(0));
    if (intercept_only) {
        fit.loglik_null = fit.loglik;
    } else if (options.fit_null) {
        RegressionInput null_input{input.y, Eigen::MatrixXd::Ones(input.n_obs(), 1), {"intercept"}};
        FitOptions null_opt = options;
        null_opt.fit_null = false;
        const Optimum null_fit = newton(null_input, null_opt);
        fit.loglik_null = null_fit.ev.loglik;
        fit.converged = fit.converged && null_fit.converged;
    } else {
        fit.loglik_null = std::numeric_limits<double>::quiet_NaN();
    }
    fit.pseudo_r2 = std::isfinite(fit.loglik_null) ? pseudo_r2(fit.loglik, fit.loglik_null)
                                                   : std::numeric_limits<double>::quiet_NaN();
    return fit;
}

}  // namespace multiaff::nbrm
