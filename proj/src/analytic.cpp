#include "vcsra/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vcsra/errors.hpp"
#include "vcsra/numerics.hpp"

namespace vcsra::analytic {

namespace {

constexpr double kMinAvailability = 1e-12;
constexpr double kBisectionTolDb = 1e-5;

// x e^{-a x} without inf * 0 or premature underflow.
double x_exp_neg(double x, double a) {
    if (x == 0.0 || std::isinf(x)) return 0.0;
    if (a * x > 700.0) return std::exp(std::log(x) - a * x);
    return x * std::exp(-a * x);
}

double exp_neg(double v) { return std::isinf(v) ? 0.0 : std::exp(-v); }

// Regularised lower incomplete gamma P(k, x) for integer k >= 0.
double regularized_lower_gamma(int k, double x) {
    if (k == 0) return 1.0;
    if (x <= 0.0) return 0.0;
    // Series from the k-th term: P(k,x) = e^{-x} sum_{n>=k} x^n / n!.
    if (x < k + 40.0) {
        const double log_x = std::log(x);
        double term = std::exp(-x + k * log_x - std::lgamma(k + 1.0));
        double sum = 0.0;
        for (int n = k; n < k + 2000; ++n) {
            sum += term;
            term *= x / (n + 1);
            if (n > x && term < 1e-17 * sum) break;
        }
        return std::min(sum, 1.0);
    }
    return 1.0 - numerics::upper_incomplete_gamma_int(k, x) / std::tgamma(static_cast<double>(k));
}

template <typename F>
double bisect_db(F&& residual, double lo, double hi) {
    // residual is nondecreasing in the threshold and changes sign on [lo, hi].
    while (hi - lo > kBisectionTolDb) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void AnalyticParams::validate() const {
    if (antennas < 1) throw DomainError("M must be >= 1");
    if (paths < 2) throw DomainError("closed forms need Q >= 2");
    if (paths > antennas) throw DomainError("Q must not exceed M");
    if (assigned < 1) throw DomainError("N_A must be >= 1");
    if (channels < 1) throw DomainError("N_C must be >= 1");
    if (ra_ues < 0) throw DomainError("N_R must be >= 0");
    if (!(rho_u >= 0.0)) throw DomainError("rho_u must be >= 0");
    if (std::isnan(lambda_db)) throw DomainError("threshold is NaN");
}

double AnalyticParams::beta() const {
    const double sq = std::sqrt(static_cast<double>(paths));
    return sq / (sq + assigned - 1);
}

double AnalyticParams::eta() const {
    const double sq = std::sqrt(static_cast<double>(paths));
    return assigned / (sq + assigned - 1);
}

double AnalyticParams::decay() const {
    const double sq = std::sqrt(static_cast<double>(paths));
    return sq / (sq - 1.0);
}

double AnalyticParams::lambda_bar() const {
    if (std::isinf(lambda_db)) return lambda_db > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    return numerics::db_to_linear(lambda_db) * antennas / tr_phi2();
}

double pdf_ybar(double y, const AnalyticParams& params) {
    params.validate();
    if (!(y >= 0.0)) throw DomainError("density argument must be >= 0");
    const int k = params.assigned - 1;
    const double beta = params.beta();
    const double eta = params.eta();
    // Because decay * (1 - eta) = beta, the bracket equals
    //   e^{-beta y} * P(N_A - 1, decay * eta * y),
    // which avoids the cancellation of the two exponentials near y = 0.
    const double lead = beta * std::pow(eta, -k);
    return lead * exp_neg(beta * y) * regularized_lower_gamma(k, params.decay() * eta * y);
}

double p_av_single_at(double lambda_bar, const AnalyticParams& params) {
    params.validate();
    if (!(lambda_bar >= 0.0)) throw DomainError("normalised threshold must be >= 0");
    if (std::isinf(lambda_bar)) return 1.0;
    const int n_a = params.assigned;
    const double beta = params.beta();
    const double eta = params.eta();
    const double c = params.decay();
    double sum = 0.0;
    for (int n = 0; n <= n_a - 2; ++n) {
        sum += std::pow(eta, n - n_a + 1) / std::tgamma(n + 1.0) *
               numerics::upper_incomplete_gamma_int(n + 1, c * lambda_bar);
    }
    const double p = 1.0 - std::pow(eta, -n_a + 1) * exp_neg(beta * lambda_bar) + (1.0 - eta) * sum;
    return std::clamp(p, 0.0, 1.0);
}

double p_av_single(const AnalyticParams& params) {
    params.validate();
    return p_av_single_at(params.lambda_bar(), params);
}

double p_av_multi(double p_sc, int n_c) {
    if (!(p_sc >= 0.0 && p_sc <= 1.0)) throw DomainError("availability must lie in [0, 1]");
    if (n_c < 1) throw DomainError("N_C must be >= 1");
    return 1.0 - std::pow(1.0 - p_sc, n_c);
}

double truncated_first_moment(double lambda_bar, const AnalyticParams& params) {
    params.validate();
    if (!(lambda_bar >= 0.0)) throw DomainError("normalised threshold must be >= 0");
    const int n_a = params.assigned;
    const double beta = params.beta();
    const double eta = params.eta();
    const double c = params.decay();
    const double e = exp_neg(beta * lambda_bar);
    const double head =
        std::pow(eta, -n_a + 1) * (-x_exp_neg(lambda_bar, beta) - e / beta + 1.0 / beta);
    // (n+1)! - Gamma(n+2, c L) is the lower incomplete gamma gamma(n+2, c L).
    double sum = 0.0;
    for (int n = 0; n <= n_a - 2; ++n) {
        const double lower = std::tgamma(n + 2.0) -
                             numerics::upper_incomplete_gamma_int(n + 2, c * lambda_bar);
        sum += std::pow(eta, n - n_a + 1) / std::tgamma(n + 1.0) * lower;
    }
    return head - (1.0 - eta) / c * sum;
}

double ra_interference_expectation(const AnalyticParams& params) {
    params.validate();
    if (params.ra_ues == 0) return 0.0;
    const double lambda_bar = params.lambda_bar();
    const double p_sc = p_av_single_at(lambda_bar, params);
    if (p_sc < kMinAvailability) {
        throw DegenerateThreshold("availability " + std::to_string(p_sc) +
                                  " is too small for a conditional interference estimate");
    }
    const double prefactor = params.tr_phi2() * params.ra_ues * params.rho_u /
                             (params.assigned * static_cast<double>(params.antennas) * p_sc);
    return prefactor * truncated_first_moment(lambda_bar, params);
}

double asymptotic_sinr_cb(const AnalyticParams& params) {
    params.validate();
    const double M = params.antennas;
    const double signal = params.rho_u / M * params.tr_phi() * params.tr_phi();
    const double intra = (params.assigned - 1) * params.rho_u * params.tr_phi2() / M;
    return signal / (1.0 + intra + ra_interference_expectation(params));
}

double zf_inverse_norm_mean(const AnalyticParams& params) {
    params.validate();
    if (params.paths <= params.assigned - 1) {
        throw DomainError("ZF needs Q > N_A - 1");
    }
    const double M = params.antennas;
    return M - M / params.paths * (params.assigned - 1);
}

double asymptotic_sinr_zf(const AnalyticParams& params) {
    return params.rho_u * zf_inverse_norm_mean(params) / (1.0 + ra_interference_expectation(params));
}

double asymptotic_rate(double gamma_bar) {
    if (!(gamma_bar >= 0.0)) throw DomainError("SINR must be >= 0");
    return std::log2(1.0 + gamma_bar);
}

double calibrate_lambda(const CalibrationTarget& target, const AnalyticParams& params) {
    params.validate();
    auto at = [&params](double lambda_db) {
        AnalyticParams p = params;
        p.lambda_db = lambda_db;
        return p;
    };
    if (const auto* avail = std::get_if<AvailabilityTarget>(&target)) {
        if (avail->channels < 1) throw InfeasibleTarget("N_C must be >= 1");
        auto residual = [&](double db) {
            return p_av_multi(p_av_single(at(db)), avail->channels) - avail->probability;
        };
        if (!(avail->probability > 0.0 && avail->probability < 1.0) ||
            residual(kCalibrationMinDb) > 0.0 || residual(kCalibrationMaxDb) < 0.0) {
            throw InfeasibleTarget("availability target " + std::to_string(avail->probability) +
                                   " is outside the reachable range");
        }
        return bisect_db(residual, kCalibrationMinDb, kCalibrationMaxDb);
    }
    const double budget = std::get<InterferenceBudget>(target).value;
    if (params.ra_ues == 0 || params.rho_u == 0.0) {
        throw InfeasibleTarget("no RA interference to budget (N_R = 0 or rho_u = 0)");
    }
    const double ceiling = params.ra_ues * params.rho_u * params.tr_phi2() / params.antennas;
    if (!(budget > 0.0 && budget < ceiling)) {
        throw InfeasibleTarget("interference budget must lie in (0, " + std::to_string(ceiling) + ")");
    }
    // The low end of the bracket must still leave a usable availability.
    double lo = kCalibrationMinDb;
    while (lo < kCalibrationMaxDb && p_av_single(at(lo)) < kMinAvailability) lo += 1.0;
    auto residual = [&](double db) { return ra_interference_expectation(at(db)) - budget; };
    if (residual(lo) > 0.0) {
        throw InfeasibleTarget("interference budget is below the smallest evaluable threshold");
    }
    if (residual(kCalibrationMaxDb) < 0.0) {
        throw InfeasibleTarget("interference budget exceeds the bracket ceiling");
    }
    return bisect_db(residual, lo, kCalibrationMaxDb);
}

EmpiricalAvailability::EmpiricalAvailability(std::vector<double> strengths_linear)
    : sorted_(std::move(strengths_linear)) {
    if (sorted_.empty()) throw DomainError("empirical availability needs at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalAvailability::p_single(double lambda_db) const {
    if (std::isinf(lambda_db)) return lambda_db > 0 ? 1.0 : 0.0;
    const double threshold = numerics::db_to_linear(lambda_db);
    // decide() is inclusive, so count samples <= threshold.
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), threshold);
    return static_cast<double>(it - sorted_.begin()) / sorted_.size();
}

double EmpiricalAvailability::p_multi(double lambda_db, int n_c) const {
    return p_av_multi(p_single(lambda_db), n_c);
}

double calibrate_lambda(const AvailabilityTarget& target, const EmpiricalAvailability& curve) {
    if (target.channels < 1) throw InfeasibleTarget("N_C must be >= 1");
    auto residual = [&](double db) { return curve.p_multi(db, target.channels) - target.probability; };
    if (!(target.probability > 0.0 && target.probability < 1.0) ||
        residual(kCalibrationMinDb) > 0.0 || residual(kCalibrationMaxDb) < 0.0) {
        throw InfeasibleTarget("availability target " + std::to_string(target.probability) +
                               " is outside the empirical curve's range");
    }
    return bisect_db(residual, kCalibrationMinDb, kCalibrationMaxDb);
}

}  // namespace vcsra::analytic
