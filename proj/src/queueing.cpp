#include "evacsim/queueing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace evacsim {

namespace {

double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// (1 - e^{-x}) / x, the stable bridge between distinct-rate and equal-rate
// hypoexponential formulas.
double expm1_ratio(double x) {
    if (x == 0.0) return 1.0;
    return -std::expm1(-x) / x;
}

void check_domain(int servers, double rho) {
    if (servers < 1) throw std::invalid_argument("server count C must be >= 1");
    if (rho < 0.0) throw std::domain_error("offered load rho must be >= 0");
    if (rho >= static_cast<double>(servers))
        throw UnstableQueueError("offered load rho >= C: queue is unstable");
}

}  // namespace

void QueueModel::validate() const {
    if (lambda_per_s < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (mu_per_s <= 0.0) throw std::invalid_argument("mu must be > 0");
    if (servers < 1) throw std::invalid_argument("server count C must be >= 1");
}

double erlang_c_log(int servers, double rho) {
    check_domain(servers, rho);
    if (rho == 0.0) return -std::numeric_limits<double>::infinity();
    // Erlang-B recurrence B(k) = rho*B(k-1) / (k + rho*B(k-1)) in the log
    // domain, then the C conversion. B stays in (0,1], so only the log form
    // survives large C without underflow hurting the conversion.
    const double log_rho = std::log(rho);
    double log_b = 0.0;
    for (int k = 1; k <= servers; ++k) {
        const double t = log_rho + log_b;
        log_b = t - logaddexp(std::log(static_cast<double>(k)), t);
    }
    const double one_minus_b = -std::expm1(log_b);
    return log_b - std::log1p(-(rho / static_cast<double>(servers)) * one_minus_b);
}

double erlang_c(int servers, double rho) {
    return std::exp(erlang_c_log(servers, rho));
}

double arrival_rate(const TrafficParams& traffic, double hour_of_day) {
    traffic.validate();
    return traffic.tv_receivers * traffic.hut_profile.value(hour_of_day) /
           traffic.mean_holding_time_s;
}

double service_rate(double tau_ms, const SpatialParams& spatial) {
    const double expected_n = expected_sus_in_guard_zone(spatial);
    if (tau_ms <= 0.0 || expected_n <= 0.0)
        throw std::domain_error("service rate needs tau > 0 and lambda_s > 0");
    return 1000.0 / (tau_ms * expected_n);  // jobs/s, tau in ms
}

double service_rate(const ServiceTimeParams& service, const SpatialParams& spatial) {
    return service_rate(service.tau_ms, spatial);
}

ResponseTimeLaw response_time_law(const QueueModel& q) {
    q.validate();
    const double rho = q.rho();
    check_domain(q.servers, rho);
    ResponseTimeLaw law;
    law.p_wait = erlang_c(q.servers, rho);
    law.mu_per_ms = q.mu_per_s / 1000.0;
    law.drain_rate_per_ms =
        (q.mu_per_s * static_cast<double>(q.servers) - q.lambda_per_s) / 1000.0;
    return law;
}

double ResponseTimeLaw::variance_ms2() const {
    const double mu = mu_per_ms;
    const double d = drain_rate_per_ms;
    const double m2 = 2.0 / (mu * mu) + p_wait * (2.0 / (d * d) + 2.0 / (d * mu));
    const double m1 = mean_ms();
    return m2 - m1 * m1;
}

double ResponseTimeLaw::pdf(double t_ms) const {
    if (t_ms < 0.0) return 0.0;
    const double mu = mu_per_ms;
    const double d = drain_rate_per_ms;
    const double service = mu * std::exp(-mu * t_ms);
    const double delta = d - mu;
    const double hypo =
        d * mu * std::exp(-mu * t_ms) * t_ms * expm1_ratio(delta * t_ms);
    return (1.0 - p_wait) * service + p_wait * hypo;
}

double ResponseTimeLaw::cdf(double t_ms) const {
    if (t_ms <= 0.0) return 0.0;
    const double mu = mu_per_ms;
    const double d = drain_rate_per_ms;
    const double service = -std::expm1(-mu * t_ms);
    const double delta = d - mu;
    const double hypo =
        1.0 - std::exp(-mu * t_ms) * (1.0 + mu * t_ms * expm1_ratio(delta * t_ms));
    return (1.0 - p_wait) * service + p_wait * hypo;
}

double sample_response_time(const ResponseTimeLaw& law, Rng& rng) {
    const bool waits = rng.uniform01() < law.p_wait;
    double t = rng.exponential(law.mu_per_ms);
    if (waits) t += rng.exponential(law.drain_rate_per_ms);
    return t;
}

}  // namespace evacsim
