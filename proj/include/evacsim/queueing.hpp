#pragma once

#include <stdexcept>

#include "evacsim/model.hpp"
#include "evacsim/rng.hpp"

namespace evacsim {

/// Thrown by analytic operations when the offered load reaches or exceeds
/// the server capacity (rho >= C). Only the simulator can explore overload.
class UnstableQueueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// M/M/C model of one spectrum manager. Rates are jobs per second.
struct QueueModel {
    double lambda_per_s = 0.0;
    double mu_per_s = 0.0;
    int servers = 1;  // C

    double rho() const { return lambda_per_s / mu_per_s; }
    void validate() const;
};

// Time-domain response-time law of the M/M/C queue: with probability
// (1 - p_wait) an Exponential(mu) service, with probability p_wait the sum
// of an Exponential(drain_rate) wait and an Exponential(mu) service, where
// drain_rate = mu*C - lambda. Rates are per millisecond.
struct ResponseTimeLaw {
    double p_wait = 0.0;
    double drain_rate_per_ms = 0.0;
    double mu_per_ms = 0.0;

    double mean_ms() const { return 1.0 / mu_per_ms + p_wait / drain_rate_per_ms; }
    double variance_ms2() const;
    double pdf(double t_ms) const;
    double cdf(double t_ms) const;
};

/// Waiting probability of an M/M/C queue (Erlang C). Computed through the
/// log-domain Erlang-B recurrence, so it stays finite and accurate up to
/// C ~ 1e6 where the factorial form overflows. Requires 0 <= rho < C.
double erlang_c(int servers, double rho);

/// log of erlang_c; finite even where the probability underflows.
double erlang_c_log(int servers, double rho);

/// Zapping-message arrival rate M * phi(t) / E(B), jobs per second.
double arrival_rate(const TrafficParams& traffic, double hour_of_day);

/// Spectrum-manager service rate 1 / (tau * lambda_s * pi * r_p^2),
/// jobs per second (tau in ms).
double service_rate(const ServiceTimeParams& service, const SpatialParams& spatial);
double service_rate(double tau_ms, const SpatialParams& spatial);

/// Response-time distribution of the queue. Throws UnstableQueueError
/// when rho >= C.
ResponseTimeLaw response_time_law(const QueueModel& q);

/// Draw from the response-time law (ms).
double sample_response_time(const ResponseTimeLaw& law, Rng& rng);

}  // namespace evacsim
