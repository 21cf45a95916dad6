#pragma once

#include "evacsim/rng.hpp"

namespace evacsim {

// Linear-plus-Gaussian network latency: mean a*x + b over distance x in
// miles, additive noise with variance sigma2 (ms^2). Scenario files that
// quote a measured round trip set rtt_override_ms instead; the mean is then
// that value regardless of distance. rtt_alt_ms carries an alternate quoted
// figure for the same link (informational only).
struct NetworkParams {
    double a_ms_per_mile = 0.022;
    double b_ms = 4.862;
    double sigma2 = 0.907;          // ms^2
    double rtt_override_ms = -1.0;  // >=0: overrides the linear mean
    double rtt_alt_ms = -1.0;       // informational alternate value

    bool has_override() const { return rtt_override_ms >= 0.0; }
    void validate() const;
    bool operator==(const NetworkParams&) const = default;
};

// Handover delay of a secondary link: fixed overhead f plus a uniform wait
// in [0, l_f] for the next frame boundary.
struct HandoverParams {
    double f_ms = 20.0;
    double frame_ms = 20.0;  // l_f

    double mean_ms() const { return f_ms + 0.5 * frame_ms; }
    void validate() const;
    bool operator==(const HandoverParams&) const = default;
};

// Spectrum-manager job cost model: g per database record searched, h per
// primary-user channel lookup, plus OS jitter l. Jitter is deterministic
// (l_mean) unless l_var > 0, in which case it is Gaussian with those
// moments, floored at zero.
struct ServiceTimeParams {
    double g_ms = 0.0;
    double h_ms = 0.0;
    double l_mean_ms = 0.0;
    double l_var = 0.0;
    double tau_ms = 0.0;  // per-SU mean service coefficient; 0 = derive from scenario

    // exponential: replace the general law with Exp(mean tau * E(n)),
    // matching the analytic queueing approximation. Used for validation runs.
    enum class Law { general, exponential };
    Law law = Law::general;

    void validate() const;
    bool operator==(const ServiceTimeParams&) const = default;
};

/// Mean one-direction latency for distance x (miles): a*x + b, or the
/// configured override. Rejects negative x.
double network_latency_mean(double x_miles, const NetworkParams& net);

/// Gaussian latency draw around an arbitrary mean, clamped at zero.
double sample_gaussian_latency(double mean_ms, double sigma2, Rng& rng);

/// Draw from the network latency law at distance x.
double sample_network_latency(double x_miles, const NetworkParams& net, Rng& rng);

/// Uniform draw on [f, f + l_f].
double sample_handover_delay(const HandoverParams& handover, Rng& rng);

/// General service-time draw: g*(M+N) + g*M*n + h*m*n + jitter, floored at 0.
/// m may be fractional (mean interfering-PU count over the affected SUs).
double sample_service_time(const ServiceTimeParams& service, double tv_receivers,
                           double secondary_links, double sus_in_guard,
                           double pus_in_range, Rng& rng);

/// The back-of-envelope spectrum-manager response estimate:
/// per-query time x records touched x evacuation probability.
double estimate_sm_response_simple(double per_query_ms, double records_touched,
                                   double p_evac);

}  // namespace evacsim
