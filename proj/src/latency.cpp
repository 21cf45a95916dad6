#include "evacsim/latency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evacsim {

namespace {
void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

void NetworkParams::validate() const {
    require(sigma2 >= 0.0, "net.sigma2 must be >= 0");
    require(b_ms >= 0.0, "net.b must be >= 0");
}

void HandoverParams::validate() const {
    require(f_ms >= 0.0, "handover.f must be >= 0");
    require(frame_ms >= 0.0, "handover.l_f must be >= 0");
}

void ServiceTimeParams::validate() const {
    require(g_ms >= 0.0, "service.g must be >= 0");
    require(h_ms >= 0.0, "service.h must be >= 0");
    require(l_mean_ms >= 0.0, "service.l_mean must be >= 0");
    require(l_var >= 0.0, "service.l_var must be >= 0");
    require(tau_ms >= 0.0, "service.tau must be >= 0");
}

double network_latency_mean(double x_miles, const NetworkParams& net) {
    if (x_miles < 0.0) throw std::invalid_argument("distance must be >= 0");
    net.validate();
    if (net.has_override()) return net.rtt_override_ms;
    return net.a_ms_per_mile * x_miles + net.b_ms;
}

double sample_gaussian_latency(double mean_ms, double sigma2, Rng& rng) {
    if (sigma2 == 0.0) return std::max(mean_ms, 0.0);
    return std::max(0.0, rng.normal(mean_ms, std::sqrt(sigma2)));
}

double sample_network_latency(double x_miles, const NetworkParams& net, Rng& rng) {
    return sample_gaussian_latency(network_latency_mean(x_miles, net), net.sigma2, rng);
}

double sample_handover_delay(const HandoverParams& handover, Rng& rng) {
    handover.validate();
    if (handover.frame_ms == 0.0) return handover.f_ms;
    return handover.f_ms + rng.uniform(0.0, handover.frame_ms);
}

double sample_service_time(const ServiceTimeParams& service, double tv_receivers,
                           double secondary_links, double sus_in_guard,
                           double pus_in_range, Rng& rng) {
    if (tv_receivers < 0.0 || secondary_links < 0.0 || sus_in_guard < 0.0 ||
        pus_in_range < 0.0)
        throw std::invalid_argument("service-time counts must be >= 0");
    const double fixed = service.g_ms * (tv_receivers + secondary_links) +
                         service.g_ms * tv_receivers * sus_in_guard +
                         service.h_ms * pus_in_range * sus_in_guard;
    double jitter = service.l_mean_ms;
    if (service.l_var > 0.0)
        jitter = rng.normal(service.l_mean_ms, std::sqrt(service.l_var));
    return std::max(0.0, fixed + jitter);
}

double estimate_sm_response_simple(double per_query_ms, double records_touched,
                                   double p_evac) {
    if (per_query_ms < 0.0 || records_touched < 0.0 || p_evac < 0.0)
        throw std::invalid_argument("response estimate factors must be >= 0");
    return per_query_ms * records_touched * p_evac;
}

}  // namespace evacsim
