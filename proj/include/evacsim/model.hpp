#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evacsim/latency.hpp"
#include "evacsim/rng.hpp"

namespace evacsim {

struct Point2D {
    double x = 0.0;  // m
    double y = 0.0;  // m
};

// Spatial layout of primary (TV receiver) and secondary users. Densities
// are per square metre; the guard zone is a disk of radius r_p around each
// primary user. The region is treated as a flat torus so guard-zone
// statistics are free of edge effects at desk scale.
struct SpatialParams {
    double lambda_s = 0.0;       // secondary-user density, users/m^2
    double lambda_p = 0.0;       // primary-user density, users/m^2
    double r_p = 130.0;          // guard-zone radius, m
    double region_width = 2000.0;   // m
    double region_height = 2000.0;  // m

    double area() const { return region_width * region_height; }
    void validate() const;
    bool operator==(const SpatialParams&) const = default;
};

// Real-time protection constraint: Pr(evacuation delay <= delta_max) >= o_max.
struct ProtectionRequirement {
    double delta_max_ms = 200.0;
    double o_max = 0.95;

    void validate() const;
    bool operator==(const ProtectionRequirement&) const = default;
};

// Fraction of TV receivers active as a function of local time of day
// (hours in [0, 24)). Either a constant or a periodic piecewise-linear
// curve through (hour, value) knots. Evaluation is pure.
class HutProfile {
public:
    HutProfile() : HutProfile(diurnal()) {}

    static HutProfile constant(double value);
    static HutProfile piecewise_linear(std::vector<std::pair<double, double>> knots);
    /// Default diurnal curve: 5% at 04:00 rising to 60% at 20:00.
    static HutProfile diurnal() {
        return piecewise_linear({{4.0, 0.05}, {20.0, 0.60}});
    }

    double value(double hour_of_day) const;

    bool is_constant() const { return knots_.size() == 1; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    bool operator==(const HutProfile&) const = default;

private:
    explicit HutProfile(std::vector<std::pair<double, double>> knots)
        : knots_(std::move(knots)) {}

    std::vector<std::pair<double, double>> knots_;  // sorted by hour
};

struct TrafficParams {
    double tv_receivers = 0.0;       // M, registered TV receivers
    double secondary_links = 1.0;    // N, registered secondary links
    double mean_holding_time_s = 600.0;  // E(B); placeholder default, see README
    HutProfile hut_profile;
    int n_channels = 20;
    double p_evac = 0.1;             // probability a processed job evacuates SUs
    double ota_rate = 0.14;          // informational: OTA ownership already folded into M
    double channel_zipf_s = 0.0;     // zapping-target popularity; 0 = uniform

    void validate() const;
    bool operator==(const TrafficParams&) const = default;
};

struct DbParams {
    double query_ms = 6.0;            // per-query database response time
    double records_per_job = 200.0;   // records touched by an evacuating job
    double response_override_ms = -1.0;  // >=0: use directly as SM response

    bool has_override() const { return response_override_ms >= 0.0; }
    void validate() const;
    bool operator==(const DbParams&) const = default;
};

// Everything needed to evaluate one spectrum-manager architecture.
struct ScenarioParams {
    std::string name;
    SpatialParams spatial;
    TrafficParams traffic;
    ProtectionRequirement protection;
    int processors = 1;              // C
    NetworkParams net;
    HandoverParams handover;
    ServiceTimeParams service;
    DbParams db;
    double distance_x_miles = 0.0;   // user <-> spectrum manager distance
    double eval_hour = 20.0;         // time of day used by analytics / sim start
    bool report_evacuation_interval = false;  // table rows print [lo, hi]

    void validate() const;

    /// Simple-mode spectrum-manager response: the database override when
    /// present, otherwise query time x records x evacuation probability.
    double sm_response_simple_ms() const;

    /// Mean per-job service time used by the queueing approximation;
    /// service.tau_ms when set, otherwise derived so that
    /// tau * E(n) equals the simple-mode response.
    double tau_ms() const;

    bool operator==(const ScenarioParams&) const = default;
};

// --- Spatial Poisson model -------------------------------------------------

/// E(n) = lambda_s * pi * r_p^2, the mean secondary-user count in a guard zone.
double expected_sus_in_guard_zone(const SpatialParams& spatial);

/// Poisson PMF of the secondary-user count in a guard zone.
double pmf_sus_in_guard_zone(std::int64_t k, const SpatialParams& spatial);

/// Poisson PMF of the primary-user count within range of a secondary station.
double pmf_pus_in_range(std::int64_t k, const SpatialParams& spatial);

/// Homogeneous Poisson point process over the region: count ~
/// Poisson(density * area), positions i.i.d. uniform. Deterministic per seed.
std::vector<Point2D> sample_ppp(double density, const SpatialParams& region,
                                std::uint64_t seed);

/// Torus (wrap-around) distance between two points of the region.
double torus_distance(const Point2D& a, const Point2D& b, const SpatialParams& region);

}  // namespace evacsim
