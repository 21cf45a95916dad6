#include "evacsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace evacsim {

namespace {
void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

void SpatialParams::validate() const {
    require(lambda_s >= 0.0, "spatial.lambda_s must be >= 0");
    require(lambda_p >= 0.0, "spatial.lambda_p must be >= 0");
    require(r_p > 0.0, "spatial.r_p must be > 0");
    require(region_width > 0.0 && region_height > 0.0,
            "spatial region dimensions must be > 0");
}

void ProtectionRequirement::validate() const {
    require(delta_max_ms > 0.0, "protection.delta_max must be > 0");
    require(o_max >= 0.0 && o_max <= 1.0, "protection.o_max must lie in [0,1]");
}

HutProfile HutProfile::constant(double value) {
    require(value >= 0.0 && value <= 1.0, "hut value must lie in [0,1]");
    return HutProfile({{0.0, value}});
}

HutProfile HutProfile::piecewise_linear(
    std::vector<std::pair<double, double>> knots) {
    require(!knots.empty(), "hut profile needs at least one knot");
    std::sort(knots.begin(), knots.end());
    for (const auto& [hour, value] : knots) {
        require(hour >= 0.0 && hour < 24.0, "hut knot hour must lie in [0,24)");
        require(value >= 0.0 && value <= 1.0, "hut knot value must lie in [0,1]");
    }
    for (std::size_t i = 1; i < knots.size(); ++i)
        require(knots[i].first != knots[i - 1].first, "duplicate hut knot hour");
    return HutProfile(std::move(knots));
}

double HutProfile::value(double hour_of_day) const {
    const double h = hour_of_day - 24.0 * std::floor(hour_of_day / 24.0);
    if (knots_.size() == 1) return knots_.front().second;
    // Periodic piecewise-linear interpolation over the 24 h cycle.
    auto it = std::upper_bound(knots_.begin(), knots_.end(),
                               std::make_pair(h, std::numeric_limits<double>::max()));
    const auto& next = (it == knots_.end()) ? knots_.front() : *it;
    const auto& prev = (it == knots_.begin()) ? knots_.back() : *(it - 1);
    double span = next.first - prev.first;
    double offset = h - prev.first;
    if (span <= 0.0) span += 24.0;      // wrap across midnight
    if (offset < 0.0) offset += 24.0;
    return prev.second + (next.second - prev.second) * (offset / span);
}

void TrafficParams::validate() const {
    require(tv_receivers >= 0.0, "traffic.M must be >= 0");
    require(secondary_links >= 1.0, "traffic.N must be >= 1");
    require(mean_holding_time_s > 0.0, "traffic.E_B must be > 0");
    require(n_channels >= 1, "traffic.n_channels must be >= 1");
    require(p_evac >= 0.0 && p_evac <= 1.0, "traffic.p_evac must lie in [0,1]");
    require(ota_rate >= 0.0 && ota_rate <= 1.0, "traffic.ota_rate must lie in [0,1]");
}

void DbParams::validate() const {
    require(query_ms >= 0.0, "db.query_ms must be >= 0");
    require(records_per_job >= 0.0, "db.records_per_job must be >= 0");
}

void ScenarioParams::validate() const {
    spatial.validate();
    traffic.validate();
    protection.validate();
    net.validate();
    handover.validate();
    service.validate();
    db.validate();
    require(processors >= 1, "scenario.processors must be >= 1");
    require(distance_x_miles >= 0.0, "scenario.distance_x must be >= 0");
    require(eval_hour >= 0.0 && eval_hour < 24.0,
            "scenario.eval_hour must lie in [0,24)");
}

double ScenarioParams::sm_response_simple_ms() const {
    if (db.has_override()) return db.response_override_ms;
    return db.query_ms * db.records_per_job * traffic.p_evac;
}

double ScenarioParams::tau_ms() const {
    if (service.tau_ms > 0.0) return service.tau_ms;
    const double expected_n = expected_sus_in_guard_zone(spatial);
    if (expected_n <= 0.0)
        throw std::domain_error("cannot derive tau: expected guard-zone SU count is 0");
    return sm_response_simple_ms() / expected_n;
}

double expected_sus_in_guard_zone(const SpatialParams& spatial) {
    spatial.validate();
    return spatial.lambda_s * std::numbers::pi * spatial.r_p * spatial.r_p;
}

namespace {
// Poisson PMF evaluated in the log domain; exact enough over the whole
// range used here (mean up to ~1e4 in tests).
double poisson_pmf(std::int64_t k, double mean) {
    if (k < 0) throw std::domain_error("count k must be >= 0");
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}
}  // namespace

double pmf_sus_in_guard_zone(std::int64_t k, const SpatialParams& spatial) {
    return poisson_pmf(k, expected_sus_in_guard_zone(spatial));
}

double pmf_pus_in_range(std::int64_t k, const SpatialParams& spatial) {
    spatial.validate();
    const double mean =
        spatial.lambda_p * std::numbers::pi * spatial.r_p * spatial.r_p;
    return poisson_pmf(k, mean);
}

std::vector<Point2D> sample_ppp(double density, const SpatialParams& region,
                                std::uint64_t seed) {
    if (density < 0.0) throw std::invalid_argument("ppp density must be >= 0");
    region.validate();
    Rng rng(seed);
    const std::uint64_t count = rng.poisson(density * region.area());
    std::vector<Point2D> points;
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, region.region_width);
        const double y = rng.uniform(0.0, region.region_height);
        points.push_back({x, y});
    }
    return points;
}

double torus_distance(const Point2D& a, const Point2D& b,
                      const SpatialParams& region) {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    dx = std::min(dx, region.region_width - dx);
    dy = std::min(dy, region.region_height - dy);
    return std::hypot(dx, dy);
}

}  // namespace evacsim
