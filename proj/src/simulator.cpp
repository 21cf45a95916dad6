#include "evacsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "evacsim/delay_distribution.hpp"
#include "evacsim/kernels.hpp"
#include "evacsim/latency.hpp"
#include "evacsim/queueing.hpp"
#include "evacsim/scenario_io.hpp"

namespace evacsim {

namespace {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Inverse-CDF channel draw: uniform when s == 0, Zipf(s) otherwise.
class ChannelLaw {
public:
    ChannelLaw(int n_channels, double s) : n_(n_channels) {
        if (s > 0.0) {
            cumulative_.resize(static_cast<std::size_t>(n_));
            double acc = 0.0;
            for (int c = 1; c <= n_; ++c) {
                acc += std::pow(static_cast<double>(c), -s);
                cumulative_[static_cast<std::size_t>(c - 1)] = acc;
            }
            for (double& v : cumulative_) v /= acc;
        }
    }

    Channel draw(Rng& rng) const {
        if (cumulative_.empty())
            return static_cast<Channel>(rng.below(static_cast<std::uint64_t>(n_))) + 1;
        const double u = rng.uniform01();
        const auto it =
            std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return static_cast<Channel>(it - cumulative_.begin()) + 1;
    }

private:
    int n_;
    std::vector<double> cumulative_;
};

double max_hut(const HutProfile& profile) {
    double hi = 0.0;
    for (const auto& [hour, value] : profile.knots()) hi = std::max(hi, value);
    return hi;
}

struct ActiveJob {
    double zap_ms = 0.0;
    double arrive_ms = 0.0;
    double net1_ms = 0.0;
    std::uint64_t seq = 0;
    PuId pu = 0;
    Channel requested = 1;
};

struct Completion {
    double t_ms = 0.0;
    std::uint64_t seq = 0;
    double wait_ms = 0.0;
    double service_ms = 0.0;
    ActiveJob job;

    bool operator>(const Completion& other) const {
        if (t_ms != other.t_ms) return t_ms > other.t_ms;
        return seq > other.seq;
    }
};

}  // namespace

std::vector<ZappingEvent> generate_zapping_stream(const TrafficParams& traffic,
                                                  double duration_s,
                                                  std::uint64_t seed,
                                                  std::uint32_t pu_count,
                                                  double start_hour) {
    traffic.validate();
    if (duration_s <= 0.0) throw std::invalid_argument("duration must be > 0");
    std::vector<ZappingEvent> events;
    const double phi_max = max_hut(traffic.hut_profile);
    if (phi_max <= 0.0 || pu_count == 0 || traffic.tv_receivers <= 0.0)
        return events;

    // Thinning: candidates at the peak rate, accepted with phi(t)/phi_max.
    const double rate_max_per_ms =
        traffic.tv_receivers * phi_max / traffic.mean_holding_time_s / 1000.0;
    const double duration_ms = duration_s * 1000.0;
    const ChannelLaw channels(traffic.n_channels, traffic.channel_zipf_s);
    Rng rng(seed);
    double t = 0.0;
    while (true) {
        t += rng.exponential(rate_max_per_ms);
        if (t >= duration_ms) break;
        const double hour = start_hour + t / 3.6e6;
        if (rng.uniform01() * phi_max > traffic.hut_profile.value(hour)) continue;
        ZappingEvent ev;
        ev.t_ms = t;
        ev.pu_id = static_cast<PuId>(rng.below(pu_count));
        ev.requested = channels.draw(rng);
        events.push_back(ev);
    }
    return events;
}

SimReport run_simulation(const ScenarioParams& scn, double duration_s,
                         std::uint64_t seed, const RunOptions& opts) {
    scn.validate();
    if (duration_s <= 0.0) throw std::invalid_argument("duration must be > 0");

    SimReport report;
    report.seed = seed;
    report.config_digest = [&] {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(scenario_to_json(scn))));
        return std::string(buf);
    }();
    report.delta_max_ms = scn.protection.delta_max_ms;

    // Placement. Densities above the cap are scaled down; arrival rate and
    // service cost keep the configured scale (documented emulation rule).
    const double area = scn.spatial.area();
    const double cap_density = opts.max_placed_users / area;
    const double pu_density = std::min(scn.spatial.lambda_p, cap_density);
    const double su_density = std::min(scn.spatial.lambda_s, cap_density);
    const auto pu_points =
        sample_ppp(pu_density, scn.spatial, derive_seed(seed, 1));
    const auto su_points =
        sample_ppp(su_density, scn.spatial, derive_seed(seed, 2));

    InterferenceDb db(scn.spatial, scn.traffic.n_channels);
    for (std::size_t i = 0; i < pu_points.size(); ++i)
        db.add_pu(static_cast<PuId>(i), pu_points[i], std::nullopt);
    for (std::size_t i = 0; i < su_points.size(); ++i)
        db.add_su(static_cast<SuId>(i), su_points[i], std::nullopt);

    // Initial tuning: each PU watches a uniform channel with probability
    // phi(start); each SU picks a channel its interferers leave free.
    Rng tune_rng(derive_seed(seed, 3));
    const double phi0 = scn.traffic.hut_profile.value(scn.eval_hour);
    for (std::size_t i = 0; i < pu_points.size(); ++i) {
        const bool active = tune_rng.uniform01() < phi0;
        const auto channel =
            static_cast<Channel>(tune_rng.below(
                static_cast<std::uint64_t>(scn.traffic.n_channels))) + 1;
        if (active) db.set_pu_watched(static_cast<PuId>(i), channel);
    }
    for (std::size_t i = 0; i < su_points.size(); ++i) {
        const auto free = db.free_channels_for(static_cast<SuId>(i));
        if (free.empty()) continue;  // starts off-air
        db.retune_su(static_cast<SuId>(i),
                     free[tune_rng.below(free.size())]);
    }

    const auto zaps = generate_zapping_stream(
        scn.traffic, duration_s, derive_seed(seed, 4),
        static_cast<std::uint32_t>(pu_points.size()), scn.eval_hour);

    // One-way latency per leg is half the configured round trip.
    const double one_way_ms =
        0.5 * network_latency_mean(scn.distance_x_miles, scn.net);
    const double sigma = std::sqrt(scn.net.sigma2);
    Rng latency_rng(derive_seed(seed, 5));
    Rng service_rng(derive_seed(seed, 6));
    Rng evac_rng(derive_seed(seed, 7));

    auto draw_latency = [&](Rng& rng) {
        if (sigma == 0.0) return one_way_ms;
        const double draw = rng.normal(one_way_ms, sigma);
        if (draw < 0.0) {
            report.clamped_latency = true;
            return 0.0;
        }
        return draw;
    };

    // Arrival events at the spectrum manager, ordered by arrival time with
    // FIFO tie-breaking on the zap sequence.
    std::vector<ActiveJob> arrivals;
    arrivals.reserve(zaps.size());
    for (std::size_t i = 0; i < zaps.size(); ++i) {
        ActiveJob job;
        job.zap_ms = zaps[i].t_ms;
        job.net1_ms = draw_latency(latency_rng);
        job.arrive_ms = job.zap_ms + job.net1_ms;
        job.seq = i;
        job.pu = zaps[i].pu_id;
        job.requested = zaps[i].requested;
        arrivals.push_back(job);
    }
    std::sort(arrivals.begin(), arrivals.end(),
              [](const ActiveJob& a, const ActiveJob& b) {
                  if (a.arrive_ms != b.arrive_ms) return a.arrive_ms < b.arrive_ms;
                  return a.seq < b.seq;
              });

    const double exp_service_mean_ms =
        scn.service.law == ServiceTimeParams::Law::exponential
            ? scn.tau_ms() * expected_sus_in_guard_zone(scn.spatial)
            : 0.0;
    auto draw_service = [&](PuId pu) {
        if (scn.service.law == ServiceTimeParams::Law::exponential)
            return service_rng.exponential(1.0 / exp_service_mean_ms);
        const auto& guard = db.pu(pu).guard_sus;
        const double n = static_cast<double>(guard.size());
        double mean_m = 0.0;
        for (SuId su : guard)
            mean_m += static_cast<double>(db.su(su).interfered_pus.size());
        if (!guard.empty()) mean_m /= n;
        return sample_service_time(scn.service, scn.traffic.tv_receivers,
                                   scn.traffic.secondary_links, n, mean_m,
                                   service_rng);
    };

    const auto servers = static_cast<std::uint32_t>(scn.processors);
    std::uint32_t busy = 0;
    double busy_time_ms = 0.0;
    double makespan_ms = duration_s * 1000.0;
    std::priority_queue<Completion, std::vector<Completion>, std::greater<>>
        in_service;
    std::deque<ActiveJob> fifo;

    auto start_job = [&](const ActiveJob& job, double now_ms) {
        Completion c;
        c.job = job;
        c.wait_ms = now_ms - job.arrive_ms;
        c.service_ms = draw_service(job.pu);
        c.t_ms = now_ms + c.service_ms;
        c.seq = job.seq;
        ++busy;
        busy_time_ms += c.service_ms;
        report.queue_wait_samples_ms.push_back(c.wait_ms);
        in_service.push(c);
    };

    auto complete_job = [&](const Completion& c) {
        --busy;
        makespan_ms = std::max(makespan_ms, c.t_ms);
        ++report.jobs_processed;
        const auto affected = db.affected_sus(c.job.pu, c.job.requested);
        db.set_pu_watched(c.job.pu, c.job.requested);
        if (!affected.empty()) ++report.jobs_evacuating;
        for (SuId su : affected) {
            const auto free = db.free_channels_for(su);
            if (free.empty()) {
                db.retune_su(su, std::nullopt);
                ++report.sus_blocked;
            } else {
                db.retune_su(su, free[evac_rng.below(free.size())]);
            }
            ++report.sus_evacuated;
            const double net2 = draw_latency(evac_rng);
            const double hand = sample_handover_delay(scn.handover, evac_rng);
            const double t_e =
                c.job.net1_ms + c.wait_ms + c.service_ms + net2 + hand;
            report.evacuation_samples_ms.push_back(t_e);
            if (opts.record_breakdown)
                report.breakdown.push_back(
                    {c.job.net1_ms, c.wait_ms, c.service_ms, net2, hand});
        }
        if (!fifo.empty() && busy < servers) {
            const ActiveJob next = fifo.front();
            fifo.pop_front();
            start_job(next, c.t_ms);
        }
    };

    std::size_t next_arrival = 0;
    while (next_arrival < arrivals.size() || !in_service.empty()) {
        const bool completion_due =
            !in_service.empty() &&
            (next_arrival >= arrivals.size() ||
             in_service.top().t_ms <= arrivals[next_arrival].arrive_ms);
        if (completion_due) {
            const Completion c = in_service.top();
            in_service.pop();
            complete_job(c);
        } else {
            const ActiveJob& job = arrivals[next_arrival++];
            if (busy < servers) {
                start_job(job, job.arrive_ms);
            } else {
                fifo.push_back(job);
            }
        }
    }

    report.busy_fraction =
        busy_time_ms / (static_cast<double>(servers) * makespan_ms);
    if (!report.evacuation_samples_ms.empty()) {
        const auto& k = kernels::active();
        const std::size_t within =
            k.count_leq(report.evacuation_samples_ms.data(),
                        report.evacuation_samples_ms.size(), report.delta_max_ms);
        report.protection_probability =
            static_cast<double>(within) /
            static_cast<double>(report.evacuation_samples_ms.size());
    }
    return report;
}

SimReport SimReport::merge(std::vector<SimReport> parts) {
    if (parts.empty()) throw std::invalid_argument("no reports to merge");
    SimReport out;
    out.seed = parts.front().seed;
    out.config_digest = parts.front().config_digest;
    out.delta_max_ms = parts.front().delta_max_ms;
    double busy_weighted = 0.0;
    double weight = 0.0;
    for (auto& part : parts) {
        out.evacuation_samples_ms.insert(out.evacuation_samples_ms.end(),
                                         part.evacuation_samples_ms.begin(),
                                         part.evacuation_samples_ms.end());
        out.queue_wait_samples_ms.insert(out.queue_wait_samples_ms.end(),
                                         part.queue_wait_samples_ms.begin(),
                                         part.queue_wait_samples_ms.end());
        out.breakdown.insert(out.breakdown.end(), part.breakdown.begin(),
                             part.breakdown.end());
        out.jobs_processed += part.jobs_processed;
        out.jobs_evacuating += part.jobs_evacuating;
        out.sus_evacuated += part.sus_evacuated;
        out.sus_blocked += part.sus_blocked;
        out.clamped_latency |= part.clamped_latency;
        const double w = static_cast<double>(part.jobs_processed);
        busy_weighted += part.busy_fraction * w;
        weight += w;
    }
    if (weight > 0.0) out.busy_fraction = busy_weighted / weight;
    if (!out.evacuation_samples_ms.empty()) {
        const auto& k = kernels::active();
        const std::size_t within =
            k.count_leq(out.evacuation_samples_ms.data(),
                        out.evacuation_samples_ms.size(), out.delta_max_ms);
        out.protection_probability =
            static_cast<double>(within) /
            static_cast<double>(out.evacuation_samples_ms.size());
    }
    return out;
}

std::string SimReport::to_json() const {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return std::string(buf);
    };
    const bool has_samples = !evacuation_samples_ms.empty();
    DelayDistribution evac = has_samples
                                 ? DelayDistribution::from_samples(evacuation_samples_ms)
                                 : DelayDistribution::point_mass(0.0);
    double wait_mean = 0.0;
    if (!queue_wait_samples_ms.empty())
        wait_mean = kernels::active().sum(queue_wait_samples_ms.data(),
                                          queue_wait_samples_ms.size()) /
                    static_cast<double>(queue_wait_samples_ms.size());

    os << "{\n";
    os << "  \"busy_fraction\": " << num(busy_fraction) << ",\n";
    os << "  \"clamped_latency\": " << (clamped_latency ? "true" : "false") << ",\n";
    os << "  \"config_digest\": \"" << config_digest << "\",\n";
    os << "  \"delta_max_ms\": " << num(delta_max_ms) << ",\n";
    os << "  \"evacuation\": {\n";
    os << "    \"count\": " << evacuation_samples_ms.size() << ",\n";
    os << "    \"mean_ms\": " << num(has_samples ? evac.mean_ms() : 0.0) << ",\n";
    os << "    \"stddev_ms\": "
       << num(has_samples ? std::sqrt(evac.variance_ms2()) : 0.0) << ",\n";
    os << "    \"p50_ms\": " << num(has_samples ? evac.quantile(0.5) : 0.0) << ",\n";
    os << "    \"p95_ms\": " << num(has_samples ? evac.quantile(0.95) : 0.0) << ",\n";
    os << "    \"p99_ms\": " << num(has_samples ? evac.quantile(0.99) : 0.0) << ",\n";
    os << "    \"max_ms\": "
       << num(has_samples ? evac.samples().back() : 0.0) << "\n";
    os << "  },\n";
    os << "  \"jobs_evacuating\": " << jobs_evacuating << ",\n";
    os << "  \"jobs_processed\": " << jobs_processed << ",\n";
    os << "  \"protection_probability\": " << num(protection_probability) << ",\n";
    os << "  \"queue_wait_mean_ms\": " << num(wait_mean) << ",\n";
    os << "  \"seed\": " << seed << ",\n";
    os << "  \"sus_blocked\": " << sus_blocked << ",\n";
    os << "  \"sus_evacuated\": " << sus_evacuated << "\n";
    os << "}\n";
    return os.str();
}

void SimReport::write_samples_csv(std::ostream& os) const {
    os << "t_e_ms\n";
    char line[32];
    for (double s : evacuation_samples_ms) {
        std::snprintf(line, sizeof line, "%.6f\n", s);
        os << line;
    }
}

}  // namespace evacsim
