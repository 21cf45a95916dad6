#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "evacsim/interference_db.hpp"
#include "evacsim/model.hpp"

namespace evacsim {

// One zapping event: a TV receiver tuning to a requested channel at a
// given simulation time.
struct ZappingEvent {
    double t_ms = 0.0;
    PuId pu_id = 0;
    Channel requested = 1;
};

// Per-run statistics of a simulation (or a merge of replications).
struct SimReport {
    std::vector<double> evacuation_samples_ms;
    std::vector<double> queue_wait_samples_ms;
    std::uint64_t jobs_processed = 0;
    std::uint64_t jobs_evacuating = 0;  // jobs that interrupted at least one SU
    std::uint64_t sus_evacuated = 0;
    std::uint64_t sus_blocked = 0;      // evacuated SUs with no free channel
    double busy_fraction = 0.0;         // mean busy servers / C
    double protection_probability = 0.0;  // fraction of samples <= delta_max
    double delta_max_ms = 0.0;
    bool clamped_latency = false;       // any Gaussian draw hit the zero clamp
    std::uint64_t seed = 0;
    std::string config_digest;

    // Optional per-sample decomposition (RunOptions::record_breakdown):
    // t_E = net1 + wait + service + net2 + handover.
    struct Breakdown {
        double net1, wait, service, net2, handover;
    };
    std::vector<Breakdown> breakdown;

    /// Order-independent merge of replications with distinct seeds.
    static SimReport merge(std::vector<SimReport> parts);

    /// Deterministic JSON serialization (summary statistics, not raw samples).
    std::string to_json() const;
    /// One evacuation-delay sample per line.
    void write_samples_csv(std::ostream& os) const;
};

struct RunOptions {
    bool record_breakdown = false;
    // Placement cap: expected PU/SU counts above this are scaled down while
    // arrival rate and service cost keep the configured scale.
    double max_placed_users = 1e5;
};

/// Poisson zapping stream over [0, duration): rate M*phi(t)/E(B) with phi
/// evaluated at start_hour plus elapsed time, primary user drawn uniformly
/// from pu_count placed receivers, channel from the popularity law
/// (uniform over n_channels). Nondecreasing timestamps; deterministic per seed.
std::vector<ZappingEvent> generate_zapping_stream(const TrafficParams& traffic,
                                                  double duration_s,
                                                  std::uint64_t seed,
                                                  std::uint32_t pu_count,
                                                  double start_hour);

/// Seeded discrete-event run of the full pipeline: zapping stream ->
/// network leg -> FIFO C-server queue with general service times ->
/// interference-database lookup -> per-SU command leg + handover.
/// Arrivals stop at `duration_s`; in-flight jobs drain before the report
/// is produced. Deterministic for a fixed (scenario, duration, seed).
SimReport run_simulation(const ScenarioParams& scn, double duration_s,
                         std::uint64_t seed, const RunOptions& opts = {});

}  // namespace evacsim
