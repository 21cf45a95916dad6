#pragma once

#include <cstddef>
#include <cstdint>

// Minimal discrete-event M/M/C oracle: Poisson arrivals, exponential
// service, FIFO dispatch to the earliest-free server. Kept separate from
// the full pipeline simulator so it can validate the analytic response law.

namespace evacsim::testing {

struct MmcDesResult {
    double mean_response = 0.0;   // sojourn time, same unit as 1/rate
    double waiting_fraction = 0.0;  // jobs with nonzero queueing delay
};

MmcDesResult simulate_mmc(double lambda, double mu, int servers,
                          std::size_t jobs, std::uint64_t seed,
                          std::size_t warmup = 50000);

}  // namespace evacsim::testing
