#include "support/mmc_des.hpp"

#include <algorithm>
#include <queue>
#include <vector>

#include "evacsim/rng.hpp"

namespace evacsim::testing {

MmcDesResult simulate_mmc(double lambda, double mu, int servers,
                          std::size_t jobs, std::uint64_t seed,
                          std::size_t warmup) {
    Rng rng(seed);
    std::priority_queue<double, std::vector<double>, std::greater<>> free_at;
    for (int s = 0; s < servers; ++s) free_at.push(0.0);

    double t_arrive = 0.0;
    double response_sum = 0.0;
    std::size_t waited = 0;
    for (std::size_t i = 0; i < warmup + jobs; ++i) {
        t_arrive += rng.exponential(lambda);
        const double earliest = free_at.top();
        free_at.pop();
        const double start = std::max(t_arrive, earliest);
        const double done = start + rng.exponential(mu);
        free_at.push(done);
        if (i >= warmup) {
            response_sum += done - t_arrive;
            waited += start > t_arrive;
        }
    }
    MmcDesResult out;
    out.mean_response = response_sum / static_cast<double>(jobs);
    out.waiting_fraction = static_cast<double>(waited) / static_cast<double>(jobs);
    return out;
}

}  // namespace evacsim::testing
