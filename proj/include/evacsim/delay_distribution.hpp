#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <variant>
#include <vector>

#include "evacsim/model.hpp"
#include "evacsim/queueing.hpp"
#include "evacsim/rng.hpp"

namespace evacsim {

/// Thrown when more than 1e-6 of the probability mass of a composition
/// falls beyond the grid's upper bound.
class GridOverflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Uniform discretization of [0, step*cells) into cells of width step.
struct GridSpec {
    double step_ms = 0.05;
    std::size_t cells = 200000;

    double bound_ms() const { return step_ms * static_cast<double>(cells); }

    /// Default composition grid: 0.05 ms steps up to
    /// max(10 s, 20 x the analytic mean of the sum).
    static GridSpec for_mean(double mean_sum_ms);
};

// A nonnegative one-dimensional delay law. Three representations:
// closed-form families (point mass, zero-clamped Gaussian, uniform,
// exponential, M/M/C response mixture), a discretized PDF on a uniform
// grid, or raw empirical samples.
class DelayDistribution {
public:
    enum class Representation { analytic, grid_pdf, empirical };

    static DelayDistribution point_mass(double value_ms);
    static DelayDistribution gaussian(double mean_ms, double variance_ms2);
    static DelayDistribution uniform(double lo_ms, double hi_ms);
    static DelayDistribution exponential(double rate_per_ms);
    static DelayDistribution mmc_response(const ResponseTimeLaw& law);
    static DelayDistribution from_grid(double step_ms, std::vector<double> density);
    static DelayDistribution from_samples(std::vector<double> samples_ms);

    Representation representation() const { return repr_; }

    double mean_ms() const { return mean_; }
    double variance_ms2() const { return variance_; }

    double cdf(double t_ms) const;
    /// Inverse CDF; q must lie in (0, 1).
    double quantile(double q) const;
    double sample(Rng& rng) const;

    // Cell masses of this law on a grid; cells outside [offset,
    // offset+mass.size()) are exactly zero. Mass below t=0 is folded into
    // the first cell (matching the samplers' clamp); "lost" is the mass
    // beyond the grid bound.
    struct CellMass {
        std::size_t offset = 0;
        std::vector<double> mass;
        double lost = 0.0;
    };
    CellMass discretize(const GridSpec& grid) const;

    // grid_pdf accessors
    double grid_step_ms() const;
    const std::vector<double>& grid_density() const;

    // empirical accessor (sorted)
    const std::vector<double>& samples() const;

    /// Two-column CSV: time_ms,density or time_ms,cumulative.
    void write_csv(std::ostream& os, bool cumulative) const;

private:
    struct PointMass { double value; };
    struct Gaussian  { double mean; double sigma; };
    struct Uniform   { double lo; double hi; };
    struct Exponential { double rate; };
    using Analytic = std::variant<PointMass, Gaussian, Uniform, Exponential,
                                  ResponseTimeLaw>;

    DelayDistribution() = default;
    void cache_moments();

    Representation repr_ = Representation::analytic;
    Analytic analytic_{PointMass{0.0}};
    double grid_step_ = 0.0;
    std::vector<double> grid_density_;
    std::vector<double> grid_cumulative_;  // mass CDF at cell right edges
    std::vector<double> samples_;          // sorted
    double mean_ = 0.0;
    double variance_ = 0.0;
};

/// Distribution of the independent sum net + sm + handover, computed by
/// discretized convolution on a common grid (exact when all three are
/// point masses). Throws GridOverflowError when mass beyond the grid
/// bound exceeds 1e-6.
DelayDistribution compose_evacuation_delay(const DelayDistribution& net,
                                           const DelayDistribution& sm,
                                           const DelayDistribution& handover);
DelayDistribution compose_evacuation_delay(const DelayDistribution& net,
                                           const DelayDistribution& sm,
                                           const DelayDistribution& handover,
                                           const GridSpec& grid);

/// Grid sized from the component laws' tails (at least the default bound,
/// at most 4e6 cells); composition on it never overflows for laws whose
/// 1-1e-9 quantiles fit.
GridSpec grid_covering(const DelayDistribution& a, const DelayDistribution& b,
                       const DelayDistribution& c);

/// Pr(delay <= delta_max): the CDF of d at the deadline.
double protection_probability(const DelayDistribution& d,
                              const ProtectionRequirement& req);

/// Inverse CDF of d at q in (0, 1).
double delay_percentile(const DelayDistribution& d, double q);

enum class EvalMode { simple, queueing };

// Per-scenario component laws. Network and spectrum-manager terms follow
// the scenario's quoted round trip: the composition spends it once.
DelayDistribution network_delay_law(const ScenarioParams& scn);
DelayDistribution sm_response_delay_law(const ScenarioParams& scn, EvalMode mode);
DelayDistribution handover_delay_law(const ScenarioParams& scn);

/// Mean total evacuation delay. simple mode reproduces the quoted-figure
/// arithmetic (network mean + simple SM response + handover mean);
/// queueing mode substitutes the M/M/C response-time mean and throws
/// UnstableQueueError under overload.
double mean_evacuation_delay(const ScenarioParams& scn, EvalMode mode);

}  // namespace evacsim
