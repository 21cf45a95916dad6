#include "evacsim/delay_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "evacsim/kernels.hpp"

namespace evacsim {

namespace {

constexpr double kLostMassTolerance = 1e-6;
constexpr double kWindowTail = 1e-13;  // per-component discretization tail

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

GridSpec GridSpec::for_mean(double mean_sum_ms) {
    GridSpec grid;
    const double bound = std::max(10000.0, 20.0 * mean_sum_ms);
    grid.cells = static_cast<std::size_t>(std::ceil(bound / grid.step_ms));
    return grid;
}

// --- factories --------------------------------------------------------------

DelayDistribution DelayDistribution::point_mass(double value_ms) {
    if (value_ms < 0.0) throw std::invalid_argument("delay point mass must be >= 0");
    DelayDistribution d;
    d.analytic_ = PointMass{value_ms};
    d.cache_moments();
    return d;
}

DelayDistribution DelayDistribution::gaussian(double mean_ms, double variance_ms2) {
    if (variance_ms2 < 0.0) throw std::invalid_argument("variance must be >= 0");
    if (variance_ms2 == 0.0) return point_mass(std::max(mean_ms, 0.0));
    DelayDistribution d;
    d.analytic_ = Gaussian{mean_ms, std::sqrt(variance_ms2)};
    d.cache_moments();
    return d;
}

DelayDistribution DelayDistribution::uniform(double lo_ms, double hi_ms) {
    if (lo_ms < 0.0 || hi_ms < lo_ms)
        throw std::invalid_argument("uniform law needs 0 <= lo <= hi");
    if (lo_ms == hi_ms) return point_mass(lo_ms);
    DelayDistribution d;
    d.analytic_ = Uniform{lo_ms, hi_ms};
    d.cache_moments();
    return d;
}

DelayDistribution DelayDistribution::exponential(double rate_per_ms) {
    if (rate_per_ms <= 0.0) throw std::invalid_argument("exponential rate must be > 0");
    DelayDistribution d;
    d.analytic_ = Exponential{rate_per_ms};
    d.cache_moments();
    return d;
}

DelayDistribution DelayDistribution::mmc_response(const ResponseTimeLaw& law) {
    if (law.p_wait < 0.0 || law.p_wait > 1.0 || law.mu_per_ms <= 0.0 ||
        law.drain_rate_per_ms <= 0.0)
        throw std::invalid_argument("invalid response-time law");
    DelayDistribution d;
    d.analytic_ = law;
    d.cache_moments();
    return d;
}

DelayDistribution DelayDistribution::from_grid(double step_ms,
                                               std::vector<double> density) {
    if (step_ms <= 0.0) throw std::invalid_argument("grid step must be > 0");
    if (density.empty()) throw std::invalid_argument("grid density is empty");
    for (double v : density)
        if (!(v >= 0.0)) throw std::invalid_argument("grid density must be >= 0");
    DelayDistribution d;
    d.repr_ = Representation::grid_pdf;
    d.grid_step_ = step_ms;
    d.grid_density_ = std::move(density);
    d.grid_cumulative_.resize(d.grid_density_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.grid_density_.size(); ++i) {
        acc += d.grid_density_[i] * step_ms;
        d.grid_cumulative_[i] = acc;
    }
    if (std::fabs(acc - 1.0) > 1e-4)
        throw std::invalid_argument("grid PDF must integrate to 1 within 1e-4");
    d.cache_moments();
    return d;
}

DelayDistribution DelayDistribution::from_samples(std::vector<double> samples_ms) {
    if (samples_ms.empty()) throw std::invalid_argument("sample set is empty");
    for (double s : samples_ms)
        if (!(s >= 0.0)) throw std::invalid_argument("delay samples must be >= 0");
    DelayDistribution d;
    d.repr_ = Representation::empirical;
    d.samples_ = std::move(samples_ms);
    std::sort(d.samples_.begin(), d.samples_.end());
    d.cache_moments();
    return d;
}

// --- moments ----------------------------------------------------------------

void DelayDistribution::cache_moments() {
    const auto& k = kernels::active();
    switch (repr_) {
        case Representation::analytic:
            std::visit(
                [this](const auto& law) {
                    using T = std::decay_t<decltype(law)>;
                    if constexpr (std::is_same_v<T, PointMass>) {
                        mean_ = law.value;
                        variance_ = 0.0;
                    } else if constexpr (std::is_same_v<T, Gaussian>) {
                        // Zero-clamp shifts the moments by < 1e-7 with the
                        // latency defaults (mean >= 5 sigma); reported
                        // unclamped.
                        mean_ = law.mean;
                        variance_ = law.sigma * law.sigma;
                    } else if constexpr (std::is_same_v<T, Uniform>) {
                        mean_ = 0.5 * (law.lo + law.hi);
                        variance_ = (law.hi - law.lo) * (law.hi - law.lo) / 12.0;
                    } else if constexpr (std::is_same_v<T, Exponential>) {
                        mean_ = 1.0 / law.rate;
                        variance_ = 1.0 / (law.rate * law.rate);
                    } else {
                        mean_ = law.mean_ms();
                        variance_ = law.variance_ms2();
                    }
                },
                analytic_);
            break;
        case Representation::grid_pdf: {
            std::vector<double> mass(grid_density_.size());
            for (std::size_t i = 0; i < mass.size(); ++i)
                mass[i] = grid_density_[i] * grid_step_;
            const auto m = k.grid_moments(mass.data(), mass.size());
            const double total = m.m0 > 0.0 ? m.m0 : 1.0;
            mean_ = grid_step_ * (m.m1 + 0.5 * m.m0) / total;
            const double second =
                grid_step_ * grid_step_ * (m.m2 + m.m1 + 0.25 * m.m0) / total;
            variance_ = std::max(0.0, second - mean_ * mean_);
            break;
        }
        case Representation::empirical: {
            const double n = static_cast<double>(samples_.size());
            mean_ = k.sum(samples_.data(), samples_.size()) / n;
            const double second =
                k.dot(samples_.data(), samples_.data(), samples_.size()) / n;
            variance_ = std::max(0.0, second - mean_ * mean_);
            break;
        }
    }
}

// --- cdf / quantile / sampling ----------------------------------------------

double DelayDistribution::cdf(double t_ms) const {
    switch (repr_) {
        case Representation::analytic:
            return std::visit(
                [t_ms](const auto& law) -> double {
                    using T = std::decay_t<decltype(law)>;
                    if constexpr (std::is_same_v<T, PointMass>) {
                        return t_ms >= law.value ? 1.0 : 0.0;
                    } else if constexpr (std::is_same_v<T, Gaussian>) {
                        if (t_ms < 0.0) return 0.0;
                        return gaussian_cdf((t_ms - law.mean) / law.sigma);
                    } else if constexpr (std::is_same_v<T, Uniform>) {
                        if (t_ms <= law.lo) return 0.0;
                        if (t_ms >= law.hi) return 1.0;
                        return (t_ms - law.lo) / (law.hi - law.lo);
                    } else if constexpr (std::is_same_v<T, Exponential>) {
                        return t_ms <= 0.0 ? 0.0 : -std::expm1(-law.rate * t_ms);
                    } else {
                        return law.cdf(t_ms);
                    }
                },
                analytic_);
        case Representation::grid_pdf: {
            if (t_ms <= 0.0) return 0.0;
            const double pos = t_ms / grid_step_;
            const auto i = static_cast<std::size_t>(pos);
            if (i >= grid_density_.size()) return grid_cumulative_.back();
            const double below = i > 0 ? grid_cumulative_[i - 1] : 0.0;
            return below + grid_density_[i] * (t_ms - static_cast<double>(i) * grid_step_);
        }
        case Representation::empirical: {
            const auto it =
                std::upper_bound(samples_.begin(), samples_.end(), t_ms);
            return static_cast<double>(it - samples_.begin()) /
                   static_cast<double>(samples_.size());
        }
    }
    return 0.0;
}

namespace {
// Monotone-CDF inversion by bisection on [lo, hi].
template <typename Cdf>
double invert_cdf(Cdf&& cdf, double q, double lo, double hi) {
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
}  // namespace

double DelayDistribution::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("quantile order must lie in (0, 1)");
    switch (repr_) {
        case Representation::analytic:
            return std::visit(
                [this, q](const auto& law) -> double {
                    using T = std::decay_t<decltype(law)>;
                    if constexpr (std::is_same_v<T, PointMass>) {
                        return law.value;
                    } else if constexpr (std::is_same_v<T, Uniform>) {
                        return law.lo + q * (law.hi - law.lo);
                    } else if constexpr (std::is_same_v<T, Exponential>) {
                        return -std::log1p(-q) / law.rate;
                    } else if constexpr (std::is_same_v<T, Gaussian>) {
                        if (q <= cdf(0.0)) return 0.0;  // zero clamp atom
                        double hi = law.mean + 8.0 * law.sigma;
                        while (cdf(hi) < q) hi *= 2.0;
                        return invert_cdf([this](double t) { return cdf(t); }, q,
                                          0.0, hi);
                    } else {
                        double hi = std::max(mean_, 1.0);
                        while (cdf(hi) < q) hi *= 2.0;
                        return invert_cdf([this](double t) { return cdf(t); }, q,
                                          0.0, hi);
                    }
                },
                analytic_);
        case Representation::grid_pdf: {
            const auto it = std::lower_bound(grid_cumulative_.begin(),
                                             grid_cumulative_.end(), q);
            if (it == grid_cumulative_.end())
                return grid_step_ * static_cast<double>(grid_density_.size());
            const auto i = static_cast<std::size_t>(it - grid_cumulative_.begin());
            const double below = i > 0 ? grid_cumulative_[i - 1] : 0.0;
            return static_cast<double>(i) * grid_step_ +
                   (q - below) / grid_density_[i];
        }
        case Representation::empirical: {
            const double n = static_cast<double>(samples_.size());
            const auto idx = static_cast<std::size_t>(
                std::max(0.0, std::ceil(q * n) - 1.0));
            return samples_[std::min(idx, samples_.size() - 1)];
        }
    }
    return 0.0;
}

double DelayDistribution::sample(Rng& rng) const {
    switch (repr_) {
        case Representation::analytic:
            return std::visit(
                [&rng](const auto& law) -> double {
                    using T = std::decay_t<decltype(law)>;
                    if constexpr (std::is_same_v<T, PointMass>) {
                        return law.value;
                    } else if constexpr (std::is_same_v<T, Gaussian>) {
                        return std::max(0.0, rng.normal(law.mean, law.sigma));
                    } else if constexpr (std::is_same_v<T, Uniform>) {
                        return rng.uniform(law.lo, law.hi);
                    } else if constexpr (std::is_same_v<T, Exponential>) {
                        return rng.exponential(law.rate);
                    } else {
                        return sample_response_time(law, rng);
                    }
                },
                analytic_);
        case Representation::grid_pdf: {
            double u;
            do {
                u = rng.uniform01();
            } while (u == 0.0);
            return quantile(std::min(u, grid_cumulative_.back()));
        }
        case Representation::empirical:
            return samples_[rng.below(samples_.size())];
    }
    return 0.0;
}

double DelayDistribution::grid_step_ms() const {
    if (repr_ != Representation::grid_pdf)
        throw std::logic_error("not a grid distribution");
    return grid_step_;
}

const std::vector<double>& DelayDistribution::grid_density() const {
    if (repr_ != Representation::grid_pdf)
        throw std::logic_error("not a grid distribution");
    return grid_density_;
}

const std::vector<double>& DelayDistribution::samples() const {
    if (repr_ != Representation::empirical)
        throw std::logic_error("not an empirical distribution");
    return samples_;
}

// --- discretization ----------------------------------------------------------

DelayDistribution::CellMass DelayDistribution::discretize(const GridSpec& grid) const {
    CellMass out;
    const double step = grid.step_ms;
    const std::size_t cells = grid.cells;

    if (repr_ == Representation::analytic &&
        std::holds_alternative<PointMass>(analytic_)) {
        const double v = std::get<PointMass>(analytic_).value;
        const auto idx = static_cast<std::size_t>(v / step);
        if (idx >= cells) {
            out.lost = 1.0;
            return out;
        }
        out.offset = idx;
        out.mass = {1.0};
        return out;
    }

    if (repr_ == Representation::empirical) {
        std::size_t lost_count = 0;
        std::size_t first = cells, last = 0;
        std::vector<double> mass(cells, 0.0);
        for (double s : samples_) {
            const auto idx = static_cast<std::size_t>(s / step);
            if (idx >= cells) {
                ++lost_count;
                continue;
            }
            mass[idx] += 1.0;
            first = std::min(first, idx);
            last = std::max(last, idx);
        }
        if (first > last) {
            out.lost = 1.0;
            return out;
        }
        const double n = static_cast<double>(samples_.size());
        out.offset = first;
        out.mass.assign(mass.begin() + static_cast<std::ptrdiff_t>(first),
                        mass.begin() + static_cast<std::ptrdiff_t>(last + 1));
        kernels::active().scale(out.mass.data(), out.mass.size(), 1.0 / n);
        out.lost = static_cast<double>(lost_count) / n;
        return out;
    }

    if (repr_ == Representation::grid_pdf) {
        // Re-deposit each source cell's mass at its centre.
        std::vector<double> mass(cells, 0.0);
        std::size_t first = cells, last = 0;
        double lost = 0.0;
        for (std::size_t i = 0; i < grid_density_.size(); ++i) {
            const double m = grid_density_[i] * grid_step_;
            if (m == 0.0) continue;
            const double centre = (static_cast<double>(i) + 0.5) * grid_step_;
            const auto idx = static_cast<std::size_t>(centre / step);
            if (idx >= cells) {
                lost += m;
                continue;
            }
            mass[idx] += m;
            first = std::min(first, idx);
            last = std::max(last, idx);
        }
        if (first > last) {
            out.lost = 1.0;
            return out;
        }
        out.offset = first;
        out.mass.assign(mass.begin() + static_cast<std::ptrdiff_t>(first),
                        mass.begin() + static_cast<std::ptrdiff_t>(last + 1));
        out.lost = lost;
        return out;
    }

    // Continuous analytic families: CDF differences over the quantile window.
    const double lo_t = quantile(kWindowTail);
    const double hi_t = quantile(1.0 - kWindowTail);
    auto lo_cell = static_cast<std::size_t>(lo_t / step);
    auto hi_cell = static_cast<std::size_t>(hi_t / step);
    lo_cell = std::min(lo_cell, cells - 1);
    hi_cell = std::min(hi_cell, cells - 1);

    out.offset = lo_cell;
    out.mass.resize(hi_cell - lo_cell + 1);
    double left_cdf = 0.0;  // everything below the window folds into cell 0
    for (std::size_t i = lo_cell; i <= hi_cell; ++i) {
        const double right = static_cast<double>(i + 1) * step;
        const double right_cdf = cdf(right);
        out.mass[i - lo_cell] = std::max(0.0, right_cdf - left_cdf);
        left_cdf = right_cdf;
    }
    out.lost = std::max(0.0, 1.0 - left_cdf);
    return out;
}

// --- composition -------------------------------------------------------------

namespace {

using CellMass = DelayDistribution::CellMass;

CellMass convolve(const CellMass& a, const CellMass& b, std::size_t cells) {
    CellMass out;
    out.lost = 0.0;
    if (a.mass.empty() || b.mass.empty()) {
        out.lost = 1.0;
        return out;
    }
    const CellMass& outer = a.mass.size() <= b.mass.size() ? a : b;
    const CellMass& inner = a.mass.size() <= b.mass.size() ? b : a;
    const std::size_t offset = a.offset + b.offset;
    if (offset >= cells) {
        out.lost = 1.0;
        return out;
    }
    const std::size_t full = outer.mass.size() + inner.mass.size() - 1;
    const std::size_t len = std::min(full, cells - offset);
    out.offset = offset;
    out.mass.assign(len, 0.0);
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < outer.mass.size() && i < len; ++i) {
        const std::size_t span = std::min(inner.mass.size(), len - i);
        k.axpy(outer.mass[i], inner.mass.data(), out.mass.data() + i, span);
    }
    return out;
}

}  // namespace

DelayDistribution compose_evacuation_delay(const DelayDistribution& net,
                                           const DelayDistribution& sm,
                                           const DelayDistribution& handover) {
    const double mean_sum = net.mean_ms() + sm.mean_ms() + handover.mean_ms();
    return compose_evacuation_delay(net, sm, handover,
                                    GridSpec::for_mean(mean_sum));
}

DelayDistribution compose_evacuation_delay(const DelayDistribution& net,
                                           const DelayDistribution& sm,
                                           const DelayDistribution& handover,
                                           const GridSpec& grid) {
    const auto is_point = [](const DelayDistribution& d) {
        return d.representation() == DelayDistribution::Representation::analytic &&
               d.variance_ms2() == 0.0;
    };
    if (is_point(net) && is_point(sm) && is_point(handover))
        return DelayDistribution::point_mass(net.mean_ms() + sm.mean_ms() +
                                             handover.mean_ms());

    const CellMass a = net.discretize(grid);
    const CellMass b = sm.discretize(grid);
    const CellMass c = handover.discretize(grid);
    const CellMass ab = convolve(a, b, grid.cells);
    const CellMass abc = convolve(ab, c, grid.cells);

    const auto& k = kernels::active();
    const double total = k.sum(abc.mass.data(), abc.mass.size());
    if (1.0 - total > kLostMassTolerance) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "composition loses %.3e probability mass beyond the %.0f ms "
                      "grid bound; rerun with a larger bound",
                      1.0 - total, grid.bound_ms());
        throw GridOverflowError(msg);
    }

    std::vector<double> density(abc.offset + abc.mass.size(), 0.0);
    for (std::size_t i = 0; i < abc.mass.size(); ++i)
        density[abc.offset + i] = abc.mass[i] / grid.step_ms;
    return DelayDistribution::from_grid(grid.step_ms, std::move(density));
}

GridSpec grid_covering(const DelayDistribution& a, const DelayDistribution& b,
                       const DelayDistribution& c) {
    const double mean_sum = a.mean_ms() + b.mean_ms() + c.mean_ms();
    const double tail_sum =
        a.quantile(1.0 - 1e-9) + b.quantile(1.0 - 1e-9) + c.quantile(1.0 - 1e-9);
    GridSpec grid;
    const double bound =
        std::max({10000.0, 20.0 * mean_sum, 1.25 * tail_sum});
    grid.cells = std::min<std::size_t>(
        static_cast<std::size_t>(std::ceil(bound / grid.step_ms)), 4000000);
    return grid;
}

double protection_probability(const DelayDistribution& d,
                              const ProtectionRequirement& req) {
    req.validate();
    return d.cdf(req.delta_max_ms);
}

double delay_percentile(const DelayDistribution& d, double q) {
    return d.quantile(q);
}

// --- scenario-level laws ------------------------------------------------------

DelayDistribution network_delay_law(const ScenarioParams& scn) {
    const double mean = network_latency_mean(scn.distance_x_miles, scn.net);
    return DelayDistribution::gaussian(mean, scn.net.sigma2);
}

DelayDistribution sm_response_delay_law(const ScenarioParams& scn, EvalMode mode) {
    if (mode == EvalMode::simple)
        return DelayDistribution::point_mass(scn.sm_response_simple_ms());
    QueueModel q;
    q.lambda_per_s = arrival_rate(scn.traffic, scn.eval_hour);
    q.mu_per_s = service_rate(scn.tau_ms(), scn.spatial);
    q.servers = scn.processors;
    return DelayDistribution::mmc_response(response_time_law(q));
}

DelayDistribution handover_delay_law(const ScenarioParams& scn) {
    return DelayDistribution::uniform(scn.handover.f_ms,
                                      scn.handover.f_ms + scn.handover.frame_ms);
}

double mean_evacuation_delay(const ScenarioParams& scn, EvalMode mode) {
    scn.validate();
    const double net = network_latency_mean(scn.distance_x_miles, scn.net);
    const double hand = scn.handover.mean_ms();
    if (mode == EvalMode::simple) return net + scn.sm_response_simple_ms() + hand;
    QueueModel q;
    q.lambda_per_s = arrival_rate(scn.traffic, scn.eval_hour);
    q.mu_per_s = service_rate(scn.tau_ms(), scn.spatial);
    q.servers = scn.processors;
    return net + response_time_law(q).mean_ms() + hand;
}

// --- export -------------------------------------------------------------------

void DelayDistribution::write_csv(std::ostream& os, bool cumulative) const {
    char line[80];
    const DelayDistribution* self = this;
    DelayDistribution rasterized;
    if (repr_ == Representation::analytic) {
        const GridSpec grid = GridSpec::for_mean(mean_ms());
        const CellMass cm = discretize(grid);
        std::vector<double> density(cm.offset + cm.mass.size(), 0.0);
        for (std::size_t i = 0; i < cm.mass.size(); ++i)
            density[cm.offset + i] = cm.mass[i] / grid.step_ms;
        rasterized = from_grid(grid.step_ms, std::move(density));
        self = &rasterized;
    }

    if (self->repr_ == Representation::grid_pdf) {
        os << (cumulative ? "time_ms,cumulative\n" : "time_ms,density\n");
        for (std::size_t i = 0; i < self->grid_density_.size(); ++i) {
            const double t = cumulative
                                 ? static_cast<double>(i + 1) * self->grid_step_
                                 : (static_cast<double>(i) + 0.5) * self->grid_step_;
            const double v = cumulative ? self->grid_cumulative_[i]
                                        : self->grid_density_[i];
            std::snprintf(line, sizeof line, "%.4f,%.9e\n", t, v);
            os << line;
        }
        return;
    }

    // Empirical: step CDF at each sample, or a histogram on the default grid.
    if (cumulative) {
        os << "time_ms,cumulative\n";
        const double n = static_cast<double>(self->samples_.size());
        for (std::size_t i = 0; i < self->samples_.size(); ++i) {
            std::snprintf(line, sizeof line, "%.4f,%.9e\n", self->samples_[i],
                          static_cast<double>(i + 1) / n);
            os << line;
        }
    } else {
        const GridSpec grid = GridSpec::for_mean(mean_ms());
        const CellMass cm = self->discretize(grid);
        os << "time_ms,density\n";
        for (std::size_t i = 0; i < cm.mass.size(); ++i) {
            const double t =
                (static_cast<double>(cm.offset + i) + 0.5) * grid.step_ms;
            std::snprintf(line, sizeof line, "%.4f,%.9e\n", t,
                          cm.mass[i] / grid.step_ms);
            os << line;
        }
    }
}

}  // namespace evacsim
