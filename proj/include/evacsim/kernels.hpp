#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace evacsim::kernels {

// Raw index-weighted sums of a cell-mass vector: m0 = sum p[i],
// m1 = sum i*p[i], m2 = sum i^2*p[i]. Callers convert to physical
// moments with the grid step.
struct GridMoments {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

// One backend's implementations of the dense inner loops used by the
// distribution grid, the convolution composer, and sample statistics.
//
// axpy, scale and add3 are element-independent and every backend computes
// them with unfused multiply/add, so all backends produce bit-identical
// output for these. The reductions (sum, dot, grid_moments) accumulate in
// lane partials and may differ from scalar in the last bits; tests compare
// them at 1e-12 relative tolerance.
struct Ops {
    const char* name;

    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x[i] *= c
    void (*scale)(double* x, std::size_t n, double c);
    // out[i] = a[i] + b[i] + c[i]
    void (*add3)(const double* a, const double* b, const double* c,
                 double* out, std::size_t n);
    // number of x[i] <= bound (NaN never counts)
    std::size_t (*count_leq)(const double* x, std::size_t n, double bound);
    GridMoments (*grid_moments)(const double* p, std::size_t n);
};

const Ops& scalar_ops();

/// Backends compiled into this binary (scalar first, then SIMD variants
/// usable on the current CPU).
std::vector<const Ops*> available();

/// The active backend. Defaults to the widest usable SIMD variant;
/// the EVACSIM_KERNELS environment variable ("scalar", "avx2") overrides.
const Ops& active();

/// Force a backend by name; returns false if unknown or unusable here.
bool set_active(std::string_view name);

}  // namespace evacsim::kernels
