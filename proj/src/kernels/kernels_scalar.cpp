#include "evacsim/kernels.hpp"

// Reference kernels. Plain sequential loops, one rounding per arithmetic
// step; the SIMD variants are validated against these.

namespace evacsim::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double* x, std::size_t n, double c) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= c;
}

void add3_scalar(const double* a, const double* b, const double* c,
                 double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i] + c[i];
}

std::size_t count_leq_scalar(const double* x, std::size_t n, double bound) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] <= bound) ++count;
    return count;
}

GridMoments grid_moments_scalar(const double* p, std::size_t n) {
    GridMoments m;
    for (std::size_t i = 0; i < n; ++i) {
        const double idx = static_cast<double>(i);
        m.m0 += p[i];
        m.m1 += idx * p[i];
        m.m2 += idx * idx * p[i];
    }
    return m;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{
        "scalar",        sum_scalar,       dot_scalar, axpy_scalar,
        scale_scalar,    add3_scalar,      count_leq_scalar,
        grid_moments_scalar,
    };
    return ops;
}

}  // namespace evacsim::kernels
