#include "support/ctmc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace evacsim::testing {

double ctmc_waiting_probability(int servers, double rho) {
    if (servers < 1 || rho < 0.0 || rho >= static_cast<double>(servers))
        throw std::invalid_argument("need C >= 1 and 0 <= rho < C");
    if (rho == 0.0) return 0.0;

    // Queue states beyond C decay geometrically with ratio rho/C; keep
    // enough of the tail that the truncated mass is < 1e-18.
    const double ratio = rho / static_cast<double>(servers);
    const int tail = std::clamp(
        static_cast<int>(std::ceil(std::log(1e-18) / std::log(ratio))), 64, 4096);
    const int states = servers + tail + 1;

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(states, states);
    for (int k = 0; k < states; ++k) {
        const double up = k + 1 < states ? rho : 0.0;  // arrival rate (mu = 1)
        const double down = static_cast<double>(std::min(k, servers));
        // Column k of Q^T is row k of the generator.
        m(k, k) -= up + down;
        if (k + 1 < states) m(k + 1, k) += up;
        if (k - 1 >= 0) m(k - 1, k) += down;
    }
    // Replace the last balance equation with the normalization constraint.
    m.row(states - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(states);
    rhs(states - 1) = 1.0;

    const Eigen::VectorXd pi = m.partialPivLu().solve(rhs);
    double waiting = 0.0;
    for (int k = servers; k < states; ++k) waiting += pi(k);
    return waiting;
}

}  // namespace evacsim::testing
