#pragma once

// Brute-force birth-death CTMC oracle for M/M/C waiting probabilities:
// assembles the truncated generator as a dense matrix and solves the
// stationary equations by LU factorization. Independent of the analytic
// Erlang recurrence it validates.

namespace evacsim::testing {

/// Stationary probability that all C servers are busy (arrival sees a wait),
/// for offered load rho = lambda/mu < C. Truncation tail is sized so the
/// result is exact to well below 1e-12.
double ctmc_waiting_probability(int servers, double rho);

}  // namespace evacsim::testing
