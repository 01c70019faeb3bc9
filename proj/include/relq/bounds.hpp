#pragma once

#include <cstdint>
#include <string>

#include "relq/coherence.hpp"
#include "relq/relmap.hpp"

namespace relq {

struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // rhs - lhs
    bool pass = false;
    std::string inputs_digest;

    static BoundReport make(double lhs, double rhs, std::string digest, double tol = 1e-10);
};

/// D(a,b) = ||a-b||, V(a) = ||a - a^2||; inputs must be Hermitian.
struct Metrics {
    double d;
    double v_a;
};
Metrics metrics(const Matrix& a, const Matrix& b);

/// sqrt(tr(omega N^2) - tr(omega N)^2), tiny negatives clamped to zero.
double number_spread(const Matrix& omega, const NumberRep& rep);

/// The fixed qubit effect (|0><0| + |1><1| + |0><1| + |1><0|)/2 used by the
/// localisation lower bounds.
Matrix owb_effect();

/// Good localisation gives good approximation:
/// D(a, Gamma_w(yen(a))) <= ||[N_S,a]|| (W0_eps/2 (1-eps) + pi eps).
BoundReport prop1_check(const Matrix& a, const Matrix& omega, const NumberRep& rep_s,
                        const NumberRep& rep_r, const PhaseMatrix& c, double epsilon);

struct OwbReport {
    BoundReport width_bound;   // D >= (eps/2)(1 - cos(W0_eps/2)), worst eps on the grid
    BoundReport spread_bound;  // the Delta N_R dichotomy
    double discrepancy;        // D(A, Gamma_w(yen(A)))
    double spread;             // Delta_w N_R
};

/// Bad localisation gives bad approximation, for the fixed owb_effect().
OwbReport prop2_owb_check(const Matrix& omega, const NumberRep& rep_r, const PhaseMatrix& c,
                          const std::vector<double>& eps_grid = epsilon_grid());

/// ||[a,N_S]|| <= 2 D(Gamma_w(e),a) ||N_S|| + 2 Delta_w N_R (2D + V(a))^{1/2}
/// for an invariant effect e on S tensor R.
BoundReport tradeoff_check(const Matrix& a, const Matrix& e, const Matrix& omega,
                           const NumberRep& rep_s, const NumberRep& rep_r);

struct SweepReport {
    int trials = 0;
    int failures = 0;
    double min_residual = 0.0;
    std::uint64_t seed = 0;
};

SweepReport prop1_sweep(int trials, std::uint64_t seed);
SweepReport owb_sweep(int trials, std::uint64_t seed);
SweepReport tradeoff_sweep(int trials, std::uint64_t seed);

}  // namespace relq
