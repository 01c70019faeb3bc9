#pragma once

#include <cstdint>
#include <vector>

#include "relq/relmap.hpp"

namespace relq {

/// Everything a model run wants to say: probabilities keyed by name,
/// residuals that must sit below tolerance, plus truncation certificates.
struct Model1Run {
    double p0;                     // tr[(P0 ox 1) tau(P[U2 U1 psi])]
    double p0_twirled_pipeline;    // twirling after every stage
    double expected;               // cos^2(theta/2)
    double conservation_residual;  // max of ||[U_i, N]||
};

Model1Run model1_run(double theta);

struct Model2Run {
    double error_norm_sq;          // || U1 psi - product ||^2, exactly (2j+1)^-1
    double p0;                     // system-ground probability after U2 U1
    double expected_p0;            // cos^2(theta/2)
    double conservation_residual;
    double reduced_half_identity_residual;  // Tr_R of twirled final state vs 1/2 on {0,1}
    double basis_reduced_theta_residual;    // post-U1 reduced states of basis inputs vs theta
    double eq70_decomposition_residual;     // tau(P[psi_f]) vs the explicit mixture
    double invariant_effect_variation;      // relative-phase bin expectation over a theta grid
    double angle_mean;                      // of |theta'_j>, equals theta'
    double angle_variance;                  // -> 0 along j
    double www_reduced_invariance_residual; // compose/evolve/twirl/separate output invariance
};

Model2Run model2_run(long j, double theta, double theta_prime);

struct Model3Run {
    double fixed_point_residual;   // || U|0,0> - |0,0> ||
    std::vector<double> p0_by_n;   // inputs |0>|n>, n = 1..n_max
    double expected;               // cos^2(theta/2)
    double conservation_residual;
};

Model3Run model3_run(int cutoff, double theta, int n_max = 3);

struct QubitDemoRun {
    double sigma3_residual;        // <yen(sigma3)> vs <sigma3>, exact
    double sigma1_factor;          // <yen(sigma1)>/<sigma1> = n/(n+1)
    double sigma2_factor;
    double expected_factor;        // n/(n+1)
    double tail_probability;       // p_n outside [-delta_n/2, delta_n/2]
    double tail_bound;             // 8 (n+1)^-eps / (1 - delta_n^2/48)
    double delta_n;
    bool tail_ok;
};

QubitDemoRun qubit_demo(long n, double eps);

/// Localisation probability of the uniform superposition |phi_n> in the
/// centered interval [-delta/2, delta/2] of the canonical phase, by the
/// closed-form harmonic sum (no matrices; n can be 10^4).
double phi_n_centered_probability(long n, double delta);

struct AsConfig {
    double q1 = 16.0;
    double q2 = 16.0;
    double g = M_PI / 16.0;
    double t = 1.0;
    double theta = 0.0;
    double theta_prime = 0.0;
    int theta_grid = 16;           // grid for the theta - theta' sweep
};

struct AsRun {
    double tail_mass_1;
    double tail_mass_2;
    int cutoff_1;
    int cutoff_2;
    double conservation_residual;
    std::vector<double> number_input_p;         // proton prob after cavity 1 for |P>|n>
    std::vector<double> number_input_expected;  // cos^2(T g sqrt(n+1))
    double final_p_variation;                   // max-min of p_P over theta - theta'
    std::vector<double> product_infidelity;     // post-cavity-1, for q1 in {4,16,64}
};

AsRun as_run(const AsConfig& cfg);

struct AsNogoRun {
    double min_distance_sq;        // over j and psi with |gamma| = 1/sqrt 2
    double bound;                  // 2 - sqrt 2
    double conservation_residual;
    double gamma0_distance_sq;     // sanity branch: gamma = 0, trivial U, i = j
};

/// Charge-eigenstate no-go: Psi = U(|P> ox |i>) stays a finite norm distance
/// from every psi ox |j> with equal proton/neutron weight.
AsNogoRun as_nogo_check(int i, int cutoff, std::uint64_t seed, int trials);

struct DowlingRun {
    double tail_mass;
    int cutoff;
    double conservation_residual;
    double p_atom;
    double p_molecule;
    double expected_atom;          // sin^2(phi/2)
    double expected_molecule;      // cos^2(phi/2)
    double error_norm;             // || U1|A,beta> - product ||  (eq d1)
    double a_m;                    // || |beta_A1> - 2^{-1/2}|beta> ||^2
    double probability_budget;     // bound on |p - asymptotic|
    bool within_budget;
};

DowlingRun dowling_run(double m, double phi, double theta = 0.0);

struct AppendixRun {
    double delta_k;
    double threshold_m;            // k^2 / delta_k^2
    double a_m;
    double chebyshev_tail;         // sum outside I_k of w_m f_m
    double chebyshev_bound;        // 3/k^2
    double a_bound;                // 4/k^2
    double f_max;                  // max |f_m(n)| over the support
    double tail_mass;
    bool pass;                     // a_m < 4/k^2 when m > threshold, tail <= 3/k^2
};

AppendixRun appendix_bound_check(double m, int k);

/// delta_k: largest symmetric window |x-1| < delta on which
/// |cos(sqrt(x) pi/4) - cos(pi/4)| stays below 1/k; bisection to 1e-12 with
/// monotonicity asserted on the bracket.
double appendix_delta_k(int k);

}  // namespace relq
