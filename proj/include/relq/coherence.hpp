#pragma once

#include "relq/pom.hpp"
#include "relq/symmetry.hpp"

namespace relq {

/// C(rho) = (1/2) ||rho - tau_*(rho)||_1.
double absolute_coherence(const State& rho, const NumberRep& rep);

/// Pinch one tensor factor of a bipartite matrix with its own rep.
Matrix twirl_factor(const Matrix& m, int ds, int dr, int factor, const NumberRep& rep);

struct MutualCoherenceResult {
    double value;            // M(Theta), closed form
    Matrix witness;          // invariant effect attaining the sup
    double witness_value;    // |tr(Delta witness)|
};

/// M(Theta) = (1/2)||tau_T*((tau_S* ox id)(Theta) - Theta)||_1, together
/// with the attaining invariant effect (positive-part spectral projector of
/// the pinched difference; invariant because the difference is).
MutualCoherenceResult mutual_coherence(const State& theta, const NumberRep& rep_s,
                                       const NumberRep& rep_r);

struct WidthQuery {
    std::vector<double> distribution;  // probability over circle bins
    double epsilon = 0.0;
    bool centered = false;             // W^0: intervals symmetric about 0
};

/// Minimal total width (radians) over contiguous circular bin-intervals with
/// mass >= 1-eps; exhaustive O(B^2) scan, ties to the smaller width then the
/// leftmost start. Centered variant restricts to intervals symmetric about 0.
double overall_width(const WidthQuery& q);

/// W^0_eps of the phase distribution of omega, exact: bisection on the
/// closed-form interval probability mu([-w/2, w/2]).
double centered_width_exact(const NumberRep& rep, const PhaseMatrix& c, const Matrix& omega,
                            double epsilon, double tol = 1e-12);

/// Residual of C(rho) >= 1 - 2 eps - (3 W_eps / 2 pi)(1 - 2 eps); must be
/// >= -tol since the bound is a theorem.
double coherence_width_bound_check(const State& rho, const Pom& f, const NumberRep& rep,
                                   double epsilon);

inline const std::vector<double>& epsilon_grid() {
    static const std::vector<double> grid{0.01, 0.05, 0.1, 0.25};
    return grid;
}

}  // namespace relq
