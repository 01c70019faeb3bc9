#pragma once

#include <string>
#include <vector>

#include "relq/pom.hpp"
#include "relq/relmap.hpp"

namespace relq {

/// <H_A, U, phi, Z, f>: apparatus space, coupling, initial apparatus state,
/// pointer POM and the outcome relabeling f (pointer outcome -> measured
/// outcome index).
struct MeasurementScheme {
    int system_dim = 0;
    int apparatus_dim = 0;
    Matrix coupling;           // unitary on S ox A
    Pom pointer;               // on the apparatus
    Vector apparatus_state;    // pure phi
    std::vector<int> scaling;  // size = pointer outcomes; values in [0, outcomes)

    void validate(double tol = 1e-8) const;
    int measured_outcomes() const;

    /// Swap coupling with number pointer: the everything-diagonal scheme.
    static MeasurementScheme swap_scheme(int dim);
};

/// E(X) = Gamma_phi(U* (1 ox E^Z(f^-1(X))) U); the unique POM satisfying the
/// probability reproducibility condition.
Pom measured_pom(const MeasurementScheme& s);

/// Probe states: computational basis plus all pairwise equal-weight
/// superpositions; doubling adds the i-phased pairs.
std::vector<Vector> probe_states(int dim, bool doubled = false);

double probability_reproducibility_residual(const MeasurementScheme& s, const Pom& measured,
                                            const State& rho);

double repeatability_defect(const MeasurementScheme& s, const Pom& measured, bool doubled = false);

struct WayReport {
    double conservation;   // ||[U, L_S ox 1 + 1 ox L_A]||
    double yanase;         // max_z ||[E^Z_z, L_A]||
    double commutation;    // max_x ||[E_x, L_S]||
    double sharpness;      // max_x ||E_x^2 - E_x||
    double repeatability;  // defect
    bool hypotheses_hold;  // conservation + yanase + sharp + repeatable within tol
    bool way_consistent;   // hypotheses -> commutation < tol
};

WayReport way_report(const MeasurementScheme& s, const Matrix& l_s, const Matrix& l_a,
                     double tol = 1e-8);

struct StrongWayReport {
    double hypothesis_residual;  // max_t ||[U, U_S(t) ox 1]||
    bool hypothesis_holds;
    double invariance_residual;  // max over outcomes, t of the conjugation defect
};

StrongWayReport strong_way_check(const MeasurementScheme& s, const Matrix& l_s,
                                 double tol = 1e-8);

struct SmearedRestrictionReport {
    double identity_residual;    // restricted effect vs chi_X * (e * |phi|^2), entrywise
    double variance_lhs;         // Var(e * |phi|^2)
    double variance_rhs;         // Var(e) + Var(|phi|^2)
    double width_margin;         // min over eps grid of W(conv) - max(W(e), W(|phi|^2))
    bool pass;
};

/// The discretized unsharp-position restriction identity on a line grid of
/// size `grid`; kernels must fit in half the grid so convolutions never wrap.
SmearedRestrictionReport smeared_restriction_check(const std::vector<double>& kernel,
                                                   const std::vector<double>& phi_sq,
                                                   const std::vector<int>& window, int grid);

/// Overall width of a distribution on the line: shortest contiguous window
/// carrying mass >= 1 - eps.
double line_overall_width(const std::vector<double>& p, double eps);

double variance(const std::vector<double>& p);

/// Parse a scheme from the JSON document format (dims, dense complex
/// matrices as nested [re, im] arrays, pointer labels, scaling table).
/// Throws std::invalid_argument with a line/field-precise message.
MeasurementScheme load_scheme(const std::string& json_text);
std::string scheme_to_json(const MeasurementScheme& s);

}  // namespace relq
