#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relq/opcore.hpp"
#include "relq/symmetry.hpp"

namespace relq {

/// Circle partitioned into B equal bins [2pi k/B, 2pi (k+1)/B), or a finite
/// label set.
struct OutcomeSpace {
    enum class Kind { Circle, FiniteSet };
    Kind kind = Kind::Circle;
    int bin_count = 0;
    std::vector<std::string> labels;

    static OutcomeSpace circle(int bins);
    static OutcomeSpace finite(std::vector<std::string> labels);
    int size() const { return kind == Kind::Circle ? bin_count : static_cast<int>(labels.size()); }
    double bin_width() const;
};

/// Positive matrix with unit diagonal, indexed like the number basis of the
/// rep it will be paired with. c == 1 is the canonical phase.
class PhaseMatrix {
  public:
    explicit PhaseMatrix(Matrix c, double tol = kTol);
    static PhaseMatrix canonical(int dim);

    const Matrix& mat() const { return c_; }
    int dim() const { return static_cast<int>(c_.rows()); }

  private:
    Matrix c_;
};

struct Pom {
    OutcomeSpace space;
    std::vector<Operator> effects;

    int outcomes() const { return static_cast<int>(effects.size()); }
    Operator effect_sum() const;
    /// Union-of-bins effect: exact sum of the single-bin effects.
    Operator effect_union(const std::vector<int>& bins) const;
    bool projection_valued(double tol = kTol) const;
};

/// Covariant phase POM in closed form for an integer-spectrum rep: bin
/// [a,b) has entries c_nm/(2pi) Int_a^b e^{i(n-m)t} dt, i.e. (b-a)/(2pi) on
/// the diagonal and c_nm (e^{iqb}-e^{iqa})/(2pi i q) off it, q = n-m.
Pom build_phase_pom(int dim, const PhaseMatrix& c, int bins);
Pom build_phase_pom(const NumberRep& rep, const PhaseMatrix& c, int bins);

/// Same closed form on an arbitrary interval [a,b), 0 <= b-a <= 2pi.
Matrix phase_interval_effect(const NumberRep& rep, const PhaseMatrix& c, double a, double b);

/// tr(rho F([lo,hi))) without building the matrix; used for width bisection
/// and large-dimension localisation tails.
double phase_interval_probability(const NumberRep& rep, const PhaseMatrix& c, const Matrix& rho,
                                  double lo, double hi);

struct PomValidationReport {
    double positivity;     // most negative effect eigenvalue, clamped at 0
    double normalization;  // ||sum effects - 1||
    double covariance;     // max over bins/shifts of the covariance defect
    bool pass(double tol = 1e-10) const {
        return positivity < tol && normalization < tol && covariance < tol;
    }
};

PomValidationReport pom_validate(const Pom& f, const NumberRep& rep);

struct Norm1Report {
    double defect_nonzero;  // max over nonzero effects of 1 - ||E||
    double defect_all;      // footnote variant: zero effects count as defect 1
    int zero_effects;
};

Norm1Report norm1_defect(const Pom& f, double tol = kTol);

/// d|X|/2pi - tr(rho F(X)); the Localisation Lemma makes this nonnegative
/// for covariant phase POMs.
double localisation_margin(const State& rho, const Pom& f, const std::vector<int>& bins);

/// Smeared position on the cyclic lattice Z_L: effect for X is diagonal
/// with entries (chi_X * e)(x), cyclic convolution against the kernel.
Pom smeared_position_pom(int lattice, const std::vector<double>& kernel);

/// Probability vector over bins for a reference state, tr(rho F(bin k)).
std::vector<double> phase_bin_distribution(const NumberRep& rep, const PhaseMatrix& c,
                                           const Matrix& rho, int bins);

}  // namespace relq
