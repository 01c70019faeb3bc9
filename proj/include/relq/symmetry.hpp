#pragma once

#include <map>
#include <vector>

#include "relq/opcore.hpp"

namespace relq {

/// Integer spectrum in a fixed basis: eigs[i] is the number eigenvalue of
/// basis vector i. Sectors (spectral projectors) group equal eigenvalues by
/// exact integer equality.
class NumberRep {
  public:
    explicit NumberRep(std::vector<long> eigs);

    int dim() const { return static_cast<int>(eigs_.size()); }
    const std::vector<long>& eigs() const { return eigs_; }
    long max_diff() const { return max_ - min_; }

    Matrix number_operator() const;
    Matrix phase_unitary(double theta) const;  // exp(i N theta), diagonal
    Matrix projector(long n) const;
    std::vector<long> sector_values() const;
    int sector_rank(long n) const;

    /// Composite rep on the tensor product, eigenvalues given by sums.
    static NumberRep tensor_sum(const NumberRep& a, const NumberRep& b);
    /// Equally spaced ladder n = lo..hi.
    static NumberRep ladder(long lo, long hi);

  private:
    std::vector<long> eigs_;
    long min_ = 0, max_ = 0;
};

Matrix twirl_op(const Matrix& a, const NumberRep& rep);
Operator twirl_op(const Operator& a, const NumberRep& rep);
State twirl_state(const State& rho, const NumberRep& rep);
Matrix twirl_mat_predual(const Matrix& rho, const NumberRep& rep);

/// Uniform-node quadrature of (1/2pi) Int U(t) a U(t)* dt. Node count must
/// beat the maximal eigenvalue difference or the sum aliases; enforced here.
Matrix haar_average(const Matrix& a, const NumberRep& rep, int nodes);

struct InvarianceReport {
    double projector_commutator;  // max_n ||[a, P_n]||
    double shift_conjugation;     // max_t ||U(t) a U(t)* - a||
    double haar_gap;              // ||haar_average(a) - a||
    double twirl_gap;             // ||twirl(a) - a||
    bool invariant;               // all four below threshold
    double threshold;
};

InvarianceReport invariance_report(const Matrix& a, const NumberRep& rep);
bool is_invariant(const Matrix& a, const NumberRep& rep, double tol = 1e-8);

struct StatisticsEqualityReport {
    double duality_residual;      // |tr(rho twirl(a)) - tr(twirl*(rho) a)|
    double invariant_gap;         // |tr(rho a) - tr(twirl*(rho) a)|, meaningful for invariant a
};

StatisticsEqualityReport statistics_equality_check(const State& rho, const Matrix& a,
                                                   const NumberRep& rep);

}  // namespace relq
