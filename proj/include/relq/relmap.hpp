#pragma once

#include <map>

#include "relq/pom.hpp"

namespace relq {

/// Eigenvalue-difference harmonics of an operator: A_q = sum_{n-m=q} P_n A P_m,
/// so that U(t) A U(t)* = sum_q e^{iqt} A_q. Sum of blocks recovers A exactly;
/// (A_q)* = A_{-q} for Hermitian A.
using FourierBlocks = std::map<long, Matrix>;

FourierBlocks fourier_components(const Matrix& a, const NumberRep& rep);

/// F_hat(q) = Int e^{iqt} F(dt): entries c_kl on index pairs with
/// eig_l - eig_k = q; for the canonical ladder this is sum_k c_{k,k+q} |k><k+q|.
Matrix pom_fourier(const NumberRep& rep, const PhaseMatrix& c, long q);

struct RelativizeResult {
    Operator op;       // on S tensor R
    double leakage;    // sum of ||A_q|| over blocks outside the reference window
};

/// Exact relativisation for S^1: yen(a) = sum_q A_q tensor F_hat(q).
/// Blocks whose q exceeds every reference eigenvalue difference are dropped
/// and reported as leakage.
RelativizeResult relativize(const Matrix& a, const NumberRep& rep_s, const NumberRep& rep_r,
                            const PhaseMatrix& c);

/// Effectwise relativisation of a POM; output validates as a POM.
Pom relativize_pom(const Pom& e, const NumberRep& rep_s, const NumberRep& rep_r,
                   const PhaseMatrix& c);

/// Finite cyclic group Z_|G|: system unitaries U_S(g) plus reference sector
/// projectors P_g with covariance U_R(g) P_i U_R(g)* = P_{g+i}.
class CyclicRep {
  public:
    CyclicRep(std::vector<Matrix> system_unitaries, int sector_dim);

    int order() const { return static_cast<int>(us_.size()); }
    int system_dim() const { return static_cast<int>(us_[0].rows()); }
    int sector_dim() const { return sector_dim_; }
    int reference_dim() const { return order() * sector_dim_; }
    const Matrix& system_unitary(int g) const { return us_.at(g); }
    Matrix reference_projector(int g) const;
    Matrix reference_unitary(int g) const;  // cyclic shift of sectors

    /// Shift representation of Z_L on itself (sector dimension 1):
    /// U_S(g)|x> = |x+g>.
    static CyclicRep lattice_shift(int order);

  private:
    std::vector<Matrix> us_;
    int sector_dim_;
};

Operator relativize_cyclic(const Matrix& a, const CyclicRep& rep);

/// Restriction channel: Gamma_omega(r) = Tr_R[(1 tensor omega) r], the
/// conditional expectation onto the system contingent on omega.
Operator restrict_channel(const Operator& r, const Matrix& omega);

/// (Gamma_omega o yen)(a) = sum_q A_q mu_hat(q) with mu_hat(q) = tr(omega F_hat(q)).
Matrix restrict_after_relativize(const Matrix& a, const Matrix& omega, const NumberRep& rep_s,
                                 const NumberRep& rep_r, const PhaseMatrix& c);

/// Choi operator of yen on a d_s-dimensional system (applies yen to all
/// matrix units); positive semidefinite within tolerance since yen is CP.
Matrix relativize_choi(const NumberRep& rep_s, const NumberRep& rep_r, const PhaseMatrix& c);

}  // namespace relq
