#pragma once

#include <cmath>
#include <cstdint>

#include "relq/opcore.hpp"

namespace relq {

/// SplitMix64. Counter-style generator: one 64-bit state advanced by a fixed
/// gamma, output a bijective mix of the state. Named in the docs so sweeps
/// can be reproduced bit-for-bit at the level of drawn parameters.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in [0,1), 53 mantissa bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    cplx cgaussian() {
        double re = gaussian(), im = gaussian();
        return cplx(re, im);
    }

    Matrix ginibre(int rows, int cols) {
        Matrix g(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) g(i, j) = cgaussian();
        return g;
    }

    /// Haar-ish random unitary from QR of a Ginibre matrix with the usual
    /// R-diagonal phase fix.
    Matrix unitary(int n) {
        Matrix g = ginibre(n, n);
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ();
        Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < n; ++i) {
            cplx d = r(i, i);
            double a = std::abs(d);
            q.col(i) *= (a > 1e-300) ? d / a : cplx(1.0, 0.0);
        }
        return q;
    }

    Vector pure_state(int n) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v(i) = cgaussian();
        v.normalize();
        return v;
    }

    Matrix density(int n, int rank = 0) {
        if (rank <= 0) rank = n;
        Matrix g = ginibre(n, rank);
        Matrix rho = g * g.adjoint();
        rho /= rho.trace();
        return rho;
    }

    /// e = x†x normalised by its operator norm, then scaled by uniform(0,1);
    /// covers both interior and boundary of the effect interval.
    Matrix effect(int n) {
        Matrix x = ginibre(n, n);
        Matrix e = x.adjoint() * x;
        e /= operator_norm(e);
        return uniform() * e;
    }

    Matrix hermitian(int n) {
        Matrix g = ginibre(n, n);
        return 0.5 * (g + g.adjoint());
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace relq
