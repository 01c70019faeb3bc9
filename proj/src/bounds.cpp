#include "relq/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "relq/rng.hpp"

namespace relq {

BoundReport BoundReport::make(double lhs, double rhs, std::string digest, double tol) {
    BoundReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = rhs - lhs;
    r.pass = r.residual >= -tol;
    r.inputs_digest = std::move(digest);
    return r;
}

Metrics metrics(const Matrix& a, const Matrix& b) {
    const double tol = kTol * a.rows();
    if (operator_norm(Matrix(a - a.adjoint())) > tol || operator_norm(Matrix(b - b.adjoint())) > tol)
        throw std::invalid_argument("metrics: inputs must be Hermitian");
    Metrics m;
    m.d = operator_norm(Matrix(a - b));
    m.v_a = operator_norm(Matrix(a - a * a));
    return m;
}

double number_spread(const Matrix& omega, const NumberRep& rep) {
    Matrix n = rep.number_operator();
    double first = ((omega * n).trace()).real();
    double second = ((omega * n * n).trace()).real();
    return std::sqrt(std::max(0.0, second - first * first));
}

Matrix owb_effect() {
    Matrix a(2, 2);
    a << 0.5, 0.5, 0.5, 0.5;
    return a;
}

namespace {

std::string digest(std::initializer_list<double> xs) {
    std::ostringstream os;
    os.precision(6);
    for (double x : xs) os << x << ";";
    return os.str();
}

}  // namespace

BoundReport prop1_check(const Matrix& a, const Matrix& omega, const NumberRep& rep_s,
                        const NumberRep& rep_r, const PhaseMatrix& c, double epsilon) {
    if (!is_effect(a, 1e-8)) throw std::invalid_argument("prop1_check: a must be an effect");
    Matrix restricted = restrict_after_relativize(a, omega, rep_s, rep_r, c);
    double d = operator_norm(Matrix(a - restricted));

    Matrix ns = rep_s.number_operator();
    double comm = operator_norm(Matrix(ns * a - a * ns));
    double w0 = centered_width_exact(rep_r, c, omega, epsilon);
    double rhs = comm * (0.5 * w0 * (1.0 - epsilon) + M_PI * epsilon);
    return BoundReport::make(d, rhs, digest({d, comm, w0, epsilon}));
}

OwbReport prop2_owb_check(const Matrix& omega, const NumberRep& rep_r, const PhaseMatrix& c,
                          const std::vector<double>& eps_grid) {
    NumberRep rep_s = NumberRep::ladder(0, 1);
    Matrix a = owb_effect();
    Matrix restricted = restrict_after_relativize(a, omega, rep_s, rep_r, c);
    double d = operator_norm(Matrix(a - restricted));

    OwbReport out;
    out.discrepancy = d;
    out.spread = number_spread(omega, rep_r);

    // (i) over the eps grid the lower bound must hold at every eps; report
    // the tightest one
    double worst = 1.0;
    double worst_lo = 0.0;
    for (double eps : eps_grid) {
        double w0 = centered_width_exact(rep_r, c, omega, eps);
        double lo = 0.5 * eps * (1.0 - std::cos(0.5 * w0));
        if (d - lo < worst) {
            worst = d - lo;
            worst_lo = lo;
        }
    }
    out.width_bound = BoundReport::make(worst_lo, d, digest({d, out.spread}));

    // (ii) the number-spread dichotomy
    double lo;
    if (out.spread < 1.0 / 6.0)
        lo = 1.0 / 32.0;
    else
        lo = (1.0 / 32.0) * (1.0 - std::cos(M_PI / (12.0 * out.spread)));
    out.spread_bound = BoundReport::make(lo, d, digest({d, out.spread, lo}));
    return out;
}

BoundReport tradeoff_check(const Matrix& a, const Matrix& e, const Matrix& omega,
                           const NumberRep& rep_s, const NumberRep& rep_r) {
    if (!is_effect(a, 1e-8)) throw std::invalid_argument("tradeoff_check: a must be an effect");
    NumberRep rep_t = NumberRep::tensor_sum(rep_s, rep_r);
    if (!is_invariant(e, rep_t, 1e-8))
        throw std::invalid_argument("tradeoff_check: e must be an invariant effect");
    if (!is_effect(e, 1e-8)) throw std::invalid_argument("tradeoff_check: e must be an effect");

    Operator eop(e, {rep_s.dim(), rep_r.dim()});
    Matrix gamma = restrict_channel(eop, omega).mat();
    Metrics m = metrics(gamma, a);
    Matrix ns = rep_s.number_operator();
    double lhs = operator_norm(Matrix(a * ns - ns * a));
    double spread = number_spread(omega, rep_r);
    double rhs = 2.0 * m.d * operator_norm(ns) + 2.0 * spread * std::sqrt(2.0 * m.d + m.v_a);
    return BoundReport::make(lhs, rhs, digest({lhs, m.d, m.v_a, spread}));
}

namespace {

SweepReport run_sweep(int trials, std::uint64_t seed,
                      const std::function<BoundReport(SplitMix64&)>& one) {
    SweepReport s;
    s.trials = trials;
    s.seed = seed;
    s.min_residual = std::numeric_limits<double>::infinity();
    SplitMix64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        BoundReport r = one(rng);
        s.min_residual = std::min(s.min_residual, r.residual);
        if (!r.pass) ++s.failures;
    }
    return s;
}

Matrix random_reference_state(SplitMix64& rng, int dr) {
    if (rng.uniform() < 0.3) return rng.density(dr);
    // localized-ish pure states exercise the small-width regime
    Vector v(dr);
    double theta0 = rng.uniform(0.0, 2.0 * M_PI);
    for (int n = 0; n < dr; ++n) v(n) = std::polar(1.0 + rng.uniform(), -theta0 * n);
    v.normalize();
    return Matrix(v * v.adjoint());
}

}  // namespace

SweepReport prop1_sweep(int trials, std::uint64_t seed) {
    return run_sweep(trials, seed, [](SplitMix64& rng) {
        int ds = 2 + rng.uniform_int(3);  // 2..4
        int dr = 4 + rng.uniform_int(13); // 4..16
        NumberRep rep_s = NumberRep::ladder(0, ds - 1);
        NumberRep rep_r = NumberRep::ladder(0, dr - 1);
        PhaseMatrix c = PhaseMatrix::canonical(dr);
        Matrix a = rng.effect(ds);
        Matrix omega = random_reference_state(rng, dr);
        const auto& grid = epsilon_grid();
        double eps = grid[rng.uniform_int(static_cast<int>(grid.size()))];
        return prop1_check(a, omega, rep_s, rep_r, c, eps);
    });
}

SweepReport owb_sweep(int trials, std::uint64_t seed) {
    return run_sweep(trials, seed, [](SplitMix64& rng) {
        int dr = 2 + rng.uniform_int(15);  // 2..16
        NumberRep rep_r = NumberRep::ladder(0, dr - 1);
        PhaseMatrix c = PhaseMatrix::canonical(dr);
        Matrix omega;
        if (rng.uniform() < 0.4) {
            // mixtures of number states probe the small-spread branch
            RVector w = RVector::Zero(dr);
            for (int i = 0; i < dr; ++i) w(i) = rng.uniform() < 0.5 ? rng.uniform() : 0.0;
            if (w.sum() < 1e-12) w(rng.uniform_int(dr)) = 1.0;
            w /= w.sum();
            omega = Matrix::Zero(dr, dr);
            omega.diagonal() = w.cast<cplx>();
        } else {
            omega = random_reference_state(rng, dr);
        }
        OwbReport r = prop2_owb_check(omega, rep_r, c);
        // merge: both bounds must pass; keep the smaller residual
        return r.width_bound.residual < r.spread_bound.residual ? r.width_bound : r.spread_bound;
    });
}

SweepReport tradeoff_sweep(int trials, std::uint64_t seed) {
    return run_sweep(trials, seed, [](SplitMix64& rng) {
        int ds = 2 + rng.uniform_int(3);  // 2..4
        int dr = 2 + rng.uniform_int(7);  // 2..8
        NumberRep rep_s = NumberRep::ladder(0, ds - 1);
        NumberRep rep_r = NumberRep::ladder(0, dr - 1);
        NumberRep rep_t = NumberRep::tensor_sum(rep_s, rep_r);
        Matrix a = rng.effect(ds);
        Matrix e = twirl_op(rng.effect(ds * dr), rep_t);  // invariant effect
        Matrix omega = random_reference_state(rng, dr);
        return tradeoff_check(a, e, omega, rep_s, rep_r);
    });
}

}  // namespace relq
