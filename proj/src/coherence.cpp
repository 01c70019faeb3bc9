#include "relq/coherence.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace relq {

double absolute_coherence(const State& rho, const NumberRep& rep) {
    if (rho.dim() != rep.dim()) throw std::invalid_argument("absolute_coherence: dimension mismatch");
    Matrix d = rho.mat() - twirl_mat_predual(rho.mat(), rep);
    return 0.5 * trace_norm(d);
}

Matrix twirl_factor(const Matrix& m, int ds, int dr, int factor, const NumberRep& rep) {
    if (m.rows() != static_cast<Eigen::Index>(ds) * dr)
        throw std::invalid_argument("twirl_factor: dimension mismatch");
    if (factor == 0 && rep.dim() != ds) throw std::invalid_argument("twirl_factor: rep mismatch");
    if (factor == 1 && rep.dim() != dr) throw std::invalid_argument("twirl_factor: rep mismatch");
    const auto& e = rep.eigs();
    Matrix out = m;
    for (int i = 0; i < ds; ++i)
        for (int a = 0; a < dr; ++a)
            for (int j = 0; j < ds; ++j)
                for (int b = 0; b < dr; ++b) {
                    long qi = factor == 0 ? e[i] : e[a];
                    long qj = factor == 0 ? e[j] : e[b];
                    if (qi != qj) out(i * dr + a, j * dr + b) = 0.0;
                }
    return out;
}

MutualCoherenceResult mutual_coherence(const State& theta, const NumberRep& rep_s,
                                       const NumberRep& rep_r) {
    if (theta.dims().size() != 2) throw std::invalid_argument("mutual_coherence: bipartite state");
    const int ds = theta.dims()[0], dr = theta.dims()[1];
    if (ds != rep_s.dim() || dr != rep_r.dim())
        throw std::invalid_argument("mutual_coherence: rep dimensions mismatch");

    NumberRep rep_t = NumberRep::tensor_sum(rep_s, rep_r);
    Matrix delta = twirl_factor(theta.mat(), ds, dr, 0, rep_s) - theta.mat();
    Matrix x = twirl_mat_predual(delta, rep_t);  // invariant, traceless, Hermitian

    // For invariant traceless Hermitian X the sup of |tr(XE)| over invariant
    // effects is (1/2)||X||_1, attained at the positive-part projector.
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (x + x.adjoint())));
    Matrix pos = Matrix::Zero(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.0)
            pos += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();

    MutualCoherenceResult r;
    r.value = 0.5 * trace_norm(x);
    r.witness = pos;
    r.witness_value = std::abs(((delta * pos).trace()).real());
    return r;
}

double overall_width(const WidthQuery& q) {
    if (q.epsilon < 0.0 || q.epsilon >= 1.0)
        throw std::invalid_argument("overall_width: epsilon must lie in [0,1)");
    const int b = static_cast<int>(q.distribution.size());
    if (b == 0) throw std::invalid_argument("overall_width: empty distribution");
    double total = 0.0;
    for (double p : q.distribution) total += p;
    if (std::abs(total - 1.0) > 1e-8)
        throw std::invalid_argument("overall_width: distribution must sum to 1");
    const double w = 2.0 * M_PI / b;
    const double target = 1.0 - q.epsilon;

    if (q.centered) {
        // symmetric unions of bins around 0: m bins on each side of theta=0
        if (target <= 1e-14) return 0.0;
        double mass = 0.0;
        for (int m = 1; m <= b / 2; ++m) {
            mass += q.distribution[m - 1];
            mass += q.distribution[b - m];
            if (mass >= target - 1e-14) return 2.0 * m * w;
        }
        return 2.0 * M_PI;
    }

    int best_len = b;
    for (int start = 0; start < b; ++start) {
        double mass = 0.0;
        for (int len = 1; len <= b; ++len) {
            mass += q.distribution[(start + len - 1) % b];
            if (mass >= target - 1e-14) {
                if (len < best_len) best_len = len;
                break;
            }
        }
    }
    if (target <= 1e-14) best_len = 0;
    return best_len * w;
}

double centered_width_exact(const NumberRep& rep, const PhaseMatrix& c, const Matrix& omega,
                            double epsilon, double tol) {
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("centered_width_exact: epsilon must lie in [0,1)");
    const double target = 1.0 - epsilon;
    auto mass = [&](double w) {
        // interval [-w/2, w/2] == [2pi - w/2, 2pi) plus [0, w/2]
        if (w >= 2.0 * M_PI) return 1.0;
        double m = phase_interval_probability(rep, c, omega, 0.0, w / 2.0) +
                   phase_interval_probability(rep, c, omega, 2.0 * M_PI - w / 2.0, 2.0 * M_PI);
        return m;
    };
    if (mass(2.0 * M_PI) < target) return 2.0 * M_PI;
    double lo = 0.0, hi = 2.0 * M_PI;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (mass(mid) >= target ? hi : lo) = mid;
    }
    return hi;
}

double coherence_width_bound_check(const State& rho, const Pom& f, const NumberRep& rep,
                                   double epsilon) {
    if (f.space.kind != OutcomeSpace::Kind::Circle)
        throw std::invalid_argument("coherence_width_bound_check: phase POMs only");
    std::vector<double> dist(f.outcomes());
    for (int k = 0; k < f.outcomes(); ++k) dist[k] = expectation(rho, f.effects[k]).real();
    // the bin distribution can undershoot 1 by rounding only
    double s = 0.0;
    for (double p : dist) s += p;
    for (double& p : dist) p /= s;

    WidthQuery q{dist, epsilon, false};
    double width = overall_width(q);
    double c = absolute_coherence(rho, rep);
    double rhs = 1.0 - 2.0 * epsilon - (3.0 * width / (2.0 * M_PI)) * (1.0 - 2.0 * epsilon);
    return c - rhs;
}

}  // namespace relq
