#include "relq/pom.hpp"

#include <cmath>
#include <stdexcept>

namespace relq {

OutcomeSpace OutcomeSpace::circle(int bins) {
    if (bins < 1) throw std::invalid_argument("OutcomeSpace: bin count must be positive");
    OutcomeSpace s;
    s.kind = Kind::Circle;
    s.bin_count = bins;
    return s;
}

OutcomeSpace OutcomeSpace::finite(std::vector<std::string> labels) {
    for (size_t i = 0; i < labels.size(); ++i)
        for (size_t j = i + 1; j < labels.size(); ++j)
            if (labels[i] == labels[j]) throw std::invalid_argument("OutcomeSpace: duplicate label");
    OutcomeSpace s;
    s.kind = Kind::FiniteSet;
    s.labels = std::move(labels);
    return s;
}

double OutcomeSpace::bin_width() const {
    if (kind != Kind::Circle) throw std::logic_error("bin_width: not a circle space");
    return 2.0 * M_PI / bin_count;
}

PhaseMatrix::PhaseMatrix(Matrix c, double tol) : c_(std::move(c)) {
    if (c_.rows() != c_.cols()) throw std::invalid_argument("PhaseMatrix: must be square");
    const int d = static_cast<int>(c_.rows());
    for (int i = 0; i < d; ++i)
        if (std::abs(c_(i, i) - cplx(1, 0)) > tol)
            throw std::invalid_argument("PhaseMatrix: diagonal must be 1");
    if (operator_norm(Matrix(c_ - c_.adjoint())) > tol * d)
        throw std::invalid_argument("PhaseMatrix: not Hermitian");
    if (min_eigenvalue(c_) < -tol * d)
        throw std::invalid_argument("PhaseMatrix: not positive semidefinite");
}

PhaseMatrix PhaseMatrix::canonical(int dim) {
    return PhaseMatrix(Matrix::Ones(dim, dim));
}

Operator Pom::effect_sum() const {
    if (effects.empty()) throw std::logic_error("Pom: no effects");
    Operator s = effects[0];
    for (size_t i = 1; i < effects.size(); ++i) s = s + effects[i];
    return s;
}

Operator Pom::effect_union(const std::vector<int>& bins) const {
    Operator s = Operator::zero(effects.at(0).dims());
    for (int b : bins) s = s + effects.at(b);
    return s;
}

bool Pom::projection_valued(double tol) const {
    for (const auto& e : effects)
        if (operator_norm(Matrix(e.mat() * e.mat() - e.mat())) > tol * e.dim()) return false;
    return true;
}

Matrix phase_interval_effect(const NumberRep& rep, const PhaseMatrix& c, double a, double b) {
    if (c.dim() != rep.dim()) throw std::invalid_argument("phase effect: kernel/rep size mismatch");
    if (b < a || b - a > 2.0 * M_PI + 1e-12)
        throw std::invalid_argument("phase effect: bad interval");
    const int d = rep.dim();
    const auto& e = rep.eigs();
    Matrix f(d, d);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            long q = e[n] - e[m];
            if (q == 0) {
                f(n, m) = c.mat()(n, m) * (b - a) / (2.0 * M_PI);
            } else {
                cplx num = std::polar(1.0, q * b) - std::polar(1.0, q * a);
                f(n, m) = c.mat()(n, m) * num / (cplx(0, 2.0 * M_PI) * static_cast<double>(q));
            }
        }
    }
    return f;
}

Pom build_phase_pom(const NumberRep& rep, const PhaseMatrix& c, int bins) {
    Pom pom;
    pom.space = OutcomeSpace::circle(bins);
    const double w = 2.0 * M_PI / bins;
    pom.effects.reserve(bins);
    for (int k = 0; k < bins; ++k)
        pom.effects.emplace_back(phase_interval_effect(rep, c, k * w, (k + 1) * w),
                                 std::vector<int>{rep.dim()});
    return pom;
}

Pom build_phase_pom(int dim, const PhaseMatrix& c, int bins) {
    return build_phase_pom(NumberRep::ladder(0, dim - 1), c, bins);
}

double phase_interval_probability(const NumberRep& rep, const PhaseMatrix& c, const Matrix& rho,
                                  double lo, double hi) {
    Matrix f = phase_interval_effect(rep, c, lo, hi);
    return ((rho * f).trace()).real();
}

PomValidationReport pom_validate(const Pom& f, const NumberRep& rep) {
    PomValidationReport rep_out{};
    double pos = 0.0;
    for (const auto& e : f.effects) pos = std::max(pos, std::max(0.0, -min_eigenvalue(e.mat())));
    rep_out.positivity = pos;

    Operator s = f.effect_sum();
    rep_out.normalization =
        operator_norm(Matrix(s.mat() - Matrix::Identity(s.dim(), s.dim())));

    double cov = 0.0;
    if (f.space.kind == OutcomeSpace::Kind::Circle && rep.dim() == f.effects.at(0).dim()) {
        const int B = f.space.bin_count;
        for (int sft = 1; sft < B; ++sft) {
            Matrix u = rep.phase_unitary(2.0 * M_PI * sft / B);
            for (int k = 0; k < B; ++k) {
                Matrix lhs = u * f.effects[k].mat() * u.adjoint();
                cov = std::max(cov, operator_norm(Matrix(lhs - f.effects[(k + sft) % B].mat())));
            }
        }
    }
    rep_out.covariance = cov;
    return rep_out;
}

Norm1Report norm1_defect(const Pom& f, double tol) {
    Norm1Report r{0.0, 0.0, 0};
    for (const auto& e : f.effects) {
        double n = operator_norm(e.mat());
        if (n < tol) {
            ++r.zero_effects;
            r.defect_all = std::max(r.defect_all, 1.0);
        } else {
            double d = std::max(0.0, 1.0 - n);
            r.defect_nonzero = std::max(r.defect_nonzero, d);
            r.defect_all = std::max(r.defect_all, d);
        }
    }
    return r;
}

double localisation_margin(const State& rho, const Pom& f, const std::vector<int>& bins) {
    if (f.space.kind != OutcomeSpace::Kind::Circle)
        throw std::invalid_argument("localisation_margin: circle POMs only");
    Operator fx = f.effect_union(bins);
    double d = fx.dim();
    double measure = bins.size() * f.space.bin_width();
    double p = expectation(rho, fx).real();
    return d * measure / (2.0 * M_PI) - p;
}

Pom smeared_position_pom(int lattice, const std::vector<double>& kernel) {
    if (lattice < 1) throw std::invalid_argument("smeared_position_pom: lattice size");
    if (static_cast<int>(kernel.size()) != lattice)
        throw std::invalid_argument("smeared_position_pom: kernel length must match lattice");
    double sum = 0.0;
    for (double v : kernel) {
        if (v < -1e-14) throw std::invalid_argument("smeared_position_pom: kernel not nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw std::invalid_argument("smeared_position_pom: kernel must sum to 1");

    Pom pom;
    std::vector<std::string> labels(lattice);
    for (int x = 0; x < lattice; ++x) labels[x] = std::to_string(x);
    pom.space = OutcomeSpace::finite(std::move(labels));
    for (int x = 0; x < lattice; ++x) {
        Matrix e = Matrix::Zero(lattice, lattice);
        // (chi_{x} * e)(q) = kernel(q - x) cyclically
        for (int q = 0; q < lattice; ++q) e(q, q) = kernel[((q - x) % lattice + lattice) % lattice];
        pom.effects.emplace_back(std::move(e), std::vector<int>{lattice});
    }
    return pom;
}

std::vector<double> phase_bin_distribution(const NumberRep& rep, const PhaseMatrix& c,
                                           const Matrix& rho, int bins) {
    std::vector<double> p(bins);
    const double w = 2.0 * M_PI / bins;
    for (int k = 0; k < bins; ++k) p[k] = phase_interval_probability(rep, c, rho, k * w, (k + 1) * w);
    return p;
}

}  // namespace relq
