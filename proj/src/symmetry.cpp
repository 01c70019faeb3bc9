#include "relq/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace relq {

NumberRep::NumberRep(std::vector<long> eigs) : eigs_(std::move(eigs)) {
    if (eigs_.empty()) throw std::invalid_argument("NumberRep: empty spectrum");
    min_ = *std::min_element(eigs_.begin(), eigs_.end());
    max_ = *std::max_element(eigs_.begin(), eigs_.end());
}

Matrix NumberRep::number_operator() const {
    Matrix n = Matrix::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) n(i, i) = static_cast<double>(eigs_[i]);
    return n;
}

Matrix NumberRep::phase_unitary(double theta) const {
    Matrix u = Matrix::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) u(i, i) = std::polar(1.0, static_cast<double>(eigs_[i]) * theta);
    return u;
}

Matrix NumberRep::projector(long n) const {
    Matrix p = Matrix::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
        if (eigs_[i] == n) p(i, i) = 1.0;
    return p;
}

std::vector<long> NumberRep::sector_values() const {
    std::set<long> s(eigs_.begin(), eigs_.end());
    return std::vector<long>(s.begin(), s.end());
}

int NumberRep::sector_rank(long n) const {
    int r = 0;
    for (long e : eigs_)
        if (e == n) ++r;
    return r;
}

NumberRep NumberRep::tensor_sum(const NumberRep& a, const NumberRep& b) {
    std::vector<long> eigs;
    eigs.reserve(static_cast<size_t>(a.dim()) * b.dim());
    for (long ea : a.eigs())
        for (long eb : b.eigs()) eigs.push_back(ea + eb);
    return NumberRep(std::move(eigs));
}

NumberRep NumberRep::ladder(long lo, long hi) {
    if (hi < lo) throw std::invalid_argument("NumberRep::ladder: empty range");
    std::vector<long> eigs;
    for (long n = lo; n <= hi; ++n) eigs.push_back(n);
    return NumberRep(std::move(eigs));
}

Matrix twirl_op(const Matrix& a, const NumberRep& rep) {
    if (a.rows() != rep.dim()) throw std::invalid_argument("twirl_op: dimension mismatch");
    Matrix out = a;
    const auto& e = rep.eigs();
    for (int i = 0; i < rep.dim(); ++i)
        for (int j = 0; j < rep.dim(); ++j)
            if (e[i] != e[j]) out(i, j) = 0.0;
    return out;
}

Operator twirl_op(const Operator& a, const NumberRep& rep) {
    return Operator(twirl_op(a.mat(), rep), a.dims());
}

Matrix twirl_mat_predual(const Matrix& rho, const NumberRep& rep) {
    // the predual takes the identical sector-pinching form
    return twirl_op(rho, rep);
}

State twirl_state(const State& rho, const NumberRep& rep) {
    if (rho.dim() != rep.dim()) throw std::invalid_argument("twirl_state: dimension mismatch");
    return State(Operator(twirl_op(rho.mat(), rep), rho.dims()));
}

Matrix haar_average(const Matrix& a, const NumberRep& rep, int nodes) {
    if (a.rows() != rep.dim()) throw std::invalid_argument("haar_average: dimension mismatch");
    if (nodes <= 2 * rep.max_diff())
        throw std::invalid_argument("haar_average: node count " + std::to_string(nodes) +
                                    " aliases eigenvalue differences up to " +
                                    std::to_string(rep.max_diff()));
    Matrix acc = Matrix::Zero(a.rows(), a.cols());
    for (int k = 0; k < nodes; ++k) {
        double theta = 2.0 * M_PI * k / nodes;
        Matrix u = rep.phase_unitary(theta);
        acc += u * a * u.adjoint();
    }
    return acc / static_cast<double>(nodes);
}

InvarianceReport invariance_report(const Matrix& a, const NumberRep& rep) {
    InvarianceReport r{};
    r.threshold = 1e-8 * rep.dim();

    double pc = 0.0;
    for (long n : rep.sector_values()) {
        Matrix p = rep.projector(n);
        pc = std::max(pc, operator_norm(Matrix(a * p - p * a)));
    }
    r.projector_commutator = pc;

    int nodes = static_cast<int>(2 * rep.max_diff()) + 3;
    double sc = 0.0;
    for (int k = 1; k < nodes; ++k) {
        double theta = 2.0 * M_PI * k / nodes;
        Matrix u = rep.phase_unitary(theta);
        sc = std::max(sc, operator_norm(Matrix(u * a * u.adjoint() - a)));
    }
    r.shift_conjugation = sc;

    r.haar_gap = operator_norm(Matrix(haar_average(a, rep, nodes) - a));
    r.twirl_gap = operator_norm(Matrix(twirl_op(a, rep) - a));
    r.invariant = r.projector_commutator < r.threshold && r.shift_conjugation < r.threshold &&
                  r.haar_gap < r.threshold && r.twirl_gap < r.threshold;
    return r;
}

bool is_invariant(const Matrix& a, const NumberRep& rep, double tol) {
    return operator_norm(Matrix(twirl_op(a, rep) - a)) < tol * rep.dim();
}

StatisticsEqualityReport statistics_equality_check(const State& rho, const Matrix& a,
                                                   const NumberRep& rep) {
    StatisticsEqualityReport r{};
    cplx lhs = (rho.mat() * twirl_op(a, rep)).trace();
    cplx rhs = (twirl_mat_predual(rho.mat(), rep) * a).trace();
    r.duality_residual = std::abs(lhs - rhs);
    cplx direct = (rho.mat() * a).trace();
    r.invariant_gap = std::abs(direct - rhs);
    return r;
}

}  // namespace relq
