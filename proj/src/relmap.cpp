#include "relq/relmap.hpp"

#include <cmath>
#include <stdexcept>

namespace relq {

FourierBlocks fourier_components(const Matrix& a, const NumberRep& rep) {
    if (a.rows() != rep.dim()) throw std::invalid_argument("fourier_components: dimension mismatch");
    FourierBlocks blocks;
    const auto& e = rep.eigs();
    for (int i = 0; i < rep.dim(); ++i) {
        for (int j = 0; j < rep.dim(); ++j) {
            if (a(i, j) == cplx(0, 0)) continue;
            long q = e[i] - e[j];
            auto it = blocks.find(q);
            if (it == blocks.end())
                it = blocks.emplace(q, Matrix::Zero(rep.dim(), rep.dim())).first;
            it->second(i, j) = a(i, j);
        }
    }
    return blocks;
}

Matrix pom_fourier(const NumberRep& rep, const PhaseMatrix& c, long q) {
    if (c.dim() != rep.dim()) throw std::invalid_argument("pom_fourier: kernel/rep size mismatch");
    Matrix f = Matrix::Zero(rep.dim(), rep.dim());
    const auto& e = rep.eigs();
    for (int k = 0; k < rep.dim(); ++k)
        for (int l = 0; l < rep.dim(); ++l)
            if (e[l] - e[k] == q) f(k, l) = c.mat()(k, l);
    return f;
}

RelativizeResult relativize(const Matrix& a, const NumberRep& rep_s, const NumberRep& rep_r,
                            const PhaseMatrix& c) {
    if (a.rows() != rep_s.dim()) throw std::invalid_argument("relativize: dimension mismatch");
    const long window = rep_r.max_diff();
    FourierBlocks blocks = fourier_components(a, rep_s);

    Matrix out = Matrix::Zero(rep_s.dim() * rep_r.dim(), rep_s.dim() * rep_r.dim());
    double leakage = 0.0;
    for (const auto& [q, aq] : blocks) {
        if (std::labs(q) > window) {
            leakage += operator_norm(aq);
            continue;
        }
        out += kron(aq, pom_fourier(rep_r, c, q));
    }
    return {Operator(std::move(out), {rep_s.dim(), rep_r.dim()}), leakage};
}

Pom relativize_pom(const Pom& e, const NumberRep& rep_s, const NumberRep& rep_r,
                   const PhaseMatrix& c) {
    Pom out;
    out.space = e.space;
    out.effects.reserve(e.effects.size());
    for (const auto& eff : e.effects)
        out.effects.push_back(relativize(eff.mat(), rep_s, rep_r, c).op);

    NumberRep rep_t = NumberRep::tensor_sum(rep_s, rep_r);
    auto check = pom_validate(out, rep_t);
    if (!(check.positivity < 1e-9 && check.normalization < 1e-9))
        throw std::runtime_error("relativize_pom: output failed POM validation");
    return out;
}

CyclicRep::CyclicRep(std::vector<Matrix> system_unitaries, int sector_dim)
    : us_(std::move(system_unitaries)), sector_dim_(sector_dim) {
    if (us_.empty()) throw std::invalid_argument("CyclicRep: empty representation");
    if (sector_dim_ < 1) throw std::invalid_argument("CyclicRep: sector dimension");
    const int n = order();
    const int d = system_dim();
    // homomorphism of Z_n: U(g) = U(1)^g and U(1)^n = 1
    for (int g = 0; g < n; ++g) {
        if (us_[g].rows() != d || us_[g].cols() != d)
            throw std::invalid_argument("CyclicRep: inconsistent system dimension");
        Matrix expect = Matrix::Identity(d, d);
        for (int k = 0; k < g; ++k) expect = us_[1] * expect;
        if (operator_norm(Matrix(us_[g] - expect)) > 1e-9 * d)
            throw std::invalid_argument("CyclicRep: U_S is not a Z_n homomorphism");
    }
    Matrix wrap = us_[1];
    for (int k = 1; k < n; ++k) wrap = us_[1] * wrap;
    if (n > 1 && operator_norm(Matrix(wrap - Matrix::Identity(d, d))) > 1e-9 * d)
        throw std::invalid_argument("CyclicRep: U_S(1)^n != 1");
}

Matrix CyclicRep::reference_projector(int g) const {
    const int dr = reference_dim();
    Matrix p = Matrix::Zero(dr, dr);
    for (int i = 0; i < sector_dim_; ++i) p(g * sector_dim_ + i, g * sector_dim_ + i) = 1.0;
    return p;
}

Matrix CyclicRep::reference_unitary(int g) const {
    const int n = order(), dr = reference_dim();
    Matrix u = Matrix::Zero(dr, dr);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < sector_dim_; ++k)
            u(((i + g) % n) * sector_dim_ + k, i * sector_dim_ + k) = 1.0;
    return u;
}

CyclicRep CyclicRep::lattice_shift(int order) {
    std::vector<Matrix> us(order);
    for (int g = 0; g < order; ++g) {
        Matrix u = Matrix::Zero(order, order);
        for (int x = 0; x < order; ++x) u((x + g) % order, x) = 1.0;
        us[g] = std::move(u);
    }
    return CyclicRep(std::move(us), 1);
}

Operator relativize_cyclic(const Matrix& a, const CyclicRep& rep) {
    if (a.rows() != rep.system_dim())
        throw std::invalid_argument("relativize_cyclic: dimension mismatch");
    const int n = rep.order();
    const int d = rep.system_dim() * rep.reference_dim();
    Matrix out = Matrix::Zero(d, d);
    for (int g = 0; g < n; ++g) {
        const Matrix& u = rep.system_unitary(g);
        out += kron(Matrix(u * a * u.adjoint()), rep.reference_projector(g));
    }
    return Operator(std::move(out), {rep.system_dim(), rep.reference_dim()});
}

Operator restrict_channel(const Operator& r, const Matrix& omega) {
    if (r.factors() != 2) throw std::invalid_argument("restrict: operator must be bipartite");
    const int ds = r.dims()[0], dr = r.dims()[1];
    if (omega.rows() != dr) throw std::invalid_argument("restrict: reference dimension mismatch");
    Matrix out = Matrix::Zero(ds, ds);
    for (int x = 0; x < ds; ++x)
        for (int y = 0; y < ds; ++y) {
            cplx s = 0.0;
            for (int a = 0; a < dr; ++a)
                for (int b = 0; b < dr; ++b) s += omega(a, b) * r.mat()(x * dr + b, y * dr + a);
            out(x, y) = s;
        }
    return Operator(std::move(out), {ds});
}

Matrix restrict_after_relativize(const Matrix& a, const Matrix& omega, const NumberRep& rep_s,
                                 const NumberRep& rep_r, const PhaseMatrix& c) {
    if (omega.rows() != rep_r.dim())
        throw std::invalid_argument("restrict_after_relativize: reference dimension mismatch");
    FourierBlocks blocks = fourier_components(a, rep_s);
    Matrix out = Matrix::Zero(rep_s.dim(), rep_s.dim());
    const long window = rep_r.max_diff();
    for (const auto& [q, aq] : blocks) {
        if (std::labs(q) > window) continue;
        cplx mu = (omega * pom_fourier(rep_r, c, q)).trace();
        out += mu * aq;
    }
    return out;
}

Matrix relativize_choi(const NumberRep& rep_s, const NumberRep& rep_r, const PhaseMatrix& c) {
    const int ds = rep_s.dim();
    const int dt = ds * rep_r.dim();
    Matrix choi = Matrix::Zero(ds * dt, ds * dt);
    for (int i = 0; i < ds; ++i)
        for (int j = 0; j < ds; ++j) {
            Matrix unit = Matrix::Zero(ds, ds);
            unit(i, j) = 1.0;
            Matrix y = relativize(unit, rep_s, rep_r, c).op.mat();
            Matrix eij = Matrix::Zero(ds, ds);
            eij(i, j) = 1.0;
            choi += kron(eij, y);
        }
    return choi;
}

}  // namespace relq
