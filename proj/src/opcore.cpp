#include "relq/opcore.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace relq {

namespace {

int product(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) p *= d;
    return p;
}

}  // namespace

namespace {

void check_operator_shape(const Matrix& m, const std::vector<int>& dims) {
    if (m.rows() != m.cols()) throw std::invalid_argument("Operator: matrix must be square");
    for (int d : dims)
        if (d <= 0) throw std::invalid_argument("Operator: factor dimensions must be positive");
    if (product(dims) != m.rows())
        throw std::invalid_argument("Operator: side length " + std::to_string(m.rows()) +
                                    " does not match dims " + dims_to_string(dims));
}

}  // namespace

Operator::Operator(Matrix m, std::vector<int> dims) : m_(std::move(m)), dims_(std::move(dims)) {
    check_operator_shape(m_, dims_);
}

Operator::Operator(Matrix m) : m_(std::move(m)), dims_{static_cast<int>(m_.rows())} {
    check_operator_shape(m_, dims_);
}

Operator Operator::identity(const std::vector<int>& dims) {
    int n = product(dims);
    return Operator(Matrix::Identity(n, n), dims);
}

Operator Operator::zero(const std::vector<int>& dims) {
    int n = product(dims);
    return Operator(Matrix::Zero(n, n), dims);
}

bool Operator::is_hermitian(double tol) const {
    return operator_norm(Matrix(m_ - m_.adjoint())) < tol * dim();
}

bool Operator::is_unitary(double tol) const {
    Matrix d = m_.adjoint() * m_ - Matrix::Identity(dim(), dim());
    return operator_norm(d) < tol * dim();
}

Operator Operator::operator*(const Operator& rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("Operator product: dimension mismatch");
    return Operator(m_ * rhs.m_, dims_);
}

Operator Operator::operator+(const Operator& rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("Operator sum: dimension mismatch");
    return Operator(m_ + rhs.m_, dims_);
}

Operator Operator::operator-(const Operator& rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("Operator difference: dimension mismatch");
    return Operator(m_ - rhs.m_, dims_);
}

State::State(Operator rho, double tol) : rho_(std::move(rho)) {
    const int n = rho_.dim();
    if (std::abs(rho_.trace() - cplx(1.0, 0.0)) > tol * n)
        throw std::invalid_argument("State: trace must be 1");
    if (!rho_.is_hermitian(tol)) throw std::invalid_argument("State: not Hermitian");
    double lmin = min_eigenvalue(rho_.mat());
    if (lmin < -tol * n) throw std::invalid_argument("State: not positive semidefinite");
    RVector ev = hermitian_eigenvalues(rho_.mat());
    pure_ = std::abs(ev(n - 1) - 1.0) < tol * n;
}

State State::pure(const Vector& psi, std::vector<int> dims) {
    double nrm = psi.norm();
    if (nrm < 1e-14) throw std::invalid_argument("State::pure: zero vector");
    Vector u = psi / nrm;
    Matrix p = u * u.adjoint();
    if (dims.empty()) dims = {static_cast<int>(psi.size())};
    return State(Operator(std::move(p), std::move(dims)));
}

State State::maximally_mixed(const std::vector<int>& dims) {
    Operator id = Operator::identity(dims);
    return State(id * cplx(1.0 / id.dim(), 0.0));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    const auto ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    Matrix out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i)
        for (Eigen::Index j = 0; j < ac; ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    return out;
}

Operator kron(const Operator& a, const Operator& b) {
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return Operator(kron(a.mat(), b.mat()), std::move(dims));
}

Operator partial_trace(const Operator& r, const std::vector<int>& keep) {
    const auto& dims = r.dims();
    const int nf = static_cast<int>(dims.size());
    if (nf < 2) throw std::invalid_argument("partial_trace: need at least two factors");
    std::vector<bool> kept(nf, false);
    for (int k : keep) {
        if (k < 0 || k >= nf) throw std::invalid_argument("partial_trace: invalid factor index");
        if (kept[k]) throw std::invalid_argument("partial_trace: repeated factor index");
        kept[k] = true;
    }

    std::vector<int> keep_sorted, traced;
    for (int i = 0; i < nf; ++i) (kept[i] ? keep_sorted : traced).push_back(i);
    if (keep_sorted.empty()) throw std::invalid_argument("partial_trace: must keep a factor");

    std::vector<int> kdims, tdims;
    for (int i : keep_sorted) kdims.push_back(dims[i]);
    for (int i : traced) tdims.push_back(dims[i]);
    const int kd = product(kdims), td = product(tdims);

    // strides of each factor in the flattened row-major multi-index
    std::vector<long> stride(nf, 1);
    for (int i = nf - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    auto flat = [&](const std::vector<int>& kidx, const std::vector<int>& tidx) {
        long f = 0;
        for (size_t i = 0; i < keep_sorted.size(); ++i) f += stride[keep_sorted[i]] * kidx[i];
        for (size_t i = 0; i < traced.size(); ++i) f += stride[traced[i]] * tidx[i];
        return f;
    };
    auto unpack = [](long x, const std::vector<int>& ds) {
        std::vector<int> idx(ds.size());
        for (int i = static_cast<int>(ds.size()) - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(x % ds[i]);
            x /= ds[i];
        }
        return idx;
    };

    Matrix out = Matrix::Zero(kd, kd);
    for (long a = 0; a < kd; ++a) {
        auto ai = unpack(a, kdims);
        for (long b = 0; b < kd; ++b) {
            auto bi = unpack(b, kdims);
            cplx s = 0.0;
            for (long t = 0; t < td; ++t) {
                auto ti = unpack(t, tdims);
                s += r.mat()(flat(ai, ti), flat(bi, ti));
            }
            out(a, b) = s;
        }
    }
    return Operator(std::move(out), kdims);
}

Operator permute_factors(const Operator& r, const std::vector<int>& perm) {
    const auto& dims = r.dims();
    const int nf = static_cast<int>(dims.size());
    if (static_cast<int>(perm.size()) != nf)
        throw std::invalid_argument("permute_factors: permutation size mismatch");
    std::vector<bool> seen(nf, false);
    for (int p : perm) {
        if (p < 0 || p >= nf || seen[p]) throw std::invalid_argument("permute_factors: not a permutation");
        seen[p] = true;
    }
    std::vector<int> ndims(nf);
    for (int i = 0; i < nf; ++i) ndims[i] = dims[perm[i]];

    std::vector<long> stride(nf, 1);
    for (int i = nf - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    const int n = r.dim();
    std::vector<long> map(n);
    for (long x = 0; x < n; ++x) {
        // x is a flat index in the new ordering; scatter back to the old one
        long rem = x, old = 0;
        for (int i = nf - 1; i >= 0; --i) {
            long di = ndims[i];
            long xi = rem % di;
            rem /= di;
            old += stride[perm[i]] * xi;
        }
        map[x] = old;
    }
    Matrix out(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) out(i, j) = r.mat()(map[i], map[j]);
    return Operator(std::move(out), ndims);
}

RVector hermitian_eigenvalues(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver failed");
    return es.eigenvalues();
}

double min_eigenvalue(const Matrix& a) {
    return hermitian_eigenvalues(Matrix(0.5 * (a + a.adjoint()))).minCoeff();
}

double operator_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    // largest singular value = sqrt of top eigenvalue of A†A
    RVector ev = hermitian_eigenvalues(Matrix(a.adjoint() * a));
    return std::sqrt(std::max(0.0, ev.maxCoeff()));
}

double trace_norm(const Matrix& a) {
    RVector ev = hermitian_eigenvalues(Matrix(a.adjoint() * a));
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::sqrt(std::max(0.0, ev(i)));
    return s;
}

double norm(const Operator& a, NormKind kind) {
    return kind == NormKind::Operator ? operator_norm(a.mat()) : trace_norm(a.mat());
}

cplx expectation(const State& rho, const Operator& a) {
    if (rho.dim() != a.dim()) throw std::invalid_argument("expectation: dimension mismatch");
    return (rho.mat() * a.mat()).trace();
}

bool is_effect(const Matrix& e, double tol) {
    if (operator_norm(Matrix(e - e.adjoint())) > tol * e.rows()) return false;
    RVector ev = hermitian_eigenvalues(Matrix(0.5 * (e + e.adjoint())));
    return ev.minCoeff() > -tol * e.rows() && ev.maxCoeff() < 1.0 + tol * e.rows();
}

std::string dims_to_string(const std::vector<int>& dims) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
    os << "]";
    return os.str();
}

}  // namespace relq
