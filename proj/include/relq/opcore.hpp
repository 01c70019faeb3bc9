#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace relq {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Default algebraic tolerance; identity-type checks scale this by dimension.
inline constexpr double kTol = 1e-10;

enum class NormKind { Operator, Trace };

/// Dense complex square matrix tagged with its tensor-factor dimensions.
/// The matrix side length always equals the product of dims; kron
/// concatenates dims and partial traces consume them.
class Operator {
  public:
    Operator() = default;
    Operator(Matrix m, std::vector<int> dims);
    explicit Operator(Matrix m);  // single factor

    static Operator identity(const std::vector<int>& dims);
    static Operator zero(const std::vector<int>& dims);

    const Matrix& mat() const { return m_; }
    Matrix& mat() { return m_; }
    const std::vector<int>& dims() const { return dims_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    int factors() const { return static_cast<int>(dims_.size()); }

    Operator adjoint() const { return Operator(m_.adjoint(), dims_); }
    cplx trace() const { return m_.trace(); }
    bool is_hermitian(double tol = kTol) const;
    bool is_unitary(double tol = kTol) const;

    Operator operator*(const Operator& rhs) const;
    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(cplx s) const { return Operator(s * m_, dims_); }

  private:
    Matrix m_;
    std::vector<int> dims_;
};

/// Positive unit-trace Operator. Construction verifies both properties.
class State {
  public:
    explicit State(Operator rho, double tol = kTol);
    static State pure(const Vector& psi, std::vector<int> dims = {});
    static State maximally_mixed(const std::vector<int>& dims);

    const Operator& rho() const { return rho_; }
    const Matrix& mat() const { return rho_.mat(); }
    const std::vector<int>& dims() const { return rho_.dims(); }
    int dim() const { return rho_.dim(); }
    bool pure_tag() const { return pure_; }

  private:
    Operator rho_;
    bool pure_ = false;
};

Operator kron(const Operator& a, const Operator& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Trace out every factor not listed in `keep` (0-based factor indices,
/// strictly increasing order in the result).
Operator partial_trace(const Operator& r, const std::vector<int>& keep);

/// Reorder tensor factors: perm[i] = index (in the input) of the factor
/// that lands at slot i of the output.
Operator permute_factors(const Operator& r, const std::vector<int>& perm);

double norm(const Operator& a, NormKind kind);
double operator_norm(const Matrix& a);
double trace_norm(const Matrix& a);

cplx expectation(const State& rho, const Operator& a);

/// Sorted eigenvalues of a Hermitian matrix (the one spectral kernel used
/// for norms, positivity checks and projectors).
RVector hermitian_eigenvalues(const Matrix& a);
double min_eigenvalue(const Matrix& a);

bool is_effect(const Matrix& e, double tol = kTol);

std::string dims_to_string(const std::vector<int>& dims);

}  // namespace relq
