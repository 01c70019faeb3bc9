#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relq/opcore.hpp"
#include "relq/rng.hpp"

using namespace relq;

namespace {

Matrix pauli_x() {
    Matrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

}  // namespace

TEST_CASE("kron identity and diagonal cases") {
    Operator i2 = Operator::identity({2}), i3 = Operator::identity({3});
    Operator k = kron(i2, i3);
    CHECK(k.dims() == std::vector<int>{2, 3});
    CHECK(operator_norm(Matrix(k.mat() - Matrix::Identity(6, 6))) == 0.0);

    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a.diagonal() << 1, 2;
    b.diagonal() << 3, 4;
    Matrix ab = kron(a, b);
    Vector expect(4);
    expect << 3, 4, 6, 8;
    CHECK(operator_norm(Matrix(ab - Matrix(expect.asDiagonal()))) == 0.0);
}

TEST_CASE("kron matches four-index loop oracle") {
    SplitMix64 rng(11);
    Matrix a = rng.ginibre(2, 2), b = rng.ginibre(3, 3);
    Matrix k = kron(a, b);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q)
                    CHECK(std::abs(k(i * 3 + p, j * 3 + q) - a(i, j) * b(p, q)) == 0.0);
}

TEST_CASE("kron associativity up to dims bookkeeping") {
    SplitMix64 rng(12);
    Operator a(rng.ginibre(2, 2)), b(rng.ginibre(3, 3)), c(rng.ginibre(2, 2));
    Matrix lhs = kron(kron(a, b), c).mat();
    Matrix rhs = kron(a, kron(b, c)).mat();
    // entry products only reassociate, so equality holds to one ulp-level
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("partial trace on product operators") {
    SplitMix64 rng(13);
    Operator a(rng.ginibre(2, 2)), b(rng.ginibre(3, 3));
    Operator ab = kron(a, b);

    Operator left = partial_trace(ab, {0});
    CHECK(operator_norm(Matrix(left.mat() - b.mat().trace() * a.mat())) < 1e-12);

    Matrix rho = rng.density(2), omega = rng.density(3);
    Operator ro = kron(Operator(rho), Operator(omega));
    Operator right = partial_trace(ro, {1});
    CHECK(operator_norm(Matrix(right.mat() - omega)) < 1e-12);

    CHECK(std::abs(partial_trace(ab, {0}).trace() - ab.trace()) < 1e-12);
}

TEST_CASE("partial trace matches explicit double-loop oracle on 2x3") {
    SplitMix64 rng(14);
    Operator r(rng.ginibre(6, 6), {2, 3});
    Operator keep0 = partial_trace(r, {0});
    Matrix oracle = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int t = 0; t < 3; ++t) oracle(i, j) += r.mat()(i * 3 + t, j * 3 + t);
    CHECK(operator_norm(Matrix(keep0.mat() - oracle)) < 1e-14);

    Operator keep1 = partial_trace(r, {1});
    Matrix oracle1 = Matrix::Zero(3, 3);
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            for (int t = 0; t < 2; ++t) oracle1(p, q) += r.mat()(t * 3 + p, t * 3 + q);
    CHECK(operator_norm(Matrix(keep1.mat() - oracle1)) < 1e-14);

    CHECK_THROWS_AS(partial_trace(r, {2}), std::invalid_argument);
}

TEST_CASE("permute_factors is consistent with kron") {
    SplitMix64 rng(15);
    Operator a(rng.ginibre(2, 2)), b(rng.ginibre(3, 3)), c(rng.ginibre(4, 4));
    Operator abc = kron(kron(a, b), c);
    Operator cab = permute_factors(abc, {2, 0, 1});
    Operator expect = kron(kron(c, a), b);
    CHECK(cab.dims() == std::vector<int>{4, 2, 3});
    CHECK(operator_norm(Matrix(cab.mat() - expect.mat())) < 1e-14);

    // permuting back is the identity
    Operator back = permute_factors(cab, {1, 2, 0});
    CHECK(operator_norm(Matrix(back.mat() - abc.mat())) == 0.0);
}

TEST_CASE("norms: forced values and eigensolver oracle") {
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 1, -2;
    CHECK(trace_norm(d) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(operator_norm(pauli_x()) == doctest::Approx(1.0).epsilon(1e-14));

    SplitMix64 rng(16);
    Matrix h = rng.hermitian(5);
    RVector ev = hermitian_eigenvalues(h);
    double tn = 0.0, on = 0.0;
    for (int i = 0; i < 5; ++i) {
        tn += std::abs(ev(i));
        on = std::max(on, std::abs(ev(i)));
    }
    CHECK(trace_norm(h) == doctest::Approx(tn).epsilon(1e-12));
    CHECK(operator_norm(h) == doctest::Approx(on).epsilon(1e-12));
}

TEST_CASE("trace norm dominates operator norm") {
    SplitMix64 rng(17);
    for (int t = 0; t < 25; ++t) {
        Matrix a = rng.ginibre(4, 4);
        CHECK(trace_norm(a) >= operator_norm(a) - 1e-12);
    }
}

TEST_CASE("expectation values") {
    SplitMix64 rng(18);
    State rho(Operator(rng.density(3)));
    CHECK(std::abs(expectation(rho, Operator::identity({3})) - cplx(1, 0)) < 1e-12);

    Vector plus(2);
    plus << 1, 1;
    State p = State::pure(plus);
    CHECK(std::abs(expectation(p, Operator(pauli_x())) - cplx(1, 0)) < 1e-14);

    // entrywise sum oracle
    Matrix r = rng.density(4), a = rng.ginibre(4, 4);
    cplx oracle = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) oracle += r(i, j) * a(j, i);
    CHECK(std::abs(expectation(State(Operator(r)), Operator(a)) - oracle) < 1e-13);

    CHECK_THROWS_AS(expectation(p, Operator::identity({3})), std::invalid_argument);
}

TEST_CASE("effect expectations stay in the unit interval") {
    SplitMix64 rng(19);
    for (int t = 0; t < 40; ++t) {
        Matrix e = rng.effect(3);
        CHECK(is_effect(e));
        State rho(Operator(rng.density(3)));
        cplx v = expectation(rho, Operator(e));
        CHECK(std::abs(v.imag()) < 1e-12);
        CHECK(v.real() > -1e-12);
        CHECK(v.real() < 1.0 + 1e-12);
    }
}

TEST_CASE("state validation catches bad inputs") {
    Matrix notpos = Matrix::Zero(2, 2);
    notpos.diagonal() << 1.5, -0.5;
    CHECK_THROWS_AS(State(Operator(notpos)), std::invalid_argument);

    Matrix badtrace = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(State(Operator(badtrace)), std::invalid_argument);

    Vector v(2);
    v << 1, cplx(0, 1);
    State s = State::pure(v);
    CHECK(s.pure_tag());
    CHECK(std::abs(s.rho().trace() - cplx(1, 0)) < 1e-14);
}

TEST_CASE("operator invariant violations are rejected") {
    CHECK_THROWS_AS(Operator(Matrix::Identity(4, 4), {2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(Operator(Matrix::Identity(4, 4), {2, 0, 2}), std::invalid_argument);
    CHECK_NOTHROW(Operator(Matrix::Identity(4, 4), {2, 2}));
}
