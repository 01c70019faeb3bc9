#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relq/coherence.hpp"
#include "relq/rng.hpp"
#include "relq/symmetry.hpp"

using namespace relq;

TEST_CASE("number_rep basics") {
    NumberRep r = NumberRep::ladder(0, 1);
    Matrix u = r.phase_unitary(M_PI);
    CHECK(std::abs(u(0, 0) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(u(1, 1) - cplx(-1, 0)) < 1e-12);

    NumberRep scalar(std::vector<long>{5, 5, 5});
    Matrix us = scalar.phase_unitary(0.7);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(us(i, i) - std::polar(1.0, 5 * 0.7)) < 1e-14);

    NumberRep comp = NumberRep::tensor_sum(NumberRep::ladder(0, 1), NumberRep::ladder(0, 2));
    CHECK(comp.dim() == 6);
    CHECK(comp.sector_rank(1) == 2);  // (0,1) and (1,0)
    CHECK(comp.sector_rank(3) == 1);  // (1,2)
}

TEST_CASE("projectors are orthogonal idempotents summing to identity") {
    NumberRep comp = NumberRep::tensor_sum(NumberRep::ladder(0, 2), NumberRep::ladder(0, 2));
    Matrix sum = Matrix::Zero(9, 9);
    for (long n : comp.sector_values()) {
        Matrix p = comp.projector(n);
        CHECK(operator_norm(Matrix(p * p - p)) < 1e-15);
        sum += p;
        for (long m : comp.sector_values())
            if (m != n) CHECK(operator_norm(Matrix(p * comp.projector(m))) < 1e-15);
    }
    CHECK(operator_norm(Matrix(sum - Matrix::Identity(9, 9))) < 1e-15);
}

TEST_CASE("twirl fixed points and annihilation") {
    NumberRep rep = NumberRep::ladder(0, 1);
    Matrix diag = Matrix::Zero(2, 2);
    diag.diagonal() << 0.3, cplx(0.7, 0);
    CHECK(operator_norm(Matrix(twirl_op(diag, rep) - diag)) == 0.0);

    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    CHECK(operator_norm(twirl_op(sx, rep)) == 0.0);
}

TEST_CASE("twirl equals Haar quadrature on alias-free grids") {
    SplitMix64 rng(21);
    NumberRep rep(std::vector<long>{0, 1, 1, 2, 3, 5});
    Matrix a = rng.ginibre(6, 6);
    Matrix avg = haar_average(a, rep, 4096);
    CHECK(operator_norm(Matrix(avg - twirl_op(a, rep))) < 1e-9);
    CHECK_THROWS_AS(haar_average(a, rep, 8), std::invalid_argument);
}

TEST_CASE("twirl_state dephases the coherent qubit") {
    NumberRep rep = NumberRep::ladder(0, 1);
    for (double theta : {0.0, 0.9, 2.5}) {
        Vector v(2);
        v << 1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), theta);
        State rho = State::pure(v);
        State t = twirl_state(rho, rep);
        CHECK(operator_norm(Matrix(t.mat() - 0.5 * Matrix::Identity(2, 2))) < 1e-14);
    }

    Vector number = Vector::Zero(2);
    number(1) = 1.0;
    State ns = State::pure(number);
    CHECK(operator_norm(Matrix(twirl_state(ns, rep).mat() - ns.mat())) == 0.0);
}

TEST_CASE("twirl is unital, idempotent, positive and trace self-adjoint") {
    SplitMix64 rng(22);
    NumberRep rep(std::vector<long>{0, 0, 1, 2, 2});
    Matrix id = Matrix::Identity(5, 5);
    CHECK(operator_norm(Matrix(twirl_op(id, rep) - id)) == 0.0);

    for (int t = 0; t < 20; ++t) {
        Matrix a = rng.ginibre(5, 5);
        Matrix once = twirl_op(a, rep);
        CHECK(operator_norm(Matrix(twirl_op(once, rep) - once)) == 0.0);

        Matrix e = rng.effect(5);
        CHECK(is_effect(twirl_op(e, rep)));

        Matrix rho = rng.density(5);
        State ts = twirl_state(State(Operator(rho)), rep);
        CHECK(std::abs(ts.rho().trace() - cplx(1, 0)) < 1e-13);
        CHECK(min_eigenvalue(ts.mat()) > -1e-12);

        cplx lhs = (twirl_mat_predual(rho, rep) * a).trace();
        cplx rhs = (rho * twirl_op(a, rep)).trace();
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("invariance report: all four conditions agree") {
    SplitMix64 rng(23);
    NumberRep rep = NumberRep::ladder(0, 3);

    InvarianceReport gen = invariance_report(rep.number_operator(), rep);
    CHECK(gen.invariant);
    CHECK(gen.projector_commutator < 1e-12);
    CHECK(gen.shift_conjugation < 1e-12);
    CHECK(gen.haar_gap < 1e-12);
    CHECK(gen.twirl_gap < 1e-12);

    NumberRep q = NumberRep::ladder(0, 1);
    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    InvarianceReport bad = invariance_report(sx, q);
    CHECK(!bad.invariant);
    CHECK(bad.projector_commutator > 1.0 - 1e-10);
    CHECK(bad.shift_conjugation > 1.0 - 1e-10);
    CHECK(bad.haar_gap > 1.0 - 1e-10);
    CHECK(bad.twirl_gap > 1.0 - 1e-10);

    Matrix cert = twirl_op(rng.ginibre(4, 4), rep);
    CHECK(invariance_report(cert, rep).invariant);
}

TEST_CASE("statistics equality: duality and the invariant gap") {
    SplitMix64 rng(24);
    NumberRep rep = NumberRep::ladder(0, 2);
    for (int t = 0; t < 20; ++t) {
        State rho(Operator(rng.density(3)));
        Matrix a = rng.hermitian(3);
        CHECK(statistics_equality_check(rho, a, rep).duality_residual < 1e-12);

        Matrix inv = twirl_op(a, rep);
        CHECK(statistics_equality_check(rho, inv, rep).invariant_gap < 1e-12);
    }

    // non-invariant observables do open a gap on coherent states
    NumberRep q = NumberRep::ladder(0, 1);
    Vector v(2);
    v << 1, 1;
    State coherent = State::pure(v);
    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    CHECK(std::abs(expectation(coherent, Operator(sx))) > 0.9);
    CHECK(statistics_equality_check(coherent, sx, q).invariant_gap > 0.9);
}

TEST_CASE("composite twirl factorization") {
    SplitMix64 rng(25);
    NumberRep rs = NumberRep::ladder(0, 1), rr = NumberRep::ladder(0, 2);
    NumberRep rt = NumberRep::tensor_sum(rs, rr);
    for (int t = 0; t < 10; ++t) {
        Matrix a = rng.ginibre(6, 6);
        Matrix tt = twirl_op(a, rt);
        Matrix s_then = twirl_factor(tt, 2, 3, 0, rs);
        Matrix r_then = twirl_factor(tt, 2, 3, 1, rr);
        Matrix both = twirl_factor(twirl_factor(tt, 2, 3, 0, rs), 2, 3, 1, rr);
        CHECK((s_then - r_then).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((s_then - both).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("partial trace of an invariant bipartite state is invariant") {
    SplitMix64 rng(26);
    NumberRep rs = NumberRep::ladder(0, 1), rr = NumberRep::ladder(0, 2);
    NumberRep rt = NumberRep::tensor_sum(rs, rr);
    for (int t = 0; t < 10; ++t) {
        Matrix prod = kron(rng.density(2), rng.density(3));
        Matrix inv = twirl_mat_predual(prod, rt);
        Operator reduced = partial_trace(Operator(inv, {2, 3}), {0});
        CHECK(operator_norm(Matrix(twirl_op(reduced.mat(), rs) - reduced.mat())) < 1e-12);
    }
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(NumberRep(std::vector<long>{}), std::invalid_argument);
    NumberRep rep = NumberRep::ladder(0, 1);
    CHECK_THROWS_AS(twirl_op(Matrix::Identity(3, 3), rep), std::invalid_argument);
}
