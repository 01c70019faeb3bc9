#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relq/pom.hpp"
#include "relq/rng.hpp"

using namespace relq;

namespace {

// quadrature oracle for the defining integral of a phase effect
Matrix phase_effect_quadrature(int d, const Matrix& c, double a, double b, int points) {
    Matrix f = Matrix::Zero(d, d);
    double h = (b - a) / points;
    for (int k = 0; k < points; ++k) {
        double theta = a + (k + 0.5) * h;
        for (int n = 0; n < d; ++n)
            for (int m = 0; m < d; ++m)
                f(n, m) += c(n, m) * std::polar(1.0, (n - m) * theta) * h / (2.0 * M_PI);
    }
    return f;
}

}  // namespace

TEST_CASE("phase matrix validation") {
    CHECK_NOTHROW(PhaseMatrix::canonical(4));
    Matrix bad_diag = Matrix::Ones(3, 3);
    bad_diag(1, 1) = 0.5;
    CHECK_THROWS_AS(PhaseMatrix(bad_diag), std::invalid_argument);
    Matrix not_pos = Matrix::Identity(2, 2);
    not_pos(0, 1) = not_pos(1, 0) = 2.0;  // eigenvalues -1 and 3
    CHECK_THROWS_AS(PhaseMatrix(not_pos), std::invalid_argument);
}

TEST_CASE("covariance forces the uniform number-state distribution") {
    Pom p = build_phase_pom(3, PhaseMatrix::canonical(3), 8);
    for (const auto& e : p.effects)
        for (int n = 0; n < 3; ++n) CHECK(std::abs(e.mat()(n, n) - cplx(1.0 / 8.0, 0)) < 1e-15);
    Operator sum = p.effect_sum();
    CHECK(operator_norm(Matrix(sum.mat() - Matrix::Identity(3, 3))) < 1e-14);
}

TEST_CASE("canonical phase effect matches the defining integral") {
    // frozen from the 1e4-point quadrature oracle: entry (0,1) of F([0,pi)) = -i/pi
    Matrix f = phase_interval_effect(NumberRep::ladder(0, 1), PhaseMatrix::canonical(2), 0.0, M_PI);
    CHECK(std::abs(f(0, 1) - cplx(0.0, -0.31830988618379069)) < 1e-15);

    Matrix oracle = phase_effect_quadrature(2, Matrix::Ones(2, 2), 0.0, M_PI, 10000);
    CHECK((f - oracle).cwiseAbs().maxCoeff() < 1e-8);

    SplitMix64 rng(31);
    Matrix g = rng.ginibre(4, 2);
    Matrix c = g * g.adjoint();
    for (int i = 0; i < 4; ++i) c.row(i) /= std::sqrt(c(i, i).real());
    for (int i = 0; i < 4; ++i) c.col(i) /= std::sqrt(c(i, i).real());
    PhaseMatrix pm(c, 1e-8);
    Matrix closed = phase_interval_effect(NumberRep::ladder(0, 3), pm, 0.7, 2.9);
    Matrix quad = phase_effect_quadrature(4, pm.mat(), 0.7, 2.9, 20000);
    CHECK((closed - quad).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("pom_validate on the canonical construction") {
    NumberRep rep = NumberRep::ladder(0, 3);
    Pom p = build_phase_pom(rep, PhaseMatrix::canonical(4), 16);
    PomValidationReport r = pom_validate(p, rep);
    CHECK(r.positivity < 1e-10);
    CHECK(r.normalization < 1e-10);
    CHECK(r.covariance < 1e-10);
    CHECK(r.pass());
}

TEST_CASE("pom_validate flags forced defects") {
    NumberRep rep = NumberRep::ladder(0, 2);
    Pom p = build_phase_pom(rep, PhaseMatrix::canonical(3), 8);

    Pom scaled = p;
    for (auto& e : scaled.effects) e = e * cplx(0.9, 0);
    PomValidationReport r = pom_validate(scaled, rep);
    CHECK(r.normalization == doctest::Approx(0.1).epsilon(1e-10));

    Pom bent = p;
    bent.effects[0] = bent.effects[0] - Operator(Matrix::Identity(3, 3) * cplx(0.05, 0));
    CHECK(pom_validate(bent, rep).positivity >= 0.05 - 1e-12);
}

TEST_CASE("norm-1 defect: projections, qubit bound, frozen baseline") {
    // sharp positions are projection valued, defect exactly 0
    std::vector<double> delta(8, 0.0);
    delta[0] = 1.0;
    Pom sharp = smeared_position_pom(8, delta);
    CHECK(sharp.projection_valued());
    CHECK(norm1_defect(sharp).defect_nonzero == 0.0);
    CHECK(norm1_defect(sharp).zero_effects == 0);

    // canonical d=2, B=8: ||F|| <= tr = 1/4, so the defect is at least 3/4
    Pom qubit = build_phase_pom(2, PhaseMatrix::canonical(2), 8);
    CHECK(norm1_defect(qubit).defect_nonzero >= 0.75 - 1e-12);

    // regression baseline, frozen from the eigensolver oracle
    Pom big = build_phase_pom(16, PhaseMatrix::canonical(16), 16);
    CHECK(norm1_defect(big).defect_nonzero ==
          doctest::Approx(0.21613005969909205).epsilon(1e-12));
}

TEST_CASE("localisation margin") {
    NumberRep rep = NumberRep::ladder(0, 3);
    Pom p = build_phase_pom(rep, PhaseMatrix::canonical(4), 8);

    Vector n2 = Vector::Zero(4);
    n2(2) = 1.0;
    State number = State::pure(n2);
    // number states spread uniformly: margin (d-1)|X|/2pi
    CHECK(localisation_margin(number, p, {3}) ==
          doctest::Approx(3.0 / 8.0).epsilon(1e-12));

    std::vector<int> all{0, 1, 2, 3, 4, 5, 6, 7};
    SplitMix64 rng(32);
    State rho(Operator(rng.density(4)));
    CHECK(localisation_margin(rho, p, all) == doctest::Approx(3.0).epsilon(1e-12));

    NumberRep rep8 = NumberRep::ladder(0, 7);
    Pom p8 = build_phase_pom(rep8, PhaseMatrix::canonical(8), 16);
    double worst = 1e300;
    for (int t = 0; t < 200; ++t) {
        State r(Operator(rng.density(8)));
        std::vector<int> window;
        int start = rng.uniform_int(16), len = 1 + rng.uniform_int(8);
        for (int k = 0; k < len; ++k) window.push_back((start + k) % 16);
        worst = std::min(worst, localisation_margin(r, p8, window));
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("smeared positions on the cyclic lattice") {
    const int L = 32;
    std::vector<double> uniform(L, 1.0 / L);
    Pom flat = smeared_position_pom(L, uniform);
    for (const auto& e : flat.effects)
        CHECK(operator_norm(Matrix(e.mat() - Matrix::Identity(L, L) / static_cast<double>(L))) <
              1e-15);

    // triangular kernel against the direct convolution sum
    std::vector<double> tri(L, 0.0);
    tri[0] = 2.0 / 4.0;
    tri[1] = 1.0 / 4.0;
    tri[L - 1] = 1.0 / 4.0;
    Pom p = smeared_position_pom(L, tri);
    SplitMix64 rng(33);
    for (int t = 0; t < 5; ++t) {
        int x = rng.uniform_int(L);
        for (int q = 0; q < L; ++q) {
            double oracle = 0.0;  // (chi_{x} * e)(q) = sum_z chi_{x}(q - z) e(z)
            for (int z = 0; z < L; ++z)
                if (((q - z) % L + L) % L == x) oracle += tri[z];
            CHECK(std::abs(p.effects[x].mat()(q, q).real() - oracle) < 1e-15);
        }
    }

    // covariance under cyclic shifts
    Matrix shift = Matrix::Zero(L, L);
    for (int x = 0; x < L; ++x) shift((x + 1) % L, x) = 1.0;
    for (int x = 0; x < L; ++x)
        CHECK(operator_norm(Matrix(shift * p.effects[x].mat() * shift.adjoint() -
                                   p.effects[(x + 1) % L].mat())) < 1e-15);

    std::vector<double> bad(L, 0.0);
    bad[0] = 0.5;
    CHECK_THROWS_AS(smeared_position_pom(L, bad), std::invalid_argument);
    bad[0] = 1.5;
    bad[1] = -0.5;
    CHECK_THROWS_AS(smeared_position_pom(L, bad), std::invalid_argument);
}

TEST_CASE("refinement consistency: union effects are sums of bins") {
    NumberRep rep = NumberRep::ladder(0, 4);
    Pom p = build_phase_pom(rep, PhaseMatrix::canonical(5), 16);
    Operator merged = p.effect_union({3, 4});
    Operator direct = p.effects[3] + p.effects[4];
    CHECK((merged.mat() - direct.mat()).cwiseAbs().maxCoeff() == 0.0);

    // and the closed form over the merged interval agrees
    double w = 2.0 * M_PI / 16;
    Matrix wide = phase_interval_effect(rep, PhaseMatrix::canonical(5), 3 * w, 5 * w);
    CHECK((merged.mat() - wide).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("interval probabilities agree with effect expectations") {
    SplitMix64 rng(34);
    NumberRep rep = NumberRep::ladder(0, 5);
    PhaseMatrix c = PhaseMatrix::canonical(6);
    Matrix rho = rng.density(6);
    double p = phase_interval_probability(rep, c, rho, 1.0, 2.5);
    Matrix f = phase_interval_effect(rep, c, 1.0, 2.5);
    CHECK(std::abs(p - ((rho * f).trace()).real()) < 1e-14);

    std::vector<double> dist = phase_bin_distribution(rep, c, rho, 64);
    double total = 0.0;
    for (double v : dist) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}
