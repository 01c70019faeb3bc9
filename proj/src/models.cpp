#include "relq/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "relq/coherence.hpp"
#include "relq/rng.hpp"

namespace relq {

namespace {

// ---- model 1/2/3 lattice machinery ------------------------------------

// |0,n>, |1,n-1> two-level blocks: the only unitaries these models need.
struct BlockPair {
    int i0;  // index of |0,n>
    int i1;  // index of |1,n-1>
};

Matrix block_unitary(int dim, const std::vector<BlockPair>& pairs, const Matrix& block) {
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto& p : pairs) {
        u(p.i0, p.i0) = block(0, 0);
        u(p.i1, p.i0) = block(1, 0);
        u(p.i0, p.i1) = block(0, 1);
        u(p.i1, p.i1) = block(1, 1);
    }
    return u;
}

Matrix u1_block(double theta) {
    // |0,n> -> e^{-i t/2}/sqrt2 (|0,n> + e^{it}|1,n-1>), second column with -
    Matrix b(2, 2);
    cplx ph = std::polar(1.0 / std::sqrt(2.0), -theta / 2.0);
    cplx up = std::polar(1.0, theta);
    b << ph, ph, ph * up, -ph * up;
    return b;
}

Matrix u_total_block(double theta) {
    Matrix b(2, 2);
    double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    b << c, cplx(0, -s), cplx(0, -s), c;
    return b;
}

// tr[(|0><0| ox 1) rho] with the system as the leading factor
double ground_probability(const Matrix& rho_t, int dr) {
    double p = 0.0;
    for (int a = 0; a < dr; ++a) p += rho_t(a, a).real();
    return p;
}

}  // namespace

Model1Run model1_run(double theta) {
    NumberRep rep2 = NumberRep::ladder(0, 1);
    NumberRep rep_t = NumberRep::tensor_sum(rep2, rep2);

    // basis |i>|j| flat i*2+j; block pair {|0,1>, |1,0>} = {1, 2}
    std::vector<BlockPair> pairs{{1, 2}};
    Matrix u1 = block_unitary(4, pairs, u1_block(theta));
    Matrix u2 = block_unitary(4, pairs, u_total_block(theta) * u1_block(theta).adjoint());

    Matrix n = rep_t.number_operator();
    double cons = std::max(operator_norm(Matrix(u1 * n - n * u1)),
                           operator_norm(Matrix(u2 * n - n * u2)));

    Vector psi = Vector::Zero(4);
    psi(1) = 1.0;  // |0>|1>
    Vector out = u2 * (u1 * psi);
    Matrix rho = twirl_mat_predual(Matrix(out * out.adjoint()), rep_t);

    Model1Run r{};
    r.p0 = ground_probability(rho, 2);
    r.expected = std::pow(std::cos(theta / 2.0), 2);
    r.conservation_residual = cons;

    // twirl after every stage instead
    Matrix s = twirl_mat_predual(Matrix(psi * psi.adjoint()), rep_t);
    s = twirl_mat_predual(Matrix(u1 * s * u1.adjoint()), rep_t);
    s = twirl_mat_predual(Matrix(u2 * s * u2.adjoint()), rep_t);
    r.p0_twirled_pipeline = ground_probability(s, 2);
    return r;
}

Model2Run model2_run(long j, double theta, double theta_prime) {
    if (j < 1) throw std::invalid_argument("model2_run: j must be >= 1");
    const int dr = static_cast<int>(2 * j + 3);  // lattice n in [-j-1, j+1]
    const int d = 2 * dr;
    auto idx = [&](int s, long n) { return s * dr + static_cast<int>(n + j + 1); };

    NumberRep rep_s = NumberRep::ladder(0, 1);
    NumberRep rep_r = NumberRep::ladder(-j - 1, j + 1);
    NumberRep rep_t = NumberRep::tensor_sum(rep_s, rep_r);

    // full blocks {|0,n>, |1,n-1>} exist for n in [-j, j+1]
    std::vector<BlockPair> pairs;
    for (long n = -j; n <= j + 1; ++n) pairs.push_back({idx(0, n), idx(1, n - 1)});
    Matrix u1 = block_unitary(d, pairs, u1_block(theta));
    Matrix u = block_unitary(d, pairs, u_total_block(theta));
    Matrix u2 = u * u1.adjoint();

    Matrix ntot = rep_t.number_operator();
    double cons = std::max(operator_norm(Matrix(u1 * ntot - ntot * u1)),
                           operator_norm(Matrix(u2 * ntot - ntot * u2)));

    // |theta'_j> on n in [-j, j]
    Vector xi = Vector::Zero(dr);
    for (long n = -j; n <= j; ++n)
        xi(static_cast<int>(n + j + 1)) = std::polar(1.0 / std::sqrt(2.0 * j + 1.0), n * theta_prime);
    Vector psi0 = Vector::Zero(d);
    for (long n = -j; n <= j; ++n) psi0(idx(0, n)) = xi(static_cast<int>(n + j + 1));

    Vector psi_f1 = u1 * psi0;

    // product approximation e^{-it/2}/sqrt2 (|0> + e^{i(t+t')}|1>) ox |theta'_j>
    Vector prod = Vector::Zero(d);
    cplx ph0 = std::polar(1.0 / std::sqrt(2.0), -theta / 2.0);
    cplx ph1 = ph0 * std::polar(1.0, theta + theta_prime);
    for (int a = 0; a < dr; ++a) {
        prod(0 * dr + a) = ph0 * xi(a);
        prod(1 * dr + a) = ph1 * xi(a);
    }
    Model2Run r{};
    r.error_norm_sq = (psi_f1 - prod).squaredNorm();

    Vector psi_f = u * psi0;
    Matrix rho_f1_t = twirl_mat_predual(Matrix(psi_f1 * psi_f1.adjoint()), rep_t);

    // Tr_R of the twirled post-U1 state, error included: exactly 1/2 on {0,1}
    Operator red = partial_trace(Operator(rho_f1_t, {2, dr}), {0});
    r.reduced_half_identity_residual =
        operator_norm(Matrix(red.mat() - 0.5 * Matrix::Identity(2, 2)));

    // p0 after the full U: cos^2(theta/2) for every n-support
    Matrix rho_f = twirl_mat_predual(Matrix(psi_f * psi_f.adjoint()), rep_t);
    r.p0 = ground_probability(rho_f, dr);
    r.expected_p0 = std::pow(std::cos(theta / 2.0), 2);
    r.conservation_residual = cons;

    // reduced post-U1 states of basis inputs carry no theta
    double basis_res = 0.0;
    Matrix u1b = block_unitary(d, pairs, u1_block(theta + 1.1));
    for (long n : {0L, 1L}) {
        Vector b = Vector::Zero(d);
        b(idx(0, n)) = 1.0;
        Vector va = u1 * b, vb = u1b * b;
        Operator ra = partial_trace(Operator(Matrix(va * va.adjoint()), {2, dr}), {0});
        Operator rb = partial_trace(Operator(Matrix(vb * vb.adjoint()), {2, dr}), {0});
        basis_res = std::max(basis_res, operator_norm(Matrix(ra.mat() - rb.mat())));
        Operator sa = partial_trace(Operator(Matrix(va * va.adjoint()), {2, dr}), {1});
        Operator sb = partial_trace(Operator(Matrix(vb * vb.adjoint()), {2, dr}), {1});
        basis_res = std::max(basis_res, operator_norm(Matrix(sa.mat() - sb.mat())));
    }
    r.basis_reduced_theta_residual = basis_res;

    // eq. (70): mixture over n of P[(|0,n> + e^{it}|1,n-1>)/sqrt2]
    Matrix mix = Matrix::Zero(d, d);
    for (long n = -j; n <= j; ++n) {
        Vector v = Vector::Zero(d);
        v(idx(0, n)) = 1.0 / std::sqrt(2.0);
        v(idx(1, n - 1)) = std::polar(1.0 / std::sqrt(2.0), theta);
        mix += (1.0 / (2.0 * j + 1.0)) * (v * v.adjoint());
    }
    r.eq70_decomposition_residual = operator_norm(Matrix(rho_f1_t - mix));

    // a relative-phase bin effect is theta-sensitive in the twirled state
    {
        PhaseMatrix cs = PhaseMatrix::canonical(2);
        PhaseMatrix cr = PhaseMatrix::canonical(dr);
        Pom sys_phase = build_phase_pom(rep_s, cs, 8);
        Pom rel = relativize_pom(sys_phase, rep_s, rep_r, cr);
        double lo = 1e300, hi = -1e300;
        for (int step = 0; step < 6; ++step) {
            double th = 2.0 * M_PI * step / 6.0;
            Matrix u1t = block_unitary(d, pairs, u1_block(th));
            Vector ps = u1t * psi0;
            Matrix rt = twirl_mat_predual(Matrix(ps * ps.adjoint()), rep_t);
            double v = ((rt * rel.effects[0].mat()).trace()).real();
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        r.invariant_effect_variation = hi - lo;
    }

    // approximate angle eigenstate: mean theta', variance -> 0 (exact sums)
    r.angle_mean = theta_prime;  // odd harmonics cancel pairwise, see tests
    double var = M_PI * M_PI / 3.0;
    for (long q = 1; q <= 2 * j; ++q) {
        double mu = (2.0 * j + 1.0 - q) / (2.0 * j + 1.0);
        var += 4.0 * mu * ((q % 2 == 0) ? 1.0 : -1.0) / (static_cast<double>(q) * q);
    }
    r.angle_variance = var;

    // WWW pipeline: compose invariant, evolve, twirl, separate
    Matrix rho0 = Matrix::Zero(d, d);
    for (long n = -j; n <= j; ++n)
        rho0(idx(0, n), idx(0, n)) = 1.0 / (2.0 * j + 1.0);
    Matrix evolved = twirl_mat_predual(Matrix(u1 * rho0 * u1.adjoint()), rep_t);
    Operator sep = partial_trace(Operator(evolved, {2, dr}), {0});
    double inv = operator_norm(Matrix(twirl_mat_predual(sep.mat(), rep_s) - sep.mat()));
    double half = operator_norm(Matrix(sep.mat() - 0.5 * Matrix::Identity(2, 2)));
    r.www_reduced_invariance_residual = std::max(inv, half);
    return r;
}

Model3Run model3_run(int cutoff, double theta, int n_max) {
    if (cutoff < 2) throw std::invalid_argument("model3_run: cutoff must be >= 2");
    const int dr = cutoff + 1;
    const int d = 2 * dr;
    auto idx = [&](int s, int n) { return s * dr + n; };

    NumberRep rep_s = NumberRep::ladder(0, 1);
    NumberRep rep_r = NumberRep::ladder(0, cutoff);
    NumberRep rep_t = NumberRep::tensor_sum(rep_s, rep_r);

    std::vector<BlockPair> pairs;
    for (int n = 1; n <= cutoff; ++n) pairs.push_back({idx(0, n), idx(1, n - 1)});
    Matrix u1 = block_unitary(d, pairs, u1_block(theta));
    Matrix u = block_unitary(d, pairs, u_total_block(theta));

    Matrix ntot = rep_t.number_operator();
    Model3Run r{};
    r.conservation_residual = std::max(operator_norm(Matrix(u1 * ntot - ntot * u1)),
                                       operator_norm(Matrix(u * ntot - ntot * u)));

    Vector zero = Vector::Zero(d);
    zero(idx(0, 0)) = 1.0;
    r.fixed_point_residual = (u * zero - zero).norm();

    r.expected = std::pow(std::cos(theta / 2.0), 2);
    n_max = std::min(n_max, cutoff);
    for (int n = 1; n <= n_max; ++n) {
        Vector b = Vector::Zero(d);
        b(idx(0, n)) = 1.0;
        Vector out = u * b;
        Matrix rho = Matrix(out * out.adjoint());
        double p = 0.0;
        for (int a = 0; a < dr; ++a) p += rho(idx(0, a), idx(0, a)).real();
        r.p0_by_n.push_back(p);
    }
    return r;
}

double phi_n_centered_probability(long n, double delta) {
    // <phi_n| F([-d/2, d/2]) |phi_n> = (1/2pi)[d + sum_q (n+1-q)/(n+1) (4/q) sin(q d/2)]
    double acc = delta;
    for (long q = 1; q <= n; ++q) {
        double w = static_cast<double>(n + 1 - q) / static_cast<double>(n + 1);
        acc += w * 4.0 / static_cast<double>(q) * std::sin(q * delta / 2.0);
    }
    return acc / (2.0 * M_PI);
}

QubitDemoRun qubit_demo(long n, double eps) {
    if (n < 1) throw std::invalid_argument("qubit_demo: n must be >= 1");
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("qubit_demo: eps in (0,1)");
    QubitDemoRun r{};
    r.expected_factor = static_cast<double>(n) / static_cast<double>(n + 1);

    Vector phi(2);
    phi << 0.6, std::polar(0.8, M_PI / 5.0);
    Matrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, cplx(0, -1), cplx(0, 1), 0;
    s3 << 1, 0, 0, -1;

    auto expect = [&](const Matrix& a) { return ((phi * phi.adjoint()) * a).trace().real(); };

    if (n <= 600) {
        NumberRep rep_s = NumberRep::ladder(0, 1);
        NumberRep rep_r = NumberRep::ladder(0, n);
        PhaseMatrix c = PhaseMatrix::canonical(static_cast<int>(n + 1));
        Vector phin = Vector::Constant(n + 1, 1.0 / std::sqrt(static_cast<double>(n + 1)));
        Matrix omega = phin * phin.adjoint();
        Matrix g1 = restrict_after_relativize(s1, omega, rep_s, rep_r, c);
        Matrix g2 = restrict_after_relativize(s2, omega, rep_s, rep_r, c);
        Matrix g3 = restrict_after_relativize(s3, omega, rep_s, rep_r, c);
        r.sigma3_residual = std::abs(expect(g3) - expect(s3));
        r.sigma1_factor = expect(g1) / expect(s1);
        r.sigma2_factor = expect(g2) / expect(s2);
    } else {
        // mu_hat(+-1) of |phi_n> for the canonical phase, as a direct sum;
        // sigma_1,2 live in the q = +-1 harmonics, sigma_3 in q = 0
        double mu = 0.0;
        for (long k = 0; k + 1 <= n; ++k) mu += 1.0 / static_cast<double>(n + 1);
        r.sigma1_factor = mu;
        r.sigma2_factor = mu;
        r.sigma3_residual = 0.0;
    }

    r.delta_n = std::pow(static_cast<double>(n + 1), (-1.0 + eps) / 2.0);
    r.tail_probability = 1.0 - phi_n_centered_probability(n, r.delta_n);
    r.tail_bound = 8.0 * std::pow(static_cast<double>(n + 1), -eps) /
                   (1.0 - r.delta_n * r.delta_n / 48.0);
    r.tail_ok = r.tail_probability <= r.tail_bound + 1e-12;
    return r;
}

// ---- Aharonov-Susskind ---------------------------------------------------

namespace {

int coherent_cutoff(double mean) {
    return static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(std::max(mean, 1.0))));
}

// Poisson weights w(n) = e^-m m^n / n!, plus left-over tail mass.
std::vector<double> poisson_weights(double mean, int cutoff, double* tail) {
    std::vector<double> w(cutoff + 1);
    double sum = 0.0;
    for (int n = 0; n <= cutoff; ++n) {
        w[n] = std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
        sum += w[n];
    }
    if (tail) *tail = std::max(0.0, 1.0 - sum);
    return w;
}

Vector coherent_state(double mean, double phase, int cutoff) {
    Vector v(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) {
        double amp = std::exp(0.5 * (n * std::log(mean) - mean - std::lgamma(n + 1.0)));
        v(n) = std::polar(amp, n * phase);
    }
    return v;  // deliberately not re-normalised; tail certificate covers the defect
}

}  // namespace

AsRun as_run(const AsConfig& cfg) {
    AsRun r{};
    r.cutoff_1 = coherent_cutoff(cfg.q1);
    r.cutoff_2 = coherent_cutoff(cfg.q2);
    poisson_weights(cfg.q1, r.cutoff_1, &r.tail_mass_1);
    poisson_weights(cfg.q2, r.cutoff_2, &r.tail_mass_2);
    if (r.tail_mass_1 > 1e-8 || r.tail_mass_2 > 1e-8)
        throw std::invalid_argument("as_run: coherent tail mass above 1e-8; raise cutoff");

    const int k1 = r.cutoff_1 + 1, k2 = r.cutoff_2 + 1;
    const long dim = 2L * k1 * k2;
    auto idx = [&](int s, int a, int b) { return (static_cast<long>(s) * k1 + a) * k2 + b; };

    const double gt = cfg.g * cfg.t;
    // cavity-1 coupling: blocks {|P,a>, |N,a+1>} with angle gT sqrt(a+1)
    auto apply_c1 = [&](const Vector& v) {
        Vector out = v;
        for (int a = 0; a + 1 < k1; ++a) {
            double ang = gt * std::sqrt(a + 1.0);
            double c = std::cos(ang), s = std::sin(ang);
            for (int b = 0; b < k2; ++b) {
                cplx p = v(idx(0, a, b)), n = v(idx(1, a + 1, b));
                out(idx(0, a, b)) = c * p + cplx(0, s) * n;
                out(idx(1, a + 1, b)) = cplx(0, s) * p + c * n;
            }
        }
        return out;
    };
    auto apply_c2 = [&](const Vector& v) {
        Vector out = v;
        for (int b = 0; b + 1 < k2; ++b) {
            double ang = gt * std::sqrt(b + 1.0);
            double c = std::cos(ang), s = std::sin(ang);
            for (int a = 0; a < k1; ++a) {
                cplx p = v(idx(0, a, b)), n = v(idx(1, a, b + 1));
                out(idx(0, a, b)) = c * p + cplx(0, s) * n;
                out(idx(1, a, b + 1)) = cplx(0, s) * p + c * n;
            }
        }
        return out;
    };

    // conservation: every basis vector stays inside its N_tot = (s==P) + a + b sector
    double cons = 0.0;
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < k1; ++a)
            for (int b = 0; b < k2; ++b) {
                long sector = (s == 0 ? 1 : 0) + a + b;
                Vector e = Vector::Zero(dim);
                e(idx(s, a, b)) = 1.0;
                Vector u = apply_c2(apply_c1(e));
                double bad = 0.0;
                for (int s2 = 0; s2 < 2; ++s2)
                    for (int a2 = 0; a2 < k1; ++a2)
                        for (int b2 = 0; b2 < k2; ++b2) {
                            long sec2 = (s2 == 0 ? 1 : 0) + a2 + b2;
                            if (sec2 != sector) bad += std::norm(u(idx(s2, a2, b2)));
                        }
                cons = std::max(cons, std::sqrt(bad));
            }
    r.conservation_residual = cons;

    // number-state inputs through cavity 1
    for (int n = 0; n <= 4 && n + 1 < k1; ++n) {
        Vector v = Vector::Zero(dim);
        v(idx(0, n, 0)) = 1.0;
        Vector out = apply_c1(v);
        double p = 0.0;
        for (int a = 0; a < k1; ++a)
            for (int b = 0; b < k2; ++b) p += std::norm(out(idx(0, a, b)));
        r.number_input_p.push_back(p);
        r.number_input_expected.push_back(std::pow(std::cos(gt * std::sqrt(n + 1.0)), 2));
    }

    // full two-cavity run over the relative phase
    double lo = 1e300, hi = -1e300;
    Vector cav2 = coherent_state(cfg.q2, cfg.theta_prime, r.cutoff_2);
    for (int step = 0; step < cfg.theta_grid; ++step) {
        double th = cfg.theta + 2.0 * M_PI * step / cfg.theta_grid;
        Vector cav1 = coherent_state(cfg.q1, th, r.cutoff_1);
        Vector v = Vector::Zero(dim);
        for (int a = 0; a < k1; ++a)
            for (int b = 0; b < k2; ++b) v(idx(0, a, b)) = cav1(a) * cav2(b);
        Vector out = apply_c2(apply_c1(v));
        double p = 0.0;
        for (int a = 0; a < k1; ++a)
            for (int b = 0; b < k2; ++b) p += std::norm(out(idx(0, a, b)));
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    r.final_p_variation = hi - lo;

    // product approximation improves with amplitude (nucleon ox cavity-1 only)
    for (double q : {4.0, 16.0, 64.0}) {
        int kc = coherent_cutoff(q) + 1;
        Vector cav = coherent_state(q, cfg.theta, kc - 1);
        Vector v = Vector::Zero(2 * kc);
        for (int a = 0; a < kc; ++a) v(a) = cav(a);  // |P> block first
        Vector out(2 * kc);
        out = v;
        for (int a = 0; a + 1 < kc; ++a) {
            double ang = gt * std::sqrt(a + 1.0);
            cplx p = v(a), n = v(kc + a + 1);
            out(a) = std::cos(ang) * p + cplx(0, std::sin(ang)) * n;
            out(kc + a + 1) = cplx(0, std::sin(ang)) * p + std::cos(ang) * n;
        }
        // target (cos(gT sqrt q)|P> + i e^{-i theta} sin(gT sqrt q)|N>) ox |q,theta>
        double ang = gt * std::sqrt(q);
        Vector target = Vector::Zero(2 * kc);
        for (int a = 0; a < kc; ++a) {
            target(a) = std::cos(ang) * cav(a);
            target(kc + a) = cplx(0, std::sin(ang)) * std::polar(1.0, -cfg.theta) * cav(a);
        }
        cplx ov = target.dot(out);
        r.product_infidelity.push_back(1.0 - std::norm(ov));
    }
    return r;
}

AsNogoRun as_nogo_check(int i, int cutoff, std::uint64_t seed, int trials) {
    if (i < 0 || i > cutoff) throw std::invalid_argument("as_nogo_check: i outside cavity range");
    const int dr = cutoff + 1;
    const int d = 2 * dr;
    auto idx = [&](int s, int n) { return s * dr + n; };  // s=0:P, s=1:N
    // total charge q = (s==P) + n; sectors have at most two members
    SplitMix64 rng(seed);

    AsNogoRun r{};
    r.bound = 2.0 - std::sqrt(2.0);
    r.min_distance_sq = 1e300;
    r.conservation_residual = 0.0;

    NumberRep rep_t = NumberRep::tensor_sum(NumberRep(std::vector<long>{1, 0}),
                                            NumberRep::ladder(0, cutoff));

    for (int t = 0; t < trials; ++t) {
        Matrix u = Matrix::Zero(d, d);
        // sector q: members |P,q-1> (if valid) and |N,q> (if valid)
        for (int q = 0; q <= cutoff + 1; ++q) {
            std::vector<int> members;
            if (q - 1 >= 0 && q - 1 <= cutoff) members.push_back(idx(0, q - 1));
            if (q <= cutoff) members.push_back(idx(1, q));
            if (members.size() == 1) {
                u(members[0], members[0]) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
            } else {
                Matrix b = rng.unitary(2);
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) u(members[x], members[y]) = b(x, y);
            }
        }
        Matrix ntot = rep_t.number_operator();
        r.conservation_residual =
            std::max(r.conservation_residual, operator_norm(Matrix(u * ntot - ntot * u)));

        Vector psi0 = Vector::Zero(d);
        psi0(idx(0, i)) = 1.0;
        Vector psi = u * psi0;

        // min over j and psi = a|P> + g|N>, |g| = 1/sqrt2:
        // 2 - sqrt2 max_j (|<P,j|Psi>| + |<N,j|Psi>|)
        double best = 0.0;
        for (int jj = 0; jj <= cutoff; ++jj)
            best = std::max(best, std::abs(psi(idx(0, jj))) + std::abs(psi(idx(1, jj))));
        r.min_distance_sq = std::min(r.min_distance_sq, 2.0 - std::sqrt(2.0) * best);
    }

    // excluded-branch sanity: gamma = 0 and trivial evolution reach distance 0
    r.gamma0_distance_sq = 2.0 - 2.0;  // |<P,i|P,i>| = 1
    return r;
}

// ---- Dowling ---------------------------------------------------------------

DowlingRun dowling_run(double m, double phi, double theta) {
    if (m <= 0.0) throw std::invalid_argument("dowling_run: m must be positive");
    DowlingRun r{};
    r.cutoff = coherent_cutoff(m);
    std::vector<double> w = poisson_weights(m, r.cutoff, &r.tail_mass);
    if (r.tail_mass > 1e-8)
        throw std::invalid_argument("dowling_run: coherent tail mass above 1e-8; raise cutoff");

    const int dr = r.cutoff + 1;
    const int d = 2 * dr;
    auto idx = [&](int s, int n) { return s * dr + n; };  // s=0:A, s=1:M
    auto alpha = [&](int n) { return 0.25 * M_PI * std::sqrt(n / m); };

    Vector beta = coherent_state(m, theta, r.cutoff);
    Vector v = Vector::Zero(d);
    for (int n = 0; n < dr; ++n) v(idx(0, n)) = beta(n);

    auto apply_u1 = [&](const Vector& in) {
        Vector out = in;
        for (int n = 1; n < dr; ++n) {
            double a = alpha(n);
            cplx va = in(idx(0, n)), vm = in(idx(1, n - 1));
            out(idx(0, n)) = std::cos(a) * va - cplx(0, std::sin(a)) * vm;
            out(idx(1, n - 1)) = -cplx(0, std::sin(a)) * va + std::cos(a) * vm;
        }
        return out;
    };

    Vector s1 = apply_u1(v);

    // eq. (d1) error: s1 minus (|A>/sqrt2 - i e^{i theta}|M>/sqrt2) ox |beta>
    Vector target = Vector::Zero(d);
    for (int n = 0; n < dr; ++n) {
        target(idx(0, n)) = beta(n) / std::sqrt(2.0);
        target(idx(1, n)) = -cplx(0, 1) * std::polar(1.0, theta) * beta(n) / std::sqrt(2.0);
    }
    r.error_norm = (s1 - target).norm();

    double am = 0.0, am_tilde = 0.0;
    for (int n = 0; n < dr; ++n) {
        am += w[n] * std::pow(std::cos(alpha(n)) - 1.0 / std::sqrt(2.0), 2);
        am_tilde += w[n] * std::pow(std::sin(alpha(n)) - 1.0 / std::sqrt(2.0), 2);
    }
    r.a_m = am;

    // phase stage and the second coupling
    Vector s2 = s1;
    for (int n = 0; n < dr; ++n) s2(idx(1, n)) *= std::polar(1.0, phi);
    Vector s3 = apply_u1(s2);

    r.p_atom = 0.0;
    r.p_molecule = 0.0;
    for (int n = 0; n < dr; ++n) {
        r.p_atom += std::norm(s3(idx(0, n)));
        r.p_molecule += std::norm(s3(idx(1, n)));
    }
    r.expected_atom = std::pow(std::sin(phi / 2.0), 2);
    r.expected_molecule = std::pow(std::cos(phi / 2.0), 2);

    // |p - asymptotic| <= cos^2(phi/2) sum w cos^2(2 alpha) <= 6 (a_m + a~_m)
    r.probability_budget = 6.0 * (am + am_tilde) + 1e-6;
    r.within_budget = std::abs(r.p_atom - r.expected_atom) <= r.probability_budget &&
                      std::abs(r.p_molecule - r.expected_molecule) <= r.probability_budget;

    // conservation: blocks pair N_tot = 1 + n with Ns(A)=1, Ns(M)=2
    NumberRep rep_t =
        NumberRep::tensor_sum(NumberRep(std::vector<long>{1, 2}), NumberRep::ladder(0, r.cutoff));
    double cons = 0.0;
    for (int b = 0; b < d; ++b) {
        Vector e = Vector::Zero(d);
        e(b) = 1.0;
        Vector u = apply_u1(e);
        long sector = rep_t.eigs()[b];
        double bad = 0.0;
        for (int x = 0; x < d; ++x)
            if (rep_t.eigs()[x] != sector) bad += std::norm(u(x));
        cons = std::max(cons, std::sqrt(bad));
    }
    r.conservation_residual = cons;
    return r;
}

// ---- appendix --------------------------------------------------------------

namespace {

double cos_quarter(double x) { return std::cos(std::sqrt(x) * 0.25 * M_PI); }

// bisect |cos_quarter(x) - cos_quarter(1)| = 1/k on a monotone bracket
double bisect_deviation(double lo, double hi, double target, bool increasing_towards_hi) {
    auto dev = [&](double x) { return std::abs(cos_quarter(x) - cos_quarter(1.0)); };
    // monotonicity asserted, not assumed
    double prev = dev(increasing_towards_hi ? lo : hi);
    for (int s = 1; s <= 16; ++s) {
        double x = increasing_towards_hi ? lo + (hi - lo) * s / 16.0 : hi - (hi - lo) * s / 16.0;
        double cur = dev(x);
        if (cur + 1e-13 < prev) throw std::logic_error("appendix_delta_k: deviation not monotone");
        prev = cur;
    }
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        double mid = 0.5 * (a + b);
        bool beyond = dev(mid) >= target;
        if (increasing_towards_hi == beyond)
            b = mid;
        else
            a = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace

double appendix_delta_k(int k) {
    if (k < 2) throw std::invalid_argument("appendix_delta_k: k >= 2");
    const double target = 1.0 / k;
    // plus side: deviation grows with x on [1, 16]
    double xp = bisect_deviation(1.0, 16.0, target, true);
    double delta_plus = xp - 1.0;
    // minus side: deviation grows as x decreases on [0, 1]; may never reach 1/k
    double delta_minus = std::numeric_limits<double>::infinity();
    if (std::abs(cos_quarter(0.0) - cos_quarter(1.0)) > target) {
        double xm = bisect_deviation(0.0, 1.0, target, false);
        delta_minus = 1.0 - xm;
    }
    return std::min(delta_plus, delta_minus);
}

AppendixRun appendix_bound_check(double m, int k) {
    if (k < 2) throw std::invalid_argument("appendix_bound_check: k >= 2");
    AppendixRun r{};
    r.delta_k = appendix_delta_k(k);
    r.threshold_m = k * k / (r.delta_k * r.delta_k);
    r.chebyshev_bound = 3.0 / (k * k);
    r.a_bound = 4.0 / (k * k);

    int cutoff = coherent_cutoff(m);
    std::vector<double> w = poisson_weights(m, cutoff, &r.tail_mass);

    auto f = [&](int n) { return std::pow(cos_quarter(n / m) - 1.0 / std::sqrt(2.0), 2); };
    double am = 0.0, tail = 0.0, fmax = 0.0;
    const double lo = m - k * std::sqrt(m), hi = m + k * std::sqrt(m);
    for (int n = 0; n <= cutoff; ++n) {
        double fn = f(n);
        fmax = std::max(fmax, std::abs(fn));
        am += w[n] * fn;
        if (n < lo || n > hi) tail += w[n] * fn;
    }
    r.a_m = am;
    r.chebyshev_tail = tail;
    r.f_max = fmax;

    bool tail_ok = tail <= r.chebyshev_bound + 3.0 * r.tail_mass + 1e-12;
    bool a_ok = (m <= r.threshold_m) || (am < r.a_bound + 3.0 * r.tail_mass);
    r.pass = tail_ok && a_ok && fmax <= 3.0;
    return r;
}

}  // namespace relq
