#include "relq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include <Eigen/Eigenvalues>

namespace relq {

void MeasurementScheme::validate(double tol) const {
    if (system_dim < 2) throw std::invalid_argument("scheme: system_dim must be >= 2");
    if (apparatus_dim < 2) throw std::invalid_argument("scheme: apparatus_dim must be >= 2");
    const int d = system_dim * apparatus_dim;
    if (coupling.rows() != d || coupling.cols() != d)
        throw std::invalid_argument("scheme: coupling must act on system ox apparatus");
    if (!Operator(coupling, {system_dim, apparatus_dim}).is_unitary(tol))
        throw std::invalid_argument("scheme: coupling is not unitary");
    if (apparatus_state.size() != apparatus_dim)
        throw std::invalid_argument("scheme: apparatus state dimension mismatch");
    if (std::abs(apparatus_state.norm() - 1.0) > tol)
        throw std::invalid_argument("scheme: apparatus state not normalised");
    if (pointer.effects.empty()) throw std::invalid_argument("scheme: pointer has no effects");
    for (const auto& e : pointer.effects) {
        if (e.dim() != apparatus_dim)
            throw std::invalid_argument("scheme: pointer effect dimension mismatch");
        if (!is_effect(e.mat(), tol))
            throw std::invalid_argument("scheme: pointer effect outside [0, 1]");
    }
    if (operator_norm(Matrix(pointer.effect_sum().mat() -
                             Matrix::Identity(apparatus_dim, apparatus_dim))) > tol * apparatus_dim)
        throw std::invalid_argument("scheme: pointer effects do not sum to identity");
    if (scaling.size() != pointer.effects.size())
        throw std::invalid_argument("scheme: scaling table must cover every pointer outcome");
    for (int y : scaling)
        if (y < 0) throw std::invalid_argument("scheme: scaling targets must be nonnegative");
}

int MeasurementScheme::measured_outcomes() const {
    int m = 0;
    for (int y : scaling) m = std::max(m, y + 1);
    return m;
}

MeasurementScheme MeasurementScheme::swap_scheme(int dim) {
    MeasurementScheme s;
    s.system_dim = dim;
    s.apparatus_dim = dim;
    Matrix u = Matrix::Zero(dim * dim, dim * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) u(j * dim + i, i * dim + j) = 1.0;
    s.coupling = u;
    std::vector<std::string> labels(dim);
    for (int i = 0; i < dim; ++i) labels[i] = std::to_string(i);
    s.pointer.space = OutcomeSpace::finite(labels);
    for (int i = 0; i < dim; ++i) {
        Matrix e = Matrix::Zero(dim, dim);
        e(i, i) = 1.0;
        s.pointer.effects.emplace_back(std::move(e), std::vector<int>{dim});
    }
    s.apparatus_state = Vector::Zero(dim);
    s.apparatus_state(0) = 1.0;
    s.scaling.resize(dim);
    for (int i = 0; i < dim; ++i) s.scaling[i] = i;
    return s;
}

Pom measured_pom(const MeasurementScheme& s) {
    s.validate();
    const int ds = s.system_dim, da = s.apparatus_dim;
    const int m = s.measured_outcomes();
    Matrix phi = s.apparatus_state * s.apparatus_state.adjoint();

    Pom out;
    std::vector<std::string> labels(m);
    for (int y = 0; y < m; ++y) labels[y] = std::to_string(y);
    out.space = OutcomeSpace::finite(labels);

    for (int y = 0; y < m; ++y) {
        Matrix ez = Matrix::Zero(da, da);
        for (size_t z = 0; z < s.scaling.size(); ++z)
            if (s.scaling[z] == y) ez += s.pointer.effects[z].mat();
        Matrix lifted = s.coupling.adjoint() * kron(Matrix::Identity(ds, ds), ez) * s.coupling;
        out.effects.push_back(
            restrict_channel(Operator(lifted, {ds, da}), phi));
    }
    return out;
}

std::vector<Vector> probe_states(int dim, bool doubled) {
    std::vector<Vector> probes;
    for (int i = 0; i < dim; ++i) {
        Vector v = Vector::Zero(dim);
        v(i) = 1.0;
        probes.push_back(v);
    }
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            Vector v = Vector::Zero(dim);
            v(i) = v(j) = 1.0 / std::sqrt(2.0);
            probes.push_back(v);
            if (doubled) {
                Vector w = Vector::Zero(dim);
                w(i) = 1.0 / std::sqrt(2.0);
                w(j) = cplx(0, 1.0 / std::sqrt(2.0));
                probes.push_back(w);
            }
        }
    return probes;
}

double probability_reproducibility_residual(const MeasurementScheme& s, const Pom& measured,
                                            const State& rho) {
    const int ds = s.system_dim, da = s.apparatus_dim;
    Matrix joint = kron(rho.mat(), Matrix(s.apparatus_state * s.apparatus_state.adjoint()));
    Matrix evolved = s.coupling * joint * s.coupling.adjoint();
    double worst = 0.0;
    for (int y = 0; y < measured.outcomes(); ++y) {
        Matrix ez = Matrix::Zero(da, da);
        for (size_t z = 0; z < s.scaling.size(); ++z)
            if (s.scaling[z] == y) ez += s.pointer.effects[z].mat();
        double lhs = ((evolved * kron(Matrix::Identity(ds, ds), ez)).trace()).real();
        double rhs = ((rho.mat() * measured.effects[y].mat()).trace()).real();
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double repeatability_defect(const MeasurementScheme& s, const Pom& measured, bool doubled) {
    const int ds = s.system_dim, da = s.apparatus_dim;
    double worst = 0.0;
    for (const Vector& probe : probe_states(ds, doubled)) {
        Vector joint = Vector::Zero(ds * da);
        for (int i = 0; i < ds; ++i)
            for (int a = 0; a < da; ++a) joint(i * da + a) = probe(i) * s.apparatus_state(a);
        Vector evolved = s.coupling * joint;
        for (int y = 0; y < measured.outcomes(); ++y) {
            Matrix ez = Matrix::Zero(da, da);
            for (size_t z = 0; z < s.scaling.size(); ++z)
                if (s.scaling[z] == y) ez += s.pointer.effects[z].mat();
            Matrix both = kron(measured.effects[y].mat(), ez);
            double lhs = (evolved.adjoint() * both * evolved)(0).real();
            double rhs =
                (probe.adjoint() * measured.effects[y].mat() * probe)(0).real();
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

WayReport way_report(const MeasurementScheme& s, const Matrix& l_s, const Matrix& l_a,
                     double tol) {
    const int ds = s.system_dim, da = s.apparatus_dim;
    if (l_s.rows() != ds || l_a.rows() != da)
        throw std::invalid_argument("way_report: conserved-quantity dimensions mismatch");
    if (operator_norm(Matrix(l_s - l_s.adjoint())) > kTol * ds ||
        operator_norm(Matrix(l_a - l_a.adjoint())) > kTol * da)
        throw std::invalid_argument("way_report: conserved quantities must be Hermitian");

    WayReport r{};
    Matrix ltot = kron(l_s, Matrix::Identity(da, da)) + kron(Matrix::Identity(ds, ds), l_a);
    r.conservation = operator_norm(Matrix(s.coupling * ltot - ltot * s.coupling));

    r.yanase = 0.0;
    for (const auto& ez : s.pointer.effects)
        r.yanase = std::max(r.yanase, operator_norm(Matrix(ez.mat() * l_a - l_a * ez.mat())));

    Pom measured = measured_pom(s);
    r.commutation = 0.0;
    r.sharpness = 0.0;
    for (const auto& e : measured.effects) {
        r.commutation =
            std::max(r.commutation, operator_norm(Matrix(e.mat() * l_s - l_s * e.mat())));
        r.sharpness =
            std::max(r.sharpness, operator_norm(Matrix(e.mat() * e.mat() - e.mat())));
    }
    r.repeatability = repeatability_defect(s, measured);

    r.hypotheses_hold = r.conservation < tol && r.yanase < tol && r.sharpness < tol &&
                        r.repeatability < tol;
    r.way_consistent = !r.hypotheses_hold || r.commutation < tol;
    return r;
}

StrongWayReport strong_way_check(const MeasurementScheme& s, const Matrix& l_s, double tol) {
    const int ds = s.system_dim, da = s.apparatus_dim;
    if (l_s.rows() != ds) throw std::invalid_argument("strong_way_check: dimension mismatch");

    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (l_s + l_s.adjoint())));
    auto us = [&](double t) {
        Vector ph(ds);
        for (int i = 0; i < ds; ++i) ph(i) = std::polar(1.0, t * es.eigenvalues()(i));
        return Matrix(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    };

    const std::vector<double> ts{0.37, 1.0, 2.2, 4.9};
    StrongWayReport r{};
    r.hypothesis_residual = 0.0;
    for (double t : ts) {
        Matrix ut = kron(us(t), Matrix::Identity(da, da));
        r.hypothesis_residual =
            std::max(r.hypothesis_residual, operator_norm(Matrix(s.coupling * ut - ut * s.coupling)));
    }
    r.hypothesis_holds = r.hypothesis_residual < tol;
    r.invariance_residual = 0.0;
    if (!r.hypothesis_holds) return r;  // check skipped, reported via the flag

    Pom measured = measured_pom(s);
    for (double t : ts) {
        Matrix u = us(t);
        for (const auto& e : measured.effects)
            r.invariance_residual = std::max(
                r.invariance_residual, operator_norm(Matrix(u * e.mat() * u.adjoint() - e.mat())));
    }
    return r;
}

double variance(const std::vector<double>& p) {
    double m1 = 0.0, m2 = 0.0, tot = 0.0;
    for (size_t x = 0; x < p.size(); ++x) {
        tot += p[x];
        m1 += x * p[x];
        m2 += static_cast<double>(x) * x * p[x];
    }
    if (std::abs(tot - 1.0) > 1e-8) throw std::invalid_argument("variance: not a distribution");
    return m2 - m1 * m1;
}

double line_overall_width(const std::vector<double>& p, double eps) {
    const int n = static_cast<int>(p.size());
    const double target = 1.0 - eps;
    int best = n;
    for (int start = 0; start < n; ++start) {
        double mass = 0.0;
        for (int len = 1; start + len <= n; ++len) {
            mass += p[start + len - 1];
            if (mass >= target - 1e-14) {
                best = std::min(best, len);
                break;
            }
        }
    }
    return best;
}

namespace {

int support_length(const std::vector<double>& p) {
    int lo = -1, hi = -1;
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
        if (p[i] > 0.0) {
            if (lo < 0) lo = i;
            hi = i;
        }
    return lo < 0 ? 0 : hi - lo + 1;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b, int n) {
    std::vector<double> out(n, 0.0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out[(x + y) % n] += a[x] * b[y];
    return out;
}

}  // namespace

SmearedRestrictionReport smeared_restriction_check(const std::vector<double>& kernel,
                                                   const std::vector<double>& phi_sq,
                                                   const std::vector<int>& window, int grid) {
    if (static_cast<int>(kernel.size()) != grid || static_cast<int>(phi_sq.size()) != grid)
        throw std::invalid_argument("smeared_restriction_check: vectors must match the grid");
    if (support_length(kernel) + support_length(phi_sq) >= grid / 2)
        throw std::invalid_argument("smeared_restriction_check: supports exceed half the grid");
    for (double v : kernel)
        if (v < 0) throw std::invalid_argument("smeared_restriction_check: negative kernel");

    // reference POM: reported = true + e-distributed error, i.e. the smeared
    // position built from the reflected kernel (see docs on conventions)
    std::vector<double> reflected(grid);
    for (int x = 0; x < grid; ++x) reflected[x] = kernel[((grid - x) % grid)];
    Pom ref = smeared_position_pom(grid, reflected);

    // Gamma_phi(yen(E(X))) through the full bipartite pipeline
    Vector phi(grid);
    for (int x = 0; x < grid; ++x) phi(x) = std::sqrt(phi_sq[x]);
    Matrix omega = phi * phi.adjoint();

    Matrix ex = Matrix::Zero(grid, grid);
    for (int x : window) ex(x, x) = 1.0;

    CyclicRep shifts = CyclicRep::lattice_shift(grid);
    Matrix rel = Matrix::Zero(grid * grid, grid * grid);
    for (int g = 0; g < grid; ++g) {
        const Matrix& u = shifts.system_unitary(g);
        rel += kron(Matrix(u * ex * u.adjoint()), ref.effects[g].mat());
    }
    Matrix restricted = restrict_channel(Operator(rel, {grid, grid}), omega).mat();

    std::vector<double> etilde = convolve(kernel, phi_sq, grid);
    double res = 0.0;
    for (int x = 0; x < grid; ++x) {
        double expect = 0.0;  // (chi_X * etilde)(x)
        for (int y : window) expect += etilde[((x - y) % grid + grid) % grid];
        res = std::max(res, std::abs(restricted(x, x).real() - expect));
        for (int y = 0; y < grid; ++y)
            if (y != x) res = std::max(res, std::abs(restricted(x, y)));
    }

    SmearedRestrictionReport r{};
    r.identity_residual = res;
    r.variance_lhs = variance(etilde);
    r.variance_rhs = variance(kernel) + variance(phi_sq);

    double margin = 1e300;
    for (double eps : {0.01, 0.05, 0.1, 0.25}) {
        double wc = line_overall_width(etilde, eps);
        double we = std::max(line_overall_width(kernel, eps), line_overall_width(phi_sq, eps));
        margin = std::min(margin, wc - we);
    }
    r.width_margin = margin;
    r.pass = r.identity_residual < 1e-10 &&
             std::abs(r.variance_lhs - r.variance_rhs) < 1e-8 && r.width_margin >= 0.0;
    return r;
}

// ---- scheme file ------------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("scheme file: " + where + ": " + what);
}

Matrix parse_matrix(const json& j, const std::string& where, int rows, int cols) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        fail(where, "expected " + std::to_string(rows) + " rows");
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            fail(where + "[" + std::to_string(r) + "]", "expected " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) {
            const json& cell = row[c];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
                fail(where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                     "expected [re, im]");
            m(r, c) = cplx(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

MeasurementScheme load_scheme(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        // translate the byte offset to a line/column pair
        size_t line = 1, col = 1;
        for (size_t i = 0; i < err.byte && i < json_text.size(); ++i) {
            if (json_text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw std::invalid_argument("scheme file: parse error at line " + std::to_string(line) +
                                    ", column " + std::to_string(col) + ": " + err.what());
    }
    if (!doc.is_object()) fail("$", "top level must be an object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "system_dim" && key != "apparatus_dim" && key != "coupling" &&
            key != "apparatus_state" && key != "pointer" && key != "scaling")
            fail(key, "unknown key");
    }
    for (const char* req : {"system_dim", "apparatus_dim", "coupling", "apparatus_state",
                            "pointer", "scaling"})
        if (!doc.contains(req)) fail(req, "missing");

    MeasurementScheme s;
    if (!doc["system_dim"].is_number_integer()) fail("system_dim", "expected integer");
    if (!doc["apparatus_dim"].is_number_integer()) fail("apparatus_dim", "expected integer");
    s.system_dim = doc["system_dim"].get<int>();
    s.apparatus_dim = doc["apparatus_dim"].get<int>();
    const int d = s.system_dim * s.apparatus_dim;

    s.coupling = parse_matrix(doc["coupling"], "coupling", d, d);

    const json& st = doc["apparatus_state"];
    if (!st.is_array() || static_cast<int>(st.size()) != s.apparatus_dim)
        fail("apparatus_state", "expected " + std::to_string(s.apparatus_dim) + " amplitudes");
    s.apparatus_state = Vector(s.apparatus_dim);
    for (int i = 0; i < s.apparatus_dim; ++i) {
        const json& cell = st[i];
        if (!cell.is_array() || cell.size() != 2) fail("apparatus_state", "expected [re, im] pairs");
        s.apparatus_state(i) = cplx(cell[0].get<double>(), cell[1].get<double>());
    }

    const json& ptr = doc["pointer"];
    if (!ptr.is_object() || !ptr.contains("labels") || !ptr.contains("effects"))
        fail("pointer", "expected {labels, effects}");
    std::vector<std::string> labels = ptr["labels"].get<std::vector<std::string>>();
    if (ptr["effects"].size() != labels.size()) fail("pointer.effects", "one effect per label");
    s.pointer.space = OutcomeSpace::finite(labels);
    for (size_t z = 0; z < labels.size(); ++z)
        s.pointer.effects.emplace_back(
            parse_matrix(ptr["effects"][z], "pointer.effects[" + std::to_string(z) + "]",
                         s.apparatus_dim, s.apparatus_dim),
            std::vector<int>{s.apparatus_dim});

    const json& sc = doc["scaling"];
    if (!sc.is_object()) fail("scaling", "expected a label table");
    std::vector<std::string> measured_labels;
    s.scaling.assign(labels.size(), -1);
    for (size_t z = 0; z < labels.size(); ++z) {
        if (!sc.contains(labels[z])) fail("scaling", "missing entry for pointer label " + labels[z]);
        if (!sc[labels[z]].is_string()) fail("scaling." + labels[z], "expected a label string");
        std::string target = sc[labels[z]].get<std::string>();
        auto it = std::find(measured_labels.begin(), measured_labels.end(), target);
        if (it == measured_labels.end()) {
            measured_labels.push_back(target);
            s.scaling[z] = static_cast<int>(measured_labels.size()) - 1;
        } else {
            s.scaling[z] = static_cast<int>(it - measured_labels.begin());
        }
    }
    s.validate();
    return s;
}

std::string scheme_to_json(const MeasurementScheme& s) {
    json doc;
    doc["system_dim"] = s.system_dim;
    doc["apparatus_dim"] = s.apparatus_dim;
    doc["coupling"] = matrix_to_json(s.coupling);
    json st = json::array();
    for (int i = 0; i < s.apparatus_dim; ++i)
        st.push_back(json::array({s.apparatus_state(i).real(), s.apparatus_state(i).imag()}));
    doc["apparatus_state"] = st;
    json ptr;
    ptr["labels"] = s.pointer.space.labels;
    json effs = json::array();
    for (const auto& e : s.pointer.effects) effs.push_back(matrix_to_json(e.mat()));
    ptr["effects"] = effs;
    doc["pointer"] = ptr;
    json sc;
    for (size_t z = 0; z < s.scaling.size(); ++z)
        sc[s.pointer.space.labels[z]] = std::to_string(s.scaling[z]);
    doc["scaling"] = sc;
    return doc.dump(2);
}

}  // namespace relq
