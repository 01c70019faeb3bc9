#include "relq/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "relq/bounds.hpp"
#include "relq/coherence.hpp"
#include "relq/measure.hpp"
#include "relq/models.hpp"
#include "relq/rng.hpp"

namespace relq {

namespace {

struct CommandSpec {
    std::vector<std::pair<std::string, double>> numeric_defaults;
    std::vector<std::pair<std::string, std::string>> string_defaults;
    bool needs_seed = false;
};

const std::map<std::string, CommandSpec>& command_table() {
    static const std::map<std::string, CommandSpec> table{
        {"model1", {{{"theta", M_PI / 2}}, {}, false}},
        {"model2", {{{"j", 1}, {"theta", M_PI / 3}, {"theta-prime", 0.0}}, {}, false}},
        {"model3", {{{"cutoff", 8}, {"theta", M_PI / 3}}, {}, false}},
        {"qubit", {{{"n", 9}, {"eps", 0.5}}, {}, false}},
        {"as",
         {{{"q1", 16}, {"q2", 16}, {"g", M_PI / 16}, {"t", 1.0}, {"theta", 0.0},
           {"theta-prime", 0.0}},
          {},
          false}},
        {"as-nogo", {{{"i", 2}, {"cutoff", 12}, {"trials", 50}}, {}, true}},
        {"dowling", {{{"m", 100}, {"phi", M_PI / 3}}, {}, false}},
        {"appendix", {{{"m", 100}, {"k", 4}}, {}, false}},
        {"bounds", {{{"trials", 200}}, {{"which", "prop1"}}, true}},
        {"coherence", {{{"ds", 2}, {"dr", 2}, {"trials", 100}}, {}, true}},
        {"pom-validate", {{{"dim", 3}, {"bins", 8}, {"emit-effects", 0}}, {}, false}},
        {"way", {{{"dim", 2}}, {{"scheme", ""}}, false}},
        {"strong-way", {{{"ds", 2}, {"da", 3}, {"swap-control", 0}}, {}, true}},
        {"smear", {{{"grid", 32}, {"e-var", 2}, {"phi-var", 3}, {"window", 3}}, {}, false}},
    };
    return table;
}

double parse_number(const std::string& key, const std::string& text) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("value for --" + key + " is not a number: '" + text + "'");
    }
}

}  // namespace

std::string usage_text() {
    std::string out =
        "usage: relq <command> [--key value ...] [--config file.json] [--seed N]\n"
        "            [--format json|csv] [--out path]\n\ncommands:\n";
    for (const auto& [name, spec] : command_table()) {
        out += "  " + name;
        for (const auto& [k, v] : spec.numeric_defaults)
            out += " --" + k + " " + format_double(v);
        for (const auto& [k, v] : spec.string_defaults)
            out += " --" + k + " " + (v.empty() ? "<path>" : v);
        if (spec.needs_seed) out += " --seed <required>";
        out += "\n";
    }
    out +=
        "\nReports go to stdout as JSON unless --out is given; RELQ_OUTPUT_DIR\n"
        "prefixes relative --out paths. Exit codes: 0 pass, 1 violated check,\n"
        "2 input error.\n";
    return out;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    if (args.empty()) throw ConfigError("no command given\n" + usage_text());
    RunConfig cfg;
    cfg.command = args[0];
    auto it = command_table().find(cfg.command);
    if (it == command_table().end())
        throw ConfigError("unknown command '" + cfg.command + "'\n" + usage_text());
    const CommandSpec& spec = it->second;

    std::map<std::string, std::string> flag_values;
    std::string config_path;
    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) throw ConfigError("expected a --flag, got '" + a + "'");
        std::string key = a.substr(2);
        if (i + 1 >= args.size()) throw ConfigError("flag --" + key + " needs a value");
        std::string value = args[++i];
        if (key == "config")
            config_path = value;
        else
            flag_values[key] = value;
    }

    // config file first, flags override
    std::map<std::string, std::string> file_values;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read config file " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(ss.str());
        } catch (const std::exception& e) {
            throw ConfigError("config file " + config_path + ": " + e.what());
        }
        if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
        for (const auto& [k, v] : doc.items()) {
            if (v.is_string())
                file_values[k] = v.get<std::string>();
            else if (v.is_number())
                file_values[k] = format_double(v.get<double>());
            else if (v.is_boolean())
                file_values[k] = v.get<bool>() ? "1" : "0";
            else
                throw ConfigError("config key '" + k + "' must be scalar");
        }
    }

    auto known_numeric = [&](const std::string& k) {
        for (const auto& [key, _] : spec.numeric_defaults)
            if (key == k) return true;
        return false;
    };
    auto known_string = [&](const std::string& k) {
        for (const auto& [key, _] : spec.string_defaults)
            if (key == k) return true;
        return false;
    };
    auto reserved = [](const std::string& k) {
        return k == "seed" || k == "format" || k == "out" || k == "trials";
    };

    for (const auto& source : {file_values, flag_values})
        for (const auto& [k, v] : source)
            if (!known_numeric(k) && !known_string(k) && !reserved(k))
                throw ConfigError("unknown key --" + k + " for command " + cfg.command);

    auto lookup = [&](const std::string& key) -> std::optional<std::string> {
        if (auto f = flag_values.find(key); f != flag_values.end()) {
            cfg.provenance[key] = "flag";
            return f->second;
        }
        if (auto f = file_values.find(key); f != file_values.end()) {
            cfg.provenance[key] = "config";
            return f->second;
        }
        cfg.provenance[key] = "default";
        return std::nullopt;
    };

    for (const auto& [key, dflt] : spec.numeric_defaults) {
        auto v = lookup(key);
        std::string store = key;
        std::replace(store.begin(), store.end(), '-', '_');
        cfg.numbers[store] = v ? parse_number(key, *v) : dflt;
    }
    for (const auto& [key, dflt] : spec.string_defaults) {
        auto v = lookup(key);
        cfg.strings[key] = v ? *v : dflt;
    }
    if (auto v = lookup("seed")) {
        try {
            cfg.seed = std::stoull(*v);
        } catch (const std::exception&) {
            throw ConfigError("--seed must be a 64-bit unsigned integer");
        }
    } else if (spec.needs_seed) {
        throw ConfigError("command " + cfg.command + " runs a randomized sweep; --seed is mandatory");
    }
    if (auto v = lookup("format")) {
        if (*v != "json" && *v != "csv") throw ConfigError("--format must be json or csv");
        cfg.format = *v;
    }
    if (auto v = lookup("out")) {
        cfg.output_path = *v;
        if (!cfg.output_path.empty() && cfg.output_path[0] != '/' && cfg.output_path != "-") {
            if (const char* dir = std::getenv("RELQ_OUTPUT_DIR"))
                cfg.output_path = std::string(dir) + "/" + cfg.output_path;
        }
    }
    return cfg;
}

namespace {

void echo_params(Report& rep, const RunConfig& cfg) {
    for (const auto& [k, v] : cfg.numbers) rep.params.emplace_back(k, JsonValue::number(v));
    for (const auto& [k, v] : cfg.strings)
        if (!v.empty()) rep.params.emplace_back(k, JsonValue::string(v));
    for (const auto& [k, v] : cfg.provenance)
        if (v != "default") rep.provenance[k] = v;
}

int as_int(const RunConfig& cfg, const std::string& key) {
    double v = cfg.numbers.at(key);
    if (v < 0 || std::floor(v) != v) throw ConfigError("--" + key + " must be a nonnegative integer");
    return static_cast<int>(v);
}

Report run_model1(const RunConfig& cfg) {
    Report rep;
    Model1Run r = model1_run(cfg.numbers.at("theta"));
    rep.add_result("p0", r.p0);
    rep.add_result("expected", r.expected);
    rep.add_result("p0_twirled_pipeline", r.p0_twirled_pipeline);
    rep.add_residual("p0_error", std::abs(r.p0 - r.expected), 1e-12);
    rep.add_residual("pipeline_agreement", std::abs(r.p0 - r.p0_twirled_pipeline), 1e-12);
    rep.add_residual("conservation", r.conservation_residual, 1e-10);
    return rep;
}

Report run_model2(const RunConfig& cfg) {
    Report rep;
    long j = as_int(cfg, "j");
    Model2Run r = model2_run(j, cfg.numbers.at("theta"), cfg.numbers.at("theta_prime"));
    rep.add_result("error_norm_sq", r.error_norm_sq);
    rep.add_result("expected_error_norm_sq", 1.0 / (2.0 * j + 1.0));
    rep.add_result("p0", r.p0);
    rep.add_result("angle_mean", r.angle_mean);
    rep.add_result("angle_variance", r.angle_variance);
    rep.add_result("invariant_effect_variation", r.invariant_effect_variation);
    rep.add_residual("error_norm_law", std::abs(r.error_norm_sq - 1.0 / (2.0 * j + 1.0)), 1e-14);
    rep.add_residual("p0_error", std::abs(r.p0 - r.expected_p0), 1e-12);
    rep.add_residual("conservation", r.conservation_residual, 1e-10);
    rep.add_residual("reduced_half_identity", r.reduced_half_identity_residual, 1e-12);
    rep.add_residual("basis_reduced_theta", r.basis_reduced_theta_residual, 1e-12);
    rep.add_residual("eq70_decomposition", r.eq70_decomposition_residual, 1e-12);
    rep.add_residual("www_reduced_invariance", r.www_reduced_invariance_residual, 1e-10);
    rep.add_residual("theta_sensitivity_deficit",
                     std::max(0.0, 1e-3 - r.invariant_effect_variation), 0.0);
    return rep;
}

Report run_model3(const RunConfig& cfg) {
    Report rep;
    Model3Run r = model3_run(as_int(cfg, "cutoff"), cfg.numbers.at("theta"));
    JsonValue arr = JsonValue::array();
    double worst = 0.0;
    for (double p : r.p0_by_n) {
        arr.push(JsonValue::number(p));
        worst = std::max(worst, std::abs(p - r.expected));
    }
    rep.add_result("p0_by_n", std::move(arr));
    rep.add_result("expected", r.expected);
    rep.add_residual("p0_error", worst, 1e-12);
    rep.add_residual("fixed_point", r.fixed_point_residual, 1e-14);
    rep.add_residual("conservation", r.conservation_residual, 1e-10);
    return rep;
}

Report run_qubit(const RunConfig& cfg) {
    Report rep;
    long n = as_int(cfg, "n");
    QubitDemoRun r = qubit_demo(n, cfg.numbers.at("eps"));
    rep.add_result("sigma1_factor", r.sigma1_factor);
    rep.add_result("sigma2_factor", r.sigma2_factor);
    rep.add_result("expected_factor", r.expected_factor);
    rep.add_result("tail_probability", r.tail_probability);
    rep.add_result("tail_bound", r.tail_bound);
    rep.add_result("delta_n", r.delta_n);
    rep.add_residual("sigma3_exactness", r.sigma3_residual, 1e-12);
    rep.add_residual("sigma1_factor_error", std::abs(r.sigma1_factor - r.expected_factor), 1e-12);
    rep.add_residual("sigma2_factor_error", std::abs(r.sigma2_factor - r.expected_factor), 1e-12);
    rep.add_residual("tail_excess", std::max(0.0, r.tail_probability - r.tail_bound), 1e-12);
    return rep;
}

Report run_as(const RunConfig& cfg) {
    Report rep;
    AsConfig ac;
    ac.q1 = cfg.numbers.at("q1");
    ac.q2 = cfg.numbers.at("q2");
    ac.g = cfg.numbers.at("g");
    ac.t = cfg.numbers.at("t");
    ac.theta = cfg.numbers.at("theta");
    ac.theta_prime = cfg.numbers.at("theta_prime");
    AsRun r = as_run(ac);
    double worst = 0.0;
    for (size_t i = 0; i < r.number_input_p.size(); ++i)
        worst = std::max(worst, std::abs(r.number_input_p[i] - r.number_input_expected[i]));
    JsonValue inf = JsonValue::array();
    double mono = 0.0;
    for (size_t i = 0; i < r.product_infidelity.size(); ++i) {
        inf.push(JsonValue::number(r.product_infidelity[i]));
        if (i) mono = std::max(mono, r.product_infidelity[i] - r.product_infidelity[i - 1]);
    }
    rep.add_result("final_p_variation", r.final_p_variation);
    rep.add_result("product_infidelity", std::move(inf));
    rep.tails["cavity1"] = r.tail_mass_1;
    rep.tails["cavity2"] = r.tail_mass_2;
    rep.add_residual("number_input_probability", worst, 1e-10);
    rep.add_residual("conservation", r.conservation_residual, 1e-10);
    rep.add_residual("infidelity_monotonicity", mono, 0.0);
    rep.add_residual("variation_deficit", std::max(0.0, 0.1 - r.final_p_variation), 0.0);
    return rep;
}

Report run_as_nogo(const RunConfig& cfg) {
    Report rep;
    AsNogoRun r = as_nogo_check(as_int(cfg, "i"), as_int(cfg, "cutoff"), *cfg.seed,
                                as_int(cfg, "trials"));
    rep.add_result("min_distance_sq", r.min_distance_sq);
    rep.add_result("bound", r.bound);
    rep.add_result("gamma0_distance_sq", r.gamma0_distance_sq);
    rep.add_residual("nogo_violation", std::max(0.0, r.bound - r.min_distance_sq), 1e-10);
    rep.add_residual("conservation", r.conservation_residual, 1e-10);
    return rep;
}

Report run_dowling(const RunConfig& cfg) {
    Report rep;
    DowlingRun r = dowling_run(cfg.numbers.at("m"), cfg.numbers.at("phi"));
    rep.add_result("p_atom", r.p_atom);
    rep.add_result("p_molecule", r.p_molecule);
    rep.add_result("expected_atom", r.expected_atom);
    rep.add_result("expected_molecule", r.expected_molecule);
    rep.add_result("error_norm", r.error_norm);
    rep.add_result("a_m", r.a_m);
    rep.add_result("probability_budget", r.probability_budget);
    rep.tails["coherent"] = r.tail_mass;
    rep.add_residual("atom_probability_gap",
                     std::abs(r.p_atom - r.expected_atom) - r.probability_budget, 0.0);
    rep.add_residual("molecule_probability_gap",
                     std::abs(r.p_molecule - r.expected_molecule) - r.probability_budget, 0.0);
    rep.add_residual("conservation", r.conservation_residual, 1e-10);
    return rep;
}

Report run_appendix(const RunConfig& cfg) {
    Report rep;
    AppendixRun r = appendix_bound_check(cfg.numbers.at("m"), as_int(cfg, "k"));
    rep.add_result("delta_k", r.delta_k);
    rep.add_result("threshold_m", r.threshold_m);
    rep.add_result("a_m", r.a_m);
    rep.add_result("chebyshev_tail", r.chebyshev_tail);
    rep.tails["poisson"] = r.tail_mass;
    rep.add_residual("chebyshev_excess",
                     r.chebyshev_tail - (r.chebyshev_bound + 3.0 * r.tail_mass), 1e-12);
    double a_excess = (cfg.numbers.at("m") > r.threshold_m)
                          ? r.a_m - (r.a_bound + 3.0 * r.tail_mass)
                          : -1.0;
    rep.add_residual("a_m_excess", a_excess, 0.0);
    rep.add_residual("f_bound_excess", r.f_max - 3.0, 0.0);
    return rep;
}

Report run_bounds(const RunConfig& cfg) {
    Report rep;
    const std::string which = cfg.strings.at("which");
    int trials = as_int(cfg, "trials");
    SweepReport s;
    if (which == "prop1")
        s = prop1_sweep(trials, *cfg.seed);
    else if (which == "owb")
        s = owb_sweep(trials, *cfg.seed);
    else if (which == "tradeoff")
        s = tradeoff_sweep(trials, *cfg.seed);
    else
        throw ConfigError("--which must be prop1, owb or tradeoff");
    rep.add_result("trials", static_cast<double>(s.trials));
    rep.add_result("min_residual", s.min_residual);
    rep.add_residual("failures", static_cast<double>(s.failures), 0.0);
    rep.add_residual("worst_violation", std::max(0.0, -s.min_residual), 1e-10);
    return rep;
}

Report run_coherence(const RunConfig& cfg) {
    Report rep;
    int ds = as_int(cfg, "ds"), dr = as_int(cfg, "dr"), trials = as_int(cfg, "trials");
    if (ds < 2 || dr < 2) throw ConfigError("--ds and --dr must be >= 2");
    SplitMix64 rng(*cfg.seed);
    NumberRep rep_s = NumberRep::ladder(0, ds - 1);
    NumberRep rep_r = NumberRep::ladder(0, dr - 1);

    double worst_oracle = 0.0, worst_min = 0.0, worst_witness = 0.0, max_m = 0.0;
    for (int t = 0; t < trials; ++t) {
        Matrix rho_s = rng.density(ds), rho_r = rng.density(dr);
        State theta(Operator(kron(rho_s, rho_r), {ds, dr}));
        MutualCoherenceResult m = mutual_coherence(theta, rep_s, rep_r);
        max_m = std::max(max_m, m.value);
        worst_witness = std::max(worst_witness, std::abs(m.value - m.witness_value));

        double cs = absolute_coherence(State(Operator(rho_s)), rep_s);
        double cr = absolute_coherence(State(Operator(rho_r)), rep_r);
        worst_min = std::max(worst_min, m.value - std::min(cs, cr));

        // random invariant effects never exceed the closed form
        NumberRep rep_t = NumberRep::tensor_sum(rep_s, rep_r);
        Matrix delta = twirl_factor(theta.mat(), ds, dr, 0, rep_s) - theta.mat();
        for (int k = 0; k < 200; ++k) {
            Matrix e = twirl_op(rng.effect(ds * dr), rep_t);
            double v = std::abs(((delta * e).trace()).real());
            worst_oracle = std::max(worst_oracle, v - m.value);
        }
    }
    rep.add_result("max_mutual_coherence", max_m);
    rep.add_result("trials", static_cast<double>(trials));
    rep.add_residual("oracle_excess", worst_oracle, 1e-10);
    rep.add_residual("witness_gap", worst_witness, 1e-8);
    rep.add_residual("min_bound_violation", worst_min, 1e-10);
    return rep;
}

Report run_pom_validate(const RunConfig& cfg) {
    Report rep;
    int dim = as_int(cfg, "dim"), bins = as_int(cfg, "bins");
    if (dim < 1 || bins < 1) throw ConfigError("--dim and --bins must be positive");
    NumberRep nrep = NumberRep::ladder(0, dim - 1);
    PhaseMatrix c = PhaseMatrix::canonical(dim);
    Pom pom = build_phase_pom(nrep, c, bins);
    PomValidationReport v = pom_validate(pom, nrep);
    Norm1Report n1 = norm1_defect(pom);
    rep.add_result("norm1_defect_nonzero", n1.defect_nonzero);
    rep.add_result("norm1_defect_all", n1.defect_all);
    rep.add_residual("positivity", v.positivity, 1e-10);
    rep.add_residual("normalization", v.normalization, 1e-10);
    rep.add_residual("covariance", v.covariance, 1e-10);

    SplitMix64 rng(7);
    double min_margin = 1e300;
    for (int t = 0; t < 100; ++t) {
        State rho(Operator(rng.density(dim)));
        std::vector<int> window{t % bins};
        min_margin = std::min(min_margin, localisation_margin(rho, pom, window));
    }
    rep.add_result("min_localisation_margin", min_margin);
    rep.add_residual("localisation_violation", std::max(0.0, -min_margin), 1e-12);

    if (cfg.numbers.at("emit_effects") != 0.0) {
        JsonValue effects = JsonValue::array();
        for (const auto& e : pom.effects) {
            JsonValue rows = JsonValue::array();
            for (int r = 0; r < e.dim(); ++r) {
                JsonValue row = JsonValue::array();
                for (int col = 0; col < e.dim(); ++col) {
                    JsonValue cell = JsonValue::array();
                    cell.push(JsonValue::number(e.mat()(r, col).real()));
                    cell.push(JsonValue::number(e.mat()(r, col).imag()));
                    row.push(std::move(cell));
                }
                rows.push(std::move(row));
            }
            effects.push(std::move(rows));
        }
        rep.add_result("effects", std::move(effects));
    }
    return rep;
}

Report run_way(const RunConfig& cfg) {
    Report rep;
    MeasurementScheme s;
    const std::string path = cfg.strings.at("scheme");
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read scheme file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            s = load_scheme(ss.str());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else {
        s = MeasurementScheme::swap_scheme(as_int(cfg, "dim"));
    }
    Matrix l_s = NumberRep::ladder(0, s.system_dim - 1).number_operator();
    Matrix l_a = NumberRep::ladder(0, s.apparatus_dim - 1).number_operator();
    WayReport w = way_report(s, l_s, l_a);
    rep.add_result("conservation", w.conservation);
    rep.add_result("yanase", w.yanase);
    rep.add_result("commutation", w.commutation);
    rep.add_result("sharpness", w.sharpness);
    rep.add_result("repeatability", w.repeatability);
    rep.add_result("hypotheses_hold", w.hypotheses_hold ? 1.0 : 0.0);
    rep.add_residual("way_consistency", w.way_consistent ? 0.0 : 1.0, 0.0);
    return rep;
}

Report run_strong_way(const RunConfig& cfg) {
    Report rep;
    int ds = as_int(cfg, "ds"), da = as_int(cfg, "da");
    SplitMix64 rng(*cfg.seed);

    MeasurementScheme s;
    s.system_dim = ds;
    s.apparatus_dim = da;
    if (cfg.numbers.at("swap_control") != 0.0) {
        if (ds != da) throw ConfigError("swap control needs --ds == --da");
        s = MeasurementScheme::swap_scheme(ds);
    } else {
        // U = exp(i L_S ox K) commutes with U_S(t) ox 1
        Matrix l_s = NumberRep::ladder(0, ds - 1).number_operator();
        Matrix k = rng.hermitian(da);
        Eigen::SelfAdjointEigenSolver<Matrix> ek(k);
        Matrix u = Matrix::Zero(ds * da, ds * da);
        for (int i = 0; i < ds; ++i)
            for (int a = 0; a < da; ++a)
                for (int b = 0; b < da; ++b) {
                    cplx acc = 0.0;
                    for (int e = 0; e < da; ++e)
                        acc += ek.eigenvectors()(a, e) *
                               std::polar(1.0, l_s(i, i).real() * ek.eigenvalues()(e)) *
                               std::conj(ek.eigenvectors()(b, e));
                    u(i * da + a, i * da + b) = acc;
                }
        s.coupling = u;
        std::vector<std::string> labels(da);
        for (int a = 0; a < da; ++a) labels[a] = std::to_string(a);
        s.pointer.space = OutcomeSpace::finite(labels);
        for (int a = 0; a < da; ++a) {
            Matrix e = Matrix::Zero(da, da);
            e(a, a) = 1.0;
            s.pointer.effects.emplace_back(std::move(e), std::vector<int>{da});
        }
        s.apparatus_state = rng.pure_state(da);
        s.scaling.resize(da);
        for (int a = 0; a < da; ++a) s.scaling[a] = a;
    }

    Matrix l_s = NumberRep::ladder(0, s.system_dim - 1).number_operator();
    StrongWayReport w = strong_way_check(s, l_s);
    rep.add_result("hypothesis_residual", w.hypothesis_residual);
    rep.add_result("hypothesis_holds", w.hypothesis_holds ? 1.0 : 0.0);
    rep.add_result("invariance_residual", w.invariance_residual);
    if (w.hypothesis_holds)
        rep.add_residual("measured_pom_invariance", w.invariance_residual, 1e-9);
    else
        rep.add_result("skipped", 1.0);
    return rep;
}

std::vector<double> binomial_kernel(int grid, int offset, int n) {
    std::vector<double> k(grid, 0.0);
    double tot = std::pow(2.0, n);
    for (int i = 0; i <= n; ++i)
        k[(offset + i) % grid] =
            std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0)) / tot;
    return k;
}

Report run_smear(const RunConfig& cfg) {
    Report rep;
    int grid = as_int(cfg, "grid");
    int ev = as_int(cfg, "e_var"), pv = as_int(cfg, "phi_var"), win = as_int(cfg, "window");
    // binomial B(4v, 1/2) has variance v
    std::vector<double> e = binomial_kernel(grid, 1, 4 * ev);
    std::vector<double> phi = binomial_kernel(grid, 0, 4 * pv);
    std::vector<int> window;
    for (int x = 0; x < win; ++x) window.push_back(x);
    SmearedRestrictionReport r = smeared_restriction_check(e, phi, window, grid);
    rep.add_result("variance_lhs", r.variance_lhs);
    rep.add_result("variance_rhs", r.variance_rhs);
    rep.add_result("width_margin", r.width_margin);
    rep.add_residual("identity", r.identity_residual, 1e-10);
    rep.add_residual("variance_additivity", std::abs(r.variance_lhs - r.variance_rhs), 1e-8);
    rep.add_residual("width_violation", std::max(0.0, -r.width_margin), 0.0);
    return rep;
}

}  // namespace

Report run_command(const RunConfig& cfg) {
    Report rep;
    if (cfg.command == "model1")
        rep = run_model1(cfg);
    else if (cfg.command == "model2")
        rep = run_model2(cfg);
    else if (cfg.command == "model3")
        rep = run_model3(cfg);
    else if (cfg.command == "qubit")
        rep = run_qubit(cfg);
    else if (cfg.command == "as")
        rep = run_as(cfg);
    else if (cfg.command == "as-nogo")
        rep = run_as_nogo(cfg);
    else if (cfg.command == "dowling")
        rep = run_dowling(cfg);
    else if (cfg.command == "appendix")
        rep = run_appendix(cfg);
    else if (cfg.command == "bounds")
        rep = run_bounds(cfg);
    else if (cfg.command == "coherence")
        rep = run_coherence(cfg);
    else if (cfg.command == "pom-validate")
        rep = run_pom_validate(cfg);
    else if (cfg.command == "way")
        rep = run_way(cfg);
    else if (cfg.command == "strong-way")
        rep = run_strong_way(cfg);
    else if (cfg.command == "smear")
        rep = run_smear(cfg);
    else
        throw ConfigError("unknown command " + cfg.command);

    rep.command = cfg.command;
    rep.seed = cfg.seed;
    echo_params(rep, cfg);
    return rep;
}

}  // namespace relq
