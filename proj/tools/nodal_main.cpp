// Command-line front end: spectra, nodal counts, Riccati sweeps, the star
// counterexample and ensemble verification runs over the graph file format.

#include "nodal/errors.hpp"
#include "nodal/io.hpp"
#include "nodal/riccati.hpp"
#include "nodal/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr const char* kVersion = "1.0";
constexpr double kPi = 3.141592653589793238462643383279502884;

using nodal::format_double;

int fail(int code, const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return code;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("NODAL_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw nodal::Error("NODAL_SEED is not an integer");
        }
    }
    return 1;
}

void emit(const nodal::Report& report, const std::string& format, const std::string& out_path) {
    const std::string text = format == "json" ? report.to_json() : report.to_text();
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw nodal::Error("cannot write '" + out_path + "'");
        out << text;
    }
}

nodal::Report base_report(const std::string& command) {
    nodal::Report r;
    r.add_header("tool", std::string("nodal ") + kVersion);
    r.add_header("command", command);
    r.add_header("gap_tol_scale", format_double(nodal::tol::kGapTolScale));
    r.add_header("vanish_tol_scale", format_double(nodal::tol::kVanishTolScale));
    return r;
}

std::string flag_text(bool degenerate, bool vertex_zero, bool zero_edge) {
    std::string s;
    if (degenerate) s += (s.empty() ? "" : ",") + std::string("degenerate");
    if (vertex_zero) s += (s.empty() ? "" : ",") + std::string("vertex-zero");
    if (zero_edge) s += (s.empty() ? "" : ",") + std::string("zero-edge");
    return s.empty() ? "-" : s;
}

int cmd_spectrum(const std::string& path, const std::string& model, double kmax, int count,
                 const std::string& format, const std::string& out_path) {
    const nodal::GraphFile f = nodal::load_graph_file(path);
    if (!model.empty() && ((model == "metric") != f.metric))
        return fail(4, "file is " + std::string(f.metric ? "metric" : "discrete") +
                           " but --model requested " + model);

    nodal::Report report = base_report("spectrum " + path);
    if (!f.metric) {
        const nodal::Spectrum s =
            nodal::eigen_decompose(nodal::assemble_hamiltonian(nodal::to_graph(f),
                                                               nodal::to_potential(f)));
        report.set_columns({"n", "lambda", "simple", "nonvanishing", "generic"});
        for (int n = 1; n <= static_cast<int>(s.eigenvalues.size()); ++n) {
            const nodal::GenericityReport g = nodal::check_genericity(s, n);
            report.add_row({std::to_string(n), format_double(s.eigenvalues[n - 1]),
                            std::to_string(g.simple), std::to_string(g.nonvanishing),
                            std::to_string(g.generic)});
        }
    } else {
        const nodal::MetricGraph mg = nodal::to_metric_graph(f);
        std::vector<nodal::MetricEigenpair> pairs;
        if (count > 0)
            pairs = nodal::find_first_eigenvalues(mg, count);
        else
            pairs = nodal::find_eigenvalues(mg, kmax * kmax);
        report.set_columns({"n", "lambda", "k", "multiplicity"});
        for (const nodal::MetricEigenpair& p : pairs)
            report.add_row({std::to_string(p.index), format_double(p.lambda),
                            format_double(p.k()), std::to_string(p.multiplicity)});
    }
    emit(report, format, out_path);
    return 0;
}

int cmd_nodal(const std::string& path, int count, const std::string& format,
              const std::string& out_path) {
    const nodal::GraphFile f = nodal::load_graph_file(path);
    nodal::Report report = base_report("nodal " + path);
    report.set_columns({"n", "lambda", "nu", "ell", "generic", "lower_ok", "upper_ok", "flags"});
    if (!f.metric) {
        const std::vector<nodal::NodalReport> rows =
            nodal::verify_bounds(nodal::to_graph(f), nodal::to_potential(f));
        for (const nodal::NodalReport& r : rows) {
            report.add_row({std::to_string(r.n), format_double(r.lambda), std::to_string(r.nu),
                            std::to_string(r.ell), std::to_string(r.generic),
                            r.generic ? std::to_string(r.lower_ok) : "-",
                            r.generic ? std::to_string(r.upper_ok) : "-",
                            r.generic ? "-" : "non-generic"});
        }
    } else {
        const nodal::MetricGraph mg = nodal::to_metric_graph(f);
        const int ell = nodal::cycle_dimension(mg.graph);
        const std::vector<nodal::MetricEigenpair> pairs =
            nodal::find_first_eigenvalues(mg, count);
        for (int n = 1; n <= static_cast<int>(pairs.size()); ++n) {
            if (pairs[n - 1].multiplicity_flag) {
                report.add_row({std::to_string(n), format_double(pairs[n - 1].lambda), "-",
                                std::to_string(ell), "0", "-", "-",
                                flag_text(true, false, false)});
                continue;
            }
            const nodal::MetricEigenpair filled = nodal::eigenfunction(mg, pairs[n - 1]);
            const nodal::MetricNodalCount d = nodal::metric_nodal_count_detail(mg, filled);
            const bool generic = nodal::metric_genericity(pairs, n, d).generic;
            report.add_row({std::to_string(n), format_double(filled.lambda),
                            std::to_string(d.domains), std::to_string(ell),
                            std::to_string(generic),
                            generic ? std::to_string(d.domains >= n - ell) : "-",
                            generic ? std::to_string(d.domains <= n) : "-",
                            flag_text(false, d.vertex_zero, d.zero_edge)});
        }
    }
    emit(report, format, out_path);
    return 0;
}

int cmd_riccati(const std::string& path, bool have_lambda, double lambda, bool have_scan,
                double scan_a, double scan_b, int root_label, const std::string& format,
                const std::string& out_path) {
    const nodal::GraphFile f = nodal::load_graph_file(path);
    if (f.metric) return fail(4, "riccati requires a discrete graph file");
    const nodal::Graph g = nodal::to_graph(f);
    if (!nodal::is_tree(g)) return fail(4, "riccati requires a tree (NotATree)");
    const nodal::Potential q = nodal::to_potential(f);
    const int root = root_label > 0 ? root_label - 1 : g.vertex_count() - 1;
    if (root < 0 || root >= g.vertex_count()) return fail(2, "root label out of range");
    const nodal::RootedTree t = nodal::root_tree(g, root);

    nodal::Report report = base_report("riccati " + path);
    report.add_header("root", std::to_string(root + 1));
    if (have_lambda) {
        const nodal::RiccatiSweep s = nodal::riccati_sweep(t, q, lambda);
        report.add_header("lambda", format_double(lambda));
        report.add_header("root_value", format_double(s.root_value));
        report.add_header("n_less", std::to_string(s.n_less));
        report.add_header("valid", std::to_string(s.valid));
        report.set_columns({"vertex", "R", "pole"});
        for (int v = 0; v < g.vertex_count(); ++v)
            report.add_row({std::to_string(v + 1),
                            s.r[v].pole ? "pole" : format_double(s.r[v].value),
                            std::to_string(s.r[v].pole)});
    } else {
        double a = scan_a, b = scan_b;
        if (!have_scan) std::tie(a, b) = nodal::gershgorin_interval(g, q);
        const std::vector<double> eigs = nodal::locate_eigenvalues(t, q, a, b);
        report.set_columns({"n", "lambda", "nu", "flags"});
        for (std::size_t i = 0; i < eigs.size(); ++i) {
            std::string nu = "-";
            std::string flags = "-";
            try {
                nu = std::to_string(nodal::nodal_count_via_riccati(t, q, eigs[i]));
            } catch (const nodal::NonGenericSweep&) {
                flags = "non-generic";
            } catch (const nodal::Error&) {
                flags = "unstable";
            }
            report.add_row({std::to_string(i + 1), format_double(eigs[i]), nu, flags});
        }
    }
    emit(report, format, out_path);
    return 0;
}

int cmd_counterexample(int m, int n_edges, const std::string& format,
                       const std::string& out_path) {
    if (m < 2) return fail(2, "--m must be at least 2");
    if (n_edges < 3) return fail(2, "--N must be at least 3");
    const nodal::MetricGraph star = nodal::build_star_counterexample(m, n_edges);
    const double k_target = m * kPi;
    const std::vector<nodal::MetricEigenpair> pairs =
        nodal::find_eigenvalues(star, k_target * k_target + 1.0);

    nodal::Report report = base_report("counterexample m=" + std::to_string(m) +
                                       " N=" + std::to_string(n_edges));
    report.add_header("k_target", format_double(k_target));
    report.add_header("predicted_index", std::to_string((m - 1) * (n_edges - 1) + 2));
    report.set_columns({"n", "k", "lambda", "nu", "flags"});
    for (const nodal::MetricEigenpair& p : pairs) {
        std::string nu = "-";
        std::string flags = "-";
        if (!p.multiplicity_flag) {
            const nodal::MetricEigenpair filled = nodal::eigenfunction(star, p);
            const nodal::MetricNodalCount d = nodal::metric_nodal_count_detail(star, filled);
            nu = std::to_string(d.domains);
            if (d.vertex_zero || d.zero_edge)
                flags = "non-generic:" + flag_text(false, d.vertex_zero, d.zero_edge);
        } else {
            flags = flag_text(true, false, false);
        }
        report.add_row({std::to_string(p.index), format_double(p.k()), format_double(p.lambda),
                        nu, flags});
    }
    emit(report, format, out_path);
    return 0;
}

nodal::EnsembleConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nodal::Error("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw nodal::ParseError(0, std::string("config: ") + e.what());
    }
    nodal::EnsembleConfig cfg;
    const std::string model = j.value("model", "discrete");
    if (model == "discrete")
        cfg.model = nodal::EnsembleConfig::Model::Discrete;
    else if (model == "metric")
        cfg.model = nodal::EnsembleConfig::Model::Metric;
    else
        throw nodal::ParseError(0, "config: model must be 'discrete' or 'metric'");
    cfg.instance_count = j.value("instances", 10);
    if (j.contains("vertex_range")) {
        cfg.vertex_min = j["vertex_range"][0];
        cfg.vertex_max = j["vertex_range"][1];
    }
    if (j.contains("ell_range")) {
        cfg.ell_min = j["ell_range"][0];
        cfg.ell_max = j["ell_range"][1];
    }
    if (j.contains("potential")) {
        cfg.potential_min = j["potential"][0];
        cfg.potential_max = j["potential"][1];
    }
    if (j.contains("length")) {
        cfg.length_min = j["length"][0];
        cfg.length_max = j["length"][1];
    }
    cfg.eigenvalue_budget = j.value("budget", 10);
    cfg.seed = j.value("seed", default_seed());
    if (cfg.instance_count < 1 || cfg.vertex_min < 2 || cfg.vertex_max < cfg.vertex_min ||
        cfg.ell_min < 0 || cfg.ell_max < cfg.ell_min || cfg.eigenvalue_budget < 1 ||
        cfg.length_min <= 0.0 || cfg.length_max < cfg.length_min ||
        cfg.potential_max < cfg.potential_min)
        throw nodal::ParseError(0, "config: invalid range");
    return cfg;
}

int cmd_ensemble(const std::string& config_path, const std::string& format,
                 const std::string& out_path) {
    const nodal::EnsembleConfig cfg = parse_config(config_path);
    const std::vector<nodal::VerificationRecord> records =
        cfg.model == nodal::EnsembleConfig::Model::Discrete ? nodal::run_discrete_ensemble(cfg)
                                                            : nodal::run_metric_ensemble(cfg);
    nodal::Report report = base_report("ensemble " + config_path);
    report.add_header("seed", std::to_string(cfg.seed));
    report.add_header("instances", std::to_string(cfg.instance_count));
    report.set_columns(
        {"instance", "n", "lambda", "nu", "ell", "generic", "lower_ok", "upper_ok", "flags"});
    int violations = 0;
    int non_generic = 0;
    int failures = 0;
    for (const nodal::VerificationRecord& r : records) {
        if (r.failed) {
            ++failures;
            report.add_row({std::to_string(r.instance), "-", "-", "-", std::to_string(r.ell),
                            "-", "-", "-", "scan-failure"});
            continue;
        }
        if (!r.generic) ++non_generic;
        if (r.generic && (!r.lower_ok || !r.upper_ok)) ++violations;
        report.add_row({std::to_string(r.instance), std::to_string(r.n),
                        format_double(r.lambda), std::to_string(r.nu), std::to_string(r.ell),
                        std::to_string(r.generic), r.generic ? std::to_string(r.lower_ok) : "-",
                        r.generic ? std::to_string(r.upper_ok) : "-", "-"});
    }
    report.add_header("violations", std::to_string(violations));
    report.add_header("non_generic_pairs", std::to_string(non_generic));
    report.add_header("failed_instances", std::to_string(failures));
    emit(report, format, out_path);
    return violations == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral nodal-domain toolkit for discrete and metric graphs"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string format = "table";
    std::string out_path;
    app.add_option("--format", format, "output format: table or json")
        ->check(CLI::IsMember({"table", "json"}));
    app.add_option("--out", out_path, "write the report to a file instead of stdout");
    app.add_option("--gap-tol", nodal::tol::kGapTolScale,
                   "simplicity gap tolerance scale (default 1e-8)");
    app.add_option("--vanish-tol", nodal::tol::kVanishTolScale,
                   "eigenvector vanishing tolerance scale (default 1e-8)");

    auto* sp = app.add_subcommand("spectrum", "eigenvalues and genericity flags");
    std::string sp_file, sp_model;
    double sp_kmax = 5.0;
    int sp_count = 0;
    sp->add_option("file", sp_file, "graph file")->required();
    sp->add_option("--model", sp_model, "assert the file model: discrete or metric")
        ->check(CLI::IsMember({"discrete", "metric"}));
    sp->add_option("--kmax", sp_kmax, "metric: scan ceiling in k (lambda = k^2)");
    sp->add_option("--count", sp_count, "metric: number of lowest eigenvalues instead of --kmax");

    auto* nd = app.add_subcommand("nodal", "nodal counts and bound verdicts");
    std::string nd_file;
    int nd_count = 10;
    nd->add_option("file", nd_file, "graph file")->required();
    nd->add_option("--count", nd_count, "metric: number of lowest eigenpairs (default 10)");

    auto* rc = app.add_subcommand("riccati", "Riccati sweep on a discrete tree");
    std::string rc_file;
    double rc_lambda = 0.0;
    std::vector<double> rc_scan;
    int rc_root = 0;
    rc->add_option("file", rc_file, "graph file (discrete tree)")->required();
    auto* rc_lambda_opt = rc->add_option("--lambda", rc_lambda, "evaluate R_v at this lambda");
    auto* rc_scan_opt =
        rc->add_option("--scan", rc_scan, "locate eigenvalues in [a, b]")->expected(2);
    rc->add_option("--root", rc_root, "root vertex label (1-indexed; default: last vertex)");

    auto* ce = app.add_subcommand("counterexample", "build and audit the star counterexample");
    int ce_m = 0, ce_n = 0;
    ce->add_option("--m", ce_m, "pole order (k = m pi)")->required();
    ce->add_option("--N", ce_n, "number of star edges")->required();

    auto* en = app.add_subcommand("ensemble", "seeded random verification run");
    std::string en_config;
    en->add_option("--config", en_config, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sp->parsed())
            return cmd_spectrum(sp_file, sp_model, sp_kmax, sp_count, format, out_path);
        if (nd->parsed()) return cmd_nodal(nd_file, nd_count, format, out_path);
        if (rc->parsed())
            return cmd_riccati(rc_file, rc_lambda_opt->count() > 0, rc_lambda,
                               rc_scan_opt->count() > 0, rc_scan.size() == 2 ? rc_scan[0] : 0.0,
                               rc_scan.size() == 2 ? rc_scan[1] : 0.0, rc_root, format, out_path);
        if (ce->parsed()) return cmd_counterexample(ce_m, ce_n, format, out_path);
        if (en->parsed()) return cmd_ensemble(en_config, format, out_path);
    } catch (const nodal::ParseError& e) {
        return fail(2, e.what());
    } catch (const nodal::NotATree& e) {
        return fail(4, e.what());
    } catch (const nodal::ConvergenceFailure& e) {
        return fail(3, e.what());
    } catch (const nodal::ScanResolutionFailure& e) {
        return fail(3, e.what());
    } catch (const nodal::BracketingFailure& e) {
        return fail(3, e.what());
    } catch (const nodal::Error& e) {
        return fail(2, e.what());
    }
    return 0;
}
