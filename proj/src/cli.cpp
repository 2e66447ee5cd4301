#include "nkappa/cli.hpp"
#include "nkappa/errors.hpp"
#include "nkappa/json_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace nk {

namespace {

FunctionHandle resolve_spec(const std::string& spec) {
    if (spec.rfind("catalog:", 0) == 0) {
        const std::string name = spec.substr(8);
        const CatalogEntry* e = catalog_find(name);
        if (!e) throw InvalidSpec("unknown catalog entry '" + name + "'");
        return e->handle;
    }
    std::ifstream in(spec);
    if (!in) throw InvalidSpec("cannot open spec file '" + spec + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_function_spec_text(ss.str());
}

std::vector<Complex> parse_points(const std::vector<std::string>& raw) {
    std::vector<Complex> pts;
    for (const std::string& group : raw) {
        std::stringstream ss(group);
        std::string item;
        while (std::getline(ss, item, ';')) {
            if (item.empty()) continue;
            double re = 0.0, im = 0.0;
            char comma = 0;
            std::stringstream ps(item);
            if (!(ps >> re >> comma >> im) || comma != ',')
                throw InvalidSpec("point '" + item + "' is not of the form re,im");
            pts.push_back(Complex(re, im));
        }
    }
    return pts;
}

void emit_kv_csv(std::ostream& out, const ojson& j, const std::string& prefix) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            emit_kv_csv(out, *it, key);
        } else if (it->is_array()) {
            out << key << ",\"" << it->dump() << "\"\n";
        } else {
            out << key << "," << it->dump() << "\n";
        }
    }
}

struct GlobalOpts {
    double tol = 0.0; // absolute inertia zero band; 0 = norm-scaled default
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    double eta0 = 0.0;
    int max_depth = 20;
    std::string format = "json";
};

std::optional<double> tol_opt(const GlobalOpts& g) {
    if (g.tol > 0.0) return g.tol;
    return std::nullopt;
}

void print_report(std::ostream& out, const GlobalOpts& g, const ojson& j) {
    if (g.format == "csv")
        emit_kv_csv(out, j, "");
    else
        out << dump_json(j) << "\n";
}

int cmd_classify(std::ostream& out, const GlobalOpts& g, const std::string& spec) {
    const FunctionHandle fun = resolve_spec(spec);
    const Classification cls = classify_handle(fun);
    const ojson j = classification_to_json(cls);
    if (g.format == "text") {
        out << "kappa = " << cls.kappa << ", theorem form " << form_name(cls.theorem_form)
            << ", case " << case_name(cls.case_label) << ", Phi(0-) = "
            << (cls.phi_zero_minus.inf ? std::string("inf")
                                       : std::to_string(cls.phi_zero_minus.v))
            << ", witness: "
            << (cls.certificate == WitnessKind::Interior ? "interior" : "boundary")
            << "\n";
    } else {
        print_report(out, g, j);
    }
    return 0;
}

int cmd_pick(std::ostream& out, const GlobalOpts& g, const std::string& spec,
             const std::vector<std::string>& points_raw) {
    const FunctionHandle fun = resolve_spec(spec);
    PointSet pts;
    pts.points = parse_points(points_raw);
    if (pts.points.empty()) throw InvalidSpec("pick requires at least one point");
    const PickMatrix p = pick_matrix(fun, pts);
    const Inertia in = inertia(p, tol_opt(g));
    if (g.format == "csv") {
        out << "m,n,re,im\n";
        for (Eigen::Index m = 0; m < p.entries.rows(); ++m)
            for (Eigen::Index n = 0; n < p.entries.cols(); ++n) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g,%.17g\n",
                              static_cast<long long>(m), static_cast<long long>(n),
                              p.entries(m, n).real(), p.entries(m, n).imag());
                out << buf;
            }
        out << "# n_minus=" << in.n_minus << " n_zero=" << in.n_zero
            << " n_plus=" << in.n_plus << "\n";
        return 0;
    }
    if (g.format == "text") {
        out << "Pick matrix (" << p.entries.rows() << "x" << p.entries.cols() << ")\n";
        for (Eigen::Index m = 0; m < p.entries.rows(); ++m) {
            for (Eigen::Index n = 0; n < p.entries.cols(); ++n)
                out << p.entries(m, n) << (n + 1 < p.entries.cols() ? "  " : "");
            out << "\n";
        }
        out << "inertia: n_minus=" << in.n_minus << " n_zero=" << in.n_zero
            << " n_plus=" << in.n_plus << " (tol " << in.tolerance_used << ")\n";
        return 0;
    }
    print_report(out, g, pick_to_json(p, in));
    return 0;
}

int cmd_witness(std::ostream& out, const GlobalOpts& g, const std::string& spec) {
    const FunctionHandle fun = resolve_spec(spec);
    const Classification cls = classify_handle(fun);
    WitnessResult res;
    if (cls.certificate == WitnessKind::Interior)
        res = witness_interior(theorem_rep_of(fun), cls.kappa);
    else if (fun.kind() == FunctionHandle::Kind::Psi)
        res = witness_boundary(fun, cls.kappa);
    else
        res = witness_boundary(theorem_rep_of(fun), cls.kappa);

    ojson j = ojson::object();
    j["classification"] = classification_to_json(cls);
    j["witness"] = witness_to_json(res);
    if (g.format == "text") {
        out << "kappa = " << cls.kappa << ", n_minus = " << res.inertia_result.n_minus
            << ", eta = " << res.eta;
        if (res.mu) out << ", mu = " << *res.mu;
        out << "\n";
        return 0;
    }
    print_report(out, g, j);
    return 0;
}

int cmd_verify(std::ostream& out, const GlobalOpts& g, const std::string& suite_str,
               const std::string& spec) {
    const std::optional<SuiteId> suite = suite_from_name(suite_str);
    if (!suite)
        throw CLI::ValidationError("--suite",
                                   "unknown suite '" + suite_str +
                                       "' (upper_bound, exactness, monotone, roundtrip, regularize)");
    GenConfig cfg;
    cfg.seed = g.seed;
    cfg.trials = g.trials;
    std::optional<FunctionHandle> fixed;
    if (!spec.empty()) fixed = resolve_spec(spec);
    const Report rep = run_suite(cfg, *suite, fixed ? &*fixed : nullptr);
    if (g.format == "text") {
        out << suite_name(rep.suite) << ": " << rep.passes << "/" << rep.trials
            << " trials passed\n";
        for (const TrialFailure& f : rep.failures)
            out << "  trial " << f.trial << ": " << f.detail << "\n";
    } else {
        print_report(out, g, report_to_json(rep));
    }
    return rep.ok() ? 0 : 1;
}

int cmd_catalog(std::ostream& out, const GlobalOpts& g, const std::string& action,
                const std::string& name) {
    if (action == "list") {
        if (g.format == "text") {
            for (const CatalogEntry& e : catalog())
                out << e.name << "  kappa=" << e.kappa << " case=" << case_name(e.case_label)
                    << " form=" << form_name(e.form) << "  " << e.description << "\n";
            return 0;
        }
        ojson arr = ojson::array();
        for (const CatalogEntry& e : catalog()) {
            ojson j = ojson::object();
            j["name"] = e.name;
            j["kappa"] = e.kappa;
            j["case"] = case_name(e.case_label);
            j["theorem_form"] = form_name(e.form);
            if (e.phi_zero_minus.inf)
                j["phi_zero_minus"] = "inf";
            else
                j["phi_zero_minus"] = e.phi_zero_minus.v;
            j["description"] = e.description;
            arr.push_back(std::move(j));
        }
        print_report(out, g, arr);
        return 0;
    }
    if (action == "show") {
        const CatalogEntry* e = catalog_find(name);
        if (!e) throw InvalidSpec("unknown catalog entry '" + name + "'");
        ojson j = ojson::object();
        j["name"] = e->name;
        j["spec"] = function_to_json(e->handle);
        j["classification"] = classification_to_json(classify_handle(e->handle));
        print_report(out, g, j);
        return 0;
    }
    throw CLI::ValidationError("catalog", "action must be 'list' or 'show'");
}

int cmd_trace(std::ostream& out, const GlobalOpts& g, const std::string& spec) {
    const FunctionHandle fun = resolve_spec(spec);
    const PhiRep rep = theorem_rep_of(fun);
    std::vector<double> lambdas;
    for (const NegPole& p : rep.poles_sorted()) lambdas.push_back(p.lambda);
    if (lambdas.empty())
        throw PreconditionFailed("trace requires a representation with negative poles");
    const double delta = delta_gap(lambdas);
    const double eta_start = g.eta0 > 0.0 ? g.eta0 : delta;
    const FunctionHandle handle = FunctionHandle::phi_from_rep(rep);

    ojson rows = ojson::array();
    for (int j = 0; j <= g.max_depth; ++j) {
        const double eta = eta_start * std::ldexp(1.0, -j);
        PointSet pts;
        for (double lam : lambdas) pts.points.push_back(Complex(lam, eta));
        const PickMatrix p = pick_matrix(handle, pts);
        const Eigen::VectorXd ev = pick_eigenvalues(p.entries);
        ojson row = ojson::object();
        row["eta"] = eta;
        std::vector<double> eigs(ev.data(), ev.data() + ev.size());
        row["eigenvalues"] = eigs;
        rows.push_back(std::move(row));
    }
    if (g.format == "csv") {
        out << "eta";
        for (std::size_t i = 0; i < lambdas.size(); ++i) out << ",eig" << i + 1;
        out << "\n";
        for (const ojson& row : rows) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", row.at("eta").get<double>());
            out << buf;
            for (const ojson& e : row.at("eigenvalues")) {
                std::snprintf(buf, sizeof(buf), "%.17g", e.get<double>());
                out << "," << buf;
            }
            out << "\n";
        }
        return 0;
    }
    ojson j = ojson::object();
    j["rows"] = std::move(rows);
    print_report(out, g, j);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"generalized Nevanlinna function toolkit"};
    app.name("nkappa");
    GlobalOpts g;
    app.add_option("--tol", g.tol, "absolute inertia zero band (default: 1e-8*max(1,|P|))");
    app.add_option("--seed", g.seed, "random seed for verify suites");
    app.add_option("--trials", g.trials, "trial count for verify suites");
    app.add_option("--eta0", g.eta0, "starting eta for trace (default: delta)");
    app.add_option("--max-depth", g.max_depth, "number of eta halvings for trace");
    app.add_option("--format", g.format, "output format: json, csv, text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.require_subcommand(1);

    std::string spec, suite, action, name;
    std::vector<std::string> points_raw;

    CLI::App* c_classify = app.add_subcommand("classify", "classify representation data");
    c_classify->add_option("spec", spec, "FunctionSpec JSON file or catalog:NAME")->required();

    CLI::App* c_pick = app.add_subcommand("pick", "assemble a Pick matrix and its inertia");
    c_pick->add_option("spec", spec, "FunctionSpec JSON file or catalog:NAME")->required();
    c_pick->add_option("--points", points_raw, "evaluation points re,im (';'-separated)")
        ->required();

    CLI::App* c_witness = app.add_subcommand("witness", "search for an exact-kappa witness");
    c_witness->add_option("spec", spec, "FunctionSpec JSON file or catalog:NAME")->required();

    CLI::App* c_verify = app.add_subcommand("verify", "run a property suite");
    c_verify->add_option("--suite", suite, "upper_bound, exactness, monotone, roundtrip, regularize")
        ->required();
    c_verify->add_option("spec", spec, "optional fixed FunctionSpec");

    CLI::App* c_catalog = app.add_subcommand("catalog", "list or show built-in functions");
    c_catalog->add_option("action", action, "list | show")->required();
    c_catalog->add_option("name", name, "entry name for 'show'");

    CLI::App* c_trace = app.add_subcommand("trace", "eigenvalues of the Pick matrix vs eta");
    c_trace->add_option("spec", spec, "FunctionSpec JSON file or catalog:NAME")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_classify->parsed()) return cmd_classify(out, g, spec);
        if (c_pick->parsed()) return cmd_pick(out, g, spec, points_raw);
        if (c_witness->parsed()) return cmd_witness(out, g, spec);
        if (c_verify->parsed()) return cmd_verify(out, g, suite, spec);
        if (c_catalog->parsed()) return cmd_catalog(out, g, action, name);
        if (c_trace->parsed()) return cmd_trace(out, g, spec);
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const MalformedJson& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace nk
