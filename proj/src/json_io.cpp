#include "nkappa/json_io.hpp"
#include "nkappa/errors.hpp"

#include <cmath>
#include <cstdio>

namespace nk {

namespace {

void locate(const std::string& text, std::size_t byte, std::size_t& line,
            std::size_t& col) {
    line = 1;
    col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

double num_field(const ojson& j, const char* key, std::optional<double> dflt = {}) {
    if (!j.contains(key)) {
        if (dflt) return *dflt;
        throw InvalidSpec(std::string("missing numeric field '") + key + "'");
    }
    const ojson& v = j.at(key);
    if (!v.is_number())
        throw InvalidSpec(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

} // namespace

ojson parse_json_text(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        locate(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
        throw MalformedJson("malformed JSON at line " + std::to_string(line) +
                            ", column " + std::to_string(col) + ": " + e.what());
    }
}

StieltjesMeasure measure_from_json(const ojson& j) {
    if (!j.is_object()) throw InvalidSpec("measure must be a JSON object");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        for (const ojson& a : j.at("atoms"))
            atoms.push_back({num_field(a, "t"), num_field(a, "w")});
    }
    std::vector<DensityPiece> pieces;
    if (j.contains("pieces")) {
        for (const ojson& pj : j.at("pieces")) {
            DensityPiece p;
            p.lo = num_field(pj, "lo");
            if (pj.contains("hi") && pj.at("hi").is_string()) {
                if (pj.at("hi").get<std::string>() != "inf")
                    throw InvalidSpec("piece hi must be a number or \"inf\"");
                p.hi = kInf;
            } else {
                p.hi = num_field(pj, "hi");
            }
            p.scale = num_field(pj, "scale");
            p.exp_lo = num_field(pj, "exp_lo");
            if (pj.contains("exp_inf")) {
                p.exp_inf = num_field(pj, "exp_inf");
                p.has_tail = true;
            } else if (p.hi == kInf) {
                throw InvalidSpec("unbounded piece requires exp_inf");
            }
            p.anchor = num_field(pj, "anchor", p.lo);
            p.t_power = static_cast<int>(num_field(pj, "t_power", 0.0));
            if (pj.contains("divisors"))
                for (const ojson& d : pj.at("divisors"))
                    p.divisors.push_back(d.get<double>());
            pieces.push_back(std::move(p));
        }
    }
    return StieltjesMeasure(std::move(atoms), std::move(pieces));
}

FunctionHandle function_from_json(const ojson& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw InvalidSpec("function spec requires a 'kind' field");
    const std::string kind = j.at("kind").get<std::string>();

    if (kind == "catalog") {
        if (!j.contains("name"))
            throw InvalidSpec("catalog spec requires a 'name' field");
        const std::string name = j.at("name").get<std::string>();
        const CatalogEntry* e = catalog_find(name);
        if (!e) throw InvalidSpec("unknown catalog entry '" + name + "'");
        return e->handle;
    }
    if (kind == "phi_rep") {
        PhiRep rep;
        rep.b = num_field(j, "b", 0.0);
        rep.a = num_field(j, "a", 0.0);
        if (j.contains("neg_poles"))
            for (const ojson& p : j.at("neg_poles"))
                rep.poles.push_back({num_field(p, "lambda"), num_field(p, "sigma")});
        if (j.contains("measure")) rep.measure = measure_from_json(j.at("measure"));
        return FunctionHandle::phi_from_rep(std::move(rep));
    }
    if (kind == "kappa_A" || kind == "kappa_B" || kind == "kappa_C") {
        KappaForm f;
        f.kase = (kind == "kappa_A")   ? KappaCase::A
                 : (kind == "kappa_B") ? KappaCase::B
                                       : KappaCase::C;
        f.s0 = num_field(j, "s0", 0.0);
        if (f.kase != KappaCase::A) {
            f.s1 = num_field(j, "s1", 0.0);
            f.s2 = num_field(j, "s2", 0.0);
        }
        if (j.contains("poles"))
            for (const ojson& p : j.at("poles"))
                f.poles.push_back({num_field(p, "alpha"), num_field(p, "gamma")});
        const char* mkey = (f.kase == KappaCase::C) ? "sigma" : "nu";
        if (j.contains(mkey)) f.mes = measure_from_json(j.at(mkey));
        return FunctionHandle::from_form(std::move(f));
    }
    throw InvalidSpec("unknown function kind '" + kind + "'");
}

FunctionHandle load_function_spec_text(const std::string& text) {
    return function_from_json(parse_json_text(text));
}

ojson measure_to_json(const StieltjesMeasure& m) {
    ojson j = ojson::object();
    ojson atoms = ojson::array();
    for (const Atom& a : m.atoms()) atoms.push_back(ojson{{"t", a.t}, {"w", a.w}});
    j["atoms"] = std::move(atoms);
    ojson pieces = ojson::array();
    for (const DensityPiece& p : m.pieces()) {
        ojson pj = ojson::object();
        pj["lo"] = p.lo;
        if (p.unbounded())
            pj["hi"] = "inf";
        else
            pj["hi"] = p.hi;
        pj["scale"] = p.scale;
        pj["exp_lo"] = p.exp_lo;
        if (p.has_tail) pj["exp_inf"] = p.exp_inf;
        if (p.anchor != p.lo) pj["anchor"] = p.anchor;
        if (p.t_power != 0) pj["t_power"] = p.t_power;
        if (!p.divisors.empty()) pj["divisors"] = p.divisors;
        pieces.push_back(std::move(pj));
    }
    j["pieces"] = std::move(pieces);
    return j;
}

ojson function_to_json(const FunctionHandle& h) {
    ojson j = ojson::object();
    switch (h.kind()) {
    case FunctionHandle::Kind::Psi:
        j["kind"] = "catalog";
        j["name"] = "psi";
        return j;
    case FunctionHandle::Kind::PhiOverZ: {
        const PhiRep& r = *h.rep();
        j["kind"] = "phi_rep";
        j["b"] = r.b;
        j["a"] = r.a;
        ojson poles = ojson::array();
        for (const NegPole& p : r.poles)
            poles.push_back(ojson{{"lambda", p.lambda}, {"sigma", p.sigma}});
        j["neg_poles"] = std::move(poles);
        j["measure"] = measure_to_json(r.measure);
        return j;
    }
    case FunctionHandle::Kind::Kappa: {
        const KappaForm& f = *h.form();
        j["kind"] = (f.kase == KappaCase::A)   ? "kappa_A"
                    : (f.kase == KappaCase::B) ? "kappa_B"
                                               : "kappa_C";
        j["s0"] = f.s0;
        if (f.kase != KappaCase::A) {
            j["s1"] = f.s1;
            j["s2"] = f.s2;
        }
        ojson poles = ojson::array();
        for (const FormPole& p : f.poles)
            poles.push_back(ojson{{"alpha", p.alpha}, {"gamma", p.gamma}});
        j["poles"] = std::move(poles);
        j[(f.kase == KappaCase::C) ? "sigma" : "nu"] = measure_to_json(f.mes);
        return j;
    }
    case FunctionHandle::Kind::PhiDirect:
        throw DomainError("direct Phi handles have no external spec form");
    }
    return j;
}

ojson points_to_json(const PointSet& pts) {
    ojson arr = ojson::array();
    for (const Complex& z : pts.points)
        arr.push_back(ojson{{"re", z.real()}, {"im", z.imag()}});
    return arr;
}

ojson inertia_to_json(const Inertia& in) {
    return ojson{{"n_minus", in.n_minus},
                 {"n_zero", in.n_zero},
                 {"n_plus", in.n_plus},
                 {"tolerance", in.tolerance_used}};
}

const char* case_name(KappaCase c) {
    switch (c) {
    case KappaCase::A: return "A";
    case KappaCase::B: return "B";
    case KappaCase::C: return "C";
    }
    return "?";
}

const char* form_name(TheoremForm f) {
    return f == TheoremForm::Form1 ? "1" : "2";
}

ojson classification_to_json(const Classification& c) {
    ojson j = ojson::object();
    j["kappa"] = c.kappa;
    j["theorem_form"] = form_name(c.theorem_form);
    j["case"] = case_name(c.case_label);
    if (c.phi_zero_minus.inf)
        j["phi_zero_minus"] = "inf";
    else
        j["phi_zero_minus"] = c.phi_zero_minus.v;
    j["certificate"] = ojson{
        {"witness", c.certificate == WitnessKind::Interior ? "interior" : "boundary"}};
    return j;
}

ojson witness_to_json(const WitnessResult& w) {
    ojson j = ojson::object();
    j["points"] = points_to_json(w.points);
    j["eta"] = w.eta;
    if (w.mu) j["mu"] = *w.mu;
    j["inertia"] = inertia_to_json(w.inertia_result);
    j["rho"] = w.rho;
    if (w.scaled_form) j["scaled_form"] = *w.scaled_form;
    if (w.mu_check) j["mu_check"] = *w.mu_check;
    return j;
}

ojson pick_to_json(const PickMatrix& p, const Inertia& in) {
    ojson j = ojson::object();
    j["points"] = points_to_json(p.points);
    ojson rows = ojson::array();
    for (Eigen::Index m = 0; m < p.entries.rows(); ++m) {
        ojson row = ojson::array();
        for (Eigen::Index n = 0; n < p.entries.cols(); ++n)
            row.push_back(ojson{{"re", p.entries(m, n).real()},
                                {"im", p.entries(m, n).imag()}});
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    j["inertia"] = inertia_to_json(in);
    return j;
}

ojson report_to_json(const Report& r) {
    ojson j = ojson::object();
    j["suite"] = suite_name(r.suite);
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["passes"] = r.passes;
    ojson fails = ojson::array();
    for (const TrialFailure& f : r.failures) {
        ojson fj = ojson::object();
        fj["trial"] = f.trial;
        fj["detail"] = f.detail;
        fj["replay"] = f.replay.empty() ? ojson() : parse_json_text(f.replay);
        fails.push_back(std::move(fj));
    }
    j["failures"] = std::move(fails);
    return j;
}

namespace {

void escape_into(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

void write_number(const ojson& j, std::string& out) {
    if (j.is_number_integer()) {
        out += std::to_string(j.get<long long>());
    } else if (j.is_number_unsigned()) {
        out += std::to_string(j.get<unsigned long long>());
    } else {
        const double v = j.get<double>();
        if (!std::isfinite(v))
            throw InternalInconsistency("non-finite float in JSON output");
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += buf;
    }
}

void write_value(const ojson& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
    case ojson::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += pad_in;
            escape_into(it.key(), out);
            out += ": ";
            write_value(it.value(), out, indent, depth + 1);
            if (i + 1 < j.size()) out += ',';
            out += '\n';
        }
        out += pad + "}";
        return;
    }
    case ojson::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += pad_in;
            write_value(j[i], out, indent, depth + 1);
            if (i + 1 < j.size()) out += ',';
            out += '\n';
        }
        out += pad + "]";
        return;
    }
    case ojson::value_t::string:
        escape_into(j.get<std::string>(), out);
        return;
    case ojson::value_t::boolean:
        out += j.get<bool>() ? "true" : "false";
        return;
    case ojson::value_t::null:
        out += "null";
        return;
    default:
        write_number(j, out);
        return;
    }
}

} // namespace

std::string dump_json(const ojson& j, int indent) {
    std::string out;
    write_value(j, out, indent, 0);
    return out;
}

} // namespace nk
