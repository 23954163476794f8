#ifndef POLYSMITH_IO_HPP
#define POLYSMITH_IO_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polysmith/generate.hpp"
#include "polysmith/parse.hpp"
#include "polysmith/reduce.hpp"

namespace polysmith {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// --- file schemas ------------------------------------------------------------

struct FieldSpec {
    bool rational = true;
    std::int64_t prime = 0;  // valid when !rational

    std::string describe() const {
        return rational ? std::string("Q") : "F" + std::to_string(prime);
    }
};

struct ProblemFileData {
    std::vector<std::string> variables;
    FieldSpec field;
    std::vector<std::vector<std::string>> matrix;
    std::optional<std::string> p;
    bool assert_irreducible = false;
    std::optional<std::uint64_t> seed;  // recorded by the generator
};

struct CertificateFileData {
    std::vector<std::vector<std::string>> U, V, S;
    Json meta;
};

inline Json field_to_json(const FieldSpec& f) {
    if (f.rational) return Json("Q");
    Json j;
    j["Fp"] = f.prime;
    return j;
}

inline FieldSpec field_from_json(const Json& j) {
    FieldSpec f;
    if (j.is_string()) {
        if (j.get<std::string>() != "Q") throw Error("unknown field tag: " + j.get<std::string>());
        f.rational = true;
        return f;
    }
    if (j.is_object() && j.contains("Fp")) {
        f.rational = false;
        f.prime = j.at("Fp").get<std::int64_t>();
        return f;
    }
    throw Error("field must be \"Q\" or {\"Fp\": prime}");
}

inline Json problem_to_json(const ProblemFileData& p) {
    Json j;
    j["variables"] = p.variables;
    j["field"] = field_to_json(p.field);
    j["matrix"] = p.matrix;
    if (p.p) j["p"] = *p.p;
    if (p.assert_irreducible) j["assert_irreducible"] = true;
    if (p.seed) {
        Json meta;
        meta["seed"] = *p.seed;
        meta["tool_version"] = kToolVersion;
        j["meta"] = meta;
    }
    return j;
}

inline ProblemFileData problem_from_json(const Json& j) {
    ProblemFileData p;
    if (!j.contains("variables") || !j.contains("field") || !j.contains("matrix"))
        throw Error("problem file needs variables, field and matrix");
    p.variables = j.at("variables").get<std::vector<std::string>>();
    p.field = field_from_json(j.at("field"));
    p.matrix = j.at("matrix").get<std::vector<std::vector<std::string>>>();
    if (p.matrix.empty() || p.matrix.front().empty()) throw Error("matrix must be nonempty");
    for (const auto& row : p.matrix)
        if (row.size() != p.matrix.front().size()) throw Error("matrix must be rectangular");
    if (j.contains("p")) p.p = j.at("p").get<std::string>();
    if (j.contains("assert_irreducible")) p.assert_irreducible = j.at("assert_irreducible").get<bool>();
    if (j.contains("meta") && j.at("meta").contains("seed"))
        p.seed = j.at("meta").at("seed").get<std::uint64_t>();
    return p;
}

inline Json certificate_to_json(const CertificateFileData& c) {
    Json j;
    j["U"] = c.U;
    j["V"] = c.V;
    j["S"] = c.S;
    j["meta"] = c.meta;
    return j;
}

inline CertificateFileData certificate_from_json(const Json& j) {
    CertificateFileData c;
    if (!j.contains("U") || !j.contains("V") || !j.contains("S"))
        throw Error("certificate file needs U, V and S");
    c.U = j.at("U").get<std::vector<std::vector<std::string>>>();
    c.V = j.at("V").get<std::vector<std::vector<std::string>>>();
    c.S = j.at("S").get<std::vector<std::vector<std::string>>>();
    if (j.contains("meta")) c.meta = j.at("meta");
    return c;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SyntaxError(std::string("invalid JSON in ") + path + ": " + e.what(), 0);
    }
    return j;
}

// Atomic write: temp file in the same directory, then rename.
inline void save_json_file(const std::string& path, const Json& j) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write file: " + tmp);
        out << j.dump(2) << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot rename into " + path);
}

// --- typed views of the files -------------------------------------------------

template <class F>
struct TypedProblem {
    F field;
    VarSetPtr vars;
    PolyMat<F> matrix;
    ModulusPtr<F> mod;  // null when the file has no p
    bool assert_irreducible = false;
};

template <class F>
TypedProblem<F> typed_problem(const ProblemFileData& data, const F& field) {
    VarSetPtr vars = VarSet::make(data.variables);
    PolyMat<F> m(field, vars, data.matrix.size(), data.matrix.front().size());
    for (std::size_t i = 0; i < data.matrix.size(); ++i)
        for (std::size_t j = 0; j < data.matrix[i].size(); ++j)
            m.at(i, j) = parse(data.matrix[i][j], vars, field);
    TypedProblem<F> out{field, vars, m, nullptr, data.assert_irreducible};
    if (data.p) out.mod = make_modulus(parse(*data.p, vars, field), data.assert_irreducible);
    return out;
}

template <class F>
std::vector<std::vector<std::string>> render_matrix(const PolyMat<F>& m, const TermOrder& ord) {
    std::vector<std::vector<std::string>> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i].push_back(render(m.at(i, j), ord));
    return out;
}

template <class F>
PolyMat<F> parse_matrix(const std::vector<std::vector<std::string>>& rows, const F& field,
                        const VarSetPtr& vars) {
    if (rows.empty() || rows.front().empty()) throw Error("matrix must be nonempty");
    PolyMat<F> m(field, vars, rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size()) throw Error("matrix must be rectangular");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m.at(i, j) = parse(rows[i][j], vars, field);
    }
    return m;
}

template <class F>
CertificateFileData certificate_file(const EquivCertificate<F>& cert, const TermOrder& ord,
                                     std::uint64_t seed, const SearchConfig& cfg) {
    CertificateFileData out;
    out.U = render_matrix(cert.U, ord);
    out.V = render_matrix(cert.V, ord);
    out.S = render_matrix(cert.S, ord);
    Json meta;
    meta["seed"] = seed;
    Json cfgj;
    cfgj["degree_bound"] = cfg.degree_bound;
    cfgj["max_attempts"] = cfg.max_attempts;
    cfgj["budget_ms"] = cfg.budget_ms;
    meta["config"] = cfgj;
    meta["tool_version"] = kToolVersion;
    out.meta = meta;
    return out;
}

template <class F>
EquivCertificate<F> typed_certificate(const CertificateFileData& data, const F& field,
                                      const VarSetPtr& vars) {
    return EquivCertificate<F>{parse_matrix(data.U, field, vars),
                               parse_matrix(data.V, field, vars),
                               parse_matrix(data.S, field, vars)};
}

// --- analysis report ----------------------------------------------------------

// Deterministic analysis of a problem: determinant / d_i / J_i data, Smith
// form, hypothesis status and the equivalence verdict preview.
template <class F>
Json analysis_report(const TypedProblem<F>& prob, const TermOrder& ord,
                     const GroebnerConfig& gbcfg = GroebnerConfig()) {
    Json rep;
    const auto& m = prob.matrix;
    rep["rows"] = m.rows();
    rep["cols"] = m.cols();
    rep["field"] = prob.field.name();
    rep["order"] = ord.name();

    std::size_t r = rank(m);
    rep["rank"] = r;
    bool square = m.rows() == m.cols();
    if (square) rep["det"] = render(determinant(m), ord);

    if (prob.mod) {
        rep["p"] = render(prob.mod->p, ord);
        rep["p_irreducibility"] =
            prob.mod->status == IrredStatus::certified
                ? "certified mod " + std::to_string(prob.mod->witness_prime)
                : "asserted (no modular witness found)";
    }

    Json minors_json = Json::array();
    bool all_unit = true;
    for (std::size_t i = 1; i <= std::min(m.rows(), m.cols()); ++i) {
        auto repi = minor_report(m, i, ord, gbcfg);
        Json ji;
        ji["i"] = i;
        ji["count"] = repi.minor_list.size();
        ji["d"] = render(repi.d, ord);
        ji["unit_I"] = repi.unit_I;
        ji["unit_J"] = repi.unit_J;
        if (i <= r && !repi.unit_J) all_unit = false;
        minors_json.push_back(ji);
    }
    rep["minors"] = minors_json;

    auto data = prob.mod ? smith_form(m, ord, &prob.mod->p) : smith_form(m, ord);
    Json smith;
    Json phis = Json::array();
    for (const auto& phi : data.invariant_factors) phis.push_back(render(phi, ord));
    smith["invariant_factors"] = phis;
    if (!data.exponents.empty()) smith["exponents"] = data.exponents;
    rep["smith"] = smith;

    if (prob.mod) {
        bool hypothesis = false;
        std::int64_t t = 0;
        if (square && r == m.rows()) {
            auto split = p_power_split(determinant(m), prob.mod->p);
            hypothesis = split.has_value();
            if (split) t = split->exponent;
        } else if (r > 0) {
            auto dr = gcd_many(minors(m, r), ord);
            auto split = p_power_split(dr, prob.mod->p);
            hypothesis = split.has_value();
            if (split) t = split->exponent;
        }
        Json hyp;
        hyp["det_is_p_power"] = hypothesis;
        if (hypothesis) hyp["t"] = t;
        hyp["branch"] = square && r == m.rows() ? "square" : "rectangular";
        rep["hypothesis"] = hyp;

        std::string preview;
        bool already_smith =
            m == smith_matrix(data, prob.field, m.vars(), m.rows(), m.cols());
        if (!hypothesis) {
            preview = "hypothesis violated: not the det = p^t class";
        } else if (!all_unit) {
            preview = "not equivalent to its Smith form";
        } else if (already_smith) {
            preview = "equivalent (trivially: already in Smith form)";
        } else if (t == 0 && square && r == m.rows()) {
            preview = "equivalent (trivially: unimodular)";
        } else {
            preview = "equivalent to its Smith form (certificate constructible)";
        }
        rep["verdict_preview"] = preview;
    }
    return rep;
}

// F-bar report: entries of the reduced matrix and its rank over Abar.
template <class F>
Json bar_report(const TypedProblem<F>& prob, const TermOrder& ord) {
    if (!prob.mod) throw HypothesisViolatedError("bar map needs the modulus p");
    auto fbar = bar_matrix(prob.matrix, prob.mod);
    Json rep;
    rep["p"] = render(prob.mod->p, ord);
    std::vector<std::vector<std::string>> rows(fbar.rows());
    for (std::size_t i = 0; i < fbar.rows(); ++i)
        for (std::size_t j = 0; j < fbar.cols(); ++j)
            rows[i].push_back(render(fbar.at(i, j), ord));
    rep["F_bar"] = rows;
    rep["rank_over_Abar"] = bar_rank(fbar);
    if (prob.mod->status != IrredStatus::certified)
        rep["warning"] = "modulus irreducibility asserted, not certified";
    return rep;
}

// Witness serialization for not-equivalent verdicts.
template <class F>
Json witness_to_json(const NotEquivWitness<F>& w, const TermOrder& ord) {
    Json j;
    j["failing_index"] = w.index;
    Json gens = Json::array();
    for (const auto& g : w.reduced_minors) gens.push_back(render(g, ord));
    j["reduced_minors"] = gens;
    Json basis = Json::array();
    for (const auto& b : w.basis) basis.push_back(render(b, ord));
    j["groebner_basis"] = basis;
    return j;
}

}  // namespace polysmith

#endif
