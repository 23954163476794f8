// Command-line front end: analyze / reduce / verify / generate / bar over
// problem and certificate JSON files with polynomial entries as expression
// strings. Exit codes: 0 ok-verified-certified, 1 verification failed,
// 2 not equivalent, 3 unknown, 64 usage or shape, 65 parse, 66 hypothesis
// violated, 70 budget exceeded.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "polysmith/polysmith.hpp"

namespace {

using namespace polysmith;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitNotEquivalent = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitHypothesis = 66;
constexpr int kExitBudget = 70;

struct GlobalOpts {
    std::string order = "grevlex";
    long long budget_ms = 60000;
    std::uint64_t seed = 0;

    TermOrder term_order() const {
        return TermOrder(order == "lex" ? OrderKind::lex : OrderKind::grevlex);
    }
    GroebnerConfig gb() const {
        GroebnerConfig g;
        g.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(budget_ms);
        return g;
    }
};

template <class Fn>
int dispatch_field(const ProblemFileData& data, Fn&& fn) {
    if (data.field.rational) return fn(RationalField{});
    return fn(PrimeField{data.field.prime});
}

int run_analyze(const std::string& problem_path, const std::string& out_path,
                const GlobalOpts& g) {
    auto data = problem_from_json(load_json_file(problem_path));
    return dispatch_field(data, [&](auto field) {
        auto prob = typed_problem(data, field);
        Json rep = analysis_report(prob, g.term_order(), g.gb());
        std::string text = rep.dump(2);
        if (!out_path.empty()) save_json_file(out_path, rep);
        std::cout << text << '\n';
        return kExitOk;
    });
}

int run_bar(const std::string& problem_path, const GlobalOpts& g) {
    auto data = problem_from_json(load_json_file(problem_path));
    return dispatch_field(data, [&](auto field) {
        auto prob = typed_problem(data, field);
        Json rep = bar_report(prob, g.term_order());
        std::cout << rep.dump(2) << '\n';
        return kExitOk;
    });
}

int run_reduce(const std::string& problem_path, const std::string& out_path,
               std::int64_t degree_bound, int max_attempts, const GlobalOpts& g) {
    auto data = problem_from_json(load_json_file(problem_path));
    return dispatch_field(data, [&](auto field) {
        auto prob = typed_problem(data, field);
        if (!prob.mod)
            throw HypothesisViolatedError("problem file has no modulus p; reduce needs one");
        SearchConfig cfg;
        cfg.degree_bound = degree_bound;
        cfg.seed = g.seed;
        cfg.budget_ms = g.budget_ms;
        cfg.max_attempts = max_attempts;
        auto ord = g.term_order();
        auto out = reduce_to_smith(prob.matrix, prob.mod, cfg, ord);

        Json rep;
        rep["verdict"] = verdict_name(out.verdict);
        if (prob.mod->status != IrredStatus::certified)
            rep["warning"] = "modulus irreducibility asserted, not certified";
        switch (out.verdict) {
            case Verdict::certified: {
                auto file = certificate_file(*out.cert, ord, g.seed, cfg);
                std::string path = out_path.empty() ? problem_path + ".cert.json" : out_path;
                save_json_file(path, certificate_to_json(file));
                rep["certificate"] = path;
                std::cout << rep.dump(2) << '\n';
                return kExitOk;
            }
            case Verdict::not_equivalent:
                rep["witness"] = witness_to_json(*out.witness, ord);
                std::cout << rep.dump(2) << '\n';
                return kExitNotEquivalent;
            default:
                rep["stage"] = out.stage;
                rep["diagnostics"] = out.stages;
                std::cout << rep.dump(2) << '\n';
                return kExitUnknown;
        }
    });
}

int run_verify(const std::string& problem_path, const std::string& cert_path,
               const GlobalOpts& g) {
    auto data = problem_from_json(load_json_file(problem_path));
    auto cert_data = certificate_from_json(load_json_file(cert_path));
    return dispatch_field(data, [&](auto field) {
        using F = decltype(field);
        auto prob = typed_problem(data, field);
        EquivCertificate<F> cert = typed_certificate(cert_data, field, prob.vars);
        auto rep = verify_certificate_report(prob.matrix, cert);
        Json j;
        j["verified"] = rep.ok;
        if (!rep.ok) j["reason"] = rep.reason;
        std::cout << j.dump(2) << '\n';
        return rep.ok ? kExitOk : kExitVerifyFailed;
    });
}

int run_generate(std::size_t nvars, const std::string& size, const std::string& p_expr,
                 const std::string& exps, int factors, std::int64_t deg,
                 const std::string& out_path, const std::string& cert_out, bool rational,
                 std::int64_t prime, const GlobalOpts& g) {
    if (nvars == 0) throw Error("--vars must be at least 1");
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));

    GenerateSpec spec;
    spec.factors = factors;
    spec.degree = deg;
    spec.seed = g.seed;
    {
        auto comma = size.find(',');
        spec.rows = std::stoul(size.substr(0, comma));
        spec.cols = comma == std::string::npos ? spec.rows : std::stoul(size.substr(comma + 1));
    }
    for (std::size_t pos = 0; pos < exps.size();) {
        auto comma = exps.find(',', pos);
        if (comma == std::string::npos) comma = exps.size();
        spec.exponents.push_back(std::stoll(exps.substr(pos, comma - pos)));
        pos = comma + 1;
    }

    FieldSpec fs;
    fs.rational = rational;
    fs.prime = prime;
    ProblemFileData shell;
    shell.field = fs;
    return dispatch_field(shell, [&](auto field) {
        auto vars = VarSet::make(names);
        auto mod = make_modulus(parse(p_expr, vars, field));
        auto inst = generate_instance(field, vars, mod, spec);
        auto ord = g.term_order();

        ProblemFileData out;
        out.variables = names;
        out.field = fs;
        out.matrix = render_matrix(inst.matrix, ord);
        out.p = render(mod->p, ord);
        out.seed = g.seed;
        save_json_file(out_path, problem_to_json(out));

        SearchConfig cfg;
        cfg.seed = g.seed;
        auto cert = certificate_file(inst.cert, ord, g.seed, cfg);
        std::string cpath = cert_out.empty() ? out_path + ".cert.json" : cert_out;
        save_json_file(cpath, certificate_to_json(cert));

        Json j;
        j["problem"] = out_path;
        j["certificate"] = cpath;
        j["seed"] = g.seed;
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smith forms and equivalence certificates for multivariate polynomial matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--order", g.order, "term order: grevlex or lex")
        ->check(CLI::IsMember({"grevlex", "lex"}));
    app.add_option("--budget-ms", g.budget_ms, "wall-clock budget in milliseconds");
    app.add_option("--seed", g.seed, "deterministic randomness seed");

    std::string problem_path, cert_path, out_path;

    auto* analyze = app.add_subcommand("analyze", "report d_i, J_i conditions and Smith data");
    analyze->add_option("problem", problem_path, "problem JSON file")->required();
    analyze->add_option("-o,--out", out_path, "also write the report to a file");

    std::int64_t degree_bound = 3;
    int max_attempts = 200;
    auto* reduce = app.add_subcommand("reduce", "construct or refute an equivalence certificate");
    reduce->add_option("problem", problem_path, "problem JSON file")->required();
    reduce->add_option("-o,--out", out_path, "certificate output path");
    reduce->add_option("--degree-bound", degree_bound, "ansatz degree bound for searches");
    reduce->add_option("--max-attempts", max_attempts, "candidate cap per search");

    auto* verify = app.add_subcommand("verify", "check U*F*V = S with U, V unimodular");
    verify->add_option("problem", problem_path, "problem JSON file")->required();
    verify->add_option("certificate", cert_path, "certificate JSON file")->required();

    std::size_t nvars = 2;
    std::string size = "2", p_expr = "x1", exps = "0,1", cert_out;
    int factors = 3;
    std::int64_t deg = 2, prime = 0;
    auto* generate = app.add_subcommand("generate", "emit a random instance with ground truth");
    generate->add_option("--vars", nvars, "number of variables");
    generate->add_option("--size", size, "l or l,m");
    generate->add_option("--p", p_expr, "modulus expression, univariate in x1");
    generate->add_option("--exps", exps, "nondecreasing exponent ladder s1,s2,...");
    generate->add_option("--factors", factors, "elementary factors per side");
    generate->add_option("--deg", deg, "degree cap for elementary entries");
    generate->add_option("--fp", prime, "use the prime field F_p instead of Q");
    generate->add_option("-o,--out", out_path, "problem output path")->required();
    generate->add_option("--cert-out", cert_out, "ground-truth certificate output path");

    auto* bar = app.add_subcommand("bar", "print the image of F over (K[x1]/<p>)[x2..xn]");
    bar->add_option("problem", problem_path, "problem JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    }

    try {
        if (app.got_subcommand(analyze)) return run_analyze(problem_path, out_path, g);
        if (app.got_subcommand(reduce))
            return run_reduce(problem_path, out_path, degree_bound, max_attempts, g);
        if (app.got_subcommand(verify)) return run_verify(problem_path, cert_path, g);
        if (app.got_subcommand(generate))
            return run_generate(nvars, size, p_expr, exps, factors, deg, out_path, cert_out,
                                prime == 0, prime, g);
        if (app.got_subcommand(bar)) return run_bar(problem_path, g);
    } catch (const BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const HypothesisViolatedError& e) {
        std::cerr << "hypothesis violated: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const ModulusError& e) {
        std::cerr << "invalid modulus: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const NotSquarefreeError& e) {
        std::cerr << "invalid modulus: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const ConstantPolynomialError& e) {
        std::cerr << "invalid modulus: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const ShapeMismatchError& e) {
        std::cerr << "shape mismatch: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const UnknownVariableError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    return kExitUsage;
}
