#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "twoproj/matrix_io.hpp"

using twoproj::cli::Format;
using twoproj::cli::RunConfig;

namespace {

const char* word_grammar = R"(Word grammar:
  word    := term (('+' | '-') term)*
  term    := factor ('*'? factor)*
  factor  := primary ('^' integer)?
  primary := 'P' | 'Q' | 'I' | number | '(' word ')'
  number  := real, imaginary ("2i", "i") or either
Example: "P*Q*P - 0.25*I", "(P+Q-I)^2", "2i*PQ")";

const char* proj_grammar = R"(Projection specs:
  identity | zero
  coords:a:b               coordinates k with (k+1/2)/n in [a, b)
  ideal:c0,c1,...          Bergman ideal [p], ascending complex coefficients
  ideal-quotient:c0,c1,... its complement I - Q_p)";

void add_pair_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--pair", cfg.pair, "directory with P.json and Q.json, or a {\"P\",\"Q\"} file");
    sub->add_option("--P", cfg.p_file, "matrix file for P");
    sub->add_option("--Q", cfg.q_file, "matrix file for Q");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string format = "json";

    CLI::App app{"twoproj: pairs of projections, Halmos forms and truncation laboratories"};
    app.set_version_flag("--version", std::string(twoproj::cli::tool_version));
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI file with option values; unknown keys are rejected");
    app.allow_config_extras(false);
    app.add_option("--tol", cfg.tol, "projection validation tolerance")->capture_default_str();
    app.add_option("--tol-cluster", cfg.tol_cluster, "Halmos eigenvalue clustering threshold")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized runs")->capture_default_str();
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--strict", cfg.strict, "escalate warnings to errors");

    auto* analyze = app.add_subcommand("analyze", "Halmos form, span certificate and principal angles");
    add_pair_options(analyze, cfg);
    analyze->add_flag("--emit-matrices", cfg.emit_matrices, "include the Halmos unitary");

    auto* lattice = app.add_subcommand("lattice", "meet, join and span spectrum");
    add_pair_options(lattice, cfg);
    lattice->add_flag("--emit-matrices", cfg.emit_matrices, "include the meet and join projections");

    auto* dixmier = app.add_subcommand("dixmier", "compare word norms with the 2x2 symbol calculus");
    dixmier->footer(word_grammar);
    add_pair_options(dixmier, cfg);
    dixmier->add_option("--word", cfg.word, "word in P, Q, I");
    dixmier->add_option("--random-words", cfg.random_words, "number of seeded random words");
    dixmier->add_option("--max-degree", cfg.max_degree, "degree bound for random words")->capture_default_str();

    auto* family = app.add_subcommand("family", "truncation table of a built-in pair family (CSV)");
    family->add_option("--family", cfg.family, "family name")->capture_default_str();
    family->add_option("--dims", cfg.dims, "block counts N (matrix size 2N)")->delimiter(',');
    family->add_option("--epsilon", cfg.epsilon, "essential-span threshold")->capture_default_str();
    family->add_option("--p", cfg.p_list, "Schatten exponents")->delimiter(',');

    auto* ideal = app.add_subcommand("ideal", "Bergman ideal commutator profile (CSV)");
    ideal->add_option("--p", cfg.poly_p, "coefficients of p, ascending")->required();
    ideal->add_option("--q", cfg.poly_q, "coefficients of q");
    ideal->add_option("--r", cfg.poly_r, "common factor r");
    ideal->add_option("--dmin", cfg.dmin, "smallest degree")->capture_default_str();
    ideal->add_option("--dmax", cfg.dmax, "largest degree")->capture_default_str();
    ideal->add_option("--dims", cfg.dims, "explicit degree list")->delimiter(',');
    ideal->add_option("--schatten", cfg.p_list, "Schatten exponents")->delimiter(',');

    auto* support = app.add_subcommand("support", "local support of a projection family");
    support->footer(proj_grammar);
    support->add_option("--model", cfg.model, "diagonal-interval, diagonal-circle, toeplitz or bergman")
        ->capture_default_str();
    support->add_option("--proj", cfg.proj, "projection spec")->required();
    support->add_option("--proj2", cfg.proj2, "second projection spec: run the disjoint-support check");
    support->add_option("--tol", cfg.support_tol, "witness threshold")->capture_default_str();
    support->add_option("--grid", cfg.grid, "bump grid points")->capture_default_str();
    support->add_option("--dims", cfg.dims, "matrix dimensions")->delimiter(',');
    support->add_option("--phi", cfg.phi, "symbol expression in z: also report the K1 index");

    auto* winding = app.add_subcommand("winding", "winding number of a symbol on the unit circle");
    winding->add_option("--phi", cfg.phi, "expression in z, or a JSON samples file")->required();
    winding->add_option("--grid", cfg.winding_grid, "sample count for expressions")->capture_default_str();

    bool json_errors = true;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string_view(argv[i]) == "--format" && std::string_view(argv[i + 1]) == "csv") json_errors = false;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        // Usage errors count as validation failures.
        if (!json_errors) return app.exit(e), 4;
        nlohmann::json err = {{"error", {{"kind", "usage"}, {"message", e.what()}, {"exit_code", 4}}}};
        std::cout << err.dump(2) << '\n';
        return 4;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.format_given = app.count("--format") > 0;
    // "--out csv" / "--out json" select a format on stdout.
    if (cfg.out == "csv" || cfg.out == "json") {
        format = cfg.out;
        cfg.format_given = true;
        cfg.out.clear();
    }
    if (!cfg.format_given && (cfg.subcommand == "family" || cfg.subcommand == "ideal")) format = "csv";
    cfg.format = format == "csv" ? Format::csv : Format::json;
    json_errors = cfg.format == Format::json;

    try {
        const std::string text = twoproj::cli::render(twoproj::cli::run(cfg), cfg.format);
        if (cfg.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream os(cfg.out, std::ios::binary);
            if (!os) throw twoproj::FileNotFound("cannot open output file '" + cfg.out + "'");
            os << text;
        }
        return 0;
    } catch (const std::exception& e) {
        if (json_errors)
            std::cout << twoproj::cli::error_object(e).dump(2) << '\n';
        else
            std::cerr << "error: " << e.what() << '\n';
        return twoproj::cli::exit_code_for(e);
    }
}
