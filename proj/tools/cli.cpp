#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "twoproj/dixmier.hpp"
#include "twoproj/lattice.hpp"
#include "twoproj/locality.hpp"
#include "twoproj/matrix_io.hpp"
#include "twoproj/random.hpp"
#include "twoproj/spectral.hpp"
#include "twoproj/trunclab.hpp"

namespace twoproj::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const char* format_name(Format f) { return f == Format::json ? "json" : "csv"; }

ProjectionPair load_pair(const RunConfig& cfg) {
    CMatrix p, q;
    if (!cfg.pair.empty()) {
        const fs::path path(cfg.pair);
        if (fs::is_directory(path)) {
            p = read_matrix_file(path / "P.json");
            q = read_matrix_file(path / "Q.json");
        } else {
            const json j = read_json_file(path);
            if (!j.is_object() || !j.contains("P") || !j.contains("Q"))
                throw ParseError("pair file must be an object with \"P\" and \"Q\" matrices", 0);
            p = matrix_from_json(j.at("P"));
            q = matrix_from_json(j.at("Q"));
        }
    } else if (!cfg.p_file.empty() && !cfg.q_file.empty()) {
        p = read_matrix_file(cfg.p_file);
        q = read_matrix_file(cfg.q_file);
    } else {
        throw InvalidInput("a projection pair is required: --pair <dir|file> or --P <file> --Q <file>");
    }
    return projection_pair(std::move(p), std::move(q), cfg.tol);
}

json doubles(const std::vector<double>& v) { return json(v); }

Report make_report(const RunConfig& cfg) {
    Report r;
    r.header = {{"tool", tool_name},
                {"version", tool_version},
                {"subcommand", cfg.subcommand},
                {"config", cfg.effective()},
                {"timestamp", timestamp()}};
    return r;
}

void require_json(const RunConfig& cfg) {
    if (cfg.format == Format::csv)
        throw InvalidInput("csv output is not available for '" + cfg.subcommand + "'; use --format json");
}

SymbolWord random_word(CounterRng& rng, int max_degree) {
    SymbolWord w;
    const auto terms = rng.uniform_int(1, 4);
    for (std::int64_t t = 0; t < terms; ++t) {
        const auto len = rng.uniform_int(0, max_degree);
        std::string letters;
        for (std::int64_t i = 0; i < len; ++i) letters += rng.uniform() < 0.5 ? 'P' : 'Q';
        w.add_term(rng.complex_normal(), letters);
    }
    return w;
}

json report_json(const IsomorphismReport& r) {
    return {{"matrix_norm", r.matrix_norm},
            {"symbol_sup_norm", r.symbol_sup_norm},
            {"rel_error", r.rel_error},
            {"samples", doubles(r.samples)}};
}

json profile_json(const CompactnessProfile& p) {
    return {{"verdict", to_string(p.verdict)},
            {"dims", p.dims},
            {"growing_index", p.growing_index},
            {"growing", doubles(p.growing)},
            {"growing_slope", p.growing_slope},
            {"tail_monotone", p.tail_monotone}};
}

std::vector<Index> default_dims(const RunConfig& cfg, std::vector<Index> fallback) {
    return cfg.dims.empty() ? std::move(fallback) : cfg.dims;
}

SigmaModel model_from_name(const std::string& name, Index grid) {
    if (name == "diagonal-interval") return SigmaModel::diagonal_interval(grid);
    if (name == "diagonal-circle") return SigmaModel::diagonal_circle(grid);
    if (name == "toeplitz") return SigmaModel::toeplitz(grid);
    if (name == "bergman") return SigmaModel::bergman_disk(grid);
    throw InvalidInput("unknown model '" + name +
                       "' (expected diagonal-interval, diagonal-circle, toeplitz or bergman)");
}

double parse_fraction(const std::string& text, const std::string& spec) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("bad number '" + text + "' in projection spec '" + spec + "'", 0);
    return v;
}

// Projection family from a textual spec:
//   identity | zero | coords:a:b | ideal:<coeffs> | ideal-quotient:<coeffs>
TruncFamily projection_family(const std::string& spec, const std::vector<Index>& dims) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "identity")
        return TruncFamily("identity", dims, [](Index n) -> CMatrix { return CMatrix::Identity(n, n); },
                           Embedding::nested);
    if (kind == "zero")
        return TruncFamily("zero", dims, [](Index n) -> CMatrix { return CMatrix::Zero(n, n); },
                           Embedding::nested);
    if (kind == "coords") {
        const auto mid = arg.find(':');
        if (mid == std::string::npos) throw ParseError("coords spec must be coords:a:b", spec.size());
        const double a = parse_fraction(arg.substr(0, mid), spec);
        const double b = parse_fraction(arg.substr(mid + 1), spec);
        return TruncFamily(
            spec, dims,
            [a, b](Index n) -> CMatrix {
                CMatrix m = CMatrix::Zero(n, n);
                for (Index k = 0; k < n; ++k) {
                    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
                    if (t >= a && t < b) m(k, k) = 1.0;
                }
                return m;
            },
            Embedding::retruncated);
    }
    if (kind == "ideal" || kind == "ideal-quotient") {
        std::vector<Index> degrees;
        for (Index d : dims) degrees.push_back(d - 1);
        return ideal_family(parse_polynomial(arg), degrees, kind == "ideal-quotient");
    }
    throw InvalidInput("unknown projection spec '" + spec +
                       "' (expected identity, zero, coords:a:b, ideal:<coeffs> or ideal-quotient:<coeffs>)");
}

json support_json(const LocalSupport& s, const SigmaModel& sigma) {
    std::vector<Index> flagged;
    for (std::size_t i = 0; i < s.flagged.size(); ++i)
        if (s.flagged[i]) flagged.push_back(static_cast<Index>(i));
    return {{"flagged", flagged},
            {"count", s.count()},
            {"measure", s.measure(sigma)},
            {"witness", doubles(s.witness)},
            {"witness_prev", doubles(s.witness_prev)},
            {"warnings", s.warnings}};
}

bool looks_like_file(const std::string& s) {
    return s.ends_with(".json") || s.find('/') != std::string::npos || fs::exists(s);
}

std::vector<Complex> read_samples(const fs::path& path) {
    const json j = read_json_file(path);
    if (!j.is_array()) throw ParseError("samples file must hold a JSON array", 0);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& v = j[i];
        if (v.is_number())
            out.emplace_back(v.get<double>(), 0.0);
        else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            out.emplace_back(v[0].get<double>(), v[1].get<double>());
        else if (v.is_object() && v.contains("re"))
            out.emplace_back(v.at("re").get<double>(), v.value("im", 0.0));
        else
            throw ParseError("sample " + std::to_string(i) + " is not a number, [re, im] or {re, im}", i);
    }
    return out;
}

}  // namespace

json RunConfig::effective() const {
    json j = {{"format", format_name(format)}, {"out", out},   {"seed", seed},
              {"strict", strict},              {"tol", tol}, {"tol_cluster", tol_cluster}};
    const Tolerances& t = default_tolerances();
    j["spectral"] = {{"hermitian", t.hermitian}, {"spectral_cut", t.spectral_cut}, {"psd", t.psd},
                     {"span_check", t.span_check}, {"containment", t.containment}};
    if (subcommand == "analyze" || subcommand == "lattice" || subcommand == "dixmier") {
        j["pair"] = pair;
        j["P"] = p_file;
        j["Q"] = q_file;
        j["emit_matrices"] = emit_matrices;
    }
    if (subcommand == "dixmier") {
        j["word"] = word;
        j["random_words"] = random_words;
        j["max_degree"] = max_degree;
    }
    if (subcommand == "family") {
        j["family"] = family;
        j["dims"] = dims;
        j["epsilon"] = epsilon;
        j["p"] = p_list;
    }
    if (subcommand == "ideal") {
        j["p"] = poly_p;
        j["q"] = poly_q;
        j["r"] = poly_r;
        j["dims"] = dims;
        j["dmin"] = dmin;
        j["dmax"] = dmax;
        j["schatten"] = p_list;
    }
    if (subcommand == "support") {
        j["model"] = model;
        j["proj"] = proj;
        j["proj2"] = proj2;
        j["support_tol"] = support_tol;
        j["grid"] = grid;
        j["dims"] = dims;
        j["phi"] = phi;
    }
    if (subcommand == "winding") {
        j["phi"] = phi;
        j["grid"] = winding_grid;
    }
    return j;
}

Report run_analyze(const RunConfig& cfg) {
    require_json(cfg);
    const ProjectionPair pair = load_pair(cfg);
    const HalmosForm form = decompose(pair, cfg.tol_cluster);
    const SpanCertificate cert = span_certificate(pair, form);
    const PrincipalAngles angles = principal_angles(pair);
    Report r = make_report(cfg);
    r.payload = {{"dim", pair.dim()},
                 {"d", {form.d0, form.d1, form.d2, form.d3}},
                 {"dg", form.dg},
                 {"s", doubles(form.s)},
                 {"gap_to_one", cert.gap_to_one},
                 {"epsilon", cert.epsilon},
                 {"window_hi", cert.window_hi},
                 {"closed", cert.closed},
                 {"rank_R", cert.rank_R},
                 {"rank_P", projection_rank(pair.P)},
                 {"rank_Q", projection_rank(pair.Q)},
                 {"meet_rank", form.d1},
                 {"join_rank", cert.rank_R},
                 {"angles", doubles(angles.angles)},
                 {"zero_angles", angles.zero_count},
                 {"right_angles", angles.right_count}};
    if (cfg.emit_matrices) r.payload["halmos"] = to_json(form);
    return r;
}

Report run_lattice(const RunConfig& cfg) {
    require_json(cfg);
    const ProjectionPair pair = load_pair(cfg);
    const HalmosForm form = decompose(pair, cfg.tol_cluster);
    const CMatrix m = meet(form);
    const CMatrix j = join(pair, std::nullopt, cfg.tol_cluster);
    const CMatrix alg = span_projection_algebraic(pair, std::nullopt, cfg.tol_cluster);
    Report r = make_report(cfg);
    r.payload = {{"meet_rank", projection_rank(m)},
                 {"join_rank", projection_rank(j)},
                 {"gap_to_one", span_certificate(pair, form).gap_to_one},
                 {"s_spectrum", doubles(form.s)},
                 {"algebraic_span_deviation", max_abs(alg - j)}};
    if (cfg.emit_matrices) {
        r.payload["meet"] = matrix_to_json(m);
        r.payload["join"] = matrix_to_json(j);
    }
    return r;
}

Report run_dixmier(const RunConfig& cfg) {
    require_json(cfg);
    const ProjectionPair pair = load_pair(cfg);
    const HalmosForm form = decompose(pair, cfg.tol_cluster);
    Report r = make_report(cfg);
    r.payload["generic_position"] = check_generic_position(form);
    if (cfg.word.empty() && cfg.random_words <= 0)
        throw InvalidInput("dixmier needs --word or --random-words");
    if (!cfg.word.empty()) {
        const SymbolWord w = SymbolWord::parse(cfg.word);
        r.payload["word"] = w.to_string();
        const json rep = report_json(verify_isomorphism(w, pair, cfg.tol_cluster));
        for (auto it = rep.begin(); it != rep.end(); ++it) r.payload[it.key()] = it.value();
    }
    if (cfg.random_words > 0) {
        CounterRng rng(cfg.seed, 0xD1C5);
        json rows = json::array();
        double worst = 0.0;
        for (int i = 0; i < cfg.random_words; ++i) {
            const SymbolWord w = random_word(rng, cfg.max_degree);
            const IsomorphismReport rep = verify_isomorphism(w, pair, cfg.tol_cluster);
            json row = report_json(rep);
            row.erase("samples");
            row["word"] = w.to_string();
            rows.push_back(row);
            worst = std::max(worst, rep.rel_error);
        }
        r.payload["random"] = rows;
        r.payload["max_rel_error"] = worst;
    }
    return r;
}

Report run_family(const RunConfig& cfg) {
    const std::vector<Index> blocks = default_dims(cfg, {50, 100, 200});
    const PairFamily fam = builtin_pair_family(cfg.family, blocks);
    const auto rows = family_table(fam, cfg.epsilon, cfg.p_list, cfg.tol_cluster);
    Report r = make_report(cfg);

    std::ostringstream csv;
    csv << "dim,comm_norm";
    for (double p : cfg.p_list) csv << ",schatten_" << num(p);
    csv << ",gap_to_one,rank_join,rank_ess_span,delta\n";
    json jrows = json::array();
    for (const auto& row : rows) {
        csv << row.dim << ',' << num(row.comm_norm);
        for (double s : row.schatten) csv << ',' << num(s);
        csv << ',' << num(row.gap_to_one) << ',' << row.rank_join << ',' << row.rank_ess_span << ','
            << row.delta << '\n';
        jrows.push_back({{"dim", row.dim},
                         {"comm_norm", row.comm_norm},
                         {"schatten", doubles(row.schatten)},
                         {"gap_to_one", row.gap_to_one},
                         {"rank_join", row.rank_join},
                         {"rank_ess_span", row.rank_ess_span},
                         {"delta", row.delta}});
    }
    r.csv = csv.str();
    const EssentialSpanReport ess = essential_span(fam, cfg.epsilon, cfg.tol_cluster);
    r.payload = {{"rows", jrows}, {"delta_trend", to_string(ess.delta_trend)}, {"warnings", ess.warnings}};
    if (blocks.size() >= 4) r.payload["commutator"] = profile_json(compactness_indicator(commutator_family(fam.P, fam.Q)));
    return r;
}

Report run_ideal(const RunConfig& cfg) {
    if (cfg.poly_p.empty()) throw InvalidInput("ideal needs --p <coeffs>");
    std::vector<Index> d_list = cfg.dims;
    if (d_list.empty()) {
        if (cfg.dmin < 1 || cfg.dmax < cfg.dmin) throw InvalidInput("ideal: need 1 <= dmin <= dmax");
        for (Index d = cfg.dmin; d < cfg.dmax; d *= 2) d_list.push_back(d);
        d_list.push_back(cfg.dmax);
    }
    const Polynomial p = parse_polynomial(cfg.poly_p);
    const std::optional<Polynomial> q =
        cfg.poly_q.empty() ? std::nullopt : std::optional(parse_polynomial(cfg.poly_q));
    const std::optional<Polynomial> rr =
        cfg.poly_r.empty() ? std::nullopt : std::optional(parse_polynomial(cfg.poly_r));
    const auto rows = ideal_commutator_profile(p, q, rr, d_list, cfg.p_list);
    Report r = make_report(cfg);

    std::ostringstream csv;
    csv << "d,tz_norm";
    for (double e : cfg.p_list) csv << ",tz_schatten_" << num(e);
    if (q) {
        csv << ",pq_norm";
        for (double e : cfg.p_list) csv << ",pq_schatten_" << num(e);
    }
    csv << '\n';
    json jrows = json::array();
    for (const auto& row : rows) {
        csv << row.d << ',' << num(row.tz_norm);
        for (double v : row.tz_schatten) csv << ',' << num(v);
        json jr = {{"d", row.d}, {"tz_norm", row.tz_norm}, {"tz_schatten", doubles(row.tz_schatten)}};
        if (row.pq_norm) {
            csv << ',' << num(*row.pq_norm);
            for (double v : row.pq_schatten) csv << ',' << num(v);
            jr["pq_norm"] = *row.pq_norm;
            jr["pq_schatten"] = doubles(row.pq_schatten);
        }
        csv << '\n';
        jrows.push_back(jr);
    }
    r.csv = csv.str();
    r.payload = {{"rows", jrows}};
    if (q && d_list.size() >= 4) {
        const Polynomial one{Complex(1.0)};
        const Polynomial pr = multiply(p, rr.value_or(one)), qr = multiply(*q, rr.value_or(one));
        const TruncFamily fp = ideal_family(pr, d_list, false), fq = ideal_family(qr, d_list, false);
        r.payload["commutator"] = profile_json(compactness_indicator(commutator_family(fp, fq)));
    }
    return r;
}

Report run_support(const RunConfig& cfg) {
    if (cfg.proj.empty()) throw InvalidInput("support needs --proj <spec>");
    const SigmaModel sigma = model_from_name(cfg.model, cfg.grid);
    const std::vector<Index> dims = default_dims(cfg, {21, 41, 81, 161});
    const TruncFamily pf = projection_family(cfg.proj, dims);
    LocalSupportOptions opts;
    opts.tol = cfg.support_tol;
    opts.strict = cfg.strict;
    Report r = make_report(cfg);
    const LocalSupport ls = local_support(pf, sigma, opts);
    r.payload = {{"model", to_string(sigma.kind())},
                 {"space", to_string(sigma.space())},
                 {"grid", doubles(sigma.grid())},
                 {"support", support_json(ls, sigma)}};
    if (!cfg.proj2.empty()) {
        const DisjointSupportReport rep = disjoint_support_check(pf, projection_family(cfg.proj2, dims), sigma, opts);
        json d = {{"support_q", support_json(rep.support_q, sigma)},
                  {"disjoint", rep.disjoint},
                  {"status", rep.status},
                  {"pq_norm", rep.pq_norm},
                  {"pq_rank", rep.pq_rank}};
        if (rep.pq_profile) d["pq_profile"] = profile_json(*rep.pq_profile);
        r.payload["disjoint"] = d;
    }
    if (!cfg.phi.empty()) {
        const SymbolExpr e = SymbolExpr::parse(cfg.phi);
        const bool circle = sigma.space() != SpaceId::interval;
        const SymbolFn fn = [e, circle](double t) { return circle ? e(std::polar(1.0, t)) : e(Complex(t)); };
        r.payload["k1_index"] = k1_index(pf, ls, sigma, fn);
    }
    std::ostringstream csv;
    csv << "index,x,witness,witness_prev,flagged\n";
    for (std::size_t i = 0; i < ls.flagged.size(); ++i)
        csv << i << ',' << num(sigma.grid()[i]) << ',' << num(ls.witness[i]) << ',' << num(ls.witness_prev[i])
            << ',' << (ls.flagged[i] ? 1 : 0) << '\n';
    r.csv = csv.str();
    return r;
}

Report run_winding(const RunConfig& cfg) {
    require_json(cfg);
    if (cfg.phi.empty()) throw InvalidInput("winding needs --phi <expr|samples-file>");
    std::vector<Complex> samples;
    std::string source;
    if (looks_like_file(cfg.phi)) {
        samples = read_samples(cfg.phi);
        source = "file";
    } else {
        if (cfg.winding_grid < 3) throw InvalidInput("winding: --grid must be at least 3");
        samples = SymbolExpr::parse(cfg.phi).sample_circle(cfg.winding_grid);
        source = "expression";
    }
    const WindingResult w = winding_number(samples);
    Report r = make_report(cfg);
    r.payload = {{"winding", w.winding},
                 {"raw", w.raw},
                 {"max_step", w.max_step},
                 {"samples", samples.size()},
                 {"source", source}};
    return r;
}

Report run(const RunConfig& cfg) {
    const std::string& s = cfg.subcommand;
    if (s == "analyze") return run_analyze(cfg);
    if (s == "lattice") return run_lattice(cfg);
    if (s == "dixmier") return run_dixmier(cfg);
    if (s == "family") return run_family(cfg);
    if (s == "ideal") return run_ideal(cfg);
    if (s == "support") return run_support(cfg);
    if (s == "winding") return run_winding(cfg);
    throw InvalidInput("unknown subcommand '" + s + "'");
}

std::string render(const Report& report, Format format) {
    if (format == Format::json) return json{{"header", report.header}, {"payload", report.payload}}.dump(2) + "\n";
    if (report.csv.empty()) throw InvalidInput("this report has no csv form");
    std::ostringstream os;
    os << "# tool: " << report.header.at("tool").get<std::string>() << ' '
       << report.header.at("version").get<std::string>() << '\n';
    os << "# subcommand: " << report.header.at("subcommand").get<std::string>() << '\n';
    os << "# config: " << report.header.at("config").dump() << '\n';
    os << "# timestamp: " << report.header.at("timestamp").get<std::string>() << '\n';
    os << report.csv;
    return os.str();
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const FileNotFound*>(&e)) return 2;
    if (dynamic_cast<const ParseError*>(&e)) return 3;
    if (dynamic_cast<const InvalidInput*>(&e)) return 4;
    if (dynamic_cast<const NumericalError*>(&e)) return 5;
    return 1;
}

json error_object(const std::exception& e) {
    json err = {{"message", e.what()}, {"exit_code", exit_code_for(e)}};
    if (dynamic_cast<const FileNotFound*>(&e))
        err["kind"] = "file-not-found";
    else if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        err["kind"] = "parse";
        err["position"] = pe->position();
    } else if (dynamic_cast<const InvalidInput*>(&e))
        err["kind"] = "validation";
    else if (const auto* ne = dynamic_cast<const NumericalError*>(&e)) {
        err["kind"] = "numerical";
        err["residual"] = ne->residual();
    } else
        err["kind"] = "internal";
    return {{"error", err}};
}

std::string timestamp() {
    std::time_t t = 0;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace twoproj::cli
