#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "twoproj/matrix_io.hpp"

using namespace twoproj;
using namespace twoproj::cli;

namespace {

const std::filesystem::path fixtures = TWOPROJ_FIXTURES;

RunConfig config(std::string sub) {
    RunConfig c;
    c.subcommand = std::move(sub);
    return c;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("analyze on the quarter pair") {
    RunConfig c = config("analyze");
    c.pair = (fixtures / "s14").string();
    const Report r = run(c);
    CHECK(r.payload.at("dg") == 1);
    CHECK(r.payload.at("s").size() == 1);
    CHECK(r.payload.at("s")[0].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.payload.at("gap_to_one").get<double>() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.header.at("config").at("tol_cluster") == 1e-8);
    CHECK(r.header.at("config").contains("spectral"));
}

TEST_CASE("analyze with P = Q") {
    RunConfig c = config("analyze");
    c.pair = (fixtures / "equal_pair.json").string();
    const Report r = run(c);
    CHECK(r.payload.at("dg") == 0);
    CHECK(r.payload.at("meet_rank") == r.payload.at("join_rank"));
}

TEST_CASE("error kinds map to exit codes") {
    RunConfig c = config("analyze");
    c.p_file = (fixtures / "malformed.json").string();
    c.q_file = (fixtures / "s14" / "Q.json").string();
    try {
        run(c);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(exit_code_for(e) == 3);
        CHECK(e.position() > 0);
        const auto j = error_object(e);
        CHECK(j.at("error").at("kind") == "parse");
        CHECK(j.at("error").at("position") == e.position());
    }

    c.p_file = (fixtures / "missing.json").string();
    try {
        run(c);
        FAIL("expected file-not-found");
    } catch (const std::exception& e) {
        CHECK(exit_code_for(e) == 2);
    }

    const auto tmp = std::filesystem::temp_directory_path() / "twoproj_not_projection.json";
    write_matrix_file(tmp, CMatrix::Constant(2, 2, 0.7));
    c.p_file = tmp.string();
    try {
        run(c);
        FAIL("expected a validation error");
    } catch (const std::exception& e) {
        CHECK(exit_code_for(e) == 4);
    }
    std::filesystem::remove(tmp);

    CHECK_THROWS_AS(run(config("bogus")), InvalidInput);
}

TEST_CASE("family csv gap column") {
    RunConfig c = config("family");
    c.format = Format::csv;
    c.dims = {50, 100, 200};
    const auto rows = csv_rows(render(run(c), Format::csv));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"dim", "comm_norm", "schatten_1", "schatten_2", "gap_to_one",
                                              "rank_join", "rank_ess_span", "delta"});
    for (std::size_t i = 0; i < 3; ++i) {
        const double n = static_cast<double>(c.dims[i]);
        CHECK(std::stoll(rows[i + 1][0]) == 2 * c.dims[i]);
        CHECK(std::stod(rows[i + 1][4]) == doctest::Approx(1.0 / (n * n + 1.0)).epsilon(1e-10));
        CHECK(std::stod(rows[i + 1][1]) == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("ideal csv columns") {
    RunConfig c = config("ideal");
    c.poly_p = "-1,1";
    c.poly_q = "1,1";
    c.dmax = 40;
    const auto rows = csv_rows(run(c).csv);
    REQUIRE(rows.size() == 4);  // d = 10, 20, 40
    CHECK(rows[0].size() == 7);
    CHECK(rows[3][0] == "40");
    CHECK(std::stod(rows[3][4]) == doctest::Approx(21.0 / 861.0 * std::sqrt(1.0 - 21.0 * 21.0 / (861.0 * 861.0))));
}

TEST_CASE("winding and dixmier examples") {
    RunConfig w = config("winding");
    w.phi = "z^3";
    CHECK(run(w).payload.at("winding") == 3);
    w.phi = (fixtures / "z2_samples.json").string();
    CHECK(run(w).payload.at("winding") == 2);

    RunConfig d = config("dixmier");
    d.pair = (fixtures / "s14").string();
    d.word = "P*Q*P";
    CHECK(run(d).payload.at("rel_error").get<double>() <= 1e-12);
}

TEST_CASE("support subcommand") {
    RunConfig c = config("support");
    c.model = "diagonal-interval";
    c.proj = "coords:0:0.4";
    c.proj2 = "coords:0.6:1";
    c.dims = {20, 40, 80, 160};
    const Report r = run(c);
    CHECK(r.payload.at("disjoint").at("pq_norm") == 0.0);
    CHECK(r.payload.at("disjoint").at("status") == "confirmed");
    c.proj = "coords:0:x";
    CHECK_THROWS_AS(run(c), ParseError);
    c.proj = "wedge";
    CHECK_THROWS_AS(run(c), InvalidInput);
}

TEST_CASE("payloads are deterministic") {
    RunConfig c = config("dixmier");
    c.pair = (fixtures / "s14").string();
    c.random_words = 5;
    c.seed = 7;
    const auto a = run(c), b = run(c);
    CHECK(a.payload.dump() == b.payload.dump());
    c.seed = 8;
    CHECK(run(c).payload.dump() != a.payload.dump());
}

TEST_CASE("timestamp honours SOURCE_DATE_EPOCH") {
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    CHECK(timestamp() == "1970-01-01T00:00:00Z");
    unsetenv("SOURCE_DATE_EPOCH");
}
