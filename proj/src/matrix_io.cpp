#include "twoproj/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace twoproj {

using nlohmann::json;

json matrix_to_json(const CMatrix& a) {
    json re = json::array();
    json im = json::array();
    bool complex = false;
    for (Index i = 0; i < a.rows(); ++i) {
        json rr = json::array();
        json ri = json::array();
        for (Index j = 0; j < a.cols(); ++j) {
            rr.push_back(a(i, j).real());
            ri.push_back(a(i, j).imag());
            complex = complex || a(i, j).imag() != 0.0;
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    json out = {{"rows", a.rows()}, {"cols", a.cols()}, {"re", std::move(re)}};
    if (complex) out["im"] = std::move(im);
    return out;
}

namespace {

void fill_part(const json& part, const char* name, Index rows, Index cols, CMatrix& a, bool imag) {
    if (!part.is_array() || static_cast<Index>(part.size()) != rows)
        throw ParseError(std::string("matrix: \"") + name + "\" must be an array of " +
                             std::to_string(rows) + " rows",
                         0);
    for (Index i = 0; i < rows; ++i) {
        const json& row = part[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw ParseError(std::string("matrix: row ") + std::to_string(i) + " of \"" + name +
                                 "\" must have " + std::to_string(cols) + " entries",
                             0);
        for (Index j = 0; j < cols; ++j) {
            const json& v = row[static_cast<std::size_t>(j)];
            if (!v.is_number())
                throw ParseError(std::string("matrix: non-numeric entry in \"") + name + "\"", 0);
            const double x = v.get<double>();
            if (!std::isfinite(x)) throw ParseError("matrix: non-finite entry", 0);
            if (imag)
                a(i, j).imag(x);
            else
                a(i, j).real(x);
        }
    }
}

}  // namespace

CMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("re"))
        throw ParseError("matrix: expected object with \"rows\", \"cols\", \"re\"", 0);
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw ParseError("matrix: \"rows\"/\"cols\" must be integers", 0);
    const auto rows = j["rows"].get<Index>();
    const auto cols = j["cols"].get<Index>();
    if (rows <= 0 || cols <= 0) throw ParseError("matrix: dimensions must be positive", 0);
    CMatrix a = CMatrix::Zero(rows, cols);
    fill_part(j["re"], "re", rows, cols, a, false);
    if (j.contains("im")) fill_part(j["im"], "im", rows, cols, a, true);
    return a;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what(), e.byte);
    }
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
    return matrix_from_json(read_json_file(path));
}

void write_matrix_file(const std::filesystem::path& path, const CMatrix& a) {
    std::ofstream out(path);
    if (!out) throw FileNotFound("cannot write file: " + path.string());
    out << matrix_to_json(a).dump() << '\n';
}

}  // namespace twoproj
