#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "twoproj/core.hpp"

namespace twoproj {

/// {"rows": n, "cols": m, "re": [[...]], "im": [[...]]}; "im" is omitted for real matrices.
nlohmann::json matrix_to_json(const CMatrix& a);

/// Inverse of matrix_to_json; a missing "im" means a real matrix. Throws ParseError.
CMatrix matrix_from_json(const nlohmann::json& j);

/// Thrown when an input file cannot be opened.
class FileNotFound : public Error {
public:
    using Error::Error;
};

/// Parse a JSON document from disk; parse failures carry the byte offset.
nlohmann::json read_json_file(const std::filesystem::path& path);

CMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& a);

}  // namespace twoproj
