#pragma once

#include "scert/common.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace scert::json_util {

nlohmann::json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const nlohmann::json& doc);

Vector to_vector(const nlohmann::json& doc, const std::string& what);
Matrix to_matrix(const nlohmann::json& doc, const std::string& what);
nlohmann::json from_vector(const Vector& v);
nlohmann::json from_matrix(const Matrix& m);

/// Numbers, or the strings "inf"/"infinity".
double to_double(const nlohmann::json& doc, const std::string& what);
nlohmann::json from_double(double value);

std::string sha256_hex(const std::string& bytes);

}  // namespace scert::json_util
