#include "scert/json_util.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <limits>

namespace scert {

std::string to_string(PNorm norm) {
  switch (norm) {
    case PNorm::l1: return "l1";
    case PNorm::l2: return "l2";
    case PNorm::linf: return "linf";
  }
  return "?";
}

PNorm parse_pnorm(const std::string& name) {
  if (name == "l1") return PNorm::l1;
  if (name == "l2") return PNorm::l2;
  if (name == "linf") return PNorm::linf;
  throw ParseError("unknown norm '" + name + "' (expected l1, l2 or linf)");
}

namespace json_util {

using nlohmann::json;

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

double to_double(const json& doc, const std::string& what) {
  if (doc.is_number()) return doc.get<double>();
  if (doc.is_string()) {
    const auto s = doc.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
  }
  throw ParseError(what + ": expected a number");
}

json from_double(double value) {
  if (std::isinf(value)) return value > 0 ? json("inf") : json("-inf");
  return value;
}

Vector to_vector(const json& doc, const std::string& what) {
  if (!doc.is_array()) throw ParseError(what + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) throw ParseError(what + ": expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = doc[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& doc, const std::string& what) {
  if (!doc.is_array() || doc.empty()) throw ParseError(what + ": expected a nonempty array of rows");
  const std::size_t cols = doc[0].is_array() ? doc[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(doc.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < doc.size(); ++r) {
    const Vector row = to_vector(doc[r], what);
    if (static_cast<std::size_t>(row.size()) != cols)
      throw ParseError(what + ": rows have different lengths");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json from_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json from_matrix(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(from_vector(m.row(r).transpose()));
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace json_util
}  // namespace scert
