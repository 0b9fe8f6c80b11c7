#include "eei/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace eei {

CovMatrix parse_matrix_json(const std::string& text, double psd_tol) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("matrix JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("rows")) {
    throw Error(ErrorCode::kParseError,
                "matrix JSON: expected an object with \"dim\" and \"rows\"");
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() <= 0) {
    throw Error(ErrorCode::kParseError, "matrix JSON: \"dim\" must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(doc["dim"].get<long long>());
  const auto& rows = doc["rows"];
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw Error(ErrorCode::kParseError, "matrix JSON: \"rows\" must hold dim rows");
  }
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::kParseError, "matrix JSON: every row must hold dim entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw Error(ErrorCode::kParseError, "matrix JSON: entries must be numbers");
      }
      m(i, j) = v.get<double>();
    }
  }
  return CovMatrix(m, psd_tol);
}

CovMatrix read_matrix_json(const std::filesystem::path& path, double psd_tol) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open matrix file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_json(buf.str(), psd_tol);
}

std::string to_matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"dim", m.rows()}, {"rows", std::move(rows)}}.dump();
}

}  // namespace eei
