#pragma once

#include <filesystem>
#include <string>

#include "eei/gaussmat.hpp"

namespace eei {

// Shared matrix format: {"dim": n, "rows": [[r00, r01, ...], ...]}.
// Readers symmetrize and reject matrices outside the PSD cone.

CovMatrix parse_matrix_json(const std::string& text,
                            double psd_tol = kDefaultPsdTol);
CovMatrix read_matrix_json(const std::filesystem::path& path,
                           double psd_tol = kDefaultPsdTol);
std::string to_matrix_json(const Matrix& m);

}  // namespace eei
