#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "skewddvv/matrix.hpp"

namespace skewddvv {

// Shortest round-trip decimal form; locale-independent.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline Matrix parse_matrix(const nlohmann::json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw std::invalid_argument("matrix JSON must be a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    if (cols == 0) throw std::invalid_argument("matrix JSON has an empty row");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const nlohmann::json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw std::invalid_argument("matrix JSON rows must all have the same length");
        for (int k = 0; k < cols; ++k) {
            if (!row[k].is_number())
                throw std::invalid_argument("matrix JSON entries must be numbers");
            m(i, k) = row[k].get<double>();
        }
    }
    return m;
}

// Loads either a single matrix (array of rows) or a list of matrices from a
// JSON file.
inline std::vector<Matrix> load_matrices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("expected a JSON array in " + path);
    std::vector<Matrix> out;
    if (j[0].is_array() && !j[0].empty() && j[0][0].is_array()) {
        for (const nlohmann::json& item : j) out.push_back(parse_matrix(item));
    } else {
        out.push_back(parse_matrix(j));
    }
    return out;
}

}  // namespace skewddvv
