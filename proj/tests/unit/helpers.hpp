#pragma once

#include <string>

#include <doctest.h>

#include <kronred/types.hpp>

namespace kronred::testing {

inline double max_abs_diff(const Matrix& a, const Matrix& b)
{
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows)
{
    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) {
            M(i, j++) = v;
        }
        ++i;
    }
    return M;
}

inline std::string data_file(const std::string& name)
{
    return std::string(KRONRED_DATA_DIR) + "/" + name;
}

}  // namespace kronred::testing
