#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hyperspec/function_catalog.hpp"
#include "hyperspec/linalg.hpp"
#include "oracles.hpp"

namespace testing {

inline hyperspec::Matrix to_matrix(const oracle::Dense& a) { return hyperspec::Matrix::from_rows(a); }

inline oracle::Dense to_dense(const hyperspec::Matrix& m) {
    oracle::Dense out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

inline double rel_err(double got, double want, double floor = 1.0) {
    return std::fabs(got - want) / std::max(std::fabs(want), floor);
}

/// Catalog members used across the property tests. All accept x >= 0.
inline std::vector<hyperspec::FunctionSpec> catalog_sample() {
    using hyperspec::FunctionSpec;
    return {
        FunctionSpec::identity(),
        FunctionSpec::constant(2.5),
        FunctionSpec::polynomial({1.0, -2.0, 1.0}),
        FunctionSpec::polynomial({0.5, 0.0, -0.25, 0.1}),
        FunctionSpec::exp_mixture({1.0}, {1.0}),
        FunctionSpec::exp_mixture({0.3, 0.7}, {0.5, 2.0}, 0.2),
        FunctionSpec::bernstein_mixture(0.0, {1.0}, {1.0}),
        FunctionSpec::bernstein_mixture(0.3, {0.7}, {2.0}),
        FunctionSpec::power(0.5),
        FunctionSpec::power(2.0),
        FunctionSpec::affine_of(FunctionSpec::exp_mixture({1.0}, {1.0}), -1.0, 1.0),
        FunctionSpec::sum_of({FunctionSpec::identity(), FunctionSpec::exp_mixture({2.0}, {0.25})}),
    };
}

/// Members that are smooth on [0, inf) with continuous derivatives at 0.
inline std::vector<hyperspec::FunctionSpec> smooth_sample() {
    using hyperspec::FunctionSpec;
    return {
        FunctionSpec::identity(),
        FunctionSpec::polynomial({1.0, -2.0, 1.0}),
        FunctionSpec::polynomial({0.5, 0.0, -0.25, 0.1}),
        FunctionSpec::exp_mixture({1.0}, {1.0}),
        FunctionSpec::exp_mixture({0.3, 0.7}, {0.5, 2.0}),
        FunctionSpec::bernstein_mixture(0.3, {0.7}, {2.0}),
        FunctionSpec::power(3.0),
        FunctionSpec::affine_of(FunctionSpec::exp_mixture({1.0}, {1.0}), -1.0, 1.0, 0.5),
    };
}

}  // namespace testing
