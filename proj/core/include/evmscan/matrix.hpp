// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace evmscan
{
/// Dense row-major matrix of doubles.
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : m_rows{rows}, m_cols{cols}, m_data(rows * cols, fill)
    {}

    [[nodiscard]] std::size_t rows() const noexcept { return m_rows; }
    [[nodiscard]] std::size_t cols() const noexcept { return m_cols; }
    [[nodiscard]] std::size_t size() const noexcept { return m_data.size(); }

    [[nodiscard]] double& operator()(std::size_t r, std::size_t c) noexcept
    {
        return m_data[r * m_cols + c];
    }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const noexcept
    {
        return m_data[r * m_cols + c];
    }

    [[nodiscard]] std::span<double> row(std::size_t r) noexcept
    {
        return {m_data.data() + r * m_cols, m_cols};
    }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept
    {
        return {m_data.data() + r * m_cols, m_cols};
    }

    [[nodiscard]] std::vector<double>& data() noexcept { return m_data; }
    [[nodiscard]] const std::vector<double>& data() const noexcept { return m_data; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<double> m_data;
};

enum class Transpose
{
    no,
    yes,
};

/// C = alpha * op(A) * op(B) + beta * C. C must already have the result shape.
void gemm(Transpose ta, Transpose tb, double alpha, const Matrix& a, const Matrix& b,
    double beta, Matrix& c);

/// Gathers the given rows of m, in order.
[[nodiscard]] Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows);

/// Shortest decimal text that parses back to exactly the same double.
[[nodiscard]] std::string format_number(double value);
}  // namespace evmscan
