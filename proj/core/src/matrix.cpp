// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/error.hpp>
#include <evmscan/matrix.hpp>

#include <cblas.h>

#include <algorithm>
#include <charconv>

namespace evmscan
{
void gemm(Transpose ta, Transpose tb, double alpha, const Matrix& a, const Matrix& b,
    double beta, Matrix& c)
{
    const bool at = ta == Transpose::yes;
    const bool bt = tb == Transpose::yes;
    const auto m = at ? a.cols() : a.rows();
    const auto k = at ? a.rows() : a.cols();
    const auto kb = bt ? b.cols() : b.rows();
    const auto n = bt ? b.rows() : b.cols();
    if (k != kb || c.rows() != m || c.cols() != n)
        throw Error{ErrorKind::dimension_mismatch, "gemm operand shapes do not agree"};
    if (m == 0 || n == 0)
        return;
    if (k == 0)
    {
        for (auto& x : c.data())
            x *= beta;
        return;
    }

    cblas_dgemm(CblasRowMajor, at ? CblasTrans : CblasNoTrans, bt ? CblasTrans : CblasNoTrans,
        static_cast<int>(m), static_cast<int>(n), static_cast<int>(k), alpha, a.data().data(),
        static_cast<int>(std::max<std::size_t>(a.cols(), 1)), b.data().data(),
        static_cast<int>(std::max<std::size_t>(b.cols(), 1)), beta, c.data().data(),
        static_cast<int>(std::max<std::size_t>(c.cols(), 1)));
}

Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows)
{
    Matrix out{rows.size(), m.cols()};
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const auto src = m.row(rows[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

std::string format_number(double value)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{})
        throw Error{ErrorKind::io_error, "cannot format number"};
    return std::string{buf, end};
}
}  // namespace evmscan
