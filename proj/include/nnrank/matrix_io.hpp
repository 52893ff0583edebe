#pragma once

#include <filesystem>
#include <iosfwd>

#include "nnrank/dense_matrix.hpp"

namespace nnrank::io {

enum class MatrixFormat { MatrixMarket, Csv };

/// Picks a format from the file extension: .mtx/.mm -> MatrixMarket,
/// .csv -> Csv. Throws ValueError for anything else.
MatrixFormat infer_format(const std::filesystem::path& path);

/// Reads a dense matrix. MatrixMarket files must use the
/// "array real general" storage (values column-major); CSV files are
/// headerless comma-separated rows. Parse failures throw ParseError with a
/// 1-based line number.
DenseMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format);
DenseMatrix read_matrix(std::istream& in, MatrixFormat format);

/// Writes with 17 significant digits so write∘read round-trips exactly.
void write_matrix(const DenseMatrix& m, const std::filesystem::path& path, MatrixFormat format);
void write_matrix(const DenseMatrix& m, std::ostream& out, MatrixFormat format);

}  // namespace nnrank::io
