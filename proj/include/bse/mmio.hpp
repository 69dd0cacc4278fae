#pragma once

#include <string>

#include "bse/operator.hpp"

namespace bse {

/// Symmetry a block is expected to have on read and is stored with on write.
enum class BlockSymmetry { Hermitian, Symmetric };

/// Reads one Matrix Market file. Coordinate files give a sparse block, array
/// files a dense one. Accepted fields: complex, real, integer. Accepted
/// symmetry tags: general, plus `hermitian` (only with Hermitian) or
/// `symmetric` (either, with real data for Hermitian). General files are
/// checked exactly against `expected`; the first offending entry is named in
/// the SymmetryViolation message.
template <typename Real>
Block<Real> read_block(const std::string& path, BlockSymmetry expected);

/// Sparse blocks go to `coordinate complex hermitian|symmetric` with the lower
/// triangle only, dense blocks to `array complex general`. Values are written
/// in shortest round-trip form.
template <typename Real>
void write_block(const std::string& path, const Block<Real>& block, BlockSymmetry sym);

/// Reads R and C; a sparse block is densified if the other one is dense.
template <typename Real>
BseOperator<Real> read_blocks(const std::string& path_r, const std::string& path_c);

template <typename Real>
void write_blocks(const BseOperator<Real>& op, const std::string& path_r,
                  const std::string& path_c);

}  // namespace bse
