#pragma once

#include <cstddef>
#include <vector>

namespace curvq {

/// Symmetric tridiagonal matrix: diagonal (n) and off-diagonal (n-1).
struct TridiagonalOperator {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  std::size_t size() const noexcept { return diagonal.size(); }
  /// Infinity norm (max absolute row sum).
  double norm() const;
  /// Number of eigenvalues strictly below `shift` (Sturm sequence count).
  std::size_t count_below(double shift) const;
  std::vector<double> apply(const std::vector<double>& v) const;
};

struct EigenPair {
  double eigenvalue = 0.0;
  std::vector<double> eigenvector;  ///< unit Euclidean norm
};

/// The `count` algebraically smallest eigenpairs, eigenvalues nondecreasing.
/// Eigenvalues by Sturm-sequence bisection, vectors by inverse iteration with
/// reorthogonalisation inside clusters. Vector signs are fixed so that the
/// first component of non-negligible magnitude is positive.
std::vector<EigenPair> eigen_tridiagonal_lowest(const TridiagonalOperator& op,
                                                std::size_t count);

}  // namespace curvq
