#pragma once

#include <vector>

namespace bcwave {

struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}
  double& at(int r, int c) { return a[std::size_t(r) * cols + c]; }
  double at(int r, int c) const { return a[std::size_t(r) * cols + c]; }
};

std::vector<double> matvec(const DenseMatrix& A, const std::vector<double>& x);

// Solves A x = b for symmetric positive definite A (in-place factorization).
std::vector<double> cholesky_solve(DenseMatrix A, std::vector<double> b);

// One-sided Jacobi SVD, A = U diag(sigma) V^T.  Meant for small matrices
// (the Tikhonov lemma harness); sigma is descending.
void jacobi_svd(const DenseMatrix& A, DenseMatrix& U, std::vector<double>& sigma, DenseMatrix& V);

// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending.  O(n^3) per
// sweep; fine for the few-hundred-slot matrices it is used on.
std::vector<double> jacobi_eigenvalues(DenseMatrix A);

}  // namespace bcwave
