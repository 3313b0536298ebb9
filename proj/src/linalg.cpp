#include "bcwave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bcwave {

std::vector<double> matvec(const DenseMatrix& A, const std::vector<double>& x) {
  if ((int)x.size() != A.cols) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> y(A.rows, 0.0);
  for (int r = 0; r < A.rows; ++r) {
    const double* row = A.a.data() + std::size_t(r) * A.cols;
    double s = 0.0;
    for (int c = 0; c < A.cols; ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

std::vector<double> cholesky_solve(DenseMatrix A, std::vector<double> b) {
  const int n = A.rows;
  if (A.cols != n || (int)b.size() != n) throw std::invalid_argument("cholesky: need square system");
  for (int j = 0; j < n; ++j) {
    double d = A.at(j, j);
    for (int k = 0; k < j; ++k) d -= A.at(j, k) * A.at(j, k);
    if (!(d > 0.0)) throw std::invalid_argument("cholesky: matrix not positive definite");
    d = std::sqrt(d);
    A.at(j, j) = d;
    for (int i = j + 1; i < n; ++i) {
      double s = A.at(i, j);
      for (int k = 0; k < j; ++k) s -= A.at(i, k) * A.at(j, k);
      A.at(i, j) = s / d;
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= A.at(i, k) * b[k];
    b[i] = s / A.at(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= A.at(k, i) * b[k];
    b[i] = s / A.at(i, i);
  }
  return b;
}

void jacobi_svd(const DenseMatrix& A, DenseMatrix& U, std::vector<double>& sigma, DenseMatrix& V) {
  const int m = A.rows, n = A.cols;
  DenseMatrix W = A;
  V = DenseMatrix(n, n);
  for (int i = 0; i < n; ++i) V.at(i, i) = 1.0;

  auto col_dot = [&](const DenseMatrix& M, int p, int q) {
    double s = 0.0;
    for (int r = 0; r < M.rows; ++r) s += M.at(r, p) * M.at(r, q);
    return s;
  };
  auto rotate_cols = [&](DenseMatrix& M, int p, int q, double c, double s) {
    for (int r = 0; r < M.rows; ++r) {
      double xp = M.at(r, p), xq = M.at(r, q);
      M.at(r, p) = c * xp + s * xq;
      M.at(r, q) = -s * xp + c * xq;
    }
  };

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double app = col_dot(W, p, p), aqq = col_dot(W, q, q), apq = col_dot(W, p, q);
        if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        double theta = 0.5 * std::atan2(2.0 * apq, app - aqq);
        double c = std::cos(theta), s = std::sin(theta);
        rotate_cols(W, p, q, c, s);
        rotate_cols(V, p, q, c, s);
      }
    if (!rotated) break;
  }

  sigma.assign(n, 0.0);
  U = DenseMatrix(m, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(n);
  for (int j = 0; j < n; ++j) norms[j] = std::sqrt(col_dot(W, j, j));
  std::sort(order.begin(), order.end(), [&](int a, int b) { return norms[a] > norms[b]; });

  DenseMatrix Vs(n, n);
  for (int j = 0; j < n; ++j) {
    int src = order[j];
    sigma[j] = norms[src];
    for (int r = 0; r < m; ++r)
      U.at(r, j) = sigma[j] > 0.0 ? W.at(r, src) / sigma[j] : 0.0;
    for (int r = 0; r < n; ++r) Vs.at(r, j) = V.at(r, src);
  }
  V = std::move(Vs);
}

std::vector<double> jacobi_eigenvalues(DenseMatrix A) {
  const int n = A.rows;
  if (A.cols != n) throw std::invalid_argument("jacobi_eigenvalues: need square matrix");
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) off += A.at(p, q) * A.at(p, q);
    if (off < 1e-28 * n * n) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = A.at(p, q);
        if (apq == 0.0) continue;
        double app = A.at(p, p), aqq = A.at(q, q);
        double theta = 0.5 * std::atan2(2.0 * apq, app - aqq);
        double c = std::cos(theta), s = std::sin(theta);
        for (int r = 0; r < n; ++r) {
          double xp = A.at(r, p), xq = A.at(r, q);
          A.at(r, p) = c * xp + s * xq;
          A.at(r, q) = -s * xp + c * xq;
        }
        for (int r = 0; r < n; ++r) {
          double xp = A.at(p, r), xq = A.at(q, r);
          A.at(p, r) = c * xp + s * xq;
          A.at(q, r) = -s * xp + c * xq;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = A.at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace bcwave
