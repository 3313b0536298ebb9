#include "bcwave/control.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "bcwave/kernels.hpp"

namespace bcwave {

STauIndex build_stau_index(const BoundaryProfile& profile, const MeasurementConfig& cfg) {
  cfg.validate();
  STauIndex idx{profile, cfg, {}};
  const double h = cfg.dt_samp();
  const int half = cfg.half_slots();
  for (int k = 0; k < cfg.nx; ++k) {
    double tau = profile_value(profile, {cfg.receiver_x(k), 0.0});
    int j0 = (int)std::ceil((cfg.T - tau) / h - 1e-9);
    for (int j = std::max(0, j0); j < half; ++j) idx.slots.push_back({j, k});
  }
  return idx;
}

BoundaryTrace apply_time_reversal(const BoundaryTrace& f) {
  BoundaryTrace out(f.n_slots, f.n_receivers, f.dt_samp);
  for (int j = 0; j < f.n_slots; ++j)
    for (int k = 0; k < f.n_receivers; ++k) out.at(j, k) = f.at(f.n_slots - 1 - j, k);
  return out;
}

BoundaryTrace apply_J(const BoundaryTrace& f) {
  if (f.n_slots < 2 || f.n_slots % 2)
    throw std::invalid_argument("apply_J: input must be a (0,2T) trace with an even slot count");
  const int nt = f.n_slots, half = nt / 2, nx = f.n_receivers;
  BoundaryTrace out(half, nx, f.dt_samp);
  std::vector<double> prefix(std::size_t(nt + 1) * nx, 0.0);
  for (int m = 0; m < nt; ++m)
    for (int k = 0; k < nx; ++k)
      prefix[std::size_t(m + 1) * nx + k] = prefix[std::size_t(m) * nx + k] + f.at(m, k);
  for (int j = 0; j < half; ++j)
    for (int k = 0; k < nx; ++k) {
      double inner = prefix[std::size_t(nt - 1 - j) * nx + k] - prefix[std::size_t(j + 1) * nx + k];
      out.at(j, k) = 0.5 * f.dt_samp * (inner + 0.5 * f.at(j, k) + 0.5 * f.at(nt - 1 - j, k));
    }
  return out;
}

BoundaryTrace apply_K(const std::vector<SlotValue>& coeffs, const MeasurementSet& data) {
  const auto& cfg = data.config;
  const int half = cfg.half_slots(), nx = cfg.nx;
  const double h = cfg.dt_samp();

  BoundaryTrace term1 = apply_J(synthesize_response(coeffs, data));

  // g = J Theta f, exact for piecewise-constant f:
  //   g[s][kap] = h/2 * (c[s][kap]/2 + sum_{m>s} c[m][kap])
  std::vector<double> c(std::size_t(half) * nx, 0.0);
  for (const auto& sv : coeffs) c[std::size_t(sv.slot) * nx + sv.cell] += sv.value;
  std::vector<SlotValue> rg;
  rg.reserve(c.size());
  for (int kap = 0; kap < nx; ++kap) {
    double suffix = 0.0;
    for (int s = half - 1; s >= 0; --s) {
      double cs = c[std::size_t(s) * nx + kap];
      double g = 0.5 * h * (0.5 * cs + suffix);
      suffix += cs;
      if (g != 0.0) rg.push_back({half - 1 - s, kap, g});
    }
  }

  BoundaryTrace v = synthesize_response(rg, data);

  BoundaryTrace out(half, nx, h);
  for (int j = 0; j < half; ++j)
    for (int k = 0; k < nx; ++k) out.at(j, k) = term1.at(j, k) - v.at(half - 1 - j, k);
  return out;
}

std::vector<double> assemble_rhs_b(const STauIndex& index) {
  const double h = index.config.dt_samp();
  std::vector<double> b(index.slots.size());
  for (std::size_t a = 0; a < index.slots.size(); ++a)
    b[a] = index.config.T - (index.slots[a].slot + 0.5) * h;
  return b;
}

DenseMatrix assemble_ktau(const STauIndex& index, const MeasurementSet& data) {
  if (!index.config.compatible_with(data.config))
    throw std::invalid_argument("assemble_ktau: index and data sampling differ");
  const auto& cfg = data.config;
  const int nt = cfg.nt, nx = cfg.nx;
  const double h = cfg.dt_samp();
  const int n = (int)index.slots.size();

  // prefix[kap][(m)*nx + k] = sum_{m'<m} G_kap[m'][k]
  std::vector<std::vector<double>> prefix(nx);
  for (int kap = 0; kap < nx; ++kap) {
    const auto& G = data.traces[kap].samples;
    auto& P = prefix[kap];
    P.assign(std::size_t(nt + 1) * nx, 0.0);
    for (int m = 0; m < nt; ++m)
      for (int k = 0; k < nx; ++k)
        P[std::size_t(m + 1) * nx + k] = P[std::size_t(m) * nx + k] + G[std::size_t(m) * nx + k];
  }

  DenseMatrix K(n, n);
  for (int bcol = 0; bcol < n; ++bcol) {
    const int jb = index.slots[bcol].slot;
    const int kapb = index.slots[bcol].cell;
    const auto& G = data.traces[kapb].samples;
    const auto& P = prefix[kapb];
    for (int arow = 0; arow < n; ++arow) {
      const int ja = index.slots[arow].slot;
      const int ka = index.slots[arow].cell;
      auto Gv = [&](int m) {
        return (m >= 0 && m < nt) ? G[std::size_t(m) * nx + ka] : 0.0;
      };
      auto Pv = [&](int m) {
        if (m <= 0) return 0.0;
        if (m > nt) m = nt;
        return P[std::size_t(m) * nx + ka];
      };
      double z1 = 0.5 * Gv(ja - jb) + (Pv(nt - 1 - ja - jb) - Pv(ja + 1 - jb)) +
                  0.5 * Gv(nt - 1 - ja - jb);
      double z2 = 0.5 * Gv(jb - ja) + Pv(jb - ja);
      K.at(arow, bcol) = 0.5 * h * (z1 - z2);
    }
  }
  return K;
}

ControlSolution solve_control(const STauIndex& index, const MeasurementSet& data, double alpha,
                              int n_cg, int dense_threshold) {
  if (index.empty()) throw std::invalid_argument("solve_control: empty control space");
  if (n_cg < 1) throw std::invalid_argument("solve_control: need at least one iteration");
  if (alpha < 0.0) throw std::invalid_argument("solve_control: alpha must be nonnegative");
  data.validate();

  const int n = (int)index.slots.size();
  const std::vector<double> b = assemble_rhs_b(index);
  const double wq = index.slot_measure();

  DenseMatrix Kd;
  const bool dense = n <= dense_threshold;
  if (dense) Kd = assemble_ktau(index, data);

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    if (dense) {
      for (int r = 0; r < n; ++r)
        y[r] = kernels::dot(Kd.a.data() + std::size_t(r) * n, x.data(), n) + alpha * x[r];
    } else {
      std::vector<SlotValue> sv(n);
      for (int i = 0; i < n; ++i) sv[i] = {index.slots[i].slot, index.slots[i].cell, x[i]};
      BoundaryTrace kf = apply_K(sv, data);
      for (int i = 0; i < n; ++i)
        y[i] = kf.at(index.slots[i].slot, index.slots[i].cell) + alpha * x[i];
    }
  };

  ControlSolution sol;
  sol.alpha = alpha;
  std::vector<double> x(n, 0.0), r(b), p(b), q(n, 0.0);
  double rr = kernels::dot(r.data(), r.data(), n);
  const double r0 = std::sqrt(rr);
  for (int it = 0; it < n_cg && r0 > 0.0; ++it) {
    apply(p, q);
    double pq = kernels::dot(p.data(), q.data(), n);
    if (!(pq > 0.0)) {
      sol.curvature_breakdown = true;
      break;
    }
    double al = rr / pq;
    kernels::axpy(al, p.data(), x.data(), n);
    kernels::axpy(-al, q.data(), r.data(), n);
    double rr_new = kernels::dot(r.data(), r.data(), n);
    sol.cg_iterations = it + 1;
    sol.residual_history.push_back(std::sqrt(rr_new) / r0);
    sol.volume_history.push_back(wq * kernels::dot(x.data(), b.data(), n));
    if (std::sqrt(rr_new) <= 1e-12 * r0) break;
    double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  sol.volume_estimate = wq * kernels::dot(x.data(), b.data(), n);
  sol.coefficients = std::move(x);
  return sol;
}

TikhonovReport tikhonov_limit_check(const DenseMatrix& A, const std::vector<double>& y,
                                    std::vector<double> alphas) {
  const int m = A.rows, n = A.cols;
  if ((int)y.size() != m) throw std::invalid_argument("tikhonov_limit_check: size mismatch");
  for (double a : alphas)
    if (!(a > 0.0)) throw std::invalid_argument("tikhonov_limit_check: alphas must be positive");

  DenseMatrix U, V;
  std::vector<double> sig;
  jacobi_svd(A, U, sig, V);
  const double smax = sig.empty() ? 0.0 : sig[0];
  const double tol = 1e-10 * std::max(1.0, smax);

  std::vector<double> Py(m, 0.0);
  for (int j = 0; j < n; ++j) {
    if (sig[j] <= tol) continue;
    double coef = 0.0;
    for (int r = 0; r < m; ++r) coef += U.at(r, j) * y[r];
    for (int r = 0; r < m; ++r) Py[r] += coef * U.at(r, j);
  }

  DenseMatrix AtA(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int r = 0; r < m; ++r) s += A.at(r, i) * A.at(r, j);
      AtA.at(i, j) = s;
    }
  std::vector<double> Aty(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r) Aty[i] += A.at(r, i) * y[r];

  TikhonovReport rep;
  rep.alphas = alphas;
  for (double a : alphas) {
    DenseMatrix M = AtA;
    for (int i = 0; i < n; ++i) M.at(i, i) += a;
    std::vector<double> x = cholesky_solve(std::move(M), Aty);
    double err2 = 0.0;
    for (int r = 0; r < m; ++r) {
      double ax = 0.0;
      for (int c2 = 0; c2 < n; ++c2) ax += A.at(r, c2) * x[c2];
      double d = ax - Py[r];
      err2 += d * d;
    }
    rep.errors.push_back(std::sqrt(err2));
  }
  return rep;
}

}  // namespace bcwave
