#include "cfmimo/conic/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <optional>
#include <stdexcept>

#include "cfmimo/kernels.hpp"

namespace cfmimo::conic {

namespace {

namespace kn = cfmimo::kernels;

double norm2(const std::vector<double>& v) {
  return std::sqrt(kn::norm2_sq(v.data(), v.size()));
}

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  return kn::dot(a.data(), b.data(), a.size());
}

// ---------------------------------------------------------------------------
// Nesterov-Todd scalings for the composed cone.
// ---------------------------------------------------------------------------

struct ConeState {
  int n_lin = 0;
  struct Soc {
    int dim = 0;
    double eta = 1.0;  // sqrt(snorm/znorm)
    double a = 1.0;    // leading entry of the scaling point
    std::vector<double> q;
  };
  std::vector<Soc> socs;
  std::vector<double> lp_v;  // s/z per linear row
  std::vector<double> lp_w;  // sqrt(lp_v)
  int m = 0;

  static ConeState identity(const ConeLayout& layout) {
    ConeState st;
    st.n_lin = layout.n_nonneg;
    st.lp_v.assign(layout.n_nonneg, 1.0);
    st.lp_w.assign(layout.n_nonneg, 1.0);
    st.socs.resize(layout.soc_dims.size());
    for (std::size_t k = 0; k < layout.soc_dims.size(); ++k) {
      st.socs[k].dim = layout.soc_dims[k];
      st.socs[k].eta = 1.0;
      st.socs[k].a = 1.0;
      st.socs[k].q.assign(layout.soc_dims[k] - 1, 0.0);
    }
    st.m = layout.total_rows();
    return st;
  }

  /// Recomputes the scaling from a strictly interior (s, z) pair and writes
  /// lambda = W z. Returns false when either point left the cone.
  bool update(const std::vector<double>& s, const std::vector<double>& z,
              std::vector<double>& lambda) {
    for (int i = 0; i < n_lin; ++i) {
      if (s[i] <= 0.0 || z[i] <= 0.0) return false;
      lp_v[i] = s[i] / z[i];
      lp_w[i] = std::sqrt(lp_v[i]);
    }
    int at = n_lin;
    for (auto& sc : socs) {
      const double* sk = s.data() + at;
      const double* zk = z.data() + at;
      const double sres = sk[0] * sk[0] - kn::norm2_sq(sk + 1, sc.dim - 1);
      const double zres = zk[0] * zk[0] - kn::norm2_sq(zk + 1, sc.dim - 1);
      if (sres <= 0.0 || zres <= 0.0) return false;
      const double snorm = std::sqrt(sres);
      const double znorm = std::sqrt(zres);
      sc.eta = std::sqrt(snorm / znorm);

      double gamma = 1.0;
      {
        double dot_bar = (sk[0] / snorm) * (zk[0] / znorm);
        dot_bar += kn::dot(sk + 1, zk + 1, sc.dim - 1) / (snorm * znorm);
        gamma = std::sqrt(0.5 * (1.0 + dot_bar));
      }
      sc.a = (0.5 / gamma) * (sk[0] / snorm + zk[0] / znorm);
      sc.q.resize(sc.dim - 1);
      for (int i = 0; i + 1 < sc.dim; ++i) {
        sc.q[i] = (0.5 / gamma) * (sk[1 + i] / snorm - zk[1 + i] / znorm);
      }
      at += sc.dim;
    }
    scale(z.data(), lambda.data());
    return true;
  }

  /// out = W x
  void scale(const double* x, double* out) const {
    for (int i = 0; i < n_lin; ++i) out[i] = lp_w[i] * x[i];
    int at = n_lin;
    for (const auto& sc : socs) {
      const double* xk = x + at;
      double* ok = out + at;
      const double zeta = kn::dot(sc.q.data(), xk + 1, sc.dim - 1);
      const double factor = xk[0] + zeta / (1.0 + sc.a);
      ok[0] = sc.eta * (sc.a * xk[0] + zeta);
      for (int i = 0; i + 1 < sc.dim; ++i) ok[1 + i] = sc.eta * (xk[1 + i] + factor * sc.q[i]);
      at += sc.dim;
    }
  }

  /// out = W^{-1} x
  void unscale(const double* x, double* out) const {
    for (int i = 0; i < n_lin; ++i) out[i] = x[i] / lp_w[i];
    int at = n_lin;
    for (const auto& sc : socs) {
      const double* xk = x + at;
      double* ok = out + at;
      const double zeta = kn::dot(sc.q.data(), xk + 1, sc.dim - 1);
      const double factor = -xk[0] + zeta / (1.0 + sc.a);
      ok[0] = (sc.a * xk[0] - zeta) / sc.eta;
      for (int i = 0; i + 1 < sc.dim; ++i) ok[1 + i] = (xk[1 + i] + factor * sc.q[i]) / sc.eta;
      at += sc.dim;
    }
  }

  /// w = u o v (Jordan product); returns sum of |head| entries.
  double conic_product(const std::vector<double>& u, const std::vector<double>& v,
                       std::vector<double>& w) const {
    double mu = 0.0;
    for (int i = 0; i < n_lin; ++i) {
      w[i] = u[i] * v[i];
      mu += std::abs(w[i]);
    }
    int at = n_lin;
    for (const auto& sc : socs) {
      const double u0 = u[at];
      const double v0 = v[at];
      w[at] = kn::dot(u.data() + at, v.data() + at, sc.dim);
      mu += std::abs(w[at]);
      for (int i = 1; i < sc.dim; ++i) w[at + i] = u0 * v[at + i] + v0 * u[at + i];
      at += sc.dim;
    }
    return mu;
  }

  /// v = u \ w (inverse Jordan product).
  void conic_division(const std::vector<double>& u, const std::vector<double>& w,
                      std::vector<double>& v) const {
    for (int i = 0; i < n_lin; ++i) v[i] = w[i] / u[i];
    int at = n_lin;
    for (const auto& sc : socs) {
      const double u0 = u[at];
      const double w0 = w[at];
      const double rho = u0 * u0 - kn::norm2_sq(u.data() + at + 1, sc.dim - 1);
      const double zeta = kn::dot(u.data() + at + 1, w.data() + at + 1, sc.dim - 1);
      const double factor = (zeta / u0 - w0) / rho;
      v[at] = (u0 * w0 - zeta) / rho;
      for (int i = 1; i < sc.dim; ++i) v[at + i] = factor * u[at + i] + w[at + i] / u0;
      at += sc.dim;
    }
  }

  void bring_to_cone(const std::vector<double>& r, std::vector<double>& s,
                     double margin) const {
    double alpha = -margin;
    for (int i = 0; i < n_lin; ++i) {
      if (r[i] <= 0.0 && -r[i] > alpha) alpha = -r[i];
    }
    int at = n_lin;
    for (const auto& sc : socs) {
      const double cres =
          r[at] - std::sqrt(kn::norm2_sq(r.data() + at + 1, sc.dim - 1));
      if (cres <= 0.0 && -cres > alpha) alpha = -cres;
      at += sc.dim;
    }
    alpha += 1.0;
    s = r;
    for (int i = 0; i < n_lin; ++i) s[i] += alpha;
    at = n_lin;
    for (const auto& sc : socs) {
      s[at] += alpha;
      at += sc.dim;
    }
  }

  /// Largest step alpha with lambda + alpha*ds and lambda + alpha*dz in cone,
  /// including the tau/kappa pair.
  double line_search(const std::vector<double>& lambda, const std::vector<double>& ds,
                     const std::vector<double>& dz, double tau, double dtau, double kap,
                     double dkap, double step_min, double step_max) const {
    double alpha = 10.0;
    if (n_lin > 0) {
      double rhomin = std::numeric_limits<double>::max();
      double sigmamin = std::numeric_limits<double>::max();
      for (int i = 0; i < n_lin; ++i) {
        rhomin = std::min(rhomin, ds[i] / lambda[i]);
        sigmamin = std::min(sigmamin, dz[i] / lambda[i]);
      }
      const double eps = 1e-13;
      if (-sigmamin > -rhomin) {
        alpha = sigmamin < 0.0 ? 1.0 / (-sigmamin) : 1.0 / eps;
      } else {
        alpha = rhomin < 0.0 ? 1.0 / (-rhomin) : 1.0 / eps;
      }
    }
    const double tau_cap = -tau / dtau;
    const double kap_cap = -kap / dkap;
    if (tau_cap > 0.0 && tau_cap < alpha) alpha = tau_cap;
    if (kap_cap > 0.0 && kap_cap < alpha) alpha = kap_cap;

    int at = n_lin;
    std::vector<double> rho, sigma;
    for (const auto& sc : socs) {
      const double lk0 = lambda[at];
      const double lknorm2 = lk0 * lk0 - kn::norm2_sq(lambda.data() + at + 1, sc.dim - 1);
      if (lknorm2 <= 0.0) {
        at += sc.dim;
        continue;
      }
      const double lknorm = std::sqrt(lknorm2);
      const double inv = 1.0 / lknorm;
      // lkbar = lambda_k / lknorm
      const double lkbar0 = lk0 * inv;
      const double lkbar_ds =
          lkbar0 * ds[at] - inv * kn::dot(lambda.data() + at + 1, ds.data() + at + 1, sc.dim - 1);
      const double lkbar_dz =
          lkbar0 * dz[at] - inv * kn::dot(lambda.data() + at + 1, dz.data() + at + 1, sc.dim - 1);

      rho.assign(sc.dim, 0.0);
      sigma.assign(sc.dim, 0.0);
      rho[0] = inv * lkbar_ds;
      sigma[0] = inv * lkbar_dz;
      const double fac_s = (lkbar_ds + ds[at]) / (lkbar0 + 1.0);
      const double fac_z = (lkbar_dz + dz[at]) / (lkbar0 + 1.0);
      double rho_tail_sq = 0.0;
      double sigma_tail_sq = 0.0;
      for (int i = 1; i < sc.dim; ++i) {
        const double lb = lambda[at + i] * inv;
        const double rv = inv * (ds[at + i] - fac_s * lb);
        const double sv = inv * (dz[at + i] - fac_z * lb);
        rho_tail_sq += rv * rv;
        sigma_tail_sq += sv * sv;
      }
      const double rhonorm = std::sqrt(rho_tail_sq) - rho[0];
      const double sigmanorm = std::sqrt(sigma_tail_sq) - sigma[0];
      const double conic_step = std::max({0.0, sigmanorm, rhonorm});
      if (conic_step != 0.0) alpha = std::min(alpha, 1.0 / conic_step);
      at += sc.dim;
    }
    return std::clamp(alpha, step_min, step_max);
  }
};

// ---------------------------------------------------------------------------
// Dense KKT path: the cone block is eliminated per block, leaving the
// quasidefinite system [G'W^-2G + eps*I, A'; A, -eps*I] factored by a
// blocked LDL' without pivoting.
// ---------------------------------------------------------------------------

class DenseKkt {
 public:
  DenseKkt(const SparseMatrix& A, const SparseMatrix& G, const ConeLayout& layout)
      : A_(A), G_(G), n_(G.cols()), p_(A.rows()), m_(G.rows()), N_(n_ + p_) {
    M_.assign(static_cast<std::size_t>(N_) * N_, 0.0);
    d_.assign(N_, 0.0);
    // Column support of each SOC block.
    int row0 = layout.n_nonneg;
    blocks_.reserve(layout.soc_dims.size());
    std::size_t max_support = 1;
    int max_dim = 1;
    for (int dim : layout.soc_dims) {
      Block blk;
      blk.row0 = row0;
      blk.dim = dim;
      for (int r = row0; r < row0 + dim; ++r) {
        blk.support.insert(blk.support.end(), G.row_cols(r), G.row_cols(r) + G.row_size(r));
      }
      std::sort(blk.support.begin(), blk.support.end());
      blk.support.erase(std::unique(blk.support.begin(), blk.support.end()),
                        blk.support.end());
      max_support = std::max(max_support, blk.support.size());
      max_dim = std::max(max_dim, dim);
      row0 += dim;
      blocks_.push_back(std::move(blk));
    }
    gblk_.assign(static_cast<std::size_t>(max_dim) * max_support, 0.0);
    ublk_.assign(max_support * static_cast<std::size_t>(max_dim), 0.0);
    tblk_.assign(max_support * max_support, 0.0);
    coltmp_.assign(max_dim, 0.0);
    colout_.assign(max_dim, 0.0);
    tmp_m_.assign(m_, 0.0);
    tmp_m2_.assign(m_, 0.0);
    rhs_.assign(N_, 0.0);
  }

  int dimension() const { return N_; }
  int pivot_bumps() const { return pivot_bumps_; }

  void factor(const ConeState& W, double reg) {
    std::memset(M_.data(), 0, M_.size() * sizeof(double));
    auto row = [this](int r) { return M_.data() + static_cast<std::size_t>(r) * N_; };

    // Linear rows: H += (1/v_r) g_r g_r'.
    for (int r = 0; r < W.n_lin; ++r) {
      const double wr = 1.0 / W.lp_v[r];
      const int sz = G_.row_size(r);
      const int* cols = G_.row_cols(r);
      const double* vals = G_.row_vals(r);
      for (int i = 0; i < sz; ++i) {
        double* mrow = row(cols[i]);
        const double vi = wr * vals[i];
        for (int j = i; j < sz; ++j) mrow[cols[j]] += vi * vals[j];
      }
    }

    // SOC blocks: H_support += (W_k^-1 G_k)'(W_k^-1 G_k).
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const Block& blk = blocks_[k];
      const auto& sc = W.socs[k];
      const int nsup = static_cast<int>(blk.support.size());
      if (nsup == 0) continue;
      std::fill(gblk_.begin(), gblk_.begin() + static_cast<std::size_t>(blk.dim) * nsup, 0.0);
      for (int dlocal = 0; dlocal < blk.dim; ++dlocal) {
        const int r = blk.row0 + dlocal;
        const int sz = G_.row_size(r);
        const int* cols = G_.row_cols(r);
        const double* vals = G_.row_vals(r);
        for (int i = 0; i < sz; ++i) {
          const int local = static_cast<int>(
              std::lower_bound(blk.support.begin(), blk.support.end(), cols[i]) -
              blk.support.begin());
          gblk_[static_cast<std::size_t>(dlocal) * nsup + local] = vals[i];
        }
      }
      // Apply W^{-1} column by column; store transposed (support x dim).
      for (int clocal = 0; clocal < nsup; ++clocal) {
        for (int dlocal = 0; dlocal < blk.dim; ++dlocal) {
          coltmp_[dlocal] = gblk_[static_cast<std::size_t>(dlocal) * nsup + clocal];
        }
        soc_unscale(sc, coltmp_.data(), colout_.data());
        for (int dlocal = 0; dlocal < blk.dim; ++dlocal) {
          ublk_[static_cast<std::size_t>(clocal) * blk.dim + dlocal] = colout_[dlocal];
        }
      }
      std::fill(tblk_.begin(), tblk_.begin() + static_cast<std::size_t>(nsup) * nsup, 0.0);
      kn::gemm_nt_acc(tblk_.data(), nsup, ublk_.data(), blk.dim, ublk_.data(), blk.dim,
                      nsup, nsup, blk.dim, 1.0);
      for (int i = 0; i < nsup; ++i) {
        double* mrow = row(blk.support[i]);
        for (int j = i; j < nsup; ++j) {
          mrow[blk.support[j]] += tblk_[static_cast<std::size_t>(i) * nsup + j];
        }
      }
    }

    // Equality block and regularization.
    for (int r = 0; r < p_; ++r) {
      const int sz = A_.row_size(r);
      const int* cols = A_.row_cols(r);
      const double* vals = A_.row_vals(r);
      for (int i = 0; i < sz; ++i) M_[static_cast<std::size_t>(cols[i]) * N_ + (n_ + r)] = vals[i];
      M_[static_cast<std::size_t>(n_ + r) * N_ + (n_ + r)] = -reg;
    }
    for (int j = 0; j < n_; ++j) M_[static_cast<std::size_t>(j) * N_ + j] += reg;

    ldl_factor();
  }

  /// Solves the full KKT system
  ///   [0 A' G'; A 0 0; G 0 -W'W] [dx; dy; dz] = [bx; by; bz]
  /// through the reduced factorization, with iterative refinement against
  /// the unregularized system. Returns the refinement count.
  int solve(const ConeState& W, const double* bx, const double* by, const double* bz,
            double* dx, double* dy, double* dz, int nitref, double stop_tol) const {
    double bnorm = 0.0;
    for (int i = 0; i < n_; ++i) bnorm = std::max(bnorm, std::abs(bx[i]));
    for (int i = 0; i < p_; ++i) bnorm = std::max(bnorm, std::abs(by[i]));
    for (int i = 0; i < m_; ++i) bnorm = std::max(bnorm, std::abs(bz[i]));
    const double threshold = (1.0 + bnorm) * stop_tol;

    solve_reduced(W, bx, by, bz, dx, dy, dz);

    std::vector<double> ex(n_), ey(p_), ez(m_);
    std::vector<double> cx(n_), cy(p_), cz(m_);
    double prev_err = std::numeric_limits<double>::max();
    int k = 0;
    for (; k <= nitref; ++k) {
      // Residual of the true KKT system.
      std::copy(bx, bx + n_, ex.begin());
      A_.multiply_add_transpose(dy, ex.data(), -1.0);
      G_.multiply_add_transpose(dz, ex.data(), -1.0);
      std::copy(by, by + p_, ey.begin());
      A_.multiply_add(dx, ey.data(), -1.0);
      std::copy(bz, bz + m_, ez.begin());
      G_.multiply_add(dx, ez.data(), -1.0);
      W.scale(dz, tmp_m_.data());
      W.scale(tmp_m_.data(), tmp_m2_.data());
      for (int i = 0; i < m_; ++i) ez[i] += tmp_m2_[i];

      double err = 0.0;
      for (double v : ex) err = std::max(err, std::abs(v));
      for (double v : ey) err = std::max(err, std::abs(v));
      for (double v : ez) err = std::max(err, std::abs(v));

      if (k > 0 && err > prev_err) {
        // Refinement made things worse; undo the last correction.
        kn::axpy(-1.0, cx.data(), dx, n_);
        kn::axpy(-1.0, cy.data(), dy, p_);
        kn::axpy(-1.0, cz.data(), dz, m_);
        --k;
        break;
      }
      if (err <= threshold || k == nitref) break;
      prev_err = err;

      solve_reduced(W, ex.data(), ey.data(), ez.data(), cx.data(), cy.data(), cz.data());
      kn::axpy(1.0, cx.data(), dx, n_);
      kn::axpy(1.0, cy.data(), dy, p_);
      kn::axpy(1.0, cz.data(), dz, m_);
    }
    return k;
  }

 private:
  struct Block {
    int row0 = 0;
    int dim = 0;
    std::vector<int> support;
  };

  static void soc_unscale(const ConeState::Soc& sc, const double* x, double* out) {
    const double zeta = kn::dot(sc.q.data(), x + 1, sc.dim - 1);
    const double factor = -x[0] + zeta / (1.0 + sc.a);
    out[0] = (sc.a * x[0] - zeta) / sc.eta;
    for (int i = 0; i + 1 < sc.dim; ++i) out[1 + i] = (x[1 + i] + factor * sc.q[i]) / sc.eta;
  }

  void solve_reduced(const ConeState& W, const double* bx, const double* by,
                     const double* bz, double* dx, double* dy, double* dz) const {
    // rhs_x = bx + G' W^{-2} bz ; rhs_y = by
    W.unscale(bz, tmp_m_.data());
    W.unscale(tmp_m_.data(), tmp_m2_.data());
    std::copy(bx, bx + n_, rhs_.begin());
    G_.multiply_add_transpose(tmp_m2_.data(), rhs_.data(), 1.0);
    std::copy(by, by + p_, rhs_.begin() + n_);
    ldl_solve(rhs_.data());
    std::copy(rhs_.begin(), rhs_.begin() + n_, dx);
    std::copy(rhs_.begin() + n_, rhs_.begin() + N_, dy);
    // dz = W^{-2} (G dx - bz)
    for (int i = 0; i < m_; ++i) tmp_m_[i] = -bz[i];
    G_.multiply_add(dx, tmp_m_.data(), 1.0);
    W.unscale(tmp_m_.data(), tmp_m2_.data());
    W.unscale(tmp_m2_.data(), dz);
  }

  void ldl_factor() {
    constexpr int kPanel = 48;
    const int N = N_;
    auto row = [this, N](int r) { return M_.data() + static_cast<std::size_t>(r) * N; };

    // Per-column pivot floors: the assembled diagonal spans many orders of
    // magnitude near convergence, so a single global floor would wipe out
    // small but legitimate pivots.
    pivot_floor_.resize(N);
    for (int j = 0; j < N; ++j) {
      pivot_floor_[j] = 1e-13 * std::max(std::abs(row(j)[j]), 1e-10);
    }
    pivot_bumps_ = 0;

    std::vector<double>& w1 = panel_w1_;
    std::vector<double>& w2 = panel_w2_;

    for (int p0 = 0; p0 < N; p0 += kPanel) {
      const int pe = std::min(p0 + kPanel, N);
      // Factor the panel rows against each other.
      for (int j = p0; j < pe; ++j) {
        double* rj = row(j);
        for (int k = p0; k < j; ++k) {
          const double* rk = row(k);
          kn::axpy(-d_[k] * rk[j], rk + j, rj + j, N - j);
        }
        double dj = rj[j];
        const double sgn = (j < n_) ? 1.0 : -1.0;
        if (sgn * dj < pivot_floor_[j]) {
          dj = sgn * std::max(std::abs(dj), pivot_floor_[j]);
          ++pivot_bumps_;
        }
        d_[j] = dj;
        rj[j] = dj;
        kn::scal(1.0 / dj, rj + j + 1, N - j - 1);
      }
      const int nbk = pe - p0;
      const int tail = N - pe;
      if (tail <= 0) continue;
      // Trailing update M[i][j] -= sum_k d_k U[k][i] U[k][j], i,j >= pe.
      w1.resize(static_cast<std::size_t>(tail) * nbk);
      w2.resize(static_cast<std::size_t>(tail) * nbk);
      for (int k = 0; k < nbk; ++k) {
        const double* rk = row(p0 + k) + pe;
        const double dk = d_[p0 + k];
        for (int i = 0; i < tail; ++i) {
          const double u = rk[i];
          w2[static_cast<std::size_t>(i) * nbk + k] = u;
          w1[static_cast<std::size_t>(i) * nbk + k] = dk * u;
        }
      }
      constexpr int kStrip = 96;
      for (int i0 = 0; i0 < tail; i0 += kStrip) {
        const int rows = std::min(kStrip, tail - i0);
        kn::gemm_nt_acc(row(pe + i0) + pe + i0, N,
                        w1.data() + static_cast<std::size_t>(i0) * nbk, nbk,
                        w2.data() + static_cast<std::size_t>(i0) * nbk, nbk,
                        rows, tail - i0, nbk, -1.0);
      }
    }
  }

  void ldl_solve(double* b) const {
    const int N = N_;
    const double* M = M_.data();
    // U' v = b (forward, right-looking so row tails stay contiguous)
    for (int k = 0; k < N - 1; ++k) {
      kn::axpy(-b[k], M + static_cast<std::size_t>(k) * N + k + 1, b + k + 1, N - k - 1);
    }
    for (int k = 0; k < N; ++k) b[k] /= d_[k];
    // U x = v (backward)
    for (int i = N - 2; i >= 0; --i) {
      b[i] -= kn::dot(M + static_cast<std::size_t>(i) * N + i + 1, b + i + 1, N - i - 1);
    }
  }

  const SparseMatrix& A_;
  const SparseMatrix& G_;
  int n_, p_, m_, N_;
  std::vector<double> M_;
  std::vector<double> d_;
  std::vector<double> pivot_floor_;
  std::vector<Block> blocks_;
  int pivot_bumps_ = 0;
  // Scratch buffers (mutable: solve() is logically const).
  mutable std::vector<double> gblk_, ublk_, tblk_, coltmp_, colout_;
  mutable std::vector<double> tmp_m_, tmp_m2_, rhs_;
  std::vector<double> panel_w1_, panel_w2_;
};

// ---------------------------------------------------------------------------
// Homogeneous self-dual embedding.
// ---------------------------------------------------------------------------

struct IterateStats {
  double gap = 0.0;
  double mu = 0.0;
  double kapovert = 0.0;
  double pcost = 0.0;
  double dcost = 0.0;
  std::optional<double> relgap;
  double pres = 0.0;
  double dres = 0.0;
  std::optional<double> pinfres;
  std::optional<double> dinfres;
  int iter = 0;

  bool better_than(const IterateStats& other) const {
    if (pinfres.has_value() && kapovert > 1.0) {
      if (other.pinfres.has_value()) {
        return gap > 0.0 && other.gap > 0.0 && gap < other.gap && pinfres.value() > 0.0 &&
               pinfres.value() < other.pres && mu > 0.0 && mu < other.mu;
      }
      return gap > 0.0 && other.gap > 0.0 && gap < other.gap && mu > 0.0 && mu < other.mu;
    }
    return gap > 0.0 && other.gap > 0.0 && gap < other.gap && pres > 0.0 &&
           pres < other.pres && dres > 0.0 && dres < other.dres && kapovert > 0.0 &&
           kapovert < other.kapovert && mu > 0.0 && mu < other.mu;
  }
};

struct Iterate {
  std::vector<double> x, y, z, s, lambda;
  double tau = 1.0;
  double kap = 1.0;
  IterateStats info;
};

enum class Verdict { not_converged, optimal, optimal_inacc, pinf, pinf_inacc, dinf, dinf_inacc };

class HsdSolver {
 public:
  HsdSolver(const ConicProgram& prog, const SolverSettings& settings)
      : settings_(settings),
        n_(prog.n),
        p_(prog.A.rows()),
        m_(prog.G.rows()),
        layout_(prog.cones),
        A_(prog.A),
        G_(prog.G),
        c_(prog.c),
        b_(prog.b),
        h_(prog.h) {}

  ConicSolution run(const ConicProgram& prog) {
    const auto t0 = std::chrono::steady_clock::now();
    ConicSolution out;
    out.x.assign(n_, 0.0);
    out.y.assign(p_, 0.0);
    out.z.assign(m_, 0.0);
    out.s.assign(m_, 0.0);

    equilibrate();

    DenseKkt kkt(A_, G_, layout_);
    ConeState W = ConeState::identity(layout_);

    resx0_ = std::max(1.0, norm2(c_));
    resy0_ = std::max(1.0, norm2(b_));
    resz0_ = std::max(1.0, norm2(h_));

    Iterate w;
    w.x.assign(n_, 0.0);
    w.y.assign(p_, 0.0);
    w.z.assign(m_, 0.0);
    w.s.assign(m_, 0.0);
    w.lambda.assign(m_, 0.0);

    std::vector<double> dx1(n_), dy1(p_), dz1(m_);
    std::vector<double> dx2(n_), dy2(p_), dz2(m_);
    std::vector<double> bx(n_), by(p_), bz(m_);
    std::vector<double> neg_c(n_);
    for (int i = 0; i < n_; ++i) neg_c[i] = -c_[i];

    // Initial point from two least-squares solves with W = I.
    kkt.factor(W, settings_.static_reg);
    std::fill(bx.begin(), bx.end(), 0.0);
    kkt.solve(W, bx.data(), b_.data(), h_.data(), dx1.data(), dy1.data(), dz1.data(),
              settings_.refine_iters, settings_.refine_stop);
    w.x = dx1;
    {
      std::vector<double> neg_dz(m_);
      for (int i = 0; i < m_; ++i) neg_dz[i] = -dz1[i];
      W.bring_to_cone(neg_dz, w.s, settings_.step_frac);
    }
    std::fill(by.begin(), by.end(), 0.0);
    std::fill(bz.begin(), bz.end(), 0.0);
    kkt.solve(W, neg_c.data(), by.data(), bz.data(), dx2.data(), dy2.data(), dz2.data(),
              settings_.refine_iters, settings_.refine_stop);
    w.y = dy2;
    W.bring_to_cone(dz2, w.z, settings_.step_frac);
    w.tau = 1.0;
    w.kap = 1.0;

    Iterate best = w;
    bool have_best = false;
    double pres_prev = std::numeric_limits<double>::max();
    double last_step = 0.0;

    Verdict verdict = Verdict::not_converged;
    std::string stop_reason;

    std::vector<double> W_dz(m_), ds_by_W(m_), lamds(m_), ds1(m_), ds2(m_), dsfinal(m_);

    int iter = 0;
    for (iter = 0; iter <= settings_.max_iters; ++iter) {
      compute_residuals(w);
      update_statistics(w, iter);

      if (settings_.verbose) {
        std::printf("%3d  pcost %+9.3e dcost %+9.3e gap %8.2e pres %8.2e dres %8.2e k/t %8.2e mu %8.2e\n",
                    iter, w.info.pcost, w.info.dcost, w.info.gap, w.info.pres,
                    w.info.dres, w.info.kapovert, w.info.mu);
      }

      // Divergence safeguard: fall back to the best iterate seen.
      if (iter > 0 &&
          (w.info.pres > settings_.divergence_guard * pres_prev || w.info.gap < 0.0)) {
        w = best;
        verdict = check_exit(w, true);
        stop_reason = "unreliable search direction; recovered best iterate";
        break;
      }
      pres_prev = w.info.pres;

      verdict = check_exit(w, false);
      if (verdict != Verdict::not_converged) break;

      if (iter > 0 && last_step <= settings_.step_min * settings_.step_frac * 1.0000001) {
        w = best;
        verdict = check_exit(w, true);
        stop_reason = "no further progress possible";
        break;
      }
      if (iter == settings_.max_iters) {
        if (have_best && !w.info.better_than(best.info)) w = best;
        verdict = check_exit(w, true);
        stop_reason = "iteration limit reached";
        break;
      }
      if (std::isnan(w.info.pcost)) {
        if (have_best) w = best;
        verdict = check_exit(w, true);
        stop_reason = "numerical breakdown (NaN)";
        break;
      }

      if (!have_best || w.info.better_than(best.info)) {
        best = w;
        have_best = true;
      }

      if (!W.update(w.s, w.z, w.lambda)) {
        w = best;
        verdict = check_exit(w, true);
        stop_reason = "iterate left the cone";
        break;
      }
      kkt.factor(W, settings_.static_reg);

      auto finite = [](double v) { return std::isfinite(v); };
      auto finite_vec = [](const std::vector<double>& v) {
        return std::isfinite(kn::norm2_sq(v.data(), v.size()));
      };

      // Static-RHS solve, reused by both direction solves.
      kkt.solve(W, neg_c.data(), b_.data(), h_.data(), dx1.data(), dy1.data(), dz1.data(),
                settings_.refine_iters, settings_.refine_stop);

      // Affine direction.
      for (int i = 0; i < n_; ++i) bx[i] = rx_[i];
      for (int i = 0; i < p_; ++i) by[i] = -ry_[i];
      for (int i = 0; i < m_; ++i) bz[i] = w.s[i] - rz_[i];
      kkt.solve(W, bx.data(), by.data(), bz.data(), dx2.data(), dy2.data(), dz2.data(),
                settings_.refine_iters, settings_.refine_stop);

      const double dtau_denom =
          w.kap / w.tau - vdot(c_, dx1) - vdot(b_, dy1) - vdot(h_, dz1);
      const double dtauaff =
          (rt_ - w.kap + vdot(c_, dx2) + vdot(b_, dy2) + vdot(h_, dz2)) / dtau_denom;
      if (!finite(dtauaff) || !finite_vec(dx2) || !finite_vec(dz2)) {
        w = best;
        verdict = check_exit(w, true);
        stop_reason = "search direction broke down";
        break;
      }

      kn::axpy(dtauaff, dz1.data(), dz2.data(), m_);
      W.scale(dz2.data(), W_dz.data());
      for (int i = 0; i < m_; ++i) ds_by_W[i] = -W_dz[i] - w.lambda[i];
      const double dkapaff = -w.kap - w.kap / w.tau * dtauaff;

      const double step_aff =
          W.line_search(w.lambda, ds_by_W, W_dz, w.tau, dtauaff, w.kap, dkapaff,
                        settings_.step_min, settings_.step_max);
      const double sigma = std::clamp(std::pow(1.0 - step_aff, 3), settings_.sigma_min,
                                      settings_.sigma_max);

      // Combined direction.
      const double sigmamu = sigma * w.info.mu;
      W.conic_product(w.lambda, w.lambda, ds1);
      W.conic_product(ds_by_W, W_dz, ds2);
      for (int i = 0; i < m_; ++i) ds1[i] += ds2[i];
      for (int i = 0; i < layout_.n_nonneg; ++i) ds1[i] -= sigmamu;
      {
        int at = layout_.n_nonneg;
        for (int dim : layout_.soc_dims) {
          ds1[at] -= sigmamu;
          at += dim;
        }
      }
      W.conic_division(w.lambda, ds1, lamds);
      W.scale(lamds.data(), ds1.data());  // ds1 = W (lambda \ ds)

      const double one_minus_sigma = 1.0 - sigma;
      for (int i = 0; i < n_; ++i) bx[i] = one_minus_sigma * rx_[i];
      for (int i = 0; i < p_; ++i) by[i] = -one_minus_sigma * ry_[i];
      for (int i = 0; i < m_; ++i) bz[i] = -one_minus_sigma * rz_[i] + ds1[i];
      kkt.solve(W, bx.data(), by.data(), bz.data(), dx2.data(), dy2.data(), dz2.data(),
                settings_.refine_iters, settings_.refine_stop);

      const double bkap = w.kap * w.tau + dkapaff * dtauaff - sigmamu;
      const double dtau = (one_minus_sigma * rt_ - bkap / w.tau + vdot(c_, dx2) +
                           vdot(b_, dy2) + vdot(h_, dz2)) /
                          dtau_denom;
      kn::axpy(dtau, dx1.data(), dx2.data(), n_);
      kn::axpy(dtau, dy1.data(), dy2.data(), p_);
      kn::axpy(dtau, dz1.data(), dz2.data(), m_);

      W.scale(dz2.data(), W_dz.data());
      for (int i = 0; i < m_; ++i) ds_by_W[i] = -(lamds[i] + W_dz[i]);
      const double dkap = -(bkap + w.kap * dtau) / w.tau;
      if (!finite(dtau) || !finite(dkap) || !finite_vec(dx2) || !finite_vec(ds_by_W)) {
        w = best;
        verdict = check_exit(w, true);
        stop_reason = "search direction broke down";
        break;
      }

      const double step =
          settings_.step_frac * W.line_search(w.lambda, ds_by_W, W_dz, w.tau, dtau,
                                              w.kap, dkap, settings_.step_min,
                                              settings_.step_max);
      last_step = step;
      W.scale(ds_by_W.data(), dsfinal.data());

      kn::axpy(step, dx2.data(), w.x.data(), n_);
      kn::axpy(step, dy2.data(), w.y.data(), p_);
      kn::axpy(step, dz2.data(), w.z.data(), m_);
      kn::axpy(step, dsfinal.data(), w.s.data(), m_);
      w.kap += step * dkap;
      w.tau += step * dtau;
    }

    // Backscale into original units.
    for (int i = 0; i < n_; ++i) out.x[i] = w.x[i] / (ex_[i] * w.tau);
    for (int i = 0; i < p_; ++i) out.y[i] = w.y[i] / (eA_[i] * w.tau);
    for (int i = 0; i < m_; ++i) out.z[i] = w.z[i] / (eG_[i] * w.tau);
    for (int i = 0; i < m_; ++i) out.s[i] = w.s[i] * eG_[i] / w.tau;

    out.primal_obj = kn::dot(prog.c.data(), out.x.data(), n_);
    out.dual_obj = 0.0;
    for (int i = 0; i < p_; ++i) out.dual_obj -= prog.b[i] * out.y[i];
    for (int i = 0; i < m_; ++i) out.dual_obj -= prog.h[i] * out.z[i];
    out.gap = w.info.gap;
    out.pres = w.info.pres;
    out.dres = w.info.dres;
    out.iterations = iter;

    switch (verdict) {
      case Verdict::optimal:
        out.status = SolveStatus::optimal;
        out.message = "converged";
        break;
      case Verdict::optimal_inacc:
        out.status = SolveStatus::optimal;
        out.message = "converged (reduced accuracy)";
        break;
      case Verdict::pinf:
      case Verdict::pinf_inacc:
        out.status = SolveStatus::primal_infeasible;
        out.message = "primal infeasibility certificate found";
        break;
      case Verdict::dinf:
      case Verdict::dinf_inacc:
        out.status = SolveStatus::dual_infeasible;
        out.message = "dual infeasibility certificate found (problem unbounded)";
        break;
      case Verdict::not_converged:
        out.status = (iter >= settings_.max_iters) ? SolveStatus::iteration_limit
                                                   : SolveStatus::numerical_failure;
        out.message = stop_reason.empty() ? "did not converge" : stop_reason;
        break;
    }
    if (!stop_reason.empty() && out.status != SolveStatus::optimal &&
        out.message != stop_reason) {
      out.message = stop_reason + " (" + out.message + ")";
    }
    out.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

 private:
  void equilibrate() {
    ex_.assign(n_, 1.0);
    eA_.assign(p_, 1.0);
    eG_.assign(m_, 1.0);
    std::vector<double> xt(n_), at(p_), gt(m_);
    for (int it = 0; it < settings_.equil_iters; ++it) {
      std::fill(xt.begin(), xt.end(), 0.0);
      std::fill(at.begin(), at.end(), 0.0);
      std::fill(gt.begin(), gt.end(), 0.0);
      A_.max_abs_per_col(xt.data());
      G_.max_abs_per_col(xt.data());
      for (int r = 0; r < p_; ++r) at[r] = A_.max_abs_in_row(r);
      for (int r = 0; r < m_; ++r) gt[r] = G_.max_abs_in_row(r);
      // SOC rows share one factor to preserve the cone.
      int pos = layout_.n_nonneg;
      for (int dim : layout_.soc_dims) {
        double total = 0.0;
        for (int r = pos; r < pos + dim; ++r) total += gt[r];
        for (int r = pos; r < pos + dim; ++r) gt[r] = total;
        pos += dim;
      }
      auto sqrt_op = [](double v) { return std::abs(v) < 1e-6 ? 1.0 : std::sqrt(v); };
      for (auto& v : xt) v = sqrt_op(v);
      for (auto& v : at) v = sqrt_op(v);
      for (auto& v : gt) v = sqrt_op(v);
      for (int r = 0; r < p_; ++r) A_.scale_row(r, 1.0 / at[r]);
      for (int r = 0; r < m_; ++r) G_.scale_row(r, 1.0 / gt[r]);
      std::vector<double> inv_x(n_);
      for (int j = 0; j < n_; ++j) inv_x[j] = 1.0 / xt[j];
      A_.scale_cols(inv_x.data());
      G_.scale_cols(inv_x.data());
      for (int j = 0; j < n_; ++j) ex_[j] *= xt[j];
      for (int r = 0; r < p_; ++r) eA_[r] *= at[r];
      for (int r = 0; r < m_; ++r) eG_[r] *= gt[r];
    }
    for (int j = 0; j < n_; ++j) c_[j] /= ex_[j];
    for (int r = 0; r < p_; ++r) b_[r] /= eA_[r];
    for (int r = 0; r < m_; ++r) h_[r] /= eG_[r];
  }

  void compute_residuals(Iterate& w) {
    rx_.assign(n_, 0.0);
    G_.multiply_add_transpose(w.z.data(), rx_.data(), -1.0);
    if (p_ > 0) A_.multiply_add_transpose(w.y.data(), rx_.data(), -1.0);
    hresx_ = norm2(rx_);
    kn::axpy(-w.tau, c_.data(), rx_.data(), n_);

    ry_.assign(p_, 0.0);
    if (p_ > 0) {
      A_.multiply_add(w.x.data(), ry_.data(), 1.0);
      hresy_ = norm2(ry_);
      kn::axpy(-w.tau, b_.data(), ry_.data(), p_);
    } else {
      hresy_ = 0.0;
    }

    rz_ = w.s;
    G_.multiply_add(w.x.data(), rz_.data(), 1.0);
    hresz_ = norm2(rz_);
    kn::axpy(-w.tau, h_.data(), rz_.data(), m_);

    cx_ = vdot(c_, w.x);
    by_ = p_ > 0 ? vdot(b_, w.y) : 0.0;
    hz_ = vdot(h_, w.z);
    rt_ = w.kap + cx_ + by_ + hz_;

    nx_ = norm2(w.x);
    ny_ = norm2(w.y);
    nz_ = norm2(w.z);
    ns_ = norm2(w.s);
  }

  void update_statistics(Iterate& w, int iter) {
    IterateStats& i = w.info;
    i.iter = iter;
    i.gap = vdot(w.s, w.z);
    i.mu = (i.gap + w.kap * w.tau) / (layout_.degree() + 1);
    i.kapovert = w.kap / w.tau;
    i.pcost = cx_ / w.tau;
    i.dcost = -(hz_ + by_) / w.tau;
    if (i.pcost < 0.0) {
      i.relgap = i.gap / (-i.pcost);
    } else if (i.dcost > 0.0) {
      i.relgap = i.gap / i.dcost;
    } else {
      i.relgap.reset();
    }
    const double nry = p_ > 0 ? norm2(ry_) / std::max(resy0_ + nx_, 1.0) : 0.0;
    const double nrz = norm2(rz_) / std::max(resz0_ + nx_ + ns_, 1.0);
    i.pres = std::max(nry, nrz) / w.tau;
    i.dres = norm2(rx_) / std::max(resx0_ + ny_ + nz_, 1.0) / w.tau;
    i.pinfres.reset();
    i.dinfres.reset();
    if ((hz_ + by_) / std::max(ny_ + nz_, 1.0) < -settings_.reltol) {
      i.pinfres = hresx_ / std::max(ny_ + nz_, 1.0);
    }
    if (cx_ / std::max(nx_, 1.0) < -settings_.reltol) {
      i.dinfres = std::max(hresy_ / std::max(nx_, 1.0), hresz_ / std::max(nx_ + ns_, 1.0));
    }
  }

  Verdict check_exit(const Iterate& w, bool reduced) const {
    const double feastol = reduced ? settings_.feastol_inacc : settings_.feastol;
    const double abstol = reduced ? settings_.abstol_inacc : settings_.abstol;
    const double reltol = reduced ? settings_.reltol_inacc : settings_.reltol;
    const IterateStats& i = w.info;
    if ((-cx_ / w.tau > 0.0 || -by_ - hz_ >= -abstol) && i.pres < feastol &&
        i.dres < feastol && (i.gap < abstol || (i.relgap && *i.relgap < reltol))) {
      return reduced ? Verdict::optimal_inacc : Verdict::optimal;
    }
    if (i.dinfres && *i.dinfres < feastol && w.tau < w.kap) {
      return reduced ? Verdict::dinf_inacc : Verdict::dinf;
    }
    if (i.pinfres) {
      if ((*i.pinfres < feastol && w.tau < w.kap) ||
          (w.tau < feastol && w.kap < feastol && *i.pinfres < feastol)) {
        return reduced ? Verdict::pinf_inacc : Verdict::pinf;
      }
    }
    return Verdict::not_converged;
  }

  SolverSettings settings_;
  int n_, p_, m_;
  ConeLayout layout_;
  SparseMatrix A_, G_;  // equilibrated copies
  std::vector<double> c_, b_, h_;
  std::vector<double> ex_, eA_, eG_;
  std::vector<double> rx_, ry_, rz_;
  double hresx_ = 0.0, hresy_ = 0.0, hresz_ = 0.0;
  double cx_ = 0.0, by_ = 0.0, hz_ = 0.0, rt_ = 0.0;
  double nx_ = 0.0, ny_ = 0.0, nz_ = 0.0, ns_ = 0.0;
  double resx0_ = 1.0, resy0_ = 1.0, resz0_ = 1.0;
};

}  // namespace

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::primal_infeasible: return "infeasible";
    case SolveStatus::dual_infeasible: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration-limit";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings) {
  prog.validate();
  HsdSolver solver(prog, settings);
  return solver.run(prog);
}

}  // namespace cfmimo::conic
