#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "sospack/sdp.h"

namespace sospack {

void LinearFunctional::AddBlockTerm(int block, int row, int col,
                                    double coefficient) {
  if (row > col) std::swap(row, col);
  block_terms.push_back({block, row, col, coefficient});
}

void LinearFunctional::AddScalarTerm(int index, double coefficient) {
  scalar_terms.push_back({index, coefficient});
}

double LinearFunctional::Evaluate(const std::vector<Eigen::MatrixXd>& blocks,
                                  const Eigen::VectorXd& scalars) const {
  double v = 0.0;
  for (const auto& t : block_terms) {
    const auto& b = blocks.at(t.block);
    v += t.row == t.col ? t.coefficient * b(t.row, t.col)
                        : t.coefficient * (b(t.row, t.col) + b(t.col, t.row));
  }
  for (const auto& t : scalar_terms) v += t.coefficient * scalars[t.index];
  return v;
}

int SdpProblem::AddPsdBlock(int size) {
  if (size < 1) throw std::invalid_argument("AddPsdBlock: size must be >= 1");
  psd_blocks.push_back(size);
  return static_cast<int>(psd_blocks.size()) - 1;
}

int SdpProblem::AddFreeScalar() { return free_scalars++; }

void SdpProblem::Validate() const {
  for (int s : psd_blocks) {
    if (s < 1) throw std::invalid_argument("SdpProblem: block size < 1");
  }
  if (free_scalars < 0) throw std::invalid_argument("SdpProblem: negative scalar count");
  auto check = [&](const LinearFunctional& f, const std::string& where) {
    for (const auto& t : f.block_terms) {
      if (t.block < 0 || t.block >= static_cast<int>(psd_blocks.size())) {
        throw std::invalid_argument(where + ": block index out of range");
      }
      const int n = psd_blocks[t.block];
      if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n || t.row > t.col) {
        throw std::invalid_argument(where + ": entry out of range or below diagonal");
      }
      if (!std::isfinite(t.coefficient)) throw std::invalid_argument(where + ": non-finite");
    }
    for (const auto& t : f.scalar_terms) {
      if (t.index < 0 || t.index >= free_scalars) {
        throw std::invalid_argument(where + ": scalar index out of range");
      }
      if (!std::isfinite(t.coefficient)) throw std::invalid_argument(where + ": non-finite");
    }
  };
  for (std::size_t i = 0; i < equalities.size(); ++i) {
    check(equalities[i].lhs, "equality " + std::to_string(i));
    if (!std::isfinite(equalities[i].rhs)) {
      throw std::invalid_argument("equality rhs non-finite");
    }
  }
  check(objective, "objective");
}

std::string SdpProblem::DebugDump() const {
  std::ostringstream os;
  os.precision(17);
  os << "blocks";
  for (int s : psd_blocks) os << " " << s;
  os << "\nscalars " << free_scalars << "\n";
  for (const auto& t : objective.block_terms) {
    os << "obj block " << t.block << " " << t.row << " " << t.col << " " << t.coefficient << "\n";
  }
  for (const auto& t : objective.scalar_terms) {
    os << "obj scalar " << t.index << " " << t.coefficient << "\n";
  }
  for (std::size_t i = 0; i < equalities.size(); ++i) {
    for (const auto& t : equalities[i].lhs.block_terms) {
      os << "eq " << i << " block " << t.block << " " << t.row << " " << t.col << " "
         << t.coefficient << "\n";
    }
    for (const auto& t : equalities[i].lhs.scalar_terms) {
      os << "eq " << i << " scalar " << t.index << " " << t.coefficient << "\n";
    }
    os << "rhs " << i << " " << equalities[i].rhs << "\n";
  }
  return os.str();
}

std::string_view to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kOptimal: return "optimal";
    case SolverStatus::kInfeasible: return "infeasible";
    case SolverStatus::kUnbounded: return "unbounded";
    case SolverStatus::kNumericalTrouble: return "numerical_trouble";
    case SolverStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

SolverStatus SolverStatusFromString(std::string_view name) {
  for (auto s : {SolverStatus::kOptimal, SolverStatus::kInfeasible, SolverStatus::kUnbounded,
                 SolverStatus::kNumericalTrouble, SolverStatus::kIterationLimit}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown solver status: " + std::string(name));
}

double MinEigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("MinEigenvalue: not square");
  if (m.size() == 0) return std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("MinEigenvalue: matrix is not symmetric");
  }
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

struct Entry {
  int p;
  int q;
  double v;
};

// Row i restricted to one block, listed in full symmetric form.
struct BlockRow {
  int row;
  std::vector<Entry> entries;
};

using Blocks = std::vector<Eigen::MatrixXd>;

class IpmState {
 public:
  IpmState(const SdpProblem& problem, const SolverOptions& options)
      : problem_(problem), options_(options) {}

  SdpSolution Run();

 private:
  bool Presolve(SdpSolution& early);
  SdpSolution SolveWithoutBlocks();
  void InitialPoint();

  Eigen::VectorXd ApplyA(const Blocks& w, const Eigen::VectorXd& u) const;
  Blocks ApplyAT(const Eigen::VectorXd& y) const;
  void BuildSchur();
  bool SolveKkt(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                Eigen::VectorXd& dy, Eigen::VectorXd& du) const;
  bool Direction(const Blocks& h, Blocks& dx, Eigen::VectorXd& dy, Blocks& dz,
                 Eigen::VectorXd& du) const;
  double MaxStep(const Blocks& x, const Blocks& dx) const;
  SdpSolution Assemble(SolverStatus status, const Blocks& x, const Eigen::VectorXd& u,
                       int iterations) const;

  const SdpProblem& problem_;
  const SolverOptions& options_;

  // Presolved, scaled data (minimization form).
  int num_blocks_ = 0;
  std::vector<int> sizes_;
  int m_ = 0;
  int f_ = 0;
  std::vector<std::vector<BlockRow>> rows_by_block_;
  Eigen::MatrixXd af_;
  Eigen::VectorXd b_;
  Blocks c_;
  Eigen::VectorXd cf_;
  std::vector<int> kept_rows_;
  std::vector<double> row_scale_;
  double b_scale_ = 1.0;
  double c_scale_ = 1.0;
  double norm_b_ = 0.0;
  double norm_c_ = 0.0;

  // Iterates.
  Blocks x_, z_, zinv_;
  Eigen::VectorXd y_, u_;
  Blocks rd_;
  Eigen::VectorXd rp_, rf_;

  // Rows whose only block terms sit in 1x1 blocks no other row touches have a
  // diagonal Schur part and are eliminated before factorization.
  void FindIsolatedRows();
  std::vector<int> iso_rows_;
  std::vector<int> coupled_rows_;
  Eigen::VectorXd iso_d_;
  Eigen::MatrixXd af_iso_;

  Eigen::MatrixXd kkt_;
  Eigen::PartialPivLU<Eigen::MatrixXd> kkt_lu_;
};

double FrobDot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

Eigen::MatrixXd Sym(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

bool IpmState::Presolve(SdpSolution& early) {
  problem_.Validate();
  num_blocks_ = static_cast<int>(problem_.psd_blocks.size());
  sizes_ = problem_.psd_blocks;
  f_ = problem_.free_scalars;

  // Merge duplicate terms.
  struct MergedRow {
    std::map<std::tuple<int, int, int>, double> block;
    std::map<int, double> scalar;
    double rhs;
  };
  std::vector<MergedRow> merged;
  merged.reserve(problem_.equalities.size());
  for (const auto& eq : problem_.equalities) {
    MergedRow r;
    r.rhs = eq.rhs;
    for (const auto& t : eq.lhs.block_terms) r.block[{t.block, t.row, t.col}] += t.coefficient;
    for (const auto& t : eq.lhs.scalar_terms) r.scalar[t.index] += t.coefficient;
    std::erase_if(r.block, [](const auto& kv) { return kv.second == 0.0; });
    std::erase_if(r.scalar, [](const auto& kv) { return kv.second == 0.0; });
    merged.push_back(std::move(r));
  }

  // Empty rows: drop if consistent, else the problem is infeasible.
  std::vector<int> candidate;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (merged[i].block.empty() && merged[i].scalar.empty()) {
      if (std::abs(merged[i].rhs) > 1e-12) {
        early.status = SolverStatus::kInfeasible;
        return false;
      }
      continue;
    }
    candidate.push_back(static_cast<int>(i));
  }

  // Rows acting only on free scalars may be linearly dependent; keep a basis.
  std::vector<int> free_only;
  for (int i : candidate) {
    if (merged[i].block.empty()) free_only.push_back(i);
  }
  std::vector<bool> drop(merged.size(), false);
  if (!free_only.empty()) {
    const int r = static_cast<int>(free_only.size());
    Eigen::MatrixXd ft = Eigen::MatrixXd::Zero(f_, r);
    Eigen::VectorXd rhs(r);
    for (int k = 0; k < r; ++k) {
      const auto& row = merged[free_only[k]];
      const double nrm = std::sqrt(std::accumulate(
          row.scalar.begin(), row.scalar.end(), 0.0,
          [](double s, const auto& kv) { return s + kv.second * kv.second; }));
      for (const auto& [j, v] : row.scalar) ft(j, k) = v / nrm;
      rhs[k] = row.rhs / nrm;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ft);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    const auto& perm = qr.colsPermutation().indices();
    if (rank < r) {
      Eigen::MatrixXd kept(rank, f_);
      Eigen::VectorXd kept_rhs(rank);
      for (int k = 0; k < rank; ++k) {
        kept.row(k) = ft.col(perm[k]).transpose();
        kept_rhs[k] = rhs[perm[k]];
      }
      const Eigen::VectorXd u = kept.completeOrthogonalDecomposition().solve(kept_rhs);
      for (int k = rank; k < r; ++k) {
        const double res = ft.col(perm[k]).dot(u) - rhs[perm[k]];
        if (std::abs(res) > 1e-8 * (1.0 + std::abs(rhs[perm[k]]))) {
          early.status = SolverStatus::kInfeasible;
          return false;
        }
        drop[free_only[perm[k]]] = true;
      }
    }
  }

  for (int i : candidate) {
    if (!drop[i]) kept_rows_.push_back(i);
  }
  m_ = static_cast<int>(kept_rows_.size());

  // Row scaling and conversion to full symmetric entries.
  rows_by_block_.assign(num_blocks_, {});
  af_ = Eigen::MatrixXd::Zero(m_, f_);
  b_.resize(m_);
  row_scale_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const auto& row = merged[kept_rows_[i]];
    double sq = 0.0;
    for (const auto& [key, v] : row.block) {
      const auto& [blk, p, q] = key;
      sq += (p == q ? 1.0 : 2.0) * v * v;
    }
    for (const auto& [j, v] : row.scalar) sq += v * v;
    const double s = std::sqrt(sq);
    row_scale_[i] = s;
    b_[i] = row.rhs / s;
    std::map<int, std::vector<Entry>> per_block;
    for (const auto& [key, v] : row.block) {
      const auto& [blk, p, q] = key;
      per_block[blk].push_back({p, q, v / s});
      if (p != q) per_block[blk].push_back({q, p, v / s});
    }
    for (auto& [blk, entries] : per_block) {
      rows_by_block_[blk].push_back({i, std::move(entries)});
    }
    for (const auto& [j, v] : row.scalar) af_(i, j) = v / s;
  }

  // Objective in minimization form.
  c_.resize(num_blocks_);
  for (int k = 0; k < num_blocks_; ++k) c_[k] = Eigen::MatrixXd::Zero(sizes_[k], sizes_[k]);
  cf_ = Eigen::VectorXd::Zero(f_);
  for (const auto& t : problem_.objective.block_terms) {
    c_[t.block](t.row, t.col) -= t.coefficient;
    if (t.row != t.col) c_[t.block](t.col, t.row) -= t.coefficient;
  }
  for (const auto& t : problem_.objective.scalar_terms) cf_[t.index] -= t.coefficient;

  // Global scaling of b and C.
  b_scale_ = std::max(1.0, b_.norm());
  double cn = cf_.squaredNorm();
  for (const auto& c : c_) cn += c.squaredNorm();
  c_scale_ = std::max(1.0, std::sqrt(cn));
  b_ /= b_scale_;
  for (auto& c : c_) c /= c_scale_;
  cf_ /= c_scale_;
  norm_b_ = b_.norm();
  norm_c_ = std::sqrt(cn) / c_scale_;
  return true;
}

SdpSolution IpmState::SolveWithoutBlocks() {
  // min cf'u s.t. Af u = b.
  SdpSolution sol;
  sol.block_values = {};
  Eigen::VectorXd u = Eigen::VectorXd::Zero(f_);
  if (m_ > 0) {
    auto cod = af_.completeOrthogonalDecomposition();
    u = cod.solve(b_);
    if ((af_ * u - b_).norm() > 1e-9 * (1.0 + b_.norm())) {
      sol.status = SolverStatus::kInfeasible;
      return Assemble(SolverStatus::kInfeasible, {}, u, 0);
    }
  }
  // Bounded iff cf lies in the row space of Af.
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(f_);
  if (m_ > 0) {
    Eigen::MatrixXd aft = af_.transpose();
    const Eigen::VectorXd y = aft.completeOrthogonalDecomposition().solve(cf_);
    proj = aft * y;
  }
  const bool bounded = (proj - cf_).norm() <= 1e-9 * (1.0 + cf_.norm());
  return Assemble(bounded ? SolverStatus::kOptimal : SolverStatus::kUnbounded, {}, u, 0);
}

void IpmState::InitialPoint() {
  x_.resize(num_blocks_);
  z_.resize(num_blocks_);
  for (int k = 0; k < num_blocks_; ++k) {
    const int n = sizes_[k];
    double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
    double eta = std::max(10.0, std::sqrt(static_cast<double>(n)));
    double cnorm = c_[k].norm();
    for (const auto& br : rows_by_block_[k]) {
      double an = 0.0;
      for (const auto& e : br.entries) an += e.v * e.v;
      an = std::sqrt(an);
      xi = std::max(xi, n * (1.0 + std::abs(b_[br.row])) / (1.0 + an));
      cnorm = std::max(cnorm, an);
    }
    eta = std::max(eta, std::sqrt(static_cast<double>(n)) * (1.0 + cnorm));
    x_[k] = xi * Eigen::MatrixXd::Identity(n, n);
    z_[k] = eta * Eigen::MatrixXd::Identity(n, n);
  }
  y_ = Eigen::VectorXd::Zero(m_);
  u_ = Eigen::VectorXd::Zero(f_);
}

Eigen::VectorXd IpmState::ApplyA(const Blocks& w, const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = af_ * u;
  for (int k = 0; k < num_blocks_; ++k) {
    const auto& wk = w[k];
    for (const auto& br : rows_by_block_[k]) {
      double s = 0.0;
      for (const auto& e : br.entries) s += e.v * wk(e.p, e.q);
      out[br.row] += s;
    }
  }
  return out;
}

Blocks IpmState::ApplyAT(const Eigen::VectorXd& y) const {
  Blocks out(num_blocks_);
  for (int k = 0; k < num_blocks_; ++k) {
    out[k] = Eigen::MatrixXd::Zero(sizes_[k], sizes_[k]);
    for (const auto& br : rows_by_block_[k]) {
      const double yi = y[br.row];
      if (yi == 0.0) continue;
      for (const auto& e : br.entries) out[k](e.p, e.q) += yi * e.v;
    }
  }
  return out;
}

void IpmState::FindIsolatedRows() {
  iso_rows_.clear();
  coupled_rows_.clear();
  std::vector<int> exclusive(m_, 0);
  std::vector<bool> shared(m_, false);
  for (int k = 0; k < num_blocks_; ++k) {
    const auto& rows = rows_by_block_[k];
    if (sizes_[k] == 1 && rows.size() == 1) {
      ++exclusive[rows[0].row];
    } else {
      for (const auto& br : rows) shared[br.row] = true;
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (exclusive[i] > 0 && !shared[i]) {
      iso_rows_.push_back(i);
    } else {
      coupled_rows_.push_back(i);
    }
  }
  af_iso_.resize(static_cast<Eigen::Index>(iso_rows_.size()), f_);
  for (std::size_t i = 0; i < iso_rows_.size(); ++i) af_iso_.row(i) = af_.row(iso_rows_[i]);
}

void IpmState::BuildSchur() {
  if (iso_rows_.size() + coupled_rows_.size() != static_cast<std::size_t>(m_)) FindIsolatedRows();
  const int mc = static_cast<int>(coupled_rows_.size());
  const int dim = mc + f_;
  std::vector<int> pos(m_, -1);
  for (int i = 0; i < mc; ++i) pos[coupled_rows_[i]] = i;
  std::vector<int> iso_pos(m_, -1);
  for (std::size_t i = 0; i < iso_rows_.size(); ++i) iso_pos[iso_rows_[i]] = static_cast<int>(i);
  iso_d_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(iso_rows_.size()));

  kkt_ = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < num_blocks_; ++k) {
    const auto& rows = rows_by_block_[k];
    const auto& x = x_[k];
    const auto& zi = zinv_[k];
    if (sizes_[k] == 1) {
      const double w = x(0, 0) * zi(0, 0);
      if (rows.size() == 1 && iso_pos[rows[0].row] >= 0) {
        const double a = rows[0].entries[0].v;
        iso_d_(iso_pos[rows[0].row]) += a * a * w;
        continue;
      }
      for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a; b < rows.size(); ++b) {
          const double v = rows[a].entries[0].v * rows[b].entries[0].v * w;
          const int ra = pos[rows[a].row], rb = pos[rows[b].row];
          kkt_(ra, rb) += v;
          if (a != b) kkt_(rb, ra) += v;
        }
      }
      continue;
    }
    // M_ab = tr(A_a X A_b Z^{-1}); G_a = X A_a Z^{-1}, M_ab = <A_b, G_a^T>.
    const int n = sizes_[k];
    Eigen::MatrixXd g(n, n);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      g.setZero();
      for (const auto& e : rows[a].entries) {
        g.noalias() += e.v * x.col(e.p) * zi.row(e.q);
      }
      for (std::size_t b = a; b < rows.size(); ++b) {
        double v = 0.0;
        for (const auto& e : rows[b].entries) v += e.v * g(e.q, e.p);
        const int ra = pos[rows[a].row], rb = pos[rows[b].row];
        kkt_(ra, rb) += v;
        if (a != b) kkt_(rb, ra) += v;
      }
    }
  }
  for (int i = 0; i < mc; ++i) kkt_.row(i).tail(f_) = af_.row(coupled_rows_[i]);
  kkt_.bottomLeftCorner(f_, mc) = kkt_.topRightCorner(mc, f_).transpose();
  if (!iso_rows_.empty() && f_ > 0) {
    const Eigen::MatrixXd scaled = iso_d_.cwiseInverse().asDiagonal() * af_iso_;
    kkt_.bottomRightCorner(f_, f_).noalias() -= af_iso_.transpose() * scaled;
  }
  Eigen::MatrixXd reg = kkt_;
  double diag_max = 1.0;
  for (int i = 0; i < mc; ++i) diag_max = std::max(diag_max, kkt_(i, i));
  if (iso_d_.size() > 0) diag_max = std::max(diag_max, iso_d_.maxCoeff());
  const double delta = 1e-14 * diag_max;
  for (int i = 0; i < mc; ++i) reg(i, i) += delta;
  for (int i = mc; i < dim; ++i) reg(i, i) -= delta;
  kkt_lu_.compute(reg);
}

bool IpmState::SolveKkt(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                        Eigen::VectorXd& dy, Eigen::VectorXd& du) const {
  const int mc = static_cast<int>(coupled_rows_.size());
  const int mi = static_cast<int>(iso_rows_.size());
  Eigen::VectorXd r_iso(mi);
  for (int i = 0; i < mi; ++i) r_iso(i) = r1(iso_rows_[i]) / iso_d_(i);
  Eigen::VectorXd rhs(mc + f_);
  for (int i = 0; i < mc; ++i) rhs(i) = r1(coupled_rows_[i]);
  rhs.tail(f_) = r2;
  if (mi > 0 && f_ > 0) rhs.tail(f_).noalias() -= af_iso_.transpose() * r_iso;
  Eigen::VectorXd sol = kkt_lu_.solve(rhs);
  for (int it = 0; it < 2; ++it) {
    const Eigen::VectorXd res = rhs - kkt_ * sol;
    sol += kkt_lu_.solve(res);
  }
  if (!sol.allFinite()) return false;
  dy.resize(m_);
  for (int i = 0; i < mc; ++i) dy(coupled_rows_[i]) = sol(i);
  du = sol.tail(f_);
  if (mi > 0) {
    Eigen::VectorXd y_iso = r_iso;
    if (f_ > 0) y_iso.noalias() -= iso_d_.cwiseInverse().asDiagonal() * (af_iso_ * du);
    for (int i = 0; i < mi; ++i) dy(iso_rows_[i]) = y_iso(i);
  }
  return dy.allFinite();
}

bool IpmState::Direction(const Blocks& h, Blocks& dx, Eigen::VectorXd& dy, Blocks& dz,
                         Eigen::VectorXd& du) const {
  Blocks w(num_blocks_);
  for (int k = 0; k < num_blocks_; ++k) w[k] = h[k] - x_[k] * rd_[k] * zinv_[k];
  const Eigen::VectorXd r1 = rp_ - ApplyA(w, Eigen::VectorXd::Zero(f_));
  if (!SolveKkt(r1, rf_, dy, du)) return false;
  dz = ApplyAT(dy);
  dx.resize(num_blocks_);
  for (int k = 0; k < num_blocks_; ++k) {
    dz[k] = rd_[k] - dz[k];
    dx[k] = Sym(h[k] - x_[k] * dz[k] * zinv_[k]);
  }
  return true;
}

double IpmState::MaxStep(const Blocks& x, const Blocks& dx) const {
  double alpha = std::numeric_limits<double>::infinity();
  for (int k = 0; k < num_blocks_; ++k) {
    double lmin;
    if (sizes_[k] == 1) {
      lmin = dx[k](0, 0) / x[k](0, 0);
    } else {
      Eigen::LLT<Eigen::MatrixXd> llt(x[k]);
      if (llt.info() != Eigen::Success) return 0.0;
      Eigen::MatrixXd w = llt.matrixL().solve(dx[k]);
      w = llt.matrixL().solve(w.transpose()).transpose();
      lmin = MinEigenvalue(Sym(w));
    }
    if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

SdpSolution IpmState::Assemble(SolverStatus status, const Blocks& x, const Eigen::VectorXd& u,
                               int iterations) const {
  SdpSolution sol;
  sol.status = status;
  sol.iterations = iterations;
  sol.block_values.resize(num_blocks_);
  for (int k = 0; k < num_blocks_; ++k) {
    sol.block_values[k] = k < static_cast<int>(x.size())
                              ? Eigen::MatrixXd(Sym(x[k]) * b_scale_)
                              : Eigen::MatrixXd::Zero(sizes_[k], sizes_[k]);
  }
  sol.scalar_values = u.size() == f_ ? Eigen::VectorXd(u * b_scale_) : Eigen::VectorXd::Zero(f_);
  sol.objective_value = problem_.objective.Evaluate(sol.block_values, sol.scalar_values);
  double res = 0.0;
  for (const auto& eq : problem_.equalities) {
    res = std::max(res, std::abs(eq.lhs.Evaluate(sol.block_values, sol.scalar_values) - eq.rhs));
  }
  sol.primal_residual = res;
  return sol;
}

SdpSolution IpmState::Run() {
  SdpSolution early;
  if (!Presolve(early)) {
    num_blocks_ = static_cast<int>(problem_.psd_blocks.size());
    sizes_ = problem_.psd_blocks;
    f_ = problem_.free_scalars;
    return Assemble(early.status, {}, Eigen::VectorXd::Zero(f_), 0);
  }
  if (num_blocks_ == 0) return SolveWithoutBlocks();
  if (m_ == 0 && f_ > 0 && cf_.norm() > 0) {
    return Assemble(SolverStatus::kUnbounded, {}, Eigen::VectorXd::Zero(f_), 0);
  }

  InitialPoint();
  int total_n = 0;
  for (int s : sizes_) total_n += s;

  Blocks best_x = x_;
  Eigen::VectorXd best_u = u_;
  double best_score = std::numeric_limits<double>::infinity();
  SolverStatus exit_status = SolverStatus::kIterationLimit;
  int small_steps = 0;
  int iter = 0;
  double pinf = 0, dinf = 0, rel_gap = 0;

  for (; iter <= options_.max_iters; ++iter) {
    // Residuals.
    rp_ = b_ - ApplyA(x_, u_);
    rd_ = ApplyAT(y_);
    double rd_sq = 0.0;
    double pobj = cf_.dot(u_);
    double xz = 0.0;
    for (int k = 0; k < num_blocks_; ++k) {
      rd_[k] = c_[k] - rd_[k] - z_[k];
      rd_sq += rd_[k].squaredNorm();
      pobj += FrobDot(c_[k], x_[k]);
      xz += FrobDot(x_[k], z_[k]);
    }
    rf_ = cf_ - af_.transpose() * y_;
    const double dobj = b_.dot(y_);
    pinf = rp_.norm() / (1.0 + norm_b_);
    dinf = std::sqrt(rd_sq + rf_.squaredNorm()) / (1.0 + norm_c_);
    rel_gap = std::max(std::abs(pobj - dobj), std::abs(xz)) /
              (1.0 + std::abs(pobj) + std::abs(dobj));
    if (!std::isfinite(pinf) || !std::isfinite(dinf) || !std::isfinite(rel_gap)) {
      exit_status = SolverStatus::kNumericalTrouble;
      break;
    }
    const double score = std::max({pinf, dinf, rel_gap});
    if (score < best_score) {
      best_score = score;
      best_x = x_;
      best_u = u_;
    }
    if (options_.verbose) {
      std::fprintf(stderr, "ipm %3d pobj % .8e dobj % .8e pinf %.2e dinf %.2e gap %.2e\n",
                   iter, -pobj * b_scale_ * c_scale_, -dobj * b_scale_ * c_scale_, pinf,
                   dinf, rel_gap);
    }
    if (pinf <= options_.feas_tol && dinf <= options_.feas_tol &&
        rel_gap <= options_.duality_gap_tol) {
      exit_status = SolverStatus::kOptimal;
      best_x = x_;
      best_u = u_;
      break;
    }
    // Infeasibility certificates.
    if (dobj > 0) {
      double at_norm = std::sqrt(rf_.squaredNorm());
      double s = 0.0;
      for (int k = 0; k < num_blocks_; ++k) s += (c_[k] - rd_[k]).squaredNorm();
      at_norm = std::sqrt(s) + (cf_ - rf_).norm();
      if (at_norm / dobj < 1e-8 && pinf > options_.feas_tol) {
        exit_status = SolverStatus::kInfeasible;
        break;
      }
    }
    if (pobj < 0) {
      const double ax = (b_ - rp_).norm();
      if (ax / -pobj < 1e-8 && dinf > options_.feas_tol) {
        exit_status = SolverStatus::kUnbounded;
        break;
      }
    }
    if (iter == options_.max_iters) break;

    const double mu = xz / total_n;
    zinv_.resize(num_blocks_);
    bool ok = true;
    for (int k = 0; k < num_blocks_; ++k) {
      Eigen::LLT<Eigen::MatrixXd> llt(z_[k]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      zinv_[k] = llt.solve(Eigen::MatrixXd::Identity(sizes_[k], sizes_[k]));
      zinv_[k] = Sym(zinv_[k]);
    }
    if (!ok) {
      exit_status = SolverStatus::kNumericalTrouble;
      break;
    }
    BuildSchur();

    // Predictor.
    Blocks h(num_blocks_);
    for (int k = 0; k < num_blocks_; ++k) h[k] = -x_[k];
    Blocks dxa, dza;
    Eigen::VectorXd dya, dua;
    if (!Direction(h, dxa, dya, dza, dua)) {
      exit_status = SolverStatus::kNumericalTrouble;
      break;
    }
    const double ap_a = std::min(1.0, MaxStep(x_, dxa));
    const double ad_a = std::min(1.0, MaxStep(z_, dza));
    double mu_aff = 0.0;
    for (int k = 0; k < num_blocks_; ++k) {
      mu_aff += FrobDot(x_[k] + ap_a * dxa[k], z_[k] + ad_a * dza[k]);
    }
    mu_aff /= total_n;
    const double ratio = std::max(0.0, mu_aff / mu);
    const double expon = std::min(ap_a, ad_a) > 0.3 ? 3.0 : 1.0;
    const double sigma = std::clamp(std::pow(ratio, expon), 0.0, 1.0);

    // Corrector.
    for (int k = 0; k < num_blocks_; ++k) {
      h[k] = sigma * mu * zinv_[k] - x_[k] - dxa[k] * dza[k] * zinv_[k];
    }
    Blocks dx, dz;
    Eigen::VectorXd dy, du;
    if (!Direction(h, dx, dy, dz, du)) {
      exit_status = SolverStatus::kNumericalTrouble;
      break;
    }
    const double tau = 0.9 + 0.09 * std::min(ap_a, ad_a);
    const double ap = std::min(1.0, tau * MaxStep(x_, dx));
    const double ad = std::min(1.0, tau * MaxStep(z_, dz));
    if (ap < 1e-10 && ad < 1e-10) {
      if (++small_steps >= 3) {
        exit_status = SolverStatus::kNumericalTrouble;
        break;
      }
    } else {
      small_steps = 0;
    }
    for (int k = 0; k < num_blocks_; ++k) {
      x_[k] = Sym(x_[k] + ap * dx[k]);
      z_[k] = Sym(z_[k] + ad * dz[k]);
    }
    u_ += ap * du;
    y_ += ad * dy;
  }

  SdpSolution sol = exit_status == SolverStatus::kInfeasible ||
                            exit_status == SolverStatus::kUnbounded
                        ? Assemble(exit_status, x_, u_, iter)
                        : Assemble(exit_status, best_x, best_u, iter);
  sol.dual_residual = dinf;
  sol.relative_gap = rel_gap;
  return sol;
}

}  // namespace

SdpSolution InteriorPointSolver::Solve(const SdpProblem& problem,
                                       const SolverOptions& options) const {
  IpmState state(problem, options);
  return state.Run();
}

SdpSolution Solve(const SdpProblem& problem, const SolverOptions& options) {
  return InteriorPointSolver().Solve(problem, options);
}

}  // namespace sospack
