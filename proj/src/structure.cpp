#include "minvarx/structure.hpp"

#include <algorithm>
#include <sstream>

#include "minvarx/errors.hpp"

namespace minvarx {

StructureParams::StructureParams(std::vector<int> dvec) : dvec_(std::move(dvec)) {
  if (dvec_.empty()) throw StructureError("structure: empty d vector");
  for (int v : dvec_) {
    if (v < 0) throw StructureError("structure: negative entry in d vector");
  }
  if (dvec_.back() == 0) throw StructureError("structure: d_p must be positive");

  const int p = max_lag();
  group_index_.assign(p + 1, -1);
  int offset = 0;
  for (int r = p; r >= 1; --r) {
    const int dr = dvec_[r - 1];
    if (dr == 0) continue;
    group_index_[r] = static_cast<int>(groups_.size());
    groups_.push_back({r, dr, offset});
    offset += r * dr;
    total_rank_ += dr;
  }
  n_min_ = offset;
}

StructureParams StructureParams::from_dvec(std::vector<int> dvec) {
  return StructureParams(std::move(dvec));
}

StructureParams StructureParams::from_pairs(const std::vector<JordanBlock>& pairs) {
  if (pairs.empty()) throw StructureError("structure: empty pair list");
  int p = 0;
  for (const auto& b : pairs) {
    if (b.exponent < 1) throw StructureError("structure: exponent must be >= 1");
    if (b.sub_rank < 1) throw StructureError("structure: sub-rank must be >= 1");
    p = std::max(p, b.exponent);
  }
  std::vector<int> dvec(p, 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0 && pairs[i].exponent >= pairs[i - 1].exponent) {
      throw StructureError("structure: exponents must be strictly descending");
    }
    dvec[pairs[i].exponent - 1] = pairs[i].sub_rank;
  }
  return StructureParams(std::move(dvec));
}

int StructureParams::d(int r) const noexcept {
  if (r < 1 || r > max_lag()) return 0;
  return dvec_[r - 1];
}

int StructureParams::tail_rank(int i) const noexcept {
  int s = 0;
  for (int j = std::max(i, 1); j <= max_lag(); ++j) s += dvec_[j - 1];
  return s;
}

std::vector<JordanBlock> StructureParams::pairs() const {
  std::vector<JordanBlock> out;
  out.reserve(groups_.size());
  for (const auto& g : groups_) out.push_back({g.exponent, g.sub_rank});
  return out;
}

const BlockGroup& StructureParams::group(int r) const {
  if (r < 1 || r > max_lag() || group_index_[r] < 0) {
    throw StructureError("structure: no Jordan block with exponent " + std::to_string(r));
  }
  return groups_[group_index_[r]];
}

int StructureParams::g_row(int r, int j) const {
  const auto& g = group(r);
  return g.offset + (r - 1 - j) * g.sub_rank;
}

int StructureParams::kappa_row(int r, int l) const {
  const auto& g = group(r);
  return g.offset + l * g.sub_rank;
}

std::vector<int> StructureParams::lead_rows() const {
  std::vector<int> rows;
  rows.reserve(total_rank_);
  for (const auto& g : groups_) {
    const int start = g.offset + (g.exponent - 1) * g.sub_rank;
    for (int i = 0; i < g.sub_rank; ++i) rows.push_back(start + i);
  }
  return rows;
}

void StructureParams::check_fits(int k, int m) const {
  const int h = std::min(k, m);
  if (total_rank_ > h) {
    throw StructureError("structure " + to_string() + " has total rank " +
                         std::to_string(total_rank_) + " > min(k, m) = " + std::to_string(h));
  }
}

std::string StructureParams::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (i) os << ',';
    os << '(' << groups_[i].exponent << ',' << groups_[i].sub_rank << ')';
  }
  os << ']';
  return os.str();
}

namespace {

void enumerate_rec(int r, int remaining, std::vector<int>& dvec,
                   std::vector<StructureParams>& out) {
  if (r == 0) {
    out.push_back(StructureParams::from_dvec(dvec));
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    dvec[r - 1] = v;
    enumerate_rec(r - 1, remaining - v, dvec, out);
  }
  dvec[r - 1] = 0;
}

}  // namespace

std::vector<StructureParams> enumerate_structures(int h, int p) {
  if (h < 1 || p < 1) throw StructureError("enumerate_structures: h and p must be positive");
  std::vector<StructureParams> out;
  std::vector<int> dvec(p, 0);
  for (int top = h; top >= 1; --top) {
    dvec[p - 1] = top;
    enumerate_rec(p - 1, h - top, dvec, out);
  }
  return out;
}

StructureParams structure_from_dvec(const std::vector<int>& dvec) {
  return StructureParams::from_dvec(dvec);
}

Eigen::MatrixXd jordan_matrix(const StructureParams& psi) {
  const int n = psi.mcmillan_degree();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (const auto& g : psi.groups()) {
    // K(r, l): identity on the first block super-diagonal.
    for (int s = 0; s + 1 < g.exponent; ++s) {
      const int row = g.offset + s * g.sub_rank;
      f.block(row, row + g.sub_rank, g.sub_rank, g.sub_rank).setIdentity();
    }
  }
  return f;
}

int mcmillan_degree(const StructureParams& psi) { return psi.mcmillan_degree(); }

int param_reduction(const StructureParams& psi, int k, int m) {
  psi.check_fits(k, m);
  int total = 0;
  for (int i = 1; i <= psi.max_lag(); ++i) {
    const int s = psi.tail_rank(i);
    total += (k - s) * (m - s);
  }
  return total;
}

int centralizer_dim(const StructureParams& psi) {
  int total = 0;
  for (int i = 1; i <= psi.max_lag(); ++i) {
    const int s = psi.tail_rank(i);
    total += s * s;
  }
  return total;
}

}  // namespace minvarx
