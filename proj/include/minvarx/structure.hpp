#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace minvarx {

/// One nilpotent Jordan block K(r, l) = J(0, r) (x) I_l.
struct JordanBlock {
  int exponent;  // r
  int sub_rank;  // l

  bool operator==(const JordanBlock&) const = default;
};

/// Placement of the rows that belong to one exponent r inside G.
///
/// G stores the sub-blocks of an exponent in descending order
/// G_{r,r-1}, ..., G_{r,0}; kappa(G) and the columns of H use the ascending
/// order (r,0), ..., (r,r-1). Both occupy the same row range
/// [offset, offset + exponent * sub_rank).
struct BlockGroup {
  int exponent;
  int sub_rank;
  int offset;
};

/// Structure parameters of a minimal AR-state-space realization.
///
/// Stored canonically as d = [d_1, ..., d_p] with d_p > 0; the pair form
/// [(r_g, l_g), ..., (r_1, l_1)] lists the non-zero entries in descending
/// exponent. The block row map is computed once at construction.
class StructureParams {
 public:
  static StructureParams from_dvec(std::vector<int> dvec);
  static StructureParams from_pairs(const std::vector<JordanBlock>& pairs);

  /// p, the largest exponent (= the maximal lag).
  int max_lag() const noexcept { return static_cast<int>(dvec_.size()); }
  /// Sum of the sub-ranks; the rank required of G_{:,0} and H_{:,0}.
  int total_rank() const noexcept { return total_rank_; }
  /// n_min = sum_i i * d_i.
  int mcmillan_degree() const noexcept { return n_min_; }

  /// d_r for 1 <= r <= p, zero otherwise.
  int d(int r) const noexcept;
  /// Sum_{j >= i} d_j.
  int tail_rank(int i) const noexcept;

  const std::vector<int>& dvec() const noexcept { return dvec_; }
  std::vector<JordanBlock> pairs() const;
  const std::vector<BlockGroup>& groups() const noexcept { return groups_; }

  /// Group with exponent r; throws StructureError if d_r = 0.
  const BlockGroup& group(int r) const;
  /// First row of block G_{r,j}, 0 <= j < r.
  int g_row(int r, int j) const;
  /// First row of kappa row block (r,l); also the first column of H_{r,l}.
  int kappa_row(int r, int l) const;
  /// Row indices of G_{:,0} (equivalently columns of H_{:,0}), groups in
  /// descending exponent.
  std::vector<int> lead_rows() const;

  /// Throws StructureError unless total_rank() <= min(k, m).
  void check_fits(int k, int m) const;

  /// "[(3,1),(1,1)]".
  std::string to_string() const;

  bool operator==(const StructureParams& other) const { return dvec_ == other.dvec_; }

 private:
  explicit StructureParams(std::vector<int> dvec);

  std::vector<int> dvec_;
  std::vector<BlockGroup> groups_;
  std::vector<int> group_index_;  // exponent -> index into groups_, -1 if absent
  int total_rank_ = 0;
  int n_min_ = 0;
};

/// Every structure with r_g = p and total rank <= h, ordered descending
/// lexicographically on (d_p, d_{p-1}, ..., d_1).
std::vector<StructureParams> enumerate_structures(int h, int p);

StructureParams structure_from_dvec(const std::vector<int>& dvec);

/// F = K(r_g, l_g) (+) ... (+) K(r_1, l_1).
Eigen::MatrixXd jordan_matrix(const StructureParams& psi);

int mcmillan_degree(const StructureParams& psi);

/// Number of free parameters saved relative to the unrestricted VARX(p),
/// sum_i (k - s_i)(m - s_i) with s_i = sum_{j >= i} d_j.
int param_reduction(const StructureParams& psi, int k, int m);

/// Dimension of the centralizer of F, sum_i s_i^2.
int centralizer_dim(const StructureParams& psi);

}  // namespace minvarx
