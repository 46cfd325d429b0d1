// Linear maximization over pure product states: the extreme-point oracle of
// the conditional-gradient loop.
//
// For a Hermitian X and a partition of the parties into blocks, the oracle
// searches for unit vectors phi_j (one per block) maximizing
// <phi_1 ... phi_k| X |phi_1 ... phi_k> by alternating leading-eigenvector
// updates ("see-saw"), restarted from several random product states.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entbound/qmatrix.hpp"
#include "entbound/rng.hpp"

namespace entbound {

/// Zero-based party indices, one inner vector per block.
using Blocks = std::vector<std::vector<int>>;

class PartitionClass {
 public:
  enum class Kind { FullySeparable, BiSeparable, FixedPartition };

  static PartitionClass fully_separable() { return PartitionClass(Kind::FullySeparable, {}); }
  static PartitionClass bi_separable() { return PartitionClass(Kind::BiSeparable, {}); }
  static PartitionClass fixed(Blocks blocks) {
    return PartitionClass(Kind::FixedPartition, std::move(blocks));
  }

  /// "full", "bisep", or "partition:SPEC" where SPEC lists 1-based party
  /// digits per block separated by '|', e.g. "12|3". Parties above 9 are
  /// written comma-separated inside a block ("1,10|2").
  static PartitionClass parse(const std::string& text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  const Blocks& blocks() const { return blocks_; }

  /// Throws std::invalid_argument if the class is not valid for n parties.
  void validate(int n_parties) const;

  /// The concrete partitions whose product states generate the class.
  std::vector<Blocks> partitions(int n_parties) const;

 private:
  PartitionClass(Kind kind, Blocks blocks) : kind_(kind), blocks_(std::move(blocks)) {}
  Kind kind_;
  Blocks blocks_;
};

/// Every unordered bipartition of n parties, 2^(n-1) - 1 of them. Each entry
/// is {block, complement} with the smaller side first (the side holding the
/// lowest party on ties), ordered by block size, then lexicographically.
std::vector<Blocks> enumerate_bipartitions(int n_parties);

/// Index bookkeeping for one partition of a tensor-product space.
class PartitionLayout {
 public:
  PartitionLayout(std::vector<int> local_dims, Blocks blocks);

  const Blocks& blocks() const { return blocks_; }
  const std::vector<int>& local_dims() const { return local_dims_; }
  const std::vector<int>& block_dims() const { return block_dims_; }
  long dim() const { return dim_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  /// Position of global basis index g inside block j's local space.
  int local_index(int block, long g) const { return local_index_[block][g]; }

  /// The global vector of the tensor product of the block vectors.
  Vector assemble(const std::vector<Vector>& local_vectors) const;

  /// Block operator <others| X |others> obtained by contracting X with all
  /// other blocks' vectors; hermitized.
  Matrix effective_operator(const Matrix& x, const std::vector<Vector>& local_vectors,
                            int block) const;

 private:
  std::vector<int> local_dims_;
  Blocks blocks_;
  std::vector<int> block_dims_;
  long dim_ = 1;
  std::vector<std::vector<int>> local_index_;
};

struct ProductState {
  Blocks blocks;
  std::vector<Vector> local_vectors;
  Vector global;      // assembled tensor product
  double value = 0.0;  // <global| X |global> when produced

  Matrix projector() const { return global * global.adjoint(); }
};

struct OracleConfig {
  int restarts = 5;
  int max_sweeps = 50;
  double sweep_tol = 1e-10;
  std::optional<ProductState> warm_start;
  /// Carry each partition's previous optimum into the next call.
  bool reuse_warm_starts = true;

  void validate() const;
};

/// Alternating leading-eigenvector ascent from `vectors` (updated in place).
/// Returns the final objective. If `trace` is given, the objective after
/// every block update is appended to it.
double see_saw_ascent(const PartitionLayout& layout, const Matrix& x,
                      std::vector<Vector>& vectors, int max_sweeps, double sweep_tol,
                      std::vector<double>* trace = nullptr);

/// Best product state over one concrete partition. The value is a lower
/// bound on the true maximum; global optimality is not guaranteed.
ProductState best_product_state(const Matrix& x, const std::vector<int>& local_dims,
                                const Blocks& partition, const OracleConfig& cfg, Rng& rng);

/// Best extreme point of a partition class. For the bi-separable class all
/// bipartitions are searched.
ProductState best_extreme_point(const Matrix& x, const std::vector<int>& local_dims,
                                const PartitionClass& cls, const OracleConfig& cfg, Rng& rng);

/// Oracle with per-partition warm starts carried across calls. Used once per
/// solver run.
class ExtremalOracle {
 public:
  ExtremalOracle(std::vector<int> local_dims, const PartitionClass& cls, OracleConfig cfg);

  ProductState operator()(const Matrix& x, Rng& rng);

  const std::vector<PartitionLayout>& layouts() const { return layouts_; }

 private:
  ProductState search(std::size_t which, const Matrix& x, Rng& rng) const;

  OracleConfig cfg_;
  std::vector<PartitionLayout> layouts_;
  std::vector<std::optional<std::vector<Vector>>> warm_;
};

}  // namespace entbound
