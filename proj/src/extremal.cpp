#include "entbound/extremal.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "entbound/states.hpp"

namespace entbound {

namespace {

int parse_party(const std::string& token) {
  std::size_t used = 0;
  int party = 0;
  try {
    party = std::stoi(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || party < 1) {
    throw std::invalid_argument("invalid party index '" + token + "' in partition spec");
  }
  return party - 1;
}

}  // namespace

PartitionClass PartitionClass::parse(const std::string& text) {
  if (text == "full") return fully_separable();
  if (text == "bisep") return bi_separable();
  const std::string prefix = "partition:";
  if (text.rfind(prefix, 0) != 0) {
    throw std::invalid_argument("unknown class '" + text + "' (expected full, bisep or partition:SPEC)");
  }
  Blocks blocks;
  if (text.back() == '|') throw std::invalid_argument("empty block in partition spec '" + text + "'");
  std::stringstream spec(text.substr(prefix.size()));
  std::string block_text;
  while (std::getline(spec, block_text, '|')) {
    std::vector<int> block;
    if (block_text.find(',') != std::string::npos) {
      std::stringstream parts(block_text);
      std::string token;
      while (std::getline(parts, token, ',')) block.push_back(parse_party(token));
    } else {
      for (char ch : block_text) block.push_back(parse_party(std::string(1, ch)));
    }
    if (block.empty()) throw std::invalid_argument("empty block in partition spec '" + text + "'");
    blocks.push_back(std::move(block));
  }
  if (blocks.empty()) throw std::invalid_argument("empty partition spec '" + text + "'");
  return fixed(std::move(blocks));
}

std::string PartitionClass::to_string() const {
  switch (kind_) {
    case Kind::FullySeparable: return "full";
    case Kind::BiSeparable: return "bisep";
    case Kind::FixedPartition: break;
  }
  bool wide = false;
  for (const auto& b : blocks_)
    for (int p : b) wide = wide || p >= 9;
  std::string out = "partition:";
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (j) out += '|';
    for (std::size_t i = 0; i < blocks_[j].size(); ++i) {
      if (wide && i) out += ',';
      out += std::to_string(blocks_[j][i] + 1);
    }
  }
  return out;
}

void PartitionClass::validate(int n_parties) const {
  if (n_parties < 1) throw std::invalid_argument("state has no parties");
  if (kind_ == Kind::BiSeparable && n_parties < 2) {
    throw std::invalid_argument("bi-separable class needs at least 2 parties");
  }
  if (kind_ != Kind::FixedPartition) return;
  std::vector<int> seen(n_parties, 0);
  for (const auto& block : blocks_) {
    if (block.empty()) throw std::invalid_argument("partition has an empty block");
    for (int p : block) {
      if (p < 0 || p >= n_parties) {
        throw std::invalid_argument("partition references party " + std::to_string(p + 1) +
                                    " but the state has " + std::to_string(n_parties));
      }
      if (seen[p]++) {
        throw std::invalid_argument("party " + std::to_string(p + 1) + " appears in two blocks");
      }
    }
  }
  for (int p = 0; p < n_parties; ++p) {
    if (!seen[p]) throw std::invalid_argument("party " + std::to_string(p + 1) + " is not covered");
  }
}

std::vector<Blocks> PartitionClass::partitions(int n_parties) const {
  validate(n_parties);
  switch (kind_) {
    case Kind::FullySeparable: {
      Blocks finest;
      for (int p = 0; p < n_parties; ++p) finest.push_back({p});
      return {finest};
    }
    case Kind::BiSeparable: return enumerate_bipartitions(n_parties);
    case Kind::FixedPartition: break;
  }
  return {blocks_};
}

std::vector<Blocks> enumerate_bipartitions(int n_parties) {
  if (n_parties < 2) throw std::invalid_argument("bipartitions need at least 2 parties");
  if (n_parties > 24) throw std::invalid_argument("too many parties to enumerate bipartitions");
  std::vector<Blocks> out;
  const unsigned long full = (1UL << n_parties) - 1;
  for (int size = 1; 2 * size <= n_parties; ++size) {
    std::vector<std::vector<int>> chosen;
    for (unsigned long mask = 1; mask < full; ++mask) {
      if (__builtin_popcountl(mask) != size) continue;
      // Equal halves: keep the side that holds party 1.
      if (2 * size == n_parties && !(mask & 1UL)) continue;
      std::vector<int> block;
      for (int p = 0; p < n_parties; ++p)
        if (mask & (1UL << p)) block.push_back(p);
      chosen.push_back(std::move(block));
    }
    std::sort(chosen.begin(), chosen.end());
    for (auto& block : chosen) {
      std::vector<int> rest;
      for (int p = 0; p < n_parties; ++p)
        if (!std::binary_search(block.begin(), block.end(), p)) rest.push_back(p);
      out.push_back({std::move(block), std::move(rest)});
    }
  }
  return out;
}

PartitionLayout::PartitionLayout(std::vector<int> local_dims, Blocks blocks)
    : local_dims_(std::move(local_dims)), blocks_(std::move(blocks)) {
  const int n = static_cast<int>(local_dims_.size());
  PartitionClass::fixed(blocks_).validate(n);
  for (auto& block : blocks_) std::sort(block.begin(), block.end());

  std::vector<long> stride(n, 1);
  for (int p = n - 2; p >= 0; --p) stride[p] = stride[p + 1] * local_dims_[p + 1];
  for (int d : local_dims_) dim_ *= d;

  local_index_.assign(blocks_.size(), std::vector<int>(dim_, 0));
  block_dims_.clear();
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    int block_dim = 1;
    for (int p : blocks_[j]) block_dim *= local_dims_[p];
    block_dims_.push_back(block_dim);
    for (long g = 0; g < dim_; ++g) {
      int idx = 0;
      for (int p : blocks_[j]) idx = idx * local_dims_[p] + static_cast<int>((g / stride[p]) % local_dims_[p]);
      local_index_[j][g] = idx;
    }
  }
}

Vector PartitionLayout::assemble(const std::vector<Vector>& local_vectors) const {
  Vector out(dim_);
  for (long g = 0; g < dim_; ++g) {
    cplx amp = 1.0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) amp *= local_vectors[j][local_index_[j][g]];
    out[g] = amp;
  }
  return out;
}

Matrix PartitionLayout::effective_operator(const Matrix& x, const std::vector<Vector>& local_vectors,
                                           int block) const {
  // weight[g] = prod_{l != block} phi_l[local index of g]
  Vector weight(dim_);
  for (long g = 0; g < dim_; ++g) {
    cplx amp = 1.0;
    for (int j = 0; j < block_count(); ++j)
      if (j != block) amp *= local_vectors[j][local_index_[j][g]];
    weight[g] = amp;
  }
  const auto& idx = local_index_[block];
  Matrix m = Matrix::Zero(block_dims_[block], block_dims_[block]);
  for (long g = 0; g < dim_; ++g) {
    const cplx wg = std::conj(weight[g]);
    if (wg == cplx(0.0)) continue;
    for (long h = 0; h < dim_; ++h) m(idx[g], idx[h]) += wg * x(g, h) * weight[h];
  }
  return hermitize(m);
}

void OracleConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("oracle restarts must be >= 1");
  if (max_sweeps < 1) throw std::invalid_argument("oracle max_sweeps must be >= 1");
  if (!(sweep_tol >= 0.0)) throw std::invalid_argument("oracle sweep_tol must be >= 0");
}

double see_saw_ascent(const PartitionLayout& layout, const Matrix& x, std::vector<Vector>& vectors,
                      int max_sweeps, double sweep_tol, std::vector<double>* trace) {
  const Vector start = layout.assemble(vectors);
  double value = start.dot(x * start).real();
  if (trace) trace->push_back(value);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = value;
    for (int j = 0; j < layout.block_count(); ++j) {
      const SpectralDecomposition eig = hermitian_eig(layout.effective_operator(x, vectors, j));
      const Eigen::Index top = eig.eigenvalues.size() - 1;
      vectors[j] = eig.eigenvectors.col(top).normalized();
      value = eig.eigenvalues[top];
      if (trace) trace->push_back(value);
    }
    if (value - before < sweep_tol) break;
  }
  return value;
}

namespace {

bool same_structure(const ProductState& warm, const PartitionLayout& layout) {
  if (warm.local_vectors.size() != static_cast<std::size_t>(layout.block_count())) return false;
  Blocks sorted = warm.blocks;
  for (auto& b : sorted) std::sort(b.begin(), b.end());
  if (sorted != layout.blocks()) return false;
  for (int j = 0; j < layout.block_count(); ++j) {
    if (warm.local_vectors[j].size() != layout.block_dims()[j]) return false;
  }
  return true;
}

ProductState search_layout(const PartitionLayout& layout, const Matrix& x,
                           const std::optional<std::vector<Vector>>& warm, const OracleConfig& cfg,
                           Rng& rng) {
  if (x.rows() != layout.dim() || x.cols() != layout.dim()) {
    throw DimensionMismatch("best_product_state", x.rows(), layout.dim());
  }
  ProductState best;
  best.value = -kInfinity;
  const int random_starts = warm ? cfg.restarts - 1 : cfg.restarts;
  for (int start = -1; start < random_starts; ++start) {
    std::vector<Vector> vectors;
    if (start < 0) {
      if (!warm) continue;
      vectors = *warm;
    } else {
      vectors = random_product_state(layout.block_dims(), rng);
    }
    const double value = see_saw_ascent(layout, x, vectors, cfg.max_sweeps, cfg.sweep_tol);
    if (value > best.value) {
      best.value = value;
      best.local_vectors = std::move(vectors);
    }
  }
  best.blocks = layout.blocks();
  best.global = layout.assemble(best.local_vectors);
  best.value = best.global.dot(x * best.global).real();
  return best;
}

}  // namespace

ProductState best_product_state(const Matrix& x, const std::vector<int>& local_dims,
                                const Blocks& partition, const OracleConfig& cfg, Rng& rng) {
  cfg.validate();
  if (partition.empty()) throw std::invalid_argument("empty partition");
  const PartitionLayout layout(local_dims, partition);
  std::optional<std::vector<Vector>> warm;
  if (cfg.warm_start && same_structure(*cfg.warm_start, layout)) warm = cfg.warm_start->local_vectors;
  return search_layout(layout, x, warm, cfg, rng);
}

ProductState best_extreme_point(const Matrix& x, const std::vector<int>& local_dims,
                                const PartitionClass& cls, const OracleConfig& cfg, Rng& rng) {
  ExtremalOracle oracle(local_dims, cls, cfg);
  return oracle(x, rng);
}

ExtremalOracle::ExtremalOracle(std::vector<int> local_dims, const PartitionClass& cls,
                               OracleConfig cfg)
    : cfg_(std::move(cfg)) {
  cfg_.validate();
  for (Blocks& blocks : cls.partitions(static_cast<int>(local_dims.size()))) {
    layouts_.emplace_back(local_dims, std::move(blocks));
  }
  warm_.resize(layouts_.size());
  if (cfg_.warm_start) {
    for (std::size_t i = 0; i < layouts_.size(); ++i) {
      if (same_structure(*cfg_.warm_start, layouts_[i])) warm_[i] = cfg_.warm_start->local_vectors;
    }
  }
}

ProductState ExtremalOracle::search(std::size_t which, const Matrix& x, Rng& rng) const {
  return search_layout(layouts_[which], x, warm_[which], cfg_, rng);
}

ProductState ExtremalOracle::operator()(const Matrix& x, Rng& rng) {
  ProductState best;
  best.value = -kInfinity;
  for (std::size_t i = 0; i < layouts_.size(); ++i) {
    ProductState candidate = search(i, x, rng);
    if (cfg_.reuse_warm_starts) warm_[i] = candidate.local_vectors;
    if (candidate.value > best.value) best = std::move(candidate);
  }
  return best;
}

}  // namespace entbound
