#pragma once

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qqw/linalg.hpp"

namespace qqw {

/// A finite quiver with integer vertex and arrow ids.
struct Quiver {
  struct Arrow {
    int id;
    int s;
    int t;
  };

  std::vector<int> vertices;
  std::vector<Arrow> arrows;

  std::size_t vertex_index(int id) const;
  std::size_t arrow_index(int id) const;
  void validate() const;  // errors: ConfigError
};

/// Reference to a basis path: (length, index within that graded piece).
struct PathRef {
  unsigned len = 0;
  std::size_t idx = 0;

  auto operator<=>(const PathRef&) const = default;
};

/// A basis path: a vertex (length 0) or a composable arrow sequence, read
/// left to right. Arrow entries are indices into Quiver::arrows.
struct Path {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::size_t> arrows;

  unsigned length() const { return static_cast<unsigned>(arrows.size()); }
};

/// Sparse FieldScalar-linear combination of basis paths (degrees may mix).
struct PathVector {
  std::map<PathRef, FieldScalar> terms;

  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const PathVector& a, const PathVector& b) { return a.terms == b.terms; }
};

/// A linear map between graded pieces kQ_s -> kQ_t, as a dense matrix over
/// the path bases.
struct GradedLinearMap {
  unsigned from_degree = 0;
  unsigned to_degree = 0;
  Matrix m;
};

/// The path algebra kQ truncated at path length L, with an enumerated basis
/// of all paths of length <= L per graded piece.
class TruncatedPathAlgebra {
public:
  TruncatedPathAlgebra(Quiver q, unsigned bound, FieldDesc f);

  const Quiver& quiver() const { return quiver_; }
  unsigned bound() const { return bound_; }
  const FieldDesc& field() const { return field_; }

  std::size_t dim(unsigned len) const {
    return len < basis_.size() ? basis_[len].size() : 0;
  }
  std::size_t total_dim() const;
  const Path& path(PathRef r) const { return basis_[r.len][r.idx]; }
  PathRef ref_of(const Path& p) const;

  PathVector zero() const { return {}; }
  PathVector vertex(std::size_t vertex_index) const;   // e_i
  PathVector arrow(std::size_t arrow_index) const;     // length-1 path
  PathVector identity() const;                         // sum of all e_i
  PathVector basis_vector(PathRef r) const;

  PathVector add(const PathVector& a, const PathVector& b) const;
  PathVector scale(const FieldScalar& c, const PathVector& a) const;

  /// Bilinear extension of path concatenation.
  /// errors: TruncationOverflow when a composable product exceeds the bound
  PathVector multiply(const PathVector& a, const PathVector& b) const;

  /// Dense coordinates of the degree-`len` part of v.
  std::vector<FieldScalar> coords(const PathVector& v, unsigned len) const;
  PathVector from_coords(unsigned len, const std::vector<FieldScalar>& c) const;

  std::string to_string(const PathVector& v) const;

private:
  Quiver quiver_;
  unsigned bound_;
  FieldDesc field_;
  std::vector<std::vector<Path>> basis_;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, PathRef> index_;
};

/// Left/right idempotent support of a basis element: v = e_left v e_right.
struct BlockLabel {
  int left;
  int right;

  auto operator<=>(const BlockLabel&) const = default;
};

/// Decomposition of a block-labeled space and of a linear map on it into
/// arrow-space blocks V^i_j = e_i V e_j.
struct BlockDecomposition {
  std::map<BlockLabel, std::vector<std::size_t>> spaces;

  struct MapBlock {
    BlockLabel from;
    BlockLabel to;
    Matrix sub;  // rows = target block basis, cols = source block basis
  };
  std::vector<MapBlock> map_blocks;
};

/// errors: NotBimoduleCompatible when the image of some source block is not
/// supported in a single block
BlockDecomposition arrow_space_decomposition(const std::vector<BlockLabel>& labels,
                                             const Matrix& m);

/// Reassembles the decomposed map; equals the original by construction.
Matrix reassemble_blocks(const std::vector<BlockLabel>& labels, const BlockDecomposition& dec,
                         const FieldDesc& f);

}  // namespace qqw
