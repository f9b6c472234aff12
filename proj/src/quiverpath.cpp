#include "qqw/quiverpath.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace qqw {

std::size_t Quiver::vertex_index(int id) const {
  auto it = std::find(vertices.begin(), vertices.end(), id);
  check(it != vertices.end(), Errc::ConfigError, "unknown vertex id " + std::to_string(id));
  return static_cast<std::size_t>(it - vertices.begin());
}

std::size_t Quiver::arrow_index(int id) const {
  auto it = std::find_if(arrows.begin(), arrows.end(), [&](const Arrow& a) { return a.id == id; });
  check(it != arrows.end(), Errc::ConfigError, "unknown arrow id " + std::to_string(id));
  return static_cast<std::size_t>(it - arrows.begin());
}

void Quiver::validate() const {
  std::set<int> vids(vertices.begin(), vertices.end());
  check(vids.size() == vertices.size(), Errc::ConfigError, "duplicate vertex ids");
  std::set<int> aids;
  for (const Arrow& a : arrows) {
    check(aids.insert(a.id).second, Errc::ConfigError, "duplicate arrow ids");
    check(vids.count(a.s) && vids.count(a.t), Errc::ConfigError,
          "arrow " + std::to_string(a.id) + " has endpoints outside Q_0");
  }
}

TruncatedPathAlgebra::TruncatedPathAlgebra(Quiver q, unsigned bound, FieldDesc f)
    : quiver_(std::move(q)), bound_(bound), field_(f) {
  quiver_.validate();
  basis_.resize(bound_ + 1);
  for (std::size_t v = 0; v < quiver_.vertices.size(); ++v)
    basis_[0].push_back(Path{v, v, {}});
  // degree 1 in arrow order, so PathRef{1, i} is arrow i
  if (bound_ >= 1)
    for (std::size_t a = 0; a < quiver_.arrows.size(); ++a)
      basis_[1].push_back(Path{quiver_.vertex_index(quiver_.arrows[a].s),
                               quiver_.vertex_index(quiver_.arrows[a].t),
                               {a}});
  for (unsigned len = 2; len <= bound_; ++len) {
    for (const Path& p : basis_[len - 1]) {
      for (std::size_t a = 0; a < quiver_.arrows.size(); ++a) {
        if (quiver_.vertex_index(quiver_.arrows[a].s) != p.target) continue;
        Path ext = p;
        ext.arrows.push_back(a);
        ext.target = quiver_.vertex_index(quiver_.arrows[a].t);
        basis_[len].push_back(std::move(ext));
      }
    }
  }
  for (unsigned len = 0; len <= bound_; ++len)
    for (std::size_t i = 0; i < basis_[len].size(); ++i)
      index_[{basis_[len][i].source, basis_[len][i].arrows}] = PathRef{len, i};
}

std::size_t TruncatedPathAlgebra::total_dim() const {
  std::size_t n = 0;
  for (const auto& piece : basis_) n += piece.size();
  return n;
}

PathRef TruncatedPathAlgebra::ref_of(const Path& p) const {
  auto it = index_.find({p.source, p.arrows});
  check(it != index_.end(), Errc::Internal, "path not in basis");
  return it->second;
}

PathVector TruncatedPathAlgebra::vertex(std::size_t vertex_index) const {
  return basis_vector(PathRef{0, vertex_index});
}

PathVector TruncatedPathAlgebra::arrow(std::size_t arrow_index) const {
  return basis_vector(PathRef{1, arrow_index});
}

PathVector TruncatedPathAlgebra::identity() const {
  PathVector v;
  for (std::size_t i = 0; i < quiver_.vertices.size(); ++i)
    v.terms[PathRef{0, i}] = field_one(field_);
  return v;
}

PathVector TruncatedPathAlgebra::basis_vector(PathRef r) const {
  check(r.len <= bound_ && r.idx < basis_[r.len].size(), Errc::OutOfRange, "bad path ref");
  PathVector v;
  v.terms[r] = field_one(field_);
  return v;
}

PathVector TruncatedPathAlgebra::add(const PathVector& a, const PathVector& b) const {
  PathVector v = a;
  for (const auto& [r, c] : b.terms) {
    if (c.is_zero()) continue;
    auto [it, inserted] = v.terms.try_emplace(r, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) v.terms.erase(it);
    }
  }
  return v;
}

PathVector TruncatedPathAlgebra::scale(const FieldScalar& c, const PathVector& a) const {
  PathVector v;
  if (c.is_zero()) return v;
  for (const auto& [r, cr] : a.terms) v.terms[r] = c * cr;
  return v;
}

PathVector TruncatedPathAlgebra::multiply(const PathVector& a, const PathVector& b) const {
  PathVector out;
  for (const auto& [ra, ca] : a.terms) {
    const Path& pa = path(ra);
    for (const auto& [rb, cb] : b.terms) {
      const Path& pb = path(rb);
      if (pa.target != pb.source) continue;
      check(ra.len + rb.len <= bound_, Errc::TruncationOverflow,
            "product of lengths " + std::to_string(ra.len) + " and " + std::to_string(rb.len) +
                " exceeds the truncation bound " + std::to_string(bound_));
      Path prod;
      prod.source = pa.source;
      prod.target = pb.target;
      prod.arrows = pa.arrows;
      prod.arrows.insert(prod.arrows.end(), pb.arrows.begin(), pb.arrows.end());
      PathRef r = ref_of(prod);
      FieldScalar c = ca * cb;
      auto [it, inserted] = out.terms.try_emplace(r, c);
      if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) out.terms.erase(it);
      }
    }
  }
  return out;
}

std::vector<FieldScalar> TruncatedPathAlgebra::coords(const PathVector& v, unsigned len) const {
  std::vector<FieldScalar> c(dim(len), field_zero(field_));
  for (const auto& [r, coeff] : v.terms)
    if (r.len == len) c[r.idx] = coeff;
  return c;
}

PathVector TruncatedPathAlgebra::from_coords(unsigned len, const std::vector<FieldScalar>& c) const {
  check(c.size() == dim(len), Errc::OutOfRange, "coordinate size mismatch");
  PathVector v;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) v.terms[PathRef{len, i}] = c[i];
  return v;
}

std::string TruncatedPathAlgebra::to_string(const PathVector& v) const {
  if (v.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [r, c] : v.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")*";
    const Path& p = path(r);
    if (p.arrows.empty()) {
      os << "e" << quiver_.vertices[p.source];
    } else {
      for (std::size_t i = 0; i < p.arrows.size(); ++i) {
        if (i) os << ".";
        os << "a" << quiver_.arrows[p.arrows[i]].id;
      }
    }
  }
  return os.str();
}

BlockDecomposition arrow_space_decomposition(const std::vector<BlockLabel>& labels,
                                             const Matrix& m) {
  check(m.rows() == labels.size() && m.cols() == labels.size(), Errc::Internal,
        "labels must match the matrix dimension");
  BlockDecomposition dec;
  for (std::size_t i = 0; i < labels.size(); ++i) dec.spaces[labels[i]].push_back(i);
  for (const auto& [from, src_idx] : dec.spaces) {
    // the image of this block must be supported in a single block
    std::optional<BlockLabel> to;
    for (std::size_t col : src_idx)
      for (std::size_t row = 0; row < labels.size(); ++row) {
        if (m.at(row, col).is_zero()) continue;
        if (to && !(*to == labels[row]))
          fail(Errc::NotBimoduleCompatible,
               "block image mixes arrow spaces (" + std::to_string(to->left) + "," +
                   std::to_string(to->right) + ") and (" + std::to_string(labels[row].left) + "," +
                   std::to_string(labels[row].right) + ")");
        to = labels[row];
      }
    if (!to) continue;  // zero block omitted
    const auto& dst_idx = dec.spaces.at(*to);
    Matrix sub(dst_idx.size(), src_idx.size(), m.field());
    for (std::size_t c = 0; c < src_idx.size(); ++c)
      for (std::size_t r = 0; r < dst_idx.size(); ++r) sub.at(r, c) = m.at(dst_idx[r], src_idx[c]);
    dec.map_blocks.push_back({from, *to, std::move(sub)});
  }
  return dec;
}

Matrix reassemble_blocks(const std::vector<BlockLabel>& labels, const BlockDecomposition& dec,
                         const FieldDesc& f) {
  Matrix m(labels.size(), labels.size(), f);
  for (const auto& block : dec.map_blocks) {
    const auto& src_idx = dec.spaces.at(block.from);
    const auto& dst_idx = dec.spaces.at(block.to);
    for (std::size_t c = 0; c < src_idx.size(); ++c)
      for (std::size_t r = 0; r < dst_idx.size(); ++r)
        m.at(dst_idx[r], src_idx[c]) = block.sub.at(r, c);
  }
  return m;
}

}  // namespace qqw
