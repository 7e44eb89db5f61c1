#pragma once

// Matrix product operators and their compilation from symbolic term lists.
// Site tensors are rank-4 with index order (left bond, bra phys, ket phys,
// right bond).
//
// The compiler is a finite-state automaton over the ordered site chain:
// state 0 carries "nothing placed yet", the last state carries "term
// complete", and every distinct consumed prefix of factors gets one
// intermediate state shared by all terms with that prefix. Coefficients are
// applied when a term places its final factor.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tnsim/mps.hpp"
#include "tnsim/terms.hpp"

namespace tnsim {

class MatrixProductOperator {
 public:
  MatrixProductOperator(BasisChain bases, std::vector<DenseTensor> tensors)
      : bases_(std::move(bases)), tensors_(std::move(tensors)) {
    if (bases_.empty() || tensors_.size() != bases_.size())
      throw std::invalid_argument("MPO: tensor/basis count mismatch");
    if (tensors_.front().extent(0) != 1 || tensors_.back().extent(3) != 1)
      throw std::invalid_argument("MPO: boundary bonds must be 1");
    for (std::size_t i = 0; i < bases_.size(); ++i) {
      const auto& t = tensors_[i];
      if (t.rank() != 4 || t.extent(1) != bases_[i].dim() ||
          t.extent(2) != bases_[i].dim())
        throw std::invalid_argument("MPO: bad site tensor shape");
      if (i + 1 < bases_.size() && t.extent(3) != tensors_[i + 1].extent(0))
        throw std::invalid_argument("MPO: bond extent mismatch");
    }
  }

  std::size_t size() const { return bases_.size(); }
  const BasisChain& bases() const { return bases_; }
  const SiteBasis& basis(std::size_t i) const { return bases_.at(i); }
  const DenseTensor& tensor(std::size_t i) const { return tensors_.at(i); }

  std::vector<std::size_t> bond_dims() const {
    std::vector<std::size_t> dims;
    dims.push_back(tensors_.front().extent(0));
    for (const auto& t : tensors_) dims.push_back(t.extent(3));
    return dims;
  }

  std::size_t max_bond_dim() const {
    std::size_t m = 1;
    for (const auto& t : tensors_) m = std::max(m, t.extent(3));
    return m;
  }

 private:
  BasisChain bases_;
  std::vector<DenseTensor> tensors_;
};

inline MatrixProductOperator mpo_from_terms(const TermList& terms,
                                            const BasisChain& bases) {
  validate_terms(terms, bases);
  const TermList merged = merge_terms(terms);
  if (merged.empty())
    throw std::invalid_argument("mpo_from_terms: all terms cancelled");
  const std::size_t n = bases.size();

  using Prefix = std::vector<std::pair<std::size_t, std::string>>;

  // Enumerate the distinct open prefixes at every bond. Bond b sits between
  // sites b-1 and b; a term is open there when it started strictly before b
  // and ends at site >= b.
  std::vector<std::map<Prefix, std::size_t>> open(n + 1);
  for (const auto& t : merged) {
    const std::size_t s_first = t.factors.front().first;
    const std::size_t s_last = t.factors.back().first;
    for (std::size_t b = s_first + 1; b <= s_last; ++b) {
      Prefix pre;
      for (const auto& f : t.factors)
        if (f.first < b) pre.push_back(f);
      open[b].emplace(pre, 0);
    }
  }
  // State layout per bond: [START][prefixes...][FINAL]; boundaries carry a
  // single state (START at bond 0, FINAL at bond n).
  std::vector<std::size_t> width(n + 1);
  std::vector<std::size_t> final_id(n + 1);
  for (std::size_t b = 0; b <= n; ++b) {
    std::size_t next = 1;  // id 0 = START (unused at bond n)
    for (auto& [pre, id] : open[b]) id = next++;
    if (b == 0) {
      width[b] = 1;
      final_id[b] = 0;  // unused
    } else if (b == n) {
      width[b] = 1;
      final_id[b] = 0;  // FINAL collapses onto the only state
    } else {
      width[b] = next + 1;
      final_id[b] = next;
    }
  }

  auto prefix_id = [&](std::size_t b, const Prefix& pre) {
    return open[b].at(pre);
  };

  std::vector<std::map<std::pair<std::size_t, std::size_t>, MatrixXc>> trans(n);
  auto place = [&](std::size_t site, std::size_t l, std::size_t r,
                   const MatrixXc& m, bool accumulate) {
    auto key = std::make_pair(l, r);
    auto it = trans[site].find(key);
    if (it == trans[site].end())
      trans[site].emplace(key, m);
    else if (accumulate)
      it->second += m;
  };

  // Universal identity chains.
  for (std::size_t i = 0; i < n; ++i) {
    const bool start_left = i != 0 || true;  // START exists at bonds 0..n-1
    const bool start_right = (i + 1) < n;
    if (start_left && start_right)
      place(i, 0, 0, MatrixXc::Identity(bases[i].dim(), bases[i].dim()),
            false);
    const bool final_left = i >= 1;
    if (final_left)
      place(i, final_id[i], final_id[i + 1],
            MatrixXc::Identity(bases[i].dim(), bases[i].dim()), false);
  }

  for (const auto& t : merged) {
    const std::size_t s_first = t.factors.front().first;
    const std::size_t s_last = t.factors.back().first;
    std::size_t fi = 0;  // factor cursor
    for (std::size_t i = s_first; i <= s_last; ++i) {
      const bool has_factor =
          fi < t.factors.size() && t.factors[fi].first == i;
      Prefix pre_before, pre_after;
      for (const auto& f : t.factors) {
        if (f.first < i) pre_before.push_back(f);
        if (f.first <= i) pre_after.push_back(f);
      }
      const std::size_t l =
          (i == s_first) ? 0 : prefix_id(i, pre_before);
      if (has_factor) {
        const MatrixXc& m = bases[i].op(t.factors[fi].second);
        if (i == s_last) {
          place(i, l, final_id[i + 1], MatrixXc(t.coefficient * m), true);
        } else {
          place(i, l, prefix_id(i + 1, pre_after), m, false);
        }
        ++fi;
      } else {
        // identity padding between the term's active sites
        place(i, l, prefix_id(i + 1, pre_after),
              MatrixXc::Identity(bases[i].dim(), bases[i].dim()), false);
      }
    }
  }

  std::vector<DenseTensor> tensors;
  tensors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = bases[i].dim();
    DenseTensor w({width[i], d, d, width[i + 1]});
    for (const auto& [key, m] : trans[i]) {
      const auto [l, r] = key;
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t sp = 0; sp < d; ++sp)
          w.at({l, s, sp, r}) = m(static_cast<Eigen::Index>(s),
                                  static_cast<Eigen::Index>(sp));
    }
    tensors.push_back(std::move(w));
  }
  return MatrixProductOperator(bases, std::move(tensors));
}

// Exact MPO application; bond dimensions multiply.
inline MatrixProductState apply_mpo(const MatrixProductOperator& op,
                                    const MatrixProductState& psi) {
  if (op.size() != psi.size())
    throw std::invalid_argument("apply_mpo: size mismatch");
  std::vector<DenseTensor> tensors;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (!op.basis(i).same_kind(psi.basis(i)))
      throw std::invalid_argument("apply_mpo: basis mismatch");
    const DenseTensor& w = op.tensor(i);
    const DenseTensor& a = psi.tensor(i);
    // (wl,out,in,wr) x (al,in,ar) -> (wl,out,wr,al,ar)
    DenseTensor t = contract(w, {2}, a, {1});
    t = t.permuted({0, 3, 1, 2, 4});  // (wl, al, out, wr, ar)
    tensors.push_back(t.reshaped(
        {w.extent(0) * a.extent(0), w.extent(1), w.extent(3) * a.extent(2)}));
  }
  return MatrixProductState(psi.bases(), std::move(tensors), std::nullopt);
}

// <psi| op |psi> (no normalization).
inline cplx expectation(const MatrixProductState& psi,
                        const MatrixProductOperator& op) {
  if (op.size() != psi.size())
    throw std::invalid_argument("expectation: size mismatch");
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (!op.basis(i).same_kind(psi.basis(i)))
      throw std::invalid_argument("expectation: basis mismatch");
  DenseTensor env({1, 1, 1});  // (bra, w, ket)
  env.at({0, 0, 0}) = 1.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const DenseTensor& a = psi.tensor(i);
    DenseTensor t1 = contract(env, {0}, a.conjugated(), {0});  // (w,ket,out,abra')
    DenseTensor t2 = contract(t1, {0, 2}, op.tensor(i), {0, 1});  // (ket,abra',in,wr)
    env = contract(t2, {0, 2}, a, {0, 1});  // (abra', wr, aket')
  }
  return env.at({0, 0, 0});
}

// Dense action of the MPO on a state vector (site 0 slowest index); for
// small chains only. Used to cross-check the compiler against direct
// term-by-term application.
inline VectorXc mpo_dense_action(const MatrixProductOperator& op,
                                 const VectorXc& v) {
  const std::size_t n = op.size();
  const std::size_t dim = chain_dimension(op.bases());
  if (static_cast<std::size_t>(v.size()) != dim)
    throw std::invalid_argument("mpo_dense_action: dimension mismatch");
  std::vector<std::size_t> shape{1};
  for (std::size_t i = 0; i < n; ++i) shape.push_back(op.basis(i).dim());
  DenseTensor acc(shape);
  for (std::size_t i = 0; i < dim; ++i) acc[i] = v[i];
  for (std::size_t i = 0; i < n; ++i) {
    // acc axes: (w, out_0..out_{i-1}, in_i..in_{n-1})
    DenseTensor t = contract(acc, {0, 1 + i}, op.tensor(i), {0, 2});
    // t axes: (out_0..out_{i-1}, in_{i+1}..in_{n-1}, out_i, wr)
    std::vector<std::size_t> perm;
    perm.push_back(t.rank() - 1);                       // wr
    for (std::size_t k = 0; k < i; ++k) perm.push_back(k);   // earlier outs
    perm.push_back(t.rank() - 2);                       // out_i
    for (std::size_t k = i; k + 1 < n; ++k) perm.push_back(k);  // later ins
    acc = t.permuted(perm);
  }
  VectorXc out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = acc[i];
  return out;
}

}  // namespace tnsim
