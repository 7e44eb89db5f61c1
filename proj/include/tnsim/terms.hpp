#pragma once

// Symbolic Hamiltonians: sums of coefficient * product of named single-site
// operators. This is the common input language for the MPO compiler and the
// exact-diagonalization oracle.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tnsim/basis.hpp"

namespace tnsim {

struct ProductTerm {
  cplx coefficient{1.0, 0.0};
  // (site index, operator name), site indices strictly increasing
  std::vector<std::pair<std::size_t, std::string>> factors;
};

inline ProductTerm term(cplx coefficient,
                        std::vector<std::pair<std::size_t, std::string>> factors) {
  return ProductTerm{coefficient, std::move(factors)};
}

using TermList = std::vector<ProductTerm>;

inline void validate_terms(const TermList& terms, const BasisChain& bases) {
  if (terms.empty()) throw std::invalid_argument("empty term list");
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient.real()) ||
        !std::isfinite(t.coefficient.imag()))
      throw std::invalid_argument("term coefficient not finite");
    if (t.factors.empty())
      throw std::invalid_argument("term with empty factor list");
    std::size_t prev = 0;
    bool first = true;
    for (const auto& [site, name] : t.factors) {
      if (!first && site <= prev)
        throw std::invalid_argument("term sites must be strictly increasing");
      if (site >= bases.size())
        throw std::invalid_argument("term site index out of range");
      bases[site].op(name);  // throws on unknown operator
      prev = site;
      first = false;
    }
  }
}

// Merge terms with identical factor lists, summing coefficients; drop terms
// whose merged coefficient is exactly zero. Deterministic output order.
inline TermList merge_terms(TermList terms) {
  auto key_less = [](const ProductTerm& a, const ProductTerm& b) {
    return a.factors < b.factors;
  };
  std::stable_sort(terms.begin(), terms.end(), key_less);
  TermList out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().factors == t.factors)
      out.back().coefficient += t.coefficient;
    else
      out.push_back(std::move(t));
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const ProductTerm& t) {
                             return t.coefficient == cplx{0.0, 0.0};
                           }),
            out.end());
  return out;
}

}  // namespace tnsim
