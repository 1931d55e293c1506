#pragma once

#include <algorithm>

namespace fillvol {

template <typename Scalar>
SparseChain<Scalar> make_chain(int degree, std::vector<std::pair<Index, Scalar>> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseChain<Scalar> out;
  out.degree = degree;
  for (auto& [index, coeff] : terms) {
    if (!out.terms.empty() && out.terms.back().first == index) {
      out.terms.back().second += coeff;
    } else {
      out.terms.emplace_back(index, std::move(coeff));
    }
  }
  std::erase_if(out.terms, [](const auto& t) { return t.second == 0; });
  return out;
}

}  // namespace fillvol
