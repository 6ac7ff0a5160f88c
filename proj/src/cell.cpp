#include "flexics/cell.hpp"

#include <sstream>

namespace flexics {

std::vector<Bitset> split_solution(const Bitset& item_vars, int k, int num_items) {
  std::vector<Bitset> out;
  out.reserve(std::size_t(k));
  for (int c = 0; c < k; ++c) {
    Bitset p{std::size_t(num_items)};
    for (int i = 0; i < num_items; ++i)
      if (item_vars.test(std::size_t(c * num_items + i))) p.set(std::size_t(i));
    out.push_back(std::move(p));
  }
  return out;
}

std::string solution_key(const Bitset& item_vars, int k, int num_items) {
  std::ostringstream s;
  for (int c = 0; c < k; ++c) {
    if (c) s << '|';
    bool first = true;
    for (int i = 0; i < num_items; ++i) {
      if (!item_vars.test(std::size_t(c * num_items + i))) continue;
      if (!first) s << ',';
      s << i;
      first = false;
    }
  }
  return s.str();
}

}  // namespace flexics
