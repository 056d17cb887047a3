#include "pir/pairing_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "pir/errors.hpp"

namespace pir {

namespace {

void check_nk(uint32_t n, uint32_t k) {
  if (n < 2) throw ParamError("pairing graph requires n >= 2");
  if (k < 1) throw ParamError("pairing graph requires k >= 1");
}

}  // namespace

std::vector<SelectorVec> enumerate_selectors(uint32_t n, uint32_t k) {
  check_nk(n, k);
  std::vector<SelectorVec> out;
  SelectorVec v(k, 0);
  // Odometer over {0..n-1}^k emits vectors in lexicographic order.
  while (true) {
    const uint64_t sum = std::accumulate(v.begin(), v.end(), uint64_t{0});
    if (sum > 0 && sum % (n - 1) == 0) out.push_back(v);
    size_t i = k;
    while (i > 0 && v[i - 1] == n - 1) v[--i] = 0;
    if (i == 0) break;
    ++v[i - 1];
  }
  return out;
}

std::optional<PairVertex> pair_target(RecordId ell, const PairVertex& v,
                                      uint32_t n, uint32_t k) {
  check_nk(n, k);
  if (ell.value < 1 || ell.value > k) throw ParamError("ell out of range");
  if (v.sel.size() != k) throw ParamError("selector length must be k");
  const size_t li = ell.value - 1;
  const uint8_t vl = v.sel[li];
  if (vl == 0) {
    throw ParamError("pair_target requires a vertex with nonzero ell entry");
  }

  // Next nonzero entry after position ell, cyclically.
  size_t l2 = li;
  for (size_t step = 1; step < k; ++step) {
    const size_t idx = (li + step) % k;
    if (v.sel[idx] != 0) {
      l2 = idx;
      break;
    }
  }
  if (l2 == li) return std::nullopt;  // only the ell entry is nonzero

  // Merged weight in {1..n-1} congruent to v_ell + v_l2 mod n-1.
  uint32_t w = (uint32_t(vl) + uint32_t(v.sel[l2])) % (n - 1);
  if (w == 0) w = n - 1;

  PairVertex out;
  out.sel = v.sel;
  out.sel[li] = 0;
  out.sel[l2] = uint8_t(w);
  // Server index in {1..n} congruent to r + v_ell mod n.
  out.server = uint32_t((uint64_t(v.server) + vl - 1) % n) + 1;
  return out;
}

size_t PairingGraph::selector_index(const SelectorVec& sel) const {
  const auto it =
      std::lower_bound(selectors.begin(), selectors.end(), sel);
  if (it == selectors.end() || *it != sel) {
    throw ParamError("selector not in enumeration");
  }
  return size_t(it - selectors.begin());
}

size_t PairingGraph::part1_index(const PairVertex& v) const {
  const auto it = std::lower_bound(part1.begin(), part1.end(), v);
  if (it == part1.end() || *it != v) {
    throw ParamError("vertex not in part1");
  }
  return size_t(it - part1.begin());
}

size_t PairingGraph::component_of(const PairVertex& v) const {
  for (size_t c = 0; c < components.size(); ++c) {
    const auto& m = components[c].members;
    if (std::binary_search(m.begin(), m.end(), v)) return c;
  }
  throw ParamError("vertex not in graph");
}

size_t PairingGraph::isolated_count() const {
  size_t count = 0;
  for (const auto& c : components) {
    if (!c.center.has_value()) ++count;
  }
  return count;
}

PairingGraph build_pairing_graph(uint32_t n, uint32_t k, RecordId ell) {
  check_nk(n, k);
  if (ell.value < 1 || ell.value > k) throw ParamError("ell out of range");

  PairingGraph g;
  g.n = n;
  g.k = k;
  g.ell = ell;
  g.selectors = enumerate_selectors(n, k);

  const size_t li = ell.value - 1;
  for (uint32_t r = 1; r <= n; ++r) {
    for (const SelectorVec& sel : g.selectors) {
      PairVertex v{r, sel};
      (sel[li] != 0 ? g.part1 : g.part2).push_back(std::move(v));
    }
  }
  std::sort(g.part1.begin(), g.part1.end());
  std::sort(g.part2.begin(), g.part2.end());

  std::map<PairVertex, std::vector<PairVertex>> star_members;
  std::vector<PairVertex> isolated;
  for (const PairVertex& v : g.part1) {
    auto target = pair_target(ell, v, n, k);
    if (!target) {
      isolated.push_back(v);
      continue;
    }
    g.edges.emplace_back(v, *target);
    star_members[*target].push_back(v);
  }

  for (const PairVertex& v : isolated) {
    PairComponent c;
    c.members = {v};
    g.components.push_back(std::move(c));
  }
  for (auto& [center, leaves] : star_members) {
    PairComponent c;
    c.center = center;
    c.members = std::move(leaves);
    c.members.push_back(center);
    std::sort(c.members.begin(), c.members.end());
    g.components.push_back(std::move(c));
  }
  std::sort(g.components.begin(), g.components.end(),
            [](const PairComponent& a, const PairComponent& b) {
              return a.members.front() < b.members.front();
            });
  return g;
}

std::string selector_label(const SelectorVec& sel) {
  std::ostringstream os;
  bool wide = false;
  for (uint8_t x : sel) {
    if (x > 9) wide = true;
  }
  for (size_t i = 0; i < sel.size(); ++i) {
    if (wide && i > 0) os << ',';
    os << unsigned(sel[i]);
  }
  return os.str();
}

std::string vertex_label(const PairVertex& v) {
  return "(" + std::to_string(v.server) + "," + selector_label(v.sel) + ")";
}

std::string to_dot(const PairingGraph& g) {
  std::ostringstream os;
  os << "graph pairing {\n";
  os << "  // n=" << g.n << " k=" << g.k << " ell=" << g.ell.value << "\n";
  for (const auto& c : g.components) {
    if (!c.center.has_value()) {
      os << "  \"" << vertex_label(c.members.front()) << "\";\n";
    }
  }
  for (const auto& [leaf, center] : g.edges) {
    os << "  \"" << vertex_label(leaf) << "\" -- \"" << vertex_label(center)
       << "\";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace pir
