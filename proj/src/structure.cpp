#include "bn/structure.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "bn/error.hpp"

namespace bn {

std::string_view to_string(ConnectionKind kind) {
  switch (kind) {
    case ConnectionKind::Serial: return "Serial";
    case ConnectionKind::Diverging: return "Diverging";
    case ConnectionKind::Converging: return "Converging";
  }
  return "Unknown";
}

namespace {

bool is_parent(const BayesianNetwork& net, VarId p, VarId c) {
  const auto& ps = net.parents(c);
  return std::find(ps.begin(), ps.end(), p) != ps.end();
}

bool adjacent(const BayesianNetwork& net, VarId a, VarId b) {
  return is_parent(net, a, b) || is_parent(net, b, a);
}

// Connection at v given the skeleton edges a - v and v - b, both assumed
// present.
ConnectionKind connection_at(const BayesianNetwork& net, VarId a, VarId v, VarId b) {
  const bool into_from_a = is_parent(net, a, v);
  const bool into_from_b = is_parent(net, b, v);
  if (into_from_a && into_from_b) return ConnectionKind::Converging;
  if (!into_from_a && !into_from_b) return ConnectionKind::Diverging;
  return ConnectionKind::Serial;
}

std::vector<std::vector<VarId>> skeleton(const BayesianNetwork& net) {
  std::vector<std::vector<VarId>> adj(net.size());
  for (VarId v = 0; v < net.size(); ++v) {
    adj[v] = net.parents(v);
    adj[v].insert(adj[v].end(), net.children(v).begin(), net.children(v).end());
    std::sort(adj[v].begin(), adj[v].end());
  }
  return adj;
}

// evidence_below[v]: v or one of its descendants carries evidence.
std::vector<bool> evidence_below(const BayesianNetwork& net, const Evidence& e) {
  std::vector<bool> below(net.size(), false);
  const auto& order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VarId v = *it;
    bool any = e.contains(v);
    for (VarId c : net.children(v)) any = any || below[c];
    below[v] = any;
  }
  return below;
}

void check_endpoints(const BayesianNetwork& net, VarId x, VarId z, const Evidence& e) {
  if (x >= net.size() || z >= net.size())
    throw Error(ErrorKind::InvalidQuery, "d-separation query on undeclared variable");
  if (x == z) throw Error(ErrorKind::InvalidQuery, "d-separation query needs two distinct variables");
  if (e.is_hard(x) || e.is_hard(z))
    throw Error(ErrorKind::InvalidQuery, "d-separation endpoint carries hard evidence");
}

struct PathSearch {
  const BayesianNetwork& net;
  const Evidence& e;
  const std::vector<std::vector<VarId>>& adj;
  const std::vector<bool>& below;
  VarId target;
  std::size_t budget;

  std::vector<VarId> path;
  std::vector<bool> on_path;
  SeparationVerdict verdict;
  bool found_active = false;
  bool exhausted = false;

  bool blocked_at(VarId a, VarId v, VarId b, ConnectionKind* kind) const {
    *kind = connection_at(net, a, v, b);
    if (*kind == ConnectionKind::Converging) return !below[v];
    return e.is_hard(v);
  }

  void record() {
    if (budget == 0) {
      exhausted = true;
      return;
    }
    --budget;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      ConnectionKind kind;
      if (blocked_at(path[i - 1], path[i], path[i + 1], &kind)) {
        verdict.blocking_witnesses.push_back(BlockedPath{path, path[i], kind});
        return;
      }
    }
    verdict.active_path = path;
    found_active = true;
  }

  void extend(VarId v) {
    for (VarId w : adj[v]) {
      if (found_active || exhausted) return;
      if (on_path[w]) continue;
      path.push_back(w);
      on_path[w] = true;
      if (w == target) {
        record();
      } else {
        extend(w);
      }
      on_path[w] = false;
      path.pop_back();
    }
  }
};

// Maximum number of complete paths the enumerator inspects before falling
// back to the reachability search.
constexpr std::size_t kPathBudget = 200000;

}  // namespace

ConnectionKind classify_connection(const BayesianNetwork& net, VarId a, VarId v, VarId b) {
  const std::size_t n = net.size();
  if (a >= n || v >= n || b >= n || a == v || v == b || a == b)
    throw Error(ErrorKind::NotAPath, "connection needs three distinct declared variables");
  if (!adjacent(net, a, v) || !adjacent(net, v, b))
    throw Error(ErrorKind::NotAPath, "'" + net.variable(a).name + "' - '" +
                                         net.variable(v).name + "' - '" +
                                         net.variable(b).name + "' is not a path");
  return connection_at(net, a, v, b);
}

bool blocks(const BayesianNetwork& net, const Evidence& e, VarId v, ConnectionKind kind) {
  if (kind != ConnectionKind::Converging) return e.is_hard(v);
  return !evidence_below(net, e)[v];
}

std::vector<bool> ancestors_of(const BayesianNetwork& net, VarId v) {
  std::vector<bool> seen(net.size(), false);
  std::vector<VarId> stack(net.parents(v).begin(), net.parents(v).end());
  while (!stack.empty()) {
    VarId u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    for (VarId p : net.parents(u)) stack.push_back(p);
  }
  return seen;
}

std::vector<bool> descendants_of(const BayesianNetwork& net, VarId v) {
  std::vector<bool> seen(net.size(), false);
  std::vector<VarId> stack(net.children(v).begin(), net.children(v).end());
  while (!stack.empty()) {
    VarId u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    for (VarId c : net.children(u)) stack.push_back(c);
  }
  return seen;
}

SeparationVerdict d_separated(const BayesianNetwork& net, VarId x, VarId z, const Evidence& e) {
  check_endpoints(net, x, z, e);
  if (net.size() > kPathEnumerationLimit) return d_separated_reachability(net, x, z, e);

  const auto adj = skeleton(net);
  const auto below = evidence_below(net, e);
  PathSearch search{net, e, adj, below, z, kPathBudget, {x}, std::vector<bool>(net.size(), false), {}};
  search.on_path[x] = true;
  search.extend(x);
  if (search.exhausted) return d_separated_reachability(net, x, z, e);
  search.verdict.separated = !search.found_active;
  if (search.found_active) search.verdict.blocking_witnesses.clear();
  return std::move(search.verdict);
}

SeparationVerdict d_separated_reachability(const BayesianNetwork& net, VarId x, VarId z,
                                           const Evidence& e) {
  check_endpoints(net, x, z, e);
  const std::size_t n = net.size();
  const auto below = evidence_below(net, e);

  // State 2*v + 0: at v, arrived from a child (moving up) or at the start.
  // State 2*v + 1: at v, arrived from a parent (moving down).
  std::vector<std::size_t> previous(2 * n, kUnset);
  std::vector<bool> visited(2 * n, false);
  std::deque<std::size_t> queue{2 * x};
  visited[2 * x] = true;
  auto push = [&](std::size_t from, VarId v, bool down) {
    std::size_t s = 2 * v + (down ? 1 : 0);
    if (visited[s]) return;
    visited[s] = true;
    previous[s] = from;
    queue.push_back(s);
  };

  std::size_t reached = kUnset;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    VarId v = s / 2;
    bool down = s % 2 == 1;
    if (v == z) {
      reached = s;
      break;
    }
    const bool instantiated = v != x && e.is_hard(v);
    if (!down) {
      if (instantiated) continue;
      for (VarId p : net.parents(v)) push(s, p, false);
      for (VarId c : net.children(v)) push(s, c, true);
    } else {
      if (!instantiated)
        for (VarId c : net.children(v)) push(s, c, true);
      if (below[v])
        for (VarId p : net.parents(v)) push(s, p, false);
    }
  }

  SeparationVerdict verdict;
  verdict.separated = reached == kUnset;
  for (std::size_t s = reached; s != kUnset; s = previous[s]) verdict.active_path.push_back(s / 2);
  std::reverse(verdict.active_path.begin(), verdict.active_path.end());
  return verdict;
}

PolytreeCheck is_polytree(const BayesianNetwork& net) {
  const std::size_t n = net.size();
  const auto adj = skeleton(net);
  std::vector<std::size_t> depth(n, kUnset);
  std::vector<VarId> via(n, kUnset);
  std::vector<VarId> path;

  // Depth-first from the lowest id of each component; the first non-tree
  // edge closes a cycle along the current path.
  for (VarId root = 0; root < n; ++root) {
    if (depth[root] != kUnset) continue;
    std::vector<std::pair<VarId, std::size_t>> stack{{root, 0}};
    depth[root] = 0;
    path.assign(1, root);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == adj[v].size()) {
        stack.pop_back();
        path.pop_back();
        continue;
      }
      VarId w = adj[v][next++];
      if (w == via[v]) continue;
      if (depth[w] != kUnset) {
        PolytreeCheck check;
        check.polytree = false;
        check.cycle.assign(path.begin() + static_cast<std::ptrdiff_t>(depth[w]), path.end());
        return check;
      }
      depth[w] = depth[v] + 1;
      via[w] = v;
      path.push_back(w);
      stack.emplace_back(w, 0);
    }
  }
  return {};
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t root(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = root(a);
    b = root(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

bool conditioned_skeleton_is_forest(const BayesianNetwork& net, const std::vector<bool>& cutset) {
  DisjointSets sets(net.size());
  for (VarId c = 0; c < net.size(); ++c)
    for (VarId p : net.parents(c))
      if (!cutset[p] && !sets.unite(p, c)) return false;
  return true;
}

LoopCutset select_cutset(const BayesianNetwork& net) {
  const std::size_t n = net.size();
  if (is_polytree(net).polytree) return {};
  if (n > kExhaustiveCutsetLimit) return greedy_cutset(net);

  // Combinations of each size in lexicographic order; the first valid one
  // is the lexicographically smallest minimum cutset.
  std::vector<bool> mask(n, false);
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<VarId> combo(k);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      std::fill(mask.begin(), mask.end(), false);
      for (VarId v : combo) mask[v] = true;
      if (conditioned_skeleton_is_forest(net, mask)) return LoopCutset{combo};
      std::size_t i = k;
      while (i > 0 && combo[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  // Unreachable for a DAG: instantiating every node removes every edge.
  return greedy_cutset(net);
}

LoopCutset greedy_cutset(const BayesianNetwork& net) {
  const std::size_t n = net.size();
  std::vector<bool> in_cutset(n, false);

  while (true) {
    // Current conditioned skeleton.
    std::vector<std::vector<VarId>> adj(n);
    for (VarId c = 0; c < n; ++c)
      for (VarId p : net.parents(c))
        if (!in_cutset[p]) {
          adj[p].push_back(c);
          adj[c].push_back(p);
        }

    // Find a cycle by depth-first search.
    std::vector<std::size_t> depth(n, kUnset);
    std::vector<VarId> via(n, kUnset);
    std::vector<VarId> cycle;
    for (VarId root = 0; root < n && cycle.empty(); ++root) {
      if (depth[root] != kUnset) continue;
      std::vector<VarId> path{root};
      std::vector<std::pair<VarId, std::size_t>> stack{{root, 0}};
      depth[root] = 0;
      while (!stack.empty() && cycle.empty()) {
        auto& [v, next] = stack.back();
        if (next == adj[v].size()) {
          stack.pop_back();
          path.pop_back();
          continue;
        }
        VarId w = adj[v][next++];
        if (w == via[v]) continue;
        if (depth[w] != kUnset) {
          cycle.assign(path.begin() + static_cast<std::ptrdiff_t>(depth[w]), path.end());
          break;
        }
        depth[w] = depth[v] + 1;
        via[w] = v;
        path.push_back(w);
        stack.emplace_back(w, 0);
      }
    }
    if (cycle.empty()) break;

    // Only a node with an outgoing edge on the cycle breaks it when
    // instantiated; pick the one with the highest remaining degree.
    VarId best = kUnset;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      VarId v = cycle[i];
      VarId prev = cycle[(i + cycle.size() - 1) % cycle.size()];
      VarId next = cycle[(i + 1) % cycle.size()];
      if (!is_parent(net, v, prev) && !is_parent(net, v, next)) continue;
      if (best == kUnset || adj[v].size() > adj[best].size() ||
          (adj[v].size() == adj[best].size() && v < best))
        best = v;
    }
    in_cutset[best] = true;
  }

  LoopCutset out;
  for (VarId v = 0; v < n; ++v)
    if (in_cutset[v]) out.nodes.push_back(v);
  return out;
}

}  // namespace bn
