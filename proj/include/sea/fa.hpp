#pragma once
// Finite automata over integer symbol codes: epsilon-NFA construction,
// subset determinization, Hopcroft minimization, language products, and the
// bounded-signature widening used by the string abstract domain.
//
// Canonical instances (see canonical()) are trimmed minimal DFAs with BFS
// state numbering and sorted edge lists, so operator== on two canonical
// automata decides language equality.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace sea {

using Sym = uint32_t;
inline constexpr Sym kEps = 0xFFFFFFFFu;
inline constexpr uint32_t kNoState = 0xFFFFFFFFu;

struct FaEdge {
  uint32_t src = 0;
  Sym sym = 0;
  uint32_t dst = 0;
  friend auto operator<=>(const FaEdge&, const FaEdge&) = default;
};

struct Fa {
  uint32_t num_states = 1;
  uint32_t initial = 0;
  std::vector<bool> accepting{false};
  std::vector<FaEdge> edges;

  friend bool operator==(const Fa&, const Fa&) = default;

  static Fa empty_language() { return Fa{}; }

  static Fa epsilon() {
    Fa a;
    a.accepting = {true};
    return a;
  }

  static Fa word(const std::vector<Sym>& w) {
    Fa a;
    a.num_states = static_cast<uint32_t>(w.size()) + 1;
    a.accepting.assign(a.num_states, false);
    a.accepting[a.num_states - 1] = true;
    for (uint32_t i = 0; i < w.size(); ++i) a.edges.push_back({i, w[i], i + 1});
    return a;
  }
};

namespace fa_detail {

inline std::vector<std::vector<std::pair<Sym, uint32_t>>> adjacency(const Fa& a) {
  std::vector<std::vector<std::pair<Sym, uint32_t>>> adj(a.num_states);
  for (const auto& e : a.edges) adj[e.src].emplace_back(e.sym, e.dst);
  return adj;
}

inline void eps_close(const std::vector<std::vector<std::pair<Sym, uint32_t>>>& adj,
                      std::set<uint32_t>& states) {
  std::vector<uint32_t> stack(states.begin(), states.end());
  while (!stack.empty()) {
    uint32_t s = stack.back();
    stack.pop_back();
    for (const auto& [sym, dst] : adj[s])
      if (sym == kEps && states.insert(dst).second) stack.push_back(dst);
  }
}

}  // namespace fa_detail

inline bool accepts(const Fa& a, const std::vector<Sym>& word) {
  auto adj = fa_detail::adjacency(a);
  std::set<uint32_t> cur{a.initial};
  fa_detail::eps_close(adj, cur);
  for (Sym c : word) {
    std::set<uint32_t> next;
    for (uint32_t s : cur)
      for (const auto& [sym, dst] : adj[s])
        if (sym == c) next.insert(dst);
    fa_detail::eps_close(adj, next);
    cur = std::move(next);
    if (cur.empty()) return false;
  }
  for (uint32_t s : cur)
    if (a.accepting[s]) return true;
  return false;
}

// Keeps states that lie on some initial-to-accepting path (through eps too).
// An empty language collapses to the one-dead-state representative.
inline Fa trim(const Fa& a) {
  auto adj = fa_detail::adjacency(a);
  std::vector<std::vector<uint32_t>> radj(a.num_states);
  for (const auto& e : a.edges) radj[e.dst].push_back(e.src);

  std::vector<bool> fwd(a.num_states, false);
  std::queue<uint32_t> q;
  fwd[a.initial] = true;
  q.push(a.initial);
  while (!q.empty()) {
    uint32_t s = q.front();
    q.pop();
    for (const auto& [sym, dst] : adj[s])
      if (!fwd[dst]) {
        fwd[dst] = true;
        q.push(dst);
      }
  }
  std::vector<bool> bwd(a.num_states, false);
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (a.accepting[s]) {
      bwd[s] = true;
      q.push(s);
    }
  while (!q.empty()) {
    uint32_t s = q.front();
    q.pop();
    for (uint32_t p : radj[s])
      if (!bwd[p]) {
        bwd[p] = true;
        q.push(p);
      }
  }

  std::vector<uint32_t> remap(a.num_states, kNoState);
  uint32_t n = 0;
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (fwd[s] && bwd[s]) remap[s] = n++;
  if (remap[a.initial] == kNoState) return Fa::empty_language();

  Fa r;
  r.num_states = n;
  r.initial = remap[a.initial];
  r.accepting.assign(n, false);
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (remap[s] != kNoState) r.accepting[remap[s]] = a.accepting[s];
  for (const auto& e : a.edges)
    if (remap[e.src] != kNoState && remap[e.dst] != kNoState)
      r.edges.push_back({remap[e.src], e.sym, remap[e.dst]});
  std::sort(r.edges.begin(), r.edges.end());
  r.edges.erase(std::unique(r.edges.begin(), r.edges.end()), r.edges.end());
  return r;
}

// Subset construction; the result is a partial DFA without dead subsets.
inline Fa determinize(const Fa& a) {
  auto adj = fa_detail::adjacency(a);
  std::map<std::set<uint32_t>, uint32_t> id_of;
  std::vector<std::set<uint32_t>> subsets;
  std::set<uint32_t> start{a.initial};
  fa_detail::eps_close(adj, start);
  id_of[start] = 0;
  subsets.push_back(start);

  Fa r;
  r.edges.clear();
  std::vector<bool> acc;
  for (uint32_t cur = 0; cur < subsets.size(); ++cur) {
    std::set<uint32_t> members = subsets[cur];
    std::map<Sym, std::set<uint32_t>> moves;
    bool is_acc = false;
    for (uint32_t s : members) {
      if (a.accepting[s]) is_acc = true;
      for (const auto& [sym, dst] : adj[s])
        if (sym != kEps) moves[sym].insert(dst);
    }
    if (acc.size() <= cur) acc.resize(cur + 1, false);
    acc[cur] = is_acc;
    for (auto& [sym, tgt] : moves) {
      fa_detail::eps_close(adj, tgt);
      auto it = id_of.find(tgt);
      uint32_t id;
      if (it == id_of.end()) {
        id = static_cast<uint32_t>(subsets.size());
        id_of[tgt] = id;
        subsets.push_back(tgt);
      } else {
        id = it->second;
      }
      r.edges.push_back({cur, sym, id});
    }
  }
  r.num_states = static_cast<uint32_t>(subsets.size());
  r.initial = 0;
  acc.resize(r.num_states, false);
  r.accepting = acc;
  return trim(r);
}

namespace fa_detail {

// BFS renumbering with symbol-ordered edge visiting; gives the canonical
// state order for minimal DFAs.
inline Fa renumber_bfs(const Fa& a) {
  std::vector<std::vector<std::pair<Sym, uint32_t>>> adj(a.num_states);
  for (const auto& e : a.edges) adj[e.src].emplace_back(e.sym, e.dst);
  for (auto& v : adj) std::sort(v.begin(), v.end());

  std::vector<uint32_t> remap(a.num_states, kNoState);
  std::vector<uint32_t> order;
  remap[a.initial] = 0;
  order.push_back(a.initial);
  for (uint32_t i = 0; i < order.size(); ++i) {
    for (const auto& [sym, dst] : adj[order[i]])
      if (remap[dst] == kNoState) {
        remap[dst] = static_cast<uint32_t>(order.size());
        order.push_back(dst);
      }
  }
  Fa r;
  r.num_states = static_cast<uint32_t>(order.size());
  r.initial = 0;
  r.accepting.assign(r.num_states, false);
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (remap[s] != kNoState) r.accepting[remap[s]] = a.accepting[s];
  for (const auto& e : a.edges)
    if (remap[e.src] != kNoState && remap[e.dst] != kNoState)
      r.edges.push_back({remap[e.src], e.sym, remap[e.dst]});
  std::sort(r.edges.begin(), r.edges.end());
  return r;
}

}  // namespace fa_detail

// Hopcroft partition refinement over the sink-completed DFA. Input must be
// deterministic and eps-free (determinize() output qualifies).
inline Fa minimize_dfa(const Fa& dfa) {
  Fa a = trim(dfa);
  bool any_acc = false;
  for (bool b : a.accepting) any_acc |= b;
  if (!any_acc) return Fa::empty_language();

  std::vector<Sym> syms;
  for (const auto& e : a.edges) syms.push_back(e.sym);
  std::sort(syms.begin(), syms.end());
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  const uint32_t ns = static_cast<uint32_t>(syms.size());
  const uint32_t n = a.num_states;
  const uint32_t sink = n;
  const uint32_t total = n + 1;

  std::vector<std::vector<uint32_t>> delta(total, std::vector<uint32_t>(ns, sink));
  for (const auto& e : a.edges) {
    uint32_t k = static_cast<uint32_t>(std::lower_bound(syms.begin(), syms.end(), e.sym) - syms.begin());
    delta[e.src][k] = e.dst;
  }
  std::vector<std::vector<std::vector<uint32_t>>> inv(
      ns, std::vector<std::vector<uint32_t>>(total));
  for (uint32_t s = 0; s < total; ++s)
    for (uint32_t k = 0; k < ns; ++k) inv[k][delta[s][k]].push_back(s);

  std::vector<uint32_t> block_of(total);
  std::vector<std::vector<uint32_t>> blocks(2);
  for (uint32_t s = 0; s < total; ++s) {
    uint32_t b = (s < n && a.accepting[s]) ? 0u : 1u;
    block_of[s] = b;
    blocks[b].push_back(s);
  }
  std::set<std::pair<uint32_t, uint32_t>> work;
  uint32_t smaller = blocks[0].size() <= blocks[1].size() ? 0u : 1u;
  for (uint32_t k = 0; k < ns; ++k) work.insert({smaller, k});

  std::vector<uint32_t> touched_count;  // per block, members hit by the splitter preimage
  std::vector<std::vector<uint32_t>> touched_members;
  while (!work.empty()) {
    auto [ab, k] = *work.begin();
    work.erase(work.begin());

    std::map<uint32_t, std::vector<uint32_t>> hit;  // block -> members in preimage
    for (uint32_t t : blocks[ab])
      for (uint32_t s : inv[k][t]) hit[block_of[s]].push_back(s);

    for (auto& [b, members] : hit) {
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      if (members.size() == blocks[b].size()) continue;  // no split
      uint32_t nb = static_cast<uint32_t>(blocks.size());
      std::vector<uint32_t> stay;
      std::set<uint32_t> moved(members.begin(), members.end());
      for (uint32_t s : blocks[b])
        if (!moved.count(s)) stay.push_back(s);
      blocks[b] = std::move(stay);
      blocks.push_back(members);
      for (uint32_t s : members) block_of[s] = nb;
      for (uint32_t kk = 0; kk < ns; ++kk) {
        if (work.count({b, kk})) {
          work.insert({nb, kk});
        } else {
          uint32_t pick = blocks[b].size() <= blocks[nb].size() ? b : nb;
          work.insert({pick, kk});
        }
      }
    }
  }

  // Rebuild over blocks, dropping the sink's block; trim removes dead blocks.
  uint32_t sink_block = block_of[sink];
  Fa r;
  r.num_states = static_cast<uint32_t>(blocks.size());
  r.initial = block_of[a.initial];
  r.accepting.assign(r.num_states, false);
  for (uint32_t s = 0; s < n; ++s)
    if (a.accepting[s]) r.accepting[block_of[s]] = true;
  std::set<FaEdge> es;
  for (const auto& e : a.edges)
    if (block_of[e.dst] != sink_block) es.insert({block_of[e.src], e.sym, block_of[e.dst]});
  r.edges.assign(es.begin(), es.end());
  return fa_detail::renumber_bfs(trim(r));
}

inline Fa canonical(const Fa& a) { return minimize_dfa(determinize(trim(a))); }

inline bool is_empty_language(const Fa& a) {
  Fa t = trim(a);
  for (bool b : t.accepting)
    if (b) return false;
  return true;
}

inline Fa fa_union(const Fa& a, const Fa& b) {
  Fa r;
  r.num_states = 1 + a.num_states + b.num_states;
  r.initial = 0;
  r.accepting.assign(r.num_states, false);
  uint32_t oa = 1, ob = 1 + a.num_states;
  for (uint32_t s = 0; s < a.num_states; ++s) r.accepting[oa + s] = a.accepting[s];
  for (uint32_t s = 0; s < b.num_states; ++s) r.accepting[ob + s] = b.accepting[s];
  r.edges.push_back({0, kEps, oa + a.initial});
  r.edges.push_back({0, kEps, ob + b.initial});
  for (const auto& e : a.edges) r.edges.push_back({oa + e.src, e.sym, oa + e.dst});
  for (const auto& e : b.edges) r.edges.push_back({ob + e.src, e.sym, ob + e.dst});
  return r;
}

inline Fa fa_concat(const Fa& a, const Fa& b) {
  Fa r;
  r.num_states = a.num_states + b.num_states;
  r.initial = a.initial;
  r.accepting.assign(r.num_states, false);
  uint32_t ob = a.num_states;
  for (uint32_t s = 0; s < b.num_states; ++s) r.accepting[ob + s] = b.accepting[s];
  r.edges = a.edges;
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (a.accepting[s]) r.edges.push_back({s, kEps, ob + b.initial});
  for (const auto& e : b.edges) r.edges.push_back({ob + e.src, e.sym, ob + e.dst});
  return r;
}

inline Fa fa_star(const Fa& a) {
  Fa r;
  r.num_states = a.num_states + 1;
  r.initial = a.num_states;
  r.accepting.assign(r.num_states, false);
  r.accepting[r.initial] = true;
  r.edges = a.edges;
  r.edges.push_back({r.initial, kEps, a.initial});
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (a.accepting[s]) r.edges.push_back({s, kEps, r.initial});
  return r;
}

inline Fa fa_intersect(const Fa& a_in, const Fa& b_in) {
  Fa a = determinize(a_in), b = determinize(b_in);
  std::vector<std::map<Sym, uint32_t>> ta(a.num_states), tb(b.num_states);
  for (const auto& e : a.edges) ta[e.src][e.sym] = e.dst;
  for (const auto& e : b.edges) tb[e.src][e.sym] = e.dst;
  if (is_empty_language(a) || is_empty_language(b)) return Fa::empty_language();

  std::map<std::pair<uint32_t, uint32_t>, uint32_t> id_of;
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  auto intern = [&](uint32_t x, uint32_t y) {
    auto it = id_of.find({x, y});
    if (it != id_of.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(pairs.size());
    id_of[{x, y}] = id;
    pairs.emplace_back(x, y);
    return id;
  };
  Fa r;
  intern(a.initial, b.initial);
  for (uint32_t cur = 0; cur < pairs.size(); ++cur) {
    auto [x, y] = pairs[cur];
    for (const auto& [sym, dx] : ta[x]) {
      auto it = tb[y].find(sym);
      if (it != tb[y].end()) r.edges.push_back({cur, sym, intern(dx, it->second)});
    }
  }
  r.num_states = static_cast<uint32_t>(pairs.size());
  r.initial = 0;
  r.accepting.assign(r.num_states, false);
  for (uint32_t i = 0; i < pairs.size(); ++i)
    r.accepting[i] = a.accepting[pairs[i].first] && b.accepting[pairs[i].second];
  return trim(r);
}

// Language inclusion L(a) subset-of L(b): search for a word accepted by a
// and rejected by b on the pair graph with b sink-completed.
inline bool includes_lang(const Fa& a_in, const Fa& b_in) {
  Fa a = determinize(a_in), b = determinize(b_in);
  std::vector<std::map<Sym, uint32_t>> ta(a.num_states), tb(b.num_states);
  for (const auto& e : a.edges) ta[e.src][e.sym] = e.dst;
  for (const auto& e : b.edges) tb[e.src][e.sym] = e.dst;
  if (is_empty_language(a)) return true;

  std::set<std::pair<uint32_t, uint32_t>> seen;  // second == kNoState: b is dead
  std::queue<std::pair<uint32_t, uint32_t>> q;
  bool b_empty = is_empty_language(b);
  auto push = [&](uint32_t x, uint32_t y) {
    if (seen.insert({x, y}).second) q.push({x, y});
  };
  push(a.initial, b_empty ? kNoState : b.initial);
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop();
    bool bacc = y != kNoState && b.accepting[y];
    if (a.accepting[x] && !bacc) return false;
    for (const auto& [sym, dx] : ta[x]) {
      uint32_t dy = kNoState;
      if (y != kNoState) {
        auto it = tb[y].find(sym);
        if (it != tb[y].end()) dy = it->second;
      }
      push(dx, dy);
    }
  }
  return true;
}

inline bool equal_lang(const Fa& a, const Fa& b) {
  return includes_lang(a, b) && includes_lang(b, a);
}

inline bool language_is_finite(const Fa& a_in) {
  Fa a = trim(a_in);
  // Any cycle in the trimmed automaton pumps some accepted word.
  auto adj = fa_detail::adjacency(a);
  std::vector<int> color(a.num_states, 0);
  std::vector<std::pair<uint32_t, size_t>> stack;
  for (uint32_t s0 = 0; s0 < a.num_states; ++s0) {
    if (color[s0] != 0) continue;
    stack.push_back({s0, 0});
    color[s0] = 1;
    while (!stack.empty()) {
      auto& [s, i] = stack.back();
      if (i < adj[s].size()) {
        uint32_t d = adj[s][i].second;
        ++i;
        if (color[d] == 1) return false;
        if (color[d] == 0) {
          color[d] = 1;
          stack.push_back({d, 0});
        }
      } else {
        color[s] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

// All words when the language is finite and has at most max_count members.
inline std::optional<std::set<std::vector<Sym>>> enumerate_language(const Fa& a_in,
                                                                    size_t max_count = 4096) {
  if (!language_is_finite(a_in)) return std::nullopt;
  Fa a = canonical(a_in);
  std::set<std::vector<Sym>> out;
  auto adj = fa_detail::adjacency(a);
  for (auto& v : adj) std::sort(v.begin(), v.end());
  std::vector<Sym> word;
  bool overflow = false;
  auto dfs = [&](auto&& self, uint32_t s) -> void {
    if (overflow) return;
    if (a.accepting[s]) {
      if (out.size() >= max_count) {
        overflow = true;
        return;
      }
      out.insert(word);
    }
    for (const auto& [sym, dst] : adj[s]) {
      word.push_back(sym);
      self(self, dst);
      word.pop_back();
    }
  };
  if (!is_empty_language(a)) dfs(dfs, a.initial);
  if (overflow) return std::nullopt;
  return out;
}

// Words of length <= max_len (tests only; exponential in dense automata).
inline std::set<std::vector<Sym>> words_upto(const Fa& a_in, size_t max_len) {
  Fa a = canonical(a_in);
  std::set<std::vector<Sym>> out;
  auto adj = fa_detail::adjacency(a);
  std::vector<Sym> word;
  auto dfs = [&](auto&& self, uint32_t s) -> void {
    if (a.accepting[s]) out.insert(word);
    if (word.size() == max_len) return;
    for (const auto& [sym, dst] : adj[s]) {
      word.push_back(sym);
      self(self, dst);
      word.pop_back();
    }
  };
  if (!is_empty_language(a)) dfs(dfs, a.initial);
  return out;
}

// [shortest, longest] accepted lengths; longest is nullopt when the language
// is infinite. Precondition: nonempty language.
inline std::pair<size_t, std::optional<size_t>> length_range(const Fa& a_in) {
  Fa a = canonical(a_in);
  assert(!is_empty_language(a));
  auto adj = fa_detail::adjacency(a);
  std::vector<size_t> dist(a.num_states, SIZE_MAX);
  std::queue<uint32_t> q;
  dist[a.initial] = 0;
  q.push(a.initial);
  size_t shortest = SIZE_MAX;
  while (!q.empty()) {
    uint32_t s = q.front();
    q.pop();
    if (a.accepting[s]) {
      shortest = std::min(shortest, dist[s]);
      break;  // BFS: first accepting hit is shortest
    }
    for (const auto& [sym, dst] : adj[s])
      if (dist[dst] == SIZE_MAX) {
        dist[dst] = dist[s] + 1;
        q.push(dst);
      }
  }
  if (!language_is_finite(a)) return {shortest, std::nullopt};
  // Longest distance from the initial state in the trimmed DAG, maximized
  // over accepting states.
  std::vector<std::vector<uint32_t>> radj(a.num_states);
  std::vector<uint32_t> indeg(a.num_states, 0);
  for (const auto& e : a.edges) {
    radj[e.src].push_back(e.dst);
    ++indeg[e.dst];
  }
  std::vector<int64_t> dist2(a.num_states, INT64_MIN);
  dist2[a.initial] = 0;
  std::queue<uint32_t> topo;
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (indeg[s] == 0) topo.push(s);
  while (!topo.empty()) {
    uint32_t s = topo.front();
    topo.pop();
    for (uint32_t d : radj[s]) {
      if (dist2[s] != INT64_MIN) dist2[d] = std::max(dist2[d], dist2[s] + 1);
      if (--indeg[d] == 0) topo.push(d);
    }
  }
  int64_t lmax = 0;
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (a.accepting[s] && dist2[s] != INT64_MIN) lmax = std::max(lmax, dist2[s]);
  return {shortest, static_cast<size_t>(lmax)};
}

inline Fa quotient(const Fa& a, const std::vector<uint32_t>& block_of, uint32_t num_blocks) {
  Fa r;
  r.num_states = num_blocks;
  r.initial = block_of[a.initial];
  r.accepting.assign(num_blocks, false);
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (a.accepting[s]) r.accepting[block_of[s]] = true;
  std::set<FaEdge> es;
  for (const auto& e : a.edges) es.insert({block_of[e.src], e.sym, block_of[e.dst]});
  r.edges.assign(es.begin(), es.end());
  return r;
}

inline Fa sigma_star(const std::vector<Sym>& alphabet) {
  Fa a;
  a.accepting = {true};
  for (Sym s : alphabet) a.edges.push_back({0, s, 0});
  return a;
}

// Language of all factors (contiguous substrings, including the empty one)
// of members of L(a).
inline Fa factors(const Fa& a_in) {
  Fa a = trim(a_in);
  if (is_empty_language(a)) return canonical(Fa::epsilon());
  Fa r = a;
  uint32_t fresh = r.num_states++;
  r.accepting.assign(r.num_states, true);
  for (uint32_t s = 0; s + 1 < r.num_states; ++s) r.edges.push_back({fresh, kEps, s});
  r.initial = fresh;
  return canonical(r);
}

namespace fa_detail {

struct UnionFind {
  std::vector<uint32_t> parent;
  explicit UnionFind(uint32_t n) : parent(n) {
    for (uint32_t i = 0; i < n; ++i) parent[i] = i;
  }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(uint32_t a, uint32_t b) { parent[find(a)] = find(b); }
};

// Bounded state equivalence: true iff for every word of length <= k, path
// liveness and acceptance from p1 (in a) and p2 (in b) agree. Both automata
// must be trimmed partial DFAs; kNoState marks the dead continuation.
struct BoundedEq {
  const std::vector<std::map<Sym, uint32_t>>& ta;
  const std::vector<std::map<Sym, uint32_t>>& tb;
  const Fa& a;
  const Fa& b;
  std::map<std::tuple<uint32_t, uint32_t, uint32_t>, bool> memo;

  bool eq(uint32_t p1, uint32_t p2, uint32_t k) {
    bool alive1 = p1 != kNoState, alive2 = p2 != kNoState;
    if (alive1 != alive2) return false;
    if (!alive1) return true;
    if (a.accepting[p1] != b.accepting[p2]) return false;
    if (k == 0) return true;
    auto key = std::make_tuple(p1, p2, k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = true;  // cycles in the pair graph agree up to the cut
    std::set<Sym> syms;
    for (const auto& [s, d] : ta[p1]) syms.insert(s);
    for (const auto& [s, d] : tb[p2]) syms.insert(s);
    bool ok = true;
    for (Sym s : syms) {
      auto i1 = ta[p1].find(s);
      auto i2 = tb[p2].find(s);
      uint32_t d1 = i1 == ta[p1].end() ? kNoState : i1->second;
      uint32_t d2 = i2 == tb[p2].end() ? kNoState : i2->second;
      if (!eq(d1, d2, k - 1)) {
        ok = false;
        break;
      }
    }
    return memo[key] = ok;
  }
};

}  // namespace fa_detail

// Widening: quotient the union automaton by the transitive closure of
// R_n-related state pairs, where R_n relates a state of the first argument
// to a union state when acceptance and path liveness agree on all words of
// length <= n. Unrelated union states stay in singleton blocks. The result
// covers the plain union by construction.
inline Fa widen(const Fa& a1_in, const Fa& a2_in, uint32_t n) {
  Fa a1 = canonical(a1_in);
  Fa u = canonical(fa_union(a1_in, a2_in));
  if (is_empty_language(u)) return u;
  if (is_empty_language(a1)) return u;

  std::vector<std::map<Sym, uint32_t>> t1(a1.num_states), tu(u.num_states);
  for (const auto& e : a1.edges) t1[e.src][e.sym] = e.dst;
  for (const auto& e : u.edges) tu[e.src][e.sym] = e.dst;
  fa_detail::BoundedEq eq{t1, tu, a1, u, {}};

  fa_detail::UnionFind uf(u.num_states);
  for (uint32_t q1 = 0; q1 < a1.num_states; ++q1) {
    uint32_t first = kNoState;
    for (uint32_t q2 = 0; q2 < u.num_states; ++q2) {
      if (!eq.eq(q1, q2, n)) continue;
      if (first == kNoState)
        first = q2;
      else
        uf.unite(first, q2);
    }
  }
  std::map<uint32_t, uint32_t> root_ids;
  std::vector<uint32_t> block_of(u.num_states);
  for (uint32_t s = 0; s < u.num_states; ++s) {
    uint32_t r = uf.find(s);
    auto it = root_ids.find(r);
    if (it == root_ids.end()) {
      uint32_t id = static_cast<uint32_t>(root_ids.size());
      root_ids[r] = id;
      block_of[s] = id;
    } else {
      block_of[s] = it->second;
    }
  }
  return canonical(quotient(u, block_of, static_cast<uint32_t>(root_ids.size())));
}

inline std::string to_dot(const Fa& a, const std::function<std::string(Sym)>& namer) {
  auto esc = [](const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r.push_back('\\');
      r.push_back(c);
    }
    return r;
  };
  std::string out = "digraph fa {\n  rankdir=LR;\n  node [shape=circle];\n";
  out += "  __start [shape=point];\n";
  for (uint32_t s = 0; s < a.num_states; ++s)
    if (a.accepting[s])
      out += "  q" + std::to_string(s) + " [shape=doublecircle];\n";
  out += "  __start -> q" + std::to_string(a.initial) + ";\n";
  std::vector<FaEdge> es = a.edges;
  std::sort(es.begin(), es.end());
  for (const auto& e : es) {
    std::string lbl = e.sym == kEps ? std::string("eps") : namer(e.sym);
    out += "  q" + std::to_string(e.src) + " -> q" + std::to_string(e.dst) +
           " [label=\"" + esc(lbl) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace sea
