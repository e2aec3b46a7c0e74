#include "cssmin/attr.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "cssmin/dom.hpp"

namespace cssmin {

namespace {

constexpr char kBegin = '\x01';
constexpr char kEnd = '\x02';

std::vector<std::string> patterns(const AttrConstraint& a) {
  const std::string b(1, kBegin), e(1, kEnd), v = a.value;
  switch (a.op) {
    case AttrOp::Equals: return {b + v + e};
    case AttrOp::Includes: return {b + v + e, b + v + " ", " " + v + " ", " " + v + e};
    case AttrOp::DashMatch: return {b + v + e, b + v + "-"};
    case AttrOp::Prefix: return {b + v};
    case AttrOp::Suffix: return {v + e};
    case AttrOp::Substring: return {v};
  }
  return {};
}

}  // namespace

AttrConstraint to_constraint(const Condition& c) {
  AttrConstraint a;
  a.exists_only = c.kind == Condition::Kind::AttrExists;
  a.op = c.op;
  a.value = c.value;
  a.negated = c.negated;
  return a;
}

bool word_satisfies(const std::vector<AttrConstraint>& set, const std::string& w) {
  for (const auto& a : set) {
    bool r = a.exists_only || attr_op_matches(a.op, a.value, w);
    if (r == a.negated) return false;
  }
  return true;
}

ConstraintWordAutomaton::ConstraintWordAutomaton(std::vector<AttrConstraint> set) : set_(std::move(set)) {
  if (set_.size() > 64) throw std::invalid_argument("too many constraints on one attribute");
  std::set<char> chars{' ', '-'};
  for (const auto& a : set_) chars.insert(a.value.begin(), a.value.end());
  for (char c = 'a'; c <= 'z'; ++c) {
    if (!chars.count(c)) {
      chars.insert(c);  // one character no constraint mentions
      break;
    }
  }
  alphabet_.assign(chars.begin(), chars.end());

  // Trie over all marked patterns.
  std::vector<std::map<char, int>> go(1);
  out_.assign(1, 0);
  for (size_t i = 0; i < set_.size(); ++i) {
    const auto& a = set_[i];
    if (a.exists_only) {
      if (a.negated) unsat_ = true;
      continue;
    }
    (a.negated ? forbidden_ : required_) |= uint64_t{1} << i;
    for (const auto& p : patterns(a)) {
      int s = 0;
      for (char c : p) {
        auto it = go[s].find(c);
        if (it == go[s].end()) {
          go.emplace_back();
          out_.push_back(0);
          it = go[s].emplace(c, static_cast<int>(go.size()) - 1).first;
        }
        s = it->second;
      }
      out_[s] |= uint64_t{1} << i;
    }
  }

  const int nsym = static_cast<int>(alphabet_.size()) + 2;
  auto sym_char = [&](int k) {
    if (k < static_cast<int>(alphabet_.size())) return alphabet_[k];
    return k == static_cast<int>(alphabet_.size()) ? kBegin : kEnd;
  };
  next_.assign(go.size(), std::vector<int>(nsym, 0));
  std::vector<int> fail(go.size(), 0);
  std::queue<int> q;
  for (int k = 0; k < nsym; ++k) {
    auto it = go[0].find(sym_char(k));
    if (it != go[0].end()) {
      next_[0][k] = it->second;
      q.push(it->second);
    }
  }
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    out_[s] |= out_[fail[s]];
    for (int k = 0; k < nsym; ++k) {
      auto it = go[s].find(sym_char(k));
      if (it != go[s].end()) {
        fail[it->second] = next_[fail[s]][k];
        next_[s][k] = it->second;
        q.push(it->second);
      } else {
        next_[s][k] = next_[fail[s]][k];
      }
    }
  }
}

int ConstraintWordAutomaton::sym(char c) const {
  if (c == kBegin) return static_cast<int>(alphabet_.size());
  if (c == kEnd) return static_cast<int>(alphabet_.size()) + 1;
  return static_cast<int>(std::lower_bound(alphabet_.begin(), alphabet_.end(), c) - alphabet_.begin());
}

std::vector<std::string> ConstraintWordAutomaton::solutions(size_t k, size_t max_len,
                                                            const std::vector<std::string>& exclude) const {
  std::vector<std::string> res;
  if (unsat_ || k == 0) return res;
  const int na = static_cast<int>(alphabet_.size());

  // Configurations (trie state, satisfied mask) reachable after ^ and some characters.
  std::map<std::pair<int, uint64_t>, int> id;
  std::vector<std::pair<int, uint64_t>> confs;
  std::vector<std::vector<int>> step;  // -1: a negative constraint was hit
  auto intern = [&](int s, uint64_t m) {
    if (out_[s] & forbidden_) return -1;
    m |= out_[s] & required_;
    auto [it, fresh] = id.emplace(std::make_pair(s, m), static_cast<int>(confs.size()));
    if (fresh) confs.emplace_back(s, m);
    return it->second;
  };
  int start = intern(next_[0][sym(kBegin)], 0);
  if (start < 0) return res;
  for (size_t i = 0; i < confs.size(); ++i) {
    std::vector<int> row(na);
    for (int c = 0; c < na; ++c) row[c] = intern(next_[confs[i].first][c], confs[i].second);
    step.push_back(std::move(row));
  }
  const size_t nc = confs.size();
  std::vector<char> acc(nc);
  for (size_t i = 0; i < nc; ++i) {
    int s = next_[confs[i].first][sym(kEnd)];
    acc[i] = !(out_[s] & forbidden_) && ((confs[i].second | out_[s]) & required_) == required_;
  }

  // feas[L][c]: some word of exactly L more characters leads from c to acceptance.
  std::vector<std::vector<char>> feas{acc};
  std::set<std::string> skip(exclude.begin(), exclude.end());
  std::string cur;
  std::function<void(int, size_t)> dfs = [&](int c, size_t left) {
    if (res.size() >= k) return;
    if (left == 0) {
      if (!skip.count(cur)) res.push_back(cur);
      return;
    }
    for (int a = 0; a < na && res.size() < k; ++a) {
      int d = step[c][a];
      if (d < 0 || !feas[left - 1][d]) continue;
      cur.push_back(alphabet_[a]);
      dfs(d, left - 1);
      cur.pop_back();
    }
  };
  for (size_t len = 0; len <= max_len && res.size() < k; ++len) {
    if (len > 0) {
      std::vector<char> f(nc);
      bool any = false;
      for (size_t i = 0; i < nc; ++i) {
        for (int a = 0; a < na && !f[i]; ++a) {
          int d = step[i][a];
          f[i] = d >= 0 && feas[len - 1][d];
        }
        any = any || f[i];
      }
      feas.push_back(std::move(f));
      // Once a layer is empty every longer layer is empty too.
      if (!any) break;
    }
    if (feas[len][start]) dfs(start, len);
  }
  return res;
}

namespace {

long default_len(const ConstraintWordAutomaton& a, size_t constraints, size_t k) {
  return static_cast<long>(a.num_states()) * static_cast<long>(std::max<size_t>(constraints, 1)) *
             static_cast<long>(k) + 64;
}

}  // namespace

std::optional<std::string> solve_attr_set(const std::vector<AttrConstraint>& set,
                                          const std::vector<std::string>& distinct_from) {
  ConstraintWordAutomaton a(set);
  auto sol = a.solutions(1, default_len(a, set.size(), distinct_from.size() + 1), distinct_from);
  if (sol.empty()) return std::nullopt;
  return sol[0];
}

AttrBound compute_attr_bound(const std::vector<std::vector<AttrConstraint>>& sets) {
  AttrBound b;
  b.n = static_cast<long>(sets.size());
  for (const auto& s : sets) {
    ConstraintWordAutomaton a(s);
    b.m = std::max<long>(b.m, a.num_states());
    b.c = std::max<long>(b.c, static_cast<long>(s.size()));
  }
  b.word_len = b.n * b.m * b.c;
  b.b = b.word_len + 1;
  return b;
}

std::optional<std::vector<std::string>> assign_distinct(
    const std::vector<std::vector<AttrConstraint>>& sets) {
  const size_t n = sets.size();
  std::vector<std::vector<std::string>> cand(n);
  std::map<std::string, int> word_id;
  std::vector<std::string> words;
  std::vector<std::vector<int>> adj(n);
  for (size_t i = 0; i < n; ++i) {
    ConstraintWordAutomaton a(sets[i]);
    cand[i] = a.solutions(n, default_len(a, sets[i].size(), n));
    if (cand[i].empty()) return std::nullopt;
    for (const auto& w : cand[i]) {
      auto [it, fresh] = word_id.emplace(w, static_cast<int>(words.size()));
      if (fresh) words.push_back(w);
      adj[i].push_back(it->second);
    }
  }
  // Kuhn's augmenting paths.
  std::vector<int> owner(words.size(), -1);
  for (size_t i = 0; i < n; ++i) {
    std::vector<char> seen(words.size());
    std::function<bool(int)> aug = [&](int u) {
      for (int w : adj[u]) {
        if (seen[w]) continue;
        seen[w] = 1;
        if (owner[w] < 0 || aug(owner[w])) {
          owner[w] = u;
          return true;
        }
      }
      return false;
    };
    if (!aug(static_cast<int>(i))) return std::nullopt;
  }
  std::vector<std::string> res(n);
  for (size_t w = 0; w < words.size(); ++w)
    if (owner[w] >= 0) res[owner[w]] = words[w];
  return res;
}

}  // namespace cssmin
