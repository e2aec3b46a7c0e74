#include "cssmin/maxsat.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cssmin/solver.hpp"

namespace cssmin {

namespace bx {

Pool::Pool() {
  nodes_.push_back({Kind::True, 0, {}});
  nodes_.push_back({Kind::False, 0, {}});
}

int Pool::make(Node n) {
  auto key = std::make_pair(static_cast<int>(n.kind) * 1000003 + n.var, n.kids);
  auto it = cons_.find(key);
  if (it != cons_.end()) return it->second;
  nodes_.push_back(std::move(n));
  int id = static_cast<int>(nodes_.size()) - 1;
  cons_.emplace(std::move(key), id);
  return id;
}

int Pool::var(int v) { return make({Kind::Var, v, {}}); }

int Pool::neg(int a) {
  switch (nodes_[a].kind) {
    case Kind::True: return fls();
    case Kind::False: return tru();
    case Kind::Not: return nodes_[a].kids[0];
    default: return make({Kind::Not, 0, {a}});
  }
}

int Pool::all(std::vector<int> ks) {
  std::vector<int> out;
  for (int k : ks) {
    if (k == fls()) return fls();
    if (k == tru()) continue;
    if (nodes_[k].kind == Kind::And) out.insert(out.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
    else out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) return tru();
  if (out.size() == 1) return out[0];
  return make({Kind::And, 0, std::move(out)});
}

int Pool::any(std::vector<int> ks) {
  std::vector<int> out;
  for (int k : ks) {
    if (k == tru()) return tru();
    if (k == fls()) continue;
    if (nodes_[k].kind == Kind::Or) out.insert(out.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
    else out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) return fls();
  if (out.size() == 1) return out[0];
  return make({Kind::Or, 0, std::move(out)});
}

bool eval(const Pool& p, int f, const std::vector<char>& value) {
  const Node& n = p.at(f);
  switch (n.kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Var: return value.at(n.var);
    case Kind::Not: return !eval(p, n.kids[0], value);
    case Kind::And:
      for (int k : n.kids)
        if (!eval(p, k, value)) return false;
      return true;
    case Kind::Or:
      for (int k : n.kids)
        if (eval(p, k, value)) return true;
      return false;
  }
  return false;
}

}  // namespace bx

namespace {

int bits_for(long values) {
  int b = 0;
  while ((1L << b) < values) ++b;
  return b;
}

// x >= c over little-endian bits.
int ge_const(bx::Pool& p, const std::vector<int>& bits, long c) {
  if (c <= 0) return p.tru();
  if (c >= (1L << bits.size())) return p.fls();
  int g = p.tru();
  for (size_t k = 0; k < bits.size(); ++k) {
    int b = p.var(bits[k]);
    g = (c >> k & 1) ? p.all({b, g}) : p.any({b, g});
  }
  return g;
}

int eq_const(bx::Pool& p, const std::vector<int>& bits, long c) {
  if (c < 0 || c >= (1L << bits.size())) return p.fls();
  std::vector<int> lits;
  for (size_t k = 0; k < bits.size(); ++k) lits.push_back((c >> k & 1) ? p.var(bits[k]) : p.neg(p.var(bits[k])));
  return p.all(lits);
}

long bits_value(const std::vector<int>& bits, const std::vector<char>& value) {
  long v = 0;
  for (size_t k = 0; k < bits.size(); ++k)
    if (value.at(bits[k])) v |= 1L << k;
  return v;
}

}  // namespace

Encoding encode(const OrderContext& oc, const OrderableEnumeration& en, const EncodeOptions& opt) {
  const CssGraph& g = oc.graph();
  const Covering& c = oc.covering();
  if (en.bicliques.empty()) throw std::invalid_argument("no bicliques to choose from");
  Encoding e;
  auto& p = e.pool;
  e.m = static_cast<int>(c.size());
  e.K = static_cast<int>(en.bicliques.size());
  auto fresh = [&] { return ++e.num_vars; };
  for (int k = bits_for(e.m + 1); k > 0; --k) e.inpos_bits.push_back(fresh());
  for (int k = bits_for(e.K); k > 0; --k) e.bc_bits.push_back(fresh());

  // Which nodes may be dropped from a chosen biclique.
  std::set<std::pair<bool, int>> on_order;
  for (const auto& o : g.order)
    for (int id : {o.before, o.after}) {
      on_order.emplace(true, g.edges[id].first);
      on_order.emplace(false, g.edges[id].second);
    }
  auto excludable = [&](bool is_sel, int id) { return !opt.restrict_exclusions || on_order.count({is_sel, id}); };
  size_t M = 0;
  e.rho.resize(e.K);
  for (int i = 0; i < e.K; ++i) {
    const auto& b = en.bicliques[i];
    int k = 0;
    for (int s : b.sels)
      if (excludable(true, s)) e.rho[i][{true, s}] = k++;
    for (int q : b.props)
      if (excludable(false, q)) e.rho[i][{false, q}] = k++;
    M = std::max(M, static_cast<size_t>(k));
  }
  for (size_t k = 0; k < M; ++k) e.excl.push_back(fresh());

  std::vector<int> bc_is(e.K);
  for (int i = 0; i < e.K; ++i) bc_is[i] = eq_const(p, e.bc_bits, i);
  std::map<long, int> ge_memo;
  auto ge = [&](long k) {
    auto it = ge_memo.find(k);
    if (it != ge_memo.end()) return it->second;
    return ge_memo[k] = ge_const(p, e.inpos_bits, k);
  };
  auto x = [&](int i, bool is_sel, int id) {
    auto it = e.rho[i].find({is_sel, id});
    return it == e.rho[i].end() ? p.fls() : p.var(e.excl[it->second]);
  };

  std::map<int, std::vector<int>> holders;  // edge -> bicliques containing it
  for (int i = 0; i < e.K; ++i)
    for (int s : en.bicliques[i].sels)
      for (int q : en.bicliques[i].props) holders[g.edge(s, q)].push_back(i);
  std::map<int, int> has_memo;
  auto has_edge = [&](int edge) {
    auto it = has_memo.find(edge);
    if (it != has_memo.end()) return it->second;
    std::vector<int> alts;
    auto h = holders.find(edge);
    if (h != holders.end()) {
      const auto [s, q] = g.edges[edge];
      for (int i : h->second) alts.push_back(p.all({bc_is[i], p.neg(x(i, true, s)), p.neg(x(i, false, q))}));
    }
    return has_memo[edge] = p.any(alts);
  };

  // Ranges of the two integers.
  e.hard.push_back(p.neg(ge(e.m + 1)));
  e.hard.push_back(p.neg(ge_const(p, e.bc_bits, e.K)));

  // Not forbidden at the chosen position.
  for (const auto& [j, list] : en.forbidden_first)
    for (int i : list) e.hard.push_back(p.any({p.neg(ge(j)), p.neg(bc_is[i])}));

  // Edge order respected.
  for (const auto& o : g.order)
    e.hard.push_back(p.any({p.neg(has_edge(o.before)), p.neg(ge(oc.index(o.after))), has_edge(o.after)}));

  if (opt.position_bounds) {
    for (int i = 0; i < e.K; ++i) {
      const auto& b = en.bicliques[i];
      std::vector<int> rules;
      for (int r = 0; r < e.m; ++r) {
        bool hit = false;
        for (int s : c[r].sels)
          for (int q : c[r].props)
            hit = hit || (std::binary_search(b.sels.begin(), b.sels.end(), s) &&
                          std::binary_search(b.props.begin(), b.props.end(), q));
        if (hit) rules.push_back(r + 1);
      }
      if (rules.size() < 2) {
        e.hard.push_back(p.neg(bc_is[i]));
        continue;
      }
      e.hard.push_back(p.any({p.neg(bc_is[i]), ge(rules[1])}));
      e.hard.push_back(p.any({p.neg(bc_is[i]), p.neg(ge(rules.back() + 1))}));
    }
  }

  if (!opt.allowed.empty()) {
    std::vector<int> alts;
    for (int i : opt.allowed) alts.push_back(bc_is.at(i));
    e.hard.push_back(p.any(alts));
  }

  // Weight of the new rule.
  for (int i = 0; i < e.K; ++i) {
    const auto& b = en.bicliques[i];
    for (int s : b.sels) e.soft.push_back({p.any({p.neg(bc_is[i]), x(i, true, s)}), g.S[s].weight});
    for (int q : b.props) e.soft.push_back({p.any({p.neg(bc_is[i]), x(i, false, q)}), g.P[q].weight});
  }
  // Weight of what survives trimming in the old rules.
  for (int r = 0; r < e.m; ++r) {
    const int idx = r + 1;
    for (int s : c[r].sels) {
      std::vector<int> conj{ge(idx)};
      for (int q : c[r].props)
        if (oc.index(g.edge(s, q)) == idx) conj.push_back(has_edge(g.edge(s, q)));
      e.soft.push_back({p.all(conj), g.S[s].weight});
    }
    for (int q : c[r].props) {
      std::vector<int> conj{ge(idx)};
      for (int s : c[r].sels)
        if (oc.index(g.edge(s, q)) == idx) conj.push_back(has_edge(g.edge(s, q)));
      e.soft.push_back({p.all(conj), g.P[q].weight});
    }
  }
  return e;
}

namespace {

class Tseitin {
 public:
  Tseitin(const bx::Pool& p, int nvars, std::vector<WClause>& out) : p_(p), n_(nvars), out_(out) {}

  int lit(int f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    const bx::Node& n = p_.at(f);
    int r = 0;
    switch (n.kind) {
      case bx::Kind::Var: r = n.var; break;
      case bx::Kind::Not: r = -lit(n.kids[0]); break;
      case bx::Kind::True: r = truth(); break;
      case bx::Kind::False: r = -truth(); break;
      case bx::Kind::And:
      case bx::Kind::Or: {
        std::vector<int> ks;
        for (int k : n.kids) ks.push_back(lit(k));
        const int sign = n.kind == bx::Kind::And ? 1 : -1;
        r = ++n_;
        // And: y -> k for all k, (k1 & ... ) -> y.  Or is the dual.
        std::vector<int> back{sign * r};
        for (int k : ks) {
          hard({-sign * r, sign * k});
          back.push_back(-sign * k);
        }
        hard(back);
        break;
      }
    }
    return memo_[f] = r;
  }

  // f as a single clause when it already is one, else its definition literal.
  std::vector<int> clause(int f) {
    const bx::Node& n = p_.at(f);
    if (n.kind == bx::Kind::Or) {
      std::vector<int> lits;
      for (int k : n.kids) lits.push_back(lit(k));
      return lits;
    }
    return {lit(f)};
  }

  void hard(std::vector<int> lits) { out_.push_back({-1, std::move(lits)}); }
  int nvars() const { return n_; }

 private:
  int truth() {
    if (true_var_ == 0) {
      true_var_ = ++n_;
      hard({true_var_});
    }
    return true_var_;
  }

  const bx::Pool& p_;
  int n_;
  std::vector<WClause>& out_;
  std::map<int, int> memo_;
  int true_var_ = 0;
};

}  // namespace

WcnfInstance to_wcnf(const Encoding& e) {
  WcnfInstance w;
  Tseitin ts(e.pool, e.num_vars, w.clauses);
  std::function<void(int)> add_hard = [&](int f) {
    const auto& n = e.pool.at(f);
    if (n.kind == bx::Kind::True) return;
    if (n.kind == bx::Kind::And) {
      for (int k : n.kids) add_hard(k);
      return;
    }
    ts.hard(ts.clause(f));
  };
  for (int f : e.hard) add_hard(f);
  long total = 0;
  for (const auto& s : e.soft) {
    if (s.f == e.pool.tru() || s.weight <= 0) continue;
    w.clauses.push_back({s.weight, ts.clause(s.f)});
    total += s.weight;
  }
  w.top = total + 1;
  for (auto& c : w.clauses)
    if (c.weight < 0) c.weight = w.top;
  w.nvars = ts.nvars();
  return w;
}

std::string emit_dimacs(const WcnfInstance& w) {
  std::string out = "p wcnf " + std::to_string(w.nvars) + " " + std::to_string(w.clauses.size()) + " " +
                    std::to_string(w.top) + "\n";
  for (const auto& c : w.clauses) {
    out += std::to_string(c.weight);
    for (int l : c.lits) out += " " + std::to_string(l);
    out += " 0\n";
  }
  return out;
}

WcnfInstance parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  WcnfInstance w;
  bool header = false;
  long expected = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      ls >> p >> fmt >> w.nvars >> expected >> w.top;
      if (fmt != "wcnf" || !ls) throw std::runtime_error("bad wcnf header");
      header = true;
      continue;
    }
    if (!header) throw std::runtime_error("clause before header");
    WClause c;
    ls >> c.weight;
    int l;
    while (ls >> l && l != 0) c.lits.push_back(l);
    w.clauses.push_back(std::move(c));
  }
  if (!header || static_cast<long>(w.clauses.size()) != expected) throw std::runtime_error("bad wcnf clause count");
  return w;
}

MaxSatModel parse_model(const std::string& text, int nvars) {
  MaxSatModel m;
  m.value.assign(nvars + 1, 0);
  std::istringstream in(text);
  std::string line;
  bool status = false;
  while (std::getline(in, line)) {
    if (line.size() < 2 || line[1] != ' ') continue;
    std::istringstream ls(line.substr(2));
    switch (line[0]) {
      case 's': {
        status = true;
        std::string rest = line.substr(2);
        if (rest.rfind("OPTIMUM FOUND", 0) == 0) m.status = MaxSatStatus::Optimum;
        else if (rest.rfind("UNSATISFIABLE", 0) == 0) m.status = MaxSatStatus::Unsat;
        else m.status = MaxSatStatus::Unknown;
        break;
      }
      case 'o':
        if (!(ls >> m.cost)) throw std::runtime_error("malformed cost line: " + line);
        break;
      case 'v': {
        std::string tok;
        while (ls >> tok) {
          long l;
          try {
            l = std::stol(tok);
          } catch (const std::exception&) {
            throw std::runtime_error("malformed model literal: " + tok);
          }
          if (l == 0) continue;
          if (std::labs(l) <= nvars) m.value[std::labs(l)] = l > 0;
        }
        break;
      }
      default: break;
    }
  }
  if (!status) throw std::runtime_error("solver output has no status line");
  return m;
}

long model_cost(const WcnfInstance& w, const std::vector<char>& value) {
  long cost = 0;
  for (const auto& c : w.clauses) {
    bool sat = false;
    for (int l : c.lits) sat = sat || (value.at(std::abs(l)) != 0) == (l > 0);
    if (sat) continue;
    if (c.weight >= w.top) return -1;
    cost += c.weight;
  }
  return cost;
}

MaxSatModel solve_wcnf(const WcnfInstance& w, const MaxSatConfig& cfg, const std::atomic<bool>* cancel) {
  const std::string text = emit_dimacs(w);
  if (!cfg.emit_dir.empty()) std::ofstream(cfg.emit_dir + "/" + hex64(fnv1a(text)) + ".wcnf") << text;
  const std::string path = write_temp_file(text, ".wcnf");
  auto argv = cfg.command;
  argv.push_back(path);
  ProcessResult pr = run_process(argv, cfg.timeout_s, cancel);
  std::remove(path.c_str());
  MaxSatModel m;
  if (pr.spawn_failed) {
    m.error = "cannot start " + cfg.command.at(0);
  } else if (pr.timed_out) {
    m.error = "Max-SAT solver timed out";
  } else {
    try {
      m = parse_model(pr.out, w.nvars);
    } catch (const std::exception& ex) {
      m.error = ex.what();
    }
  }
  return m;
}

Assignment read_assignment(const Encoding& e, const std::vector<char>& value) {
  Assignment a;
  a.inpos = static_cast<int>(bits_value(e.inpos_bits, value));
  a.bc = static_cast<int>(bits_value(e.bc_bits, value));
  for (int v : e.excl) a.excluded.push_back(value.at(v));
  return a;
}

std::optional<MergeOpportunity> decode(const Encoding& e, const std::vector<char>& value,
                                       const OrderableEnumeration& en, const OrderContext& oc) {
  Assignment a = read_assignment(e, value);
  if (a.bc >= e.K || a.inpos > e.m) throw std::runtime_error("model outside variable ranges");
  const auto& b = en.bicliques[a.bc];
  auto dropped = [&](bool is_sel, int id) {
    auto it = e.rho[a.bc].find({is_sel, id});
    return it != e.rho[a.bc].end() && a.excluded[it->second];
  };
  Biclique sub;
  for (int s : b.sels)
    if (!dropped(true, s)) sub.sels.push_back(s);
  for (int q : b.props)
    if (!dropped(false, q)) sub.props.push_back(q);
  if (sub.sels.empty() || sub.props.empty()) return std::nullopt;
  auto order = order_properties(oc, sub, a.inpos);
  if (!order) throw std::logic_error("decoded biclique is not orderable");
  MergeOpportunity mo;
  mo.rule = {sub.sels, *order};
  mo.j = a.inpos;
  mo.weight = covering_weight(oc.graph(), apply_opportunity(oc.graph(), oc.covering(), mo.rule, mo.j));
  return mo;
}

std::optional<MergeOpportunity> brute_force_best_opportunity(const OrderContext& oc) {
  const CssGraph& g = oc.graph();
  const Covering& c = oc.covering();
  const int m = static_cast<int>(c.size());
  std::set<Biclique> subs;
  for (const auto& b : brute_force_maximal_bicliques(g)) {
    if (b.sels.size() > 16 || b.props.size() > 16) throw std::invalid_argument("biclique too large for brute force");
    for (unsigned xs = 1; xs < (1u << b.sels.size()); ++xs)
      for (unsigned ys = 1; ys < (1u << b.props.size()); ++ys) {
        Biclique s;
        for (size_t k = 0; k < b.sels.size(); ++k)
          if (xs >> k & 1) s.sels.push_back(b.sels[k]);
        for (size_t k = 0; k < b.props.size(); ++k)
          if (ys >> k & 1) s.props.push_back(b.props[k]);
        subs.insert(std::move(s));
      }
  }
  std::optional<MergeOpportunity> best;
  std::string best_text;
  for (const auto& s : subs) {
    for (int j = 0; j <= m; ++j) {
      CRule r{s.sels, s.props};
      // Trimming does not look at property order, so the weight is known up front.
      const int w = covering_weight(g, trim(g, insert_rule(c, r, j)));
      if (best && w > best->weight) continue;
      std::vector<int> perm = s.props;
      do {
        r.props = perm;
        if (!is_valid_covering(g, apply_opportunity(g, c, r, j))) continue;
        std::string text = describe(g, r);
        bool better = !best || w < best->weight || (w == best->weight && (j < best->j || (j == best->j && text < best_text)));
        if (better) {
          best = MergeOpportunity{r, j, w};
          best_text = text;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return best;
}

SearchResult find_best_opportunity(const OrderContext& oc, const OrderableEnumeration& en, const SearchConfig& cfg) {
  SearchResult res;
  if (en.bicliques.empty()) return res;
  const int K = static_cast<int>(en.bicliques.size());
  const int workers = std::max(1, cfg.workers), per = std::max(1, cfg.partitions);
  const int parts = workers * per;

  std::vector<std::vector<int>> allowed;
  if (parts == 1) {
    allowed.emplace_back();
  } else {
    for (int k = 0; k < workers; ++k) {
      const int q = k * per + cfg.iteration % per;
      std::vector<int> mine;
      for (int i = q; i < K; i += parts) mine.push_back(i);
      if (!mine.empty()) allowed.push_back(std::move(mine));
    }
  }

  struct Outcome {
    bool done = false;
    std::optional<MergeOpportunity> best;
    std::string error;
    long vars = 0, clauses = 0;
  };
  std::vector<Outcome> out(allowed.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<bool> cancel{false};
  auto work = [&](size_t k) {
    Outcome o;
    try {
      EncodeOptions eo = cfg.encode;
      eo.allowed = allowed[k];
      Encoding e = encode(oc, en, eo);
      WcnfInstance w = to_wcnf(e);
      o.vars = w.nvars;
      o.clauses = static_cast<long>(w.clauses.size());
      MaxSatModel m = solve_wcnf(w, cfg.solver, &cancel);
      if (!m.error.empty()) o.error = m.error;
      else if (m.status == MaxSatStatus::Optimum) o.best = decode(e, m.value, en, oc);
      else if (m.status == MaxSatStatus::Unknown) o.error = "Max-SAT solver gave no answer";
    } catch (const std::exception& ex) {
      o.error = ex.what();
    }
    std::lock_guard<std::mutex> lock(mu);
    o.done = true;
    out[k] = std::move(o);
    cv.notify_all();
  };

  if (allowed.size() == 1) {
    work(0);
  } else {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::thread> threads;
    for (size_t k = 0; k < allowed.size(); ++k) threads.emplace_back(work, k);
    {
      std::unique_lock<std::mutex> lock(mu);
      auto finished = [&] { return std::count_if(out.begin(), out.end(), [](const Outcome& o) { return o.done; }); };
      cv.wait(lock, [&] { return finished() > 0; });
      const auto t = std::chrono::steady_clock::now() - start;
      const auto deadline = start + t + std::chrono::duration_cast<std::chrono::steady_clock::duration>(t * cfg.grace) +
                            std::chrono::milliseconds(50);
      cv.wait_until(lock, deadline, [&] { return finished() == static_cast<long>(out.size()); });
      cancel = true;
    }
    for (auto& th : threads) th.join();
  }

  for (const auto& o : out) {
    res.vars += o.vars;
    res.clauses += o.clauses;
    if (!o.done) continue;
    ++res.instances;
    if (!o.error.empty() && !cancel) {
      res.solver_error = true;
      res.error = o.error;
    }
    if (o.best && (!res.best || o.best->weight < res.best->weight)) res.best = o.best;
  }
  return res;
}

}  // namespace cssmin
