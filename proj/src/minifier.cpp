#include "cssmin/minifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"

namespace cssmin {

std::vector<Segment> split_segments(const Stylesheet& ss) {
  std::vector<Segment> out;
  for (const auto& it : ss.items) {
    if (it.passthrough) {
      out.push_back({true, it.raw, {}});
      continue;
    }
    if (out.empty() || out.back().passthrough) out.emplace_back();
    out.back().rules.push_back(it.rule);
  }
  return out;
}

IntersectFn make_intersect(const EmptinessConfig& cfg) {
  return [cfg](const Selector& a, const Selector& b) { return selectors_intersect(a, b, cfg).verdict != Emptiness::Empty; };
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const char* pe_name(PseudoElement pe) {
  switch (pe) {
    case PseudoElement::None: return "";
    case PseudoElement::FirstLine: return "::first-line";
    case PseudoElement::FirstLetter: return "::first-letter";
    case PseudoElement::Before: return "::before";
    case PseudoElement::After: return "::after";
  }
  return "";
}

// Maps the rules of one minified segment onto the ids of the original graph.
std::optional<Covering> covering_over(const CssGraph& g, const std::vector<Rule>& rules, std::string* why) {
  std::map<std::string, int> sid, pid;
  for (size_t i = 0; i < g.S.size(); ++i) sid[g.S[i].text] = static_cast<int>(i);
  for (size_t i = 0; i < g.P.size(); ++i) pid[g.P[i].text] = static_cast<int>(i);
  Covering c;
  for (const auto& r : rules) {
    CRule cr;
    for (const auto& s : r.selectors) {
      auto it = sid.find(serialize(s));
      if (it == sid.end()) {
        *why = "selector " + serialize(s) + " is not in the original";
        return std::nullopt;
      }
      if (std::find(cr.sels.begin(), cr.sels.end(), it->second) == cr.sels.end()) cr.sels.push_back(it->second);
    }
    for (const auto& d : r.decls) {
      auto it = pid.find(d.text());
      if (it == pid.end()) {
        *why = "declaration " + d.text() + " is not in the original";
        return std::nullopt;
      }
      auto old = std::find(cr.props.begin(), cr.props.end(), it->second);
      if (old != cr.props.end()) cr.props.erase(old);
      cr.props.push_back(it->second);
    }
    if (!cr.sels.empty() && !cr.props.empty()) c.push_back(std::move(cr));
  }
  return c;
}

Verdict cascades(const Stylesheet& original, const Stylesheet& minified, const ValidationBounds& b, bool parallel) {
  Verdict v;
  // Selectors of both files with the property names they carry.
  std::map<std::string, std::pair<Selector, std::set<std::string>>> sels;
  for (const auto* ss : {&original, &minified})
    for (const auto& it : ss->items) {
      if (it.passthrough) continue;
      for (const auto& s : it.rule.selectors) {
        auto& slot = sels.try_emplace(serialize(s), normalize(s), std::set<std::string>{}).first->second;
        for (const auto& d : it.rule.decls) slot.second.insert(d.name);
      }
    }
  std::vector<const std::pair<Selector, std::set<std::string>>*> list;
  for (const auto& [text, entry] : sels) list.push_back(&entry);

  std::vector<std::pair<int, int>> groups;
  for (size_t i = 0; i < list.size(); ++i) {
    groups.emplace_back(static_cast<int>(i), -1);
    for (size_t k = i + 1; k < list.size(); ++k) {
      if (list[i]->first.pe != list[k]->first.pe) continue;
      bool related = false;
      for (const auto& a : list[i]->second)
        for (const auto& c : list[k]->second) related = related || related_property_names(a, c);
      if (related) groups.emplace_back(static_cast<int>(i), static_cast<int>(k));
    }
  }
  v.groups = static_cast<long>(groups.size());

  // Only rules that can match one of the group's labels matter for its trees.
  auto filtered = [](const Stylesheet& ss, const std::vector<NodeLabel>& labels) {
    Stylesheet out;
    for (const auto& it : ss.items) {
      if (it.passthrough) continue;
      bool keep = false;
      for (const auto& s : it.rule.selectors) {
        const Selector n = normalize(s);
        for (const auto& l : labels) keep = keep || local_match(n.nodes.back(), l);
      }
      if (keep) out.items.push_back(it);
    }
    return out;
  };

  std::optional<std::pair<size_t, Counterexample>> first;
  long trees = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : trees) if (parallel)
  for (long gi = 0; gi < static_cast<long>(groups.size()); ++gi) {
    const auto [a, c] = groups[gi];
    std::vector<Selector> focus{list[a]->first};
    if (c >= 0) focus.push_back(list[c]->first);
    TreeBounds tb;
    tb.max_depth = b.depth;
    tb.max_branch = b.branch;
    tb.labels = tight_labels(focus, b.label_cap);
    const PseudoElement pe = focus[0].pe;
    CascadeEvaluator eo(filtered(original, tb.labels)), em(filtered(minified, tb.labels));
    LocalMatchCache cache(&tb.labels);
    std::optional<Counterexample> found;
    trees += enumerate_trees(tb, [&](const DocumentTree& t) {
      auto so = eo.styles(t, pe, &cache), sm = em.styles(t, pe, &cache);
      for (int n = 0; n < t.size(); ++n) {
        if (so[n].same_values(sm[n])) continue;
        Counterexample cx{t.dump(), n, describe(t.label(n)), pe_name(pe), "", "", ""};
        std::set<std::string> leaves;
        for (const auto& [k, val] : so[n].props) leaves.insert(k);
        for (const auto& [k, val] : sm[n].props) leaves.insert(k);
        for (const auto& leaf : leaves) {
          auto x = so[n].props.find(leaf), y = sm[n].props.find(leaf);
          std::string vx = x == so[n].props.end() ? "" : x->second.first;
          std::string vy = y == sm[n].props.end() ? "" : y->second.first;
          if (vx != vy) {
            cx.property = leaf;
            cx.original = vx;
            cx.minified = vy;
            break;
          }
        }
        found = cx;
        return false;
      }
      return true;
    });
    if (found) {
#pragma omp critical(cssmin_validate)
      if (!first || first->first > static_cast<size_t>(gi)) first = std::make_pair(static_cast<size_t>(gi), *found);
    }
  }
  v.trees = trees;
  if (first) {
    v.pass = false;
    v.witness = first->second;
    v.reason = "styles differ on node " + std::to_string(first->second.node) + " for " + first->second.property;
  }
  return v;
}

}  // namespace

Verdict compare_cascades(const Stylesheet& original, const Stylesheet& minified, const ValidationBounds& b) {
  return cascades(original, minified, b, true);
}

Verdict compare_cascades_serial(const Stylesheet& original, const Stylesheet& minified, const ValidationBounds& b) {
  return cascades(original, minified, b, false);
}

Verdict validate_equivalence(const Stylesheet& original, const Stylesheet& minified, const ValidationBounds& b,
                             const EmptinessConfig& ec) {
  std::string why;
  auto so = split_segments(original), sm = split_segments(minified);
  if (so.size() != sm.size()) why = "passthrough blocks differ";
  for (size_t i = 0; i < so.size() && why.empty(); ++i) {
    if (so[i].passthrough != sm[i].passthrough || so[i].raw != sm[i].raw) {
      why = "passthrough blocks differ";
      break;
    }
    if (so[i].passthrough) continue;
    auto [g, c0] = build_graph(so[i].rules);
    g.order = extract_edge_order(g, c0, make_intersect(ec));
    auto c1 = covering_over(g, sm[i].rules, &why);
    if (!c1) break;
    if (!is_valid_covering(g, *c1, &why)) break;
    why.clear();
  }
  Verdict v = compare_cascades(original, minified, b);
  if (!why.empty()) {
    v.pass = false;
    v.reason = why + (v.reason.empty() ? "" : "; " + v.reason);
  }
  return v;
}

namespace {

struct Partitioning {
  int workers = 1, per_worker = 1;
};

Partitioning partitioning(const Covering& c, const RunConfig& cfg) {
  if (cfg.deterministic) return {};
  if (!cfg.auto_partitions) return {std::max(1, cfg.workers), std::max(1, cfg.partitions)};
  long nodes = 0;
  for (const auto& r : c) nodes += static_cast<long>(r.sels.size() + r.props.size());
  const long parts = std::max(1L, (nodes + cfg.nodes_per_partition - 1) / cfg.nodes_per_partition);
  if (parts <= 2) return {1, static_cast<int>(parts)};
  const int workers = static_cast<int>(std::min<long>(parts, std::max(1, cfg.workers)));
  return {workers, static_cast<int>((parts + workers - 1) / workers)};
}

long stylesheet_bytes(const std::vector<Segment>& segs, const std::vector<std::pair<CssGraph, Covering>>& state) {
  long n = 0;
  for (size_t i = 0; i < segs.size(); ++i)
    n += segs[i].passthrough ? static_cast<long>(segs[i].raw.size())
                             : static_cast<long>(serialize(state[i].first, state[i].second).size());
  return n;
}

}  // namespace

RunReport run(const Stylesheet& input, const RunConfig& cfg) {
  const auto start = Clock::now();
  RunReport rep;
  rep.bytes_in = static_cast<long>(serialize(input).size());
  auto segs = split_segments(input);
  std::vector<std::pair<CssGraph, Covering>> state(segs.size());
  nlohmann::json graphs = nlohmann::json::array();
  auto left = [&] { return cfg.timeout_s - since(start); };

  const auto order_start = Clock::now();
  const IntersectFn intersect = make_intersect(cfg.emptiness);
  for (size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].passthrough) continue;
    auto [g, c] = build_graph(segs[i].rules);
    OrderStats st;
    g.order = extract_edge_order(g, c, intersect, &st);
    rep.order_pairs += static_cast<long>(g.order.size());
    rep.intersection_queries += st.candidate_pairs;
    c = trim(g, c);
    state[i] = {std::move(g), std::move(c)};
    if (!cfg.emit_graph_file.empty()) graphs.push_back(nlohmann::json::parse(graph_json(state[i].first, state[i].second)));
  }
  rep.order_seconds = since(order_start);
  if (!cfg.emit_graph_file.empty()) std::ofstream(cfg.emit_graph_file) << graphs.dump(1) << "\n";

  int iterations = 0;
  for (size_t i = 0; i < segs.size() && !rep.solver_failed; ++i) {
    if (segs[i].passthrough) continue;
    auto& [g, c] = state[i];
    int misses = 0;  // consecutive iterations whose partitions held nothing
    for (int local = 0; iterations < cfg.max_iterations; ++local) {
      if (left() <= 0) {
        rep.timed_out = true;
        break;
      }
      const auto it_start = Clock::now();
      OrderContext oc(g, c);
      auto en = build_enumeration(oc, cfg.mode);
      rep.bicliques += static_cast<long>(en.bicliques.size());
      rep.unorderable_bicliques += en.unorderable_maximal;
      if (en.bicliques.empty()) break;
      SearchConfig sc;
      sc.solver = cfg.maxsat;
      sc.solver.timeout_s = std::max(1.0, std::min(cfg.maxsat.timeout_s, left()));
      sc.encode.restrict_exclusions = cfg.mode == EnumMode::Fast;
      const auto part = partitioning(c, cfg);
      sc.workers = part.workers;
      sc.partitions = part.per_worker;
      sc.iteration = local;
      auto res = find_best_opportunity(oc, en, sc);
      if (res.solver_error) {
        rep.warnings.push_back("segment " + std::to_string(i) + ": " + res.error);
        if (!res.best) {
          rep.solver_failed = true;
          break;
        }
      }
      const int before = covering_weight(g, c);
      if (!res.best || res.best->weight >= before) {
        // Each worker searches one of its partitions per iteration; stop once all came up empty.
        if (++misses < part.per_worker) continue;
        break;
      }
      Covering next = apply_opportunity(g, c, res.best->rule, res.best->j);
      std::string why;
      if (!is_valid_covering(g, next, &why)) {
        rep.warnings.push_back("rejected opportunity " + describe(g, res.best->rule) + ": " + why);
        break;
      }
      IterationReport ir;
      ir.segment = static_cast<int>(i);
      ir.rule = describe(g, res.best->rule);
      ir.position = res.best->j;
      ir.bytes_before = stylesheet_bytes(segs, state);
      c = std::move(next);
      ir.bytes_after = stylesheet_bytes(segs, state);
      ir.seconds = since(it_start);
      rep.iterations.push_back(std::move(ir));
      ++iterations;
      misses = 0;
    }
    if (rep.timed_out) break;
  }

  for (size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].passthrough) {
      StyleItem it;
      it.passthrough = true;
      it.raw = segs[i].raw;
      rep.output.items.push_back(std::move(it));
      continue;
    }
    for (auto& r : to_rules(state[i].first, state[i].second)) {
      StyleItem it;
      it.rule = std::move(r);
      rep.output.items.push_back(std::move(it));
    }
  }
  rep.bytes_out = static_cast<long>(serialize(rep.output).size());
  if (cfg.validate) rep.validation = validate_equivalence(input, rep.output, *cfg.validate, cfg.emptiness);
  rep.seconds = since(start);
  return rep;
}

std::string report_json(const RunReport& r) {
  using nlohmann::json;
  json j;
  j["schema"] = 1;
  j["bytes_in"] = r.bytes_in;
  j["bytes_out"] = r.bytes_out;
  j["saving"] = r.bytes_in - r.bytes_out;
  j["seconds"] = r.seconds;
  j["order_seconds"] = r.order_seconds;
  j["order_pairs"] = r.order_pairs;
  j["intersection_queries"] = r.intersection_queries;
  j["bicliques"] = r.bicliques;
  j["unorderable_bicliques"] = r.unorderable_bicliques;
  j["timed_out"] = r.timed_out;
  j["solver_failed"] = r.solver_failed;
  j["warnings"] = r.warnings;
  j["iterations"] = json::array();
  for (const auto& it : r.iterations)
    j["iterations"].push_back({{"segment", it.segment},
                               {"rule", it.rule},
                               {"position", it.position},
                               {"bytes_before", it.bytes_before},
                               {"bytes_after", it.bytes_after},
                               {"seconds", it.seconds}});
  if (r.validation) {
    json v{{"pass", r.validation->pass},
           {"reason", r.validation->reason},
           {"groups", r.validation->groups},
           {"trees", r.validation->trees}};
    if (r.validation->witness) {
      const auto& w = *r.validation->witness;
      v["witness"] = {{"tree", w.tree},
                      {"node", w.node},
                      {"label", w.label},
                      {"pseudo_element", w.pseudo_element},
                      {"property", w.property},
                      {"original", w.original},
                      {"minified", w.minified}};
    }
    j["validation"] = v;
  }
  return j.dump(1);
}

}  // namespace cssmin
