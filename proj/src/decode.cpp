#include "uast/decode.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "uast/serde.hpp"

namespace uast {

// ---------------------------------------------------------------------------
// Store primitives
// ---------------------------------------------------------------------------

NodeId resolve_path(const TreeStore& store, NodeId root, std::span<const int> path) {
  NodeId cur = root;
  for (int slot : path) {
    const ArenaNode& n = store.at(cur);
    if (slot < 0 || static_cast<size_t>(slot) >= n.kids.size())
      throw std::invalid_argument("path leaves the tree");
    cur = n.kids[static_cast<size_t>(slot)];
  }
  return cur;
}

namespace {

constexpr uint64_t kFnvBasis = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

uint64_t fnv_label(uint64_t hash, const std::string& label) {
  for (unsigned char c : label) {
    hash ^= c;
    hash *= kFnvPrime;
  }
  hash ^= 0x1F;
  hash *= kFnvPrime;
  return hash;
}

// Completed nodes in pre-order are exactly the leftmost derivation prefix.
void hash_completed(const TreeStore& store, NodeId id, bool is_root, uint64_t& hash,
                    bool& stopped) {
  if (stopped) return;
  const ArenaNode& n = store.at(id);
  if (n.is_hole) {
    stopped = true;
    return;
  }
  if (!is_root) hash = fnv_label(hash, n.payload.label);
  for (NodeId kid : n.kids) hash_completed(store, kid, false, hash, stopped);
}

}  // namespace

HoleContext make_context(const TreeStore& store, const PartialTree& t,
                         std::span<const int> hole_path) {
  HoleContext ctx;
  {
    uint64_t hash = kFnvBasis;
    bool stopped = false;
    hash_completed(store, t.root, true, hash, stopped);
    ctx.derivation_hash = hash;
  }
  NodeId cur = t.root;
  NodeId parent = kNoNode;
  for (int slot : hole_path) {
    const ArenaNode& n = store.at(cur);
    ctx.path.emplace_back(n.is_hole ? "?" : n.payload.label, slot);
    parent = cur;
    cur = n.kids[static_cast<size_t>(slot)];
  }
  const ArenaNode& hole_node = store.at(cur);
  if (!hole_node.is_hole) throw std::invalid_argument("path does not address a hole");
  ctx.hole = &hole_node.hole;
  if (!ctx.path.empty()) {
    ctx.parent_label = ctx.path.back().first;
    ctx.slot = ctx.path.back().second;
    const ArenaNode& pn = store.at(parent);
    for (size_t i = 0; i < pn.kids.size(); ++i) {
      const ArenaNode& sib = store.at(pn.kids[i]);
      std::string label = sib.is_hole ? "?" : sib.payload.label;
      if (static_cast<int>(i) < ctx.slot) ctx.left_sibling_labels.push_back(std::move(label));
      else if (static_cast<int>(i) > ctx.slot) ctx.right_sibling_labels.push_back(std::move(label));
    }
  }
  return ctx;
}

std::vector<Production> legal_extensions(const TreeStore& store, const Grammar& grammar,
                                         const PartialTree& t, std::span<const int> hole_path) {
  return grammar.legal(store, t, hole_path);
}

namespace {

bool label_fits_category(const std::string& label, HoleCat cat) {
  switch (cat) {
    case HoleCat::Locals:
      return label == "locals.end" || label.rfind("local:", 0) == 0;
    case HoleCat::StmtList:
      return label.rfind("stmts.", 0) == 0;
    case HoleCat::Stmt:
      return label.rfind("stmt.", 0) == 0;
    case HoleCat::Expr:
      return label.rfind("expr.", 0) == 0;
  }
  return false;
}

}  // namespace

PartialTree extend(TreeStore& store, const PartialTree& t, std::span<const int> hole_path,
                   const Production& prod, double log_prob) {
  size_t hole_index = t.holes.size();
  for (size_t i = 0; i < t.holes.size(); ++i) {
    if (t.holes[i].size() == hole_path.size() &&
        std::equal(t.holes[i].begin(), t.holes[i].end(), hole_path.begin())) {
      hole_index = i;
      break;
    }
  }
  if (hole_index == t.holes.size()) throw std::invalid_argument("unknown hole");

  std::vector<NodeId> chain{t.root};
  for (int slot : hole_path) chain.push_back(store.at(chain.back()).kids[static_cast<size_t>(slot)]);
  const ArenaNode& hole_node = store.at(chain.back());
  if (!hole_node.is_hole) throw std::invalid_argument("path does not address a hole");
  if (!label_fits_category(prod.label, hole_node.hole.cat))
    throw std::invalid_argument("illegal production '" + prod.label + "' for this hole");

  std::vector<NodeId> kid_ids;
  kid_ids.reserve(prod.child_holes.size());
  for (const auto& hs : prod.child_holes) {
    ArenaNode h;
    h.is_hole = true;
    h.hole = hs;
    kid_ids.push_back(store.add(std::move(h)));
  }
  ArenaNode filled;
  filled.payload = prod.payload;
  filled.payload.label = prod.label;
  filled.kids = std::move(kid_ids);
  NodeId fresh = store.add(std::move(filled));

  // Copy the path from the hole's parent back to the root; everything else is
  // shared with the original tree.
  NodeId child = fresh;
  for (size_t i = hole_path.size(); i-- > 0;) {
    ArenaNode copy = store.at(chain[i]);
    copy.kids[static_cast<size_t>(hole_path[i])] = child;
    child = store.add(std::move(copy));
  }

  PartialTree out;
  out.root = child;
  out.score = t.score + log_prob;
  out.node_count = t.node_count + 1;
  out.holes.reserve(t.holes.size() - 1 + prod.child_holes.size());
  for (size_t i = 0; i < t.holes.size(); ++i) {
    if (i != hole_index) {
      out.holes.push_back(t.holes[i]);
      continue;
    }
    for (size_t k = 0; k < prod.child_holes.size(); ++k) {
      std::vector<int> p(hole_path.begin(), hole_path.end());
      p.push_back(static_cast<int>(k));
      out.holes.push_back(std::move(p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decode loop
// ---------------------------------------------------------------------------

std::vector<PartialTree> decode_trees(TreeStore& store, const Grammar& grammar,
                                      const Scorer& scorer, const SearchConfig& cfg) {
  uint64_t seq = 0;
  PartialTree root = grammar.seed(store);
  root.seq = seq++;
  std::vector<PartialTree> completed;
  if (root.complete()) {
    completed.push_back(std::move(root));
    return completed;
  }

  std::vector<PartialTree> beam;
  beam.push_back(std::move(root));

  struct Cand {
    size_t parent;
    size_t legal_index;
    double score;
    uint64_t order;
    bool completes;
  };

  while (!beam.empty()) {
    std::vector<Cand> incomplete;
    std::vector<std::vector<Production>> legal_by_parent(beam.size());
    uint64_t order = 0;

    for (size_t pi = 0; pi < beam.size(); ++pi) {
      PartialTree& tree = beam[pi];
      const std::vector<int>& hole = tree.holes.front();  // leftmost
      std::vector<Production> legal = grammar.legal(store, tree, hole);
      if (legal.empty()) continue;  // starved; the fork dies
      HoleContext ctx = make_context(store, tree, hole);
      auto scored = scorer.score_extensions(ctx, legal);
      for (const auto& [idx, lp] : scored) {
        if (idx >= legal.size())
          throw std::invalid_argument("scorer returned an out-of-range production");
        if (lp > 1e-9) throw std::invalid_argument("scorer returned a positive log-probability");
      }
      std::stable_sort(scored.begin(), scored.end(),
                       [&](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return legal[a.first].decl_order < legal[b.first].decl_order;
                       });
      size_t take = std::min(scored.size(), cfg.expansions_per_step);
      for (size_t k = 0; k < take; ++k) {
        auto [idx, lp] = scored[k];
        if (static_cast<size_t>(tree.node_count) + 1 > cfg.max_tree_nodes) continue;
        bool completes = tree.holes.size() == 1 && legal[idx].child_holes.empty();
        incomplete.push_back({pi, idx, tree.score + lp, order++, completes});
      }
      legal_by_parent[pi] = std::move(legal);
    }

    // Completions are materialized unconditionally; they leave the queue.
    std::vector<Cand> open;
    open.reserve(incomplete.size());
    for (const Cand& c : incomplete) {
      if (!c.completes) {
        open.push_back(c);
        continue;
      }
      const PartialTree& parent = beam[c.parent];
      PartialTree child = extend(store, parent, parent.holes.front(),
                                 legal_by_parent[c.parent][c.legal_index],
                                 c.score - parent.score);
      child.seq = seq++;
      completed.push_back(std::move(child));
    }

    std::stable_sort(open.begin(), open.end(), [](const Cand& a, const Cand& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.order < b.order;
    });
    if (open.size() > cfg.queue_capacity) open.resize(cfg.queue_capacity);

    std::vector<PartialTree> next;
    next.reserve(open.size());
    for (const Cand& c : open) {
      const PartialTree& parent = beam[c.parent];
      PartialTree child = extend(store, parent, parent.holes.front(),
                                 legal_by_parent[c.parent][c.legal_index],
                                 c.score - parent.score);
      child.seq = seq++;
      next.push_back(std::move(child));
    }
    beam = std::move(next);
  }

  std::stable_sort(completed.begin(), completed.end(), [](const PartialTree& a, const PartialTree& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.seq < b.seq;
  });
  return completed;
}

// ---------------------------------------------------------------------------
// Shared label and context-key builders
// ---------------------------------------------------------------------------

namespace {

std::string cat_name(HoleCat c) {
  switch (c) {
    case HoleCat::Locals: return "locals";
    case HoleCat::StmtList: return "stmts";
    case HoleCat::Stmt: return "stmt";
    case HoleCat::Expr: return "expr";
  }
  return "?";
}

std::string const_text(const ConstVal& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, int64_t>) return std::to_string(x);
        else if constexpr (std::is_same_v<T, double>) return nlohmann::json(x).dump();
        else if constexpr (std::is_same_v<T, CharLit>) return "c" + std::to_string(x.code);
        else return "s:" + x;
      },
      v);
}

std::string var_label(const std::string& name) { return "expr.var:" + name; }

std::string const_label(const TypeRef& type, const ConstVal& v) {
  return "expr.const:" + type_text(type) + ":" + const_text(v);
}

std::string invoke_label(const std::string& callee, const TypeRef& result,
                         const std::vector<TypeRef>& args) {
  std::string out = "expr.invoke:" + callee + ":" + type_text(result) + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += type_text(args[i]);
  }
  return out + ")";
}

std::string new_label(const TypeRef& t) { return "expr.new:" + type_text(t); }

std::string cast_label(const TypeRef& target, const TypeRef& source) {
  return "expr.cast:" + type_text(target) + ":" + type_text(source);
}

std::string field_label(const TypeRef& object, const std::string& field) {
  return "expr.field:" + type_text(object) + "." + field;
}

std::string local_label(const TypeRef& t) { return "local:" + type_text(t); }

std::string stmt_label(StmtKind k) {
  switch (k) {
    case StmtKind::Expr: return "stmt.expr";
    case StmtKind::If: return "stmt.if";
    case StmtKind::Foreach: return "stmt.foreach";
    case StmtKind::While: return "stmt.while";
    case StmtKind::Break: return "stmt.break";
    case StmtKind::Continue: return "stmt.continue";
    case StmtKind::Return: return "stmt.return";
    case StmtKind::Noop: return "stmt.noop";
  }
  return {};
}

struct ContextKeys {
  std::string l4, l3, l2, l1, l0;
};

ContextKeys build_keys(const std::vector<std::pair<std::string, int>>& path,
                       const std::string& cat, int list_index, uint64_t derivation_hash) {
  ContextKeys k;
  k.l4 = "4|" + cat + "|h" + std::to_string(derivation_hash);
  k.l0 = "0|" + cat;
  std::string parent = path.empty() ? "^" : path.back().first;
  std::string slot = path.empty() ? "-" : std::to_string(path.back().second);
  k.l1 = "1|" + cat + "|" + parent + "@" + slot;
  k.l2 = k.l1 + "#" + std::to_string(std::min(list_index, 31));
  constexpr size_t kPathWindow = 32;
  size_t start = path.size() > kPathWindow ? path.size() - kPathWindow : 0;
  std::string trail;
  for (size_t i = start; i < path.size(); ++i)
    trail += path[i].first + "@" + std::to_string(path[i].second) + "/";
  // Depth is part of the key so that derivations nesting deeper than anything
  // in the corpus cannot keep reusing a truncated high-frequency context.
  k.l3 = "3|" + cat + "#" + std::to_string(std::min(list_index, 31)) + "|d" +
         std::to_string(path.size()) + "|" + trail;
  return k;
}

TypeRef elem_of(const TypeRef& t) {
  if (!t) return nullptr;
  switch (t->kind()) {
    case TypeKind::Array:
    case TypeKind::Set:
      return t->elem();
    case TypeKind::Map:
      return t->key();
    default:
      return nullptr;
  }
}

// Result type of a filled expression node; assign and ternary defer to their
// children, everything else records it in the payload.
TypeRef result_type(const TreeStore& store, NodeId id) {
  const ArenaNode& n = store.at(id);
  if (n.is_hole) return nullptr;
  if (n.payload.label == "expr.assign") return result_type(store, n.kids[0]);
  if (n.payload.label == "expr.ternary") return result_type(store, n.kids[1]);
  return n.payload.type;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scorers
// ---------------------------------------------------------------------------

std::vector<std::pair<size_t, double>> UniformScorer::score_extensions(
    const HoleContext&, const std::vector<Production>& legal) const {
  std::vector<std::pair<size_t, double>> out;
  out.reserve(legal.size());
  double lp = -std::log(static_cast<double>(legal.size()));
  for (size_t i = 0; i < legal.size(); ++i) out.emplace_back(i, lp);
  return out;
}

void FrequencyScorer::count_event(const std::string& key, const std::string& label) {
  ++table_.counts[key][label];
  ++table_.totals[key];
}

namespace {

// Replays a corpus program as the derivation the decoder would have produced,
// so that counting contexts and scoring contexts agree key for key.
struct CorpusWalkerImpl {
  std::vector<std::pair<std::string, int>> path;
  const std::function<void(const ContextKeys&, const std::string&)>& sink;
  uint64_t hash = kFnvBasis;

  void emit(HoleCat cat, int list_index, const std::string& label) {
    sink(build_keys(path, cat_name(cat), list_index, hash), label);
    hash = fnv_label(hash, label);
  }

  void expr(const Expr& e, int list_index) {
    std::string label;
    switch (e.kind()) {
      case ExprKind::Var:
        label = var_label(std::get<Expr::VarRef>(e.node).name);
        break;
      case ExprKind::Constant:
        label = const_label(e.type, std::get<Expr::Constant>(e.node).value);
        break;
      case ExprKind::Invoke: {
        const auto& n = std::get<Expr::Invoke>(e.node);
        if (n.callee == "new" && n.args.empty()) {
          label = new_label(e.type);
        } else {
          std::vector<TypeRef> args;
          for (const auto& a : n.args) args.push_back(a->type);
          label = invoke_label(n.callee, e.type, args);
        }
        break;
      }
      case ExprKind::Assign:
        label = "expr.assign";
        break;
      case ExprKind::Ternary:
        label = "expr.ternary";
        break;
      case ExprKind::Cast:
        label = cast_label(e.type, std::get<Expr::Cast>(e.node).operand->type);
        break;
      case ExprKind::Field:
        label = field_label(std::get<Expr::FieldRef>(e.node).object->type,
                            std::get<Expr::FieldRef>(e.node).field);
        break;
    }
    emit(HoleCat::Expr, list_index, label);
    switch (e.kind()) {
      case ExprKind::Assign: {
        const auto& n = std::get<Expr::Assign>(e.node);
        descend(label, 0, [&] { expr(*n.lhs, 0); });
        descend(label, 1, [&] { expr(*n.rhs, 0); });
        break;
      }
      case ExprKind::Invoke: {
        const auto& n = std::get<Expr::Invoke>(e.node);
        for (size_t i = 0; i < n.args.size(); ++i)
          descend(label, static_cast<int>(i), [&] { expr(*n.args[i], 0); });
        break;
      }
      case ExprKind::Ternary: {
        const auto& n = std::get<Expr::Ternary>(e.node);
        descend(label, 0, [&] { expr(*n.cond, 0); });
        descend(label, 1, [&] { expr(*n.if_true, 0); });
        descend(label, 2, [&] { expr(*n.if_false, 0); });
        break;
      }
      case ExprKind::Cast:
        descend(label, 0, [&] { expr(*std::get<Expr::Cast>(e.node).operand, 0); });
        break;
      case ExprKind::Field:
        descend(label, 0, [&] { expr(*std::get<Expr::FieldRef>(e.node).object, 0); });
        break;
      default:
        break;
    }
  }

  template <typename Fn>
  void descend(const std::string& label, int slot, Fn&& fn) {
    path.emplace_back(label, slot);
    fn();
    path.pop_back();
  }

  void stmt(const Stmt& s, int list_index) {
    std::string label = stmt_label(s.kind());
    emit(HoleCat::Stmt, list_index, label);
    switch (s.kind()) {
      case StmtKind::Expr:
        descend(label, 0, [&] { expr(*std::get<Stmt::ExprStmt>(s.node).expr, 0); });
        break;
      case StmtKind::If: {
        const auto& n = std::get<Stmt::If>(s.node);
        descend(label, 0, [&] { expr(*n.cond, 0); });
        descend(label, 1, [&] { block(n.then_body); });
        descend(label, 2, [&] { block(n.else_body); });
        break;
      }
      case StmtKind::Foreach: {
        const auto& n = std::get<Stmt::Foreach>(s.node);
        descend(label, 0, [&] { expr(*n.iterable, 0); });
        descend(label, 1, [&] { block(n.body); });
        break;
      }
      case StmtKind::While: {
        const auto& n = std::get<Stmt::While>(s.node);
        descend(label, 0, [&] { expr(*n.cond, 0); });
        descend(label, 1, [&] { block(n.body); });
        descend(label, 2, [&] { block(n.increment); });
        break;
      }
      case StmtKind::Return:
        descend(label, 0, [&] { expr(*std::get<Stmt::Return>(s.node).expr, 0); });
        break;
      default:
        break;
    }
  }

  void block(const std::vector<StmtPtr>& body) {
    size_t pushed = 0;
    for (size_t i = 0; i < body.size(); ++i) {
      emit(HoleCat::StmtList, static_cast<int>(i), "stmts.item");
      descend("stmts.item", 0, [&] { stmt(*body[i], static_cast<int>(i)); });
      path.emplace_back("stmts.item", 1);
      ++pushed;
    }
    emit(HoleCat::StmtList, static_cast<int>(body.size()), "stmts.end");
    for (size_t i = 0; i < pushed; ++i) path.pop_back();
  }

  void func(const FuncDecl& f) {
    hash = kFnvBasis;
    path = {{"main", 0}};
    size_t pushed = 0;
    for (size_t i = 0; i < f.locals.size(); ++i) {
      emit(HoleCat::Locals, static_cast<int>(i), local_label(f.locals[i].type));
      path.emplace_back(local_label(f.locals[i].type), 0);
      ++pushed;
    }
    emit(HoleCat::Locals, static_cast<int>(f.locals.size()), "locals.end");
    path = {{"main", 1}};
    block(f.body);
  }
};

}  // namespace

struct CorpusWalker {
  static void walk(FrequencyScorer& scorer, std::span<const Program> corpus) {
    std::function<void(const ContextKeys&, const std::string&)> sink =
        [&scorer](const ContextKeys& keys, const std::string& label) {
          scorer.count_event(keys.l4, label);
          scorer.count_event(keys.l3, label);
          scorer.count_event(keys.l2, label);
          scorer.count_event(keys.l1, label);
          scorer.count_event(keys.l0, label);
        };
    for (const auto& p : corpus) {
      CorpusWalkerImpl impl{{}, sink};
      for (const auto& f : p.funcs) impl.func(f);
    }
  }
};

FrequencyScorer::FrequencyScorer(std::span<const Program> corpus) {
  CorpusWalker::walk(*this, corpus);
}

std::vector<std::pair<size_t, double>> FrequencyScorer::score_extensions(
    const HoleContext& ctx, const std::vector<Production>& legal) const {
  ContextKeys keys = build_keys(ctx.path, cat_name(ctx.hole->cat), ctx.hole->list_index,
                                ctx.derivation_hash);
  // Discounted backoff: score at the most specific level with observations,
  // paying a penalty per level skipped so that a vaguer match never outranks
  // a specific one. Rich levels get light add-alpha smoothing; the bare
  // nonterminal level keeps plain add-1.
  constexpr double kBackoff = 0.25;
  const std::string* key = nullptr;
  double alpha = 1.0;
  double discount = 1.0;
  struct Level {
    const std::string* key;
    double alpha;
  };
  const Level levels[] = {{&keys.l4, 0.001},
                          {&keys.l3, 0.001},
                          {&keys.l2, 0.001},
                          {&keys.l1, 0.001},
                          {&keys.l0, 1.0}};
  for (const Level& level : levels) {
    auto it = table_.totals.find(*level.key);
    if (it != table_.totals.end() && it->second > 0) {
      key = level.key;
      alpha = level.alpha;
      break;
    }
    discount *= kBackoff;
  }
  std::vector<std::pair<size_t, double>> out;
  out.reserve(legal.size());
  double v = static_cast<double>(legal.size());
  if (!key) {
    double lp = std::log(discount / v);
    for (size_t i = 0; i < legal.size(); ++i) out.emplace_back(i, lp);
    return out;
  }
  double total = static_cast<double>(table_.totals.at(*key));
  const auto& row = table_.counts.at(*key);
  for (size_t i = 0; i < legal.size(); ++i) {
    auto it = row.find(legal[i].label);
    double c = it == row.end() ? 0.0 : static_cast<double>(it->second);
    out.emplace_back(i, std::log(discount * (c + alpha) / (total + alpha * v)));
  }
  return out;
}

std::unique_ptr<Scorer> frequency_scorer(std::span<const Program> corpus) {
  return std::make_unique<FrequencyScorer>(corpus);
}

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

DecodeVocab DecodeVocab::from_corpus(std::span<const Program> corpus) {
  DecodeVocab vocab;
  std::set<std::string> seen;
  auto add_const = [&](const TypeRef& t, const ConstVal& v) {
    if (seen.insert("c:" + const_label(t, v)).second) vocab.constants.push_back({t, v});
  };
  auto add_local_type = [&](const TypeRef& t) {
    if (seen.insert("l:" + type_text(t)).second) vocab.local_types.push_back(t);
  };

  size_t max_locals_seen = 0;
  for (const auto& p : corpus) {
    for (const auto& f : p.funcs) {
      max_locals_seen = std::max(max_locals_seen, f.locals.size());
      for (const auto& l : f.locals) add_local_type(l.type);
      for (const auto& s : f.body)
        traverse(*s, [&](const AstNode& node) {
          const auto* const* ep = std::get_if<const Expr*>(&node);
          if (!ep) return;
          const Expr& e = **ep;
          switch (e.kind()) {
            case ExprKind::Constant:
              add_const(e.type, std::get<Expr::Constant>(e.node).value);
              break;
            case ExprKind::Invoke: {
              const auto& n = std::get<Expr::Invoke>(e.node);
              if (n.callee == "new" && n.args.empty()) {
                if (seen.insert("n:" + type_text(e.type)).second)
                  vocab.new_types.push_back(e.type);
                break;
              }
              std::vector<TypeRef> args;
              for (const auto& a : n.args) args.push_back(a->type);
              if (seen.insert("i:" + invoke_label(n.callee, e.type, args)).second)
                vocab.invokes.push_back({n.callee, e.type, std::move(args)});
              break;
            }
            case ExprKind::Cast: {
              const auto& n = std::get<Expr::Cast>(e.node);
              if (seen.insert("x:" + cast_label(e.type, n.operand->type)).second)
                vocab.casts.push_back({e.type, n.operand->type});
              break;
            }
            case ExprKind::Field: {
              const auto& n = std::get<Expr::FieldRef>(e.node);
              if (seen.insert("f:" + field_label(n.object->type, n.field)).second)
                vocab.fields.push_back({n.object->type, n.field, e.type});
              break;
            }
            default:
              break;
          }
        });
    }
  }
  for (int64_t v : {-1, 0, 1, 2, 10}) add_const(Type::int_type(), v);
  vocab.max_locals = std::clamp<size_t>(max_locals_seen, 4, 10);

  auto by_label = [](const auto& f) {
    return [f](const auto& a, const auto& b) { return f(a) < f(b); };
  };
  std::sort(vocab.constants.begin(), vocab.constants.end(),
            by_label([](const auto& c) { return const_label(c.type, c.value); }));
  std::sort(vocab.invokes.begin(), vocab.invokes.end(),
            by_label([](const auto& s) { return invoke_label(s.callee, s.result, s.args); }));
  std::sort(vocab.casts.begin(), vocab.casts.end(),
            by_label([](const auto& c) { return cast_label(c.target, c.source); }));
  std::sort(vocab.fields.begin(), vocab.fields.end(),
            by_label([](const auto& f) { return field_label(f.object, f.field); }));
  std::sort(vocab.new_types.begin(), vocab.new_types.end(),
            by_label([](const auto& t) { return type_text(t); }));
  std::sort(vocab.local_types.begin(), vocab.local_types.end(),
            by_label([](const auto& t) { return type_text(t); }));
  return vocab;
}

// ---------------------------------------------------------------------------
// UAST grammar
// ---------------------------------------------------------------------------

namespace {

struct ResolvedType {
  bool any = false;
  bool iterable = false;
  TypeRef exact;  // set when !any && !iterable

  bool matches(const TypeRef& t) const {
    if (any) return true;
    if (iterable)
      return t->is(TypeKind::Array) || t->is(TypeKind::Set) || t->is(TypeKind::Map);
    return same_type(exact, t);
  }
};

ResolvedType resolve_spec(const TreeStore& store, NodeId root, std::span<const int> hole_path,
                          const TypeSpec& spec) {
  switch (spec.mode) {
    case TypeSpec::Mode::Any:
      return {true, false, nullptr};
    case TypeSpec::Mode::AnyIterable:
      return {false, true, nullptr};
    case TypeSpec::Mode::Exact:
      return {false, false, spec.exact};
    case TypeSpec::Mode::SameAsSibling:
    case TypeSpec::Mode::ElemOfSibling: {
      NodeId parent =
          resolve_path(store, root, hole_path.subspan(0, hole_path.size() - 1));
      NodeId sibling = store.at(parent).kids[static_cast<size_t>(spec.sibling)];
      TypeRef t = result_type(store, sibling);
      if (spec.mode == TypeSpec::Mode::ElemOfSibling) t = elem_of(t);
      return {false, false, std::move(t)};
    }
  }
  return {true, false, nullptr};
}

HoleSpec expr_hole(TypeSpec t, bool place = false) {
  return {HoleCat::Expr, std::move(t), place, false, 0};
}

HoleSpec stmts_hole(bool in_loop, int index = 0) {
  return {HoleCat::StmtList, TypeSpec::any(), false, in_loop, index};
}

}  // namespace

UastGrammar::UastGrammar(EntrySchema schema, DecodeVocab vocab)
    : schema_(std::move(schema)), vocab_(std::move(vocab)) {}

PartialTree UastGrammar::seed(TreeStore& store) const {
  ArenaNode locals_hole;
  locals_hole.is_hole = true;
  locals_hole.hole = {HoleCat::Locals, TypeSpec::any(), false, false, 0};
  ArenaNode body_hole;
  body_hole.is_hole = true;
  body_hole.hole = stmts_hole(false, 0);

  ArenaNode root;
  root.payload.label = "main";
  root.kids = {store.add(std::move(locals_hole)), store.add(std::move(body_hole))};

  PartialTree t;
  t.root = store.add(std::move(root));
  t.holes = {{0}, {1}};
  t.node_count = 0;  // the fixed skeleton does not count against the budget
  return t;
}

// Variables visible at a hole: entry parameters, decided locals (canonically
// named), then enclosing foreach bindings outermost first.
static std::vector<VarDecl> scope_at(const TreeStore& store, NodeId root,
                                     std::span<const int> hole_path, const EntrySchema& schema) {
  std::vector<VarDecl> vars = schema.params;
  NodeId cur = store.at(root).kids[0];
  size_t index = schema.params.size();
  while (!store.at(cur).is_hole && store.at(cur).payload.label != "locals.end") {
    vars.push_back({store.at(cur).payload.type, "var" + std::to_string(index++)});
    cur = store.at(cur).kids[0];
  }
  size_t base = index;
  NodeId walk = root;
  size_t foreach_depth = 0;
  for (int slot : hole_path) {
    const ArenaNode& n = store.at(walk);
    if (!n.is_hole && n.payload.label == "stmt.foreach" && slot == 1) {
      TypeRef elem = elem_of(result_type(store, n.kids[0]));
      if (elem)
        vars.push_back({elem, "var" + std::to_string(base + foreach_depth)});
      ++foreach_depth;
    }
    walk = n.kids[static_cast<size_t>(slot)];
  }
  return vars;
}

std::vector<Production> UastGrammar::legal(const TreeStore& store, const PartialTree& t,
                                           std::span<const int> hole_path) const {
  NodeId hole_id = resolve_path(store, t.root, hole_path);
  const ArenaNode& hole_node = store.at(hole_id);
  if (!hole_node.is_hole) throw std::invalid_argument("unknown hole");
  const HoleSpec& hole = hole_node.hole;

  std::vector<Production> out;
  int order = 0;
  auto push = [&](std::string label, NodePayload payload, std::vector<HoleSpec> holes) {
    payload.label = label;
    out.push_back({std::move(label), std::move(payload), std::move(holes), order++});
  };

  switch (hole.cat) {
    case HoleCat::Locals: {
      if (static_cast<size_t>(hole.list_index) < vocab_.max_locals) {
        for (const auto& ty : vocab_.local_types) {
          NodePayload p;
          p.type = ty;
          push(local_label(ty), std::move(p),
               {{HoleCat::Locals, TypeSpec::any(), false, false, hole.list_index + 1}});
        }
      }
      push("locals.end", {}, {});
      return out;
    }
    case HoleCat::StmtList: {
      push("stmts.item", {},
           {{HoleCat::Stmt, TypeSpec::any(), false, hole.in_loop, hole.list_index},
            {HoleCat::StmtList, TypeSpec::any(), false, hole.in_loop, hole.list_index + 1}});
      push("stmts.end", {}, {});
      return out;
    }
    case HoleCat::Stmt: {
      push("stmt.expr", {}, {expr_hole(TypeSpec::any())});
      push("stmt.if", {},
           {expr_hole(TypeSpec::exactly(Type::bool_type())),
            {HoleCat::StmtList, TypeSpec::any(), false, hole.in_loop, 0},
            {HoleCat::StmtList, TypeSpec::any(), false, hole.in_loop, 0}});
      push("stmt.foreach", {},
           {expr_hole(TypeSpec::iterable()), stmts_hole(true, 0)});
      push("stmt.while", {},
           {expr_hole(TypeSpec::exactly(Type::bool_type())), stmts_hole(true, 0),
            stmts_hole(true, 0)});
      if (hole.in_loop) {
        push("stmt.break", {}, {});
        push("stmt.continue", {}, {});
      }
      push("stmt.return", {}, {expr_hole(TypeSpec::exactly(schema_.return_type))});
      push("stmt.noop", {}, {});
      return out;
    }
    case HoleCat::Expr:
      break;
  }

  // Expression hole.
  ResolvedType want = resolve_spec(store, t.root, hole_path, hole.type);
  std::vector<VarDecl> vars = scope_at(store, t.root, hole_path, schema_);

  for (const auto& v : vars) {
    if (!want.matches(v.type)) continue;
    NodePayload p;
    p.name = v.name;
    p.type = v.type;
    push(var_label(v.name), std::move(p), {});
  }
  if (hole.place_only) {
    for (const auto& sig : vocab_.invokes) {
      if (sig.callee != "array_index") continue;
      if (!want.matches(sig.result)) continue;
      NodePayload p;
      p.name = sig.callee;
      p.type = sig.result;
      p.arg_types = sig.args;
      std::vector<HoleSpec> holes;
      for (const auto& a : sig.args) holes.push_back(expr_hole(TypeSpec::exactly(a)));
      push(invoke_label(sig.callee, sig.result, sig.args), std::move(p), std::move(holes));
    }
    for (const auto& f : vocab_.fields) {
      if (!want.matches(f.type)) continue;
      NodePayload p;
      p.name = f.field;
      p.type = f.type;
      push(field_label(f.object, f.field), std::move(p),
           {expr_hole(TypeSpec::exactly(f.object))});
    }
    return out;
  }

  for (const auto& c : vocab_.constants) {
    if (!want.matches(c.type)) continue;
    NodePayload p;
    p.type = c.type;
    p.value = c.value;
    push(const_label(c.type, c.value), std::move(p), {});
  }
  for (const auto& sig : vocab_.invokes) {
    if (!want.matches(sig.result)) continue;
    NodePayload p;
    p.name = sig.callee;
    p.type = sig.result;
    p.arg_types = sig.args;
    std::vector<HoleSpec> holes;
    for (const auto& a : sig.args) holes.push_back(expr_hole(TypeSpec::exactly(a)));
    push(invoke_label(sig.callee, sig.result, sig.args), std::move(p), std::move(holes));
  }
  for (const auto& ty : vocab_.new_types) {
    if (!want.matches(ty)) continue;
    NodePayload p;
    p.type = ty;
    push(new_label(ty), std::move(p), {});
  }
  {
    // assign: the target place first, then a value of the same type.
    std::vector<HoleSpec> holes;
    if (want.any || want.iterable) {
      holes.push_back(expr_hole(hole.type, true));
      holes.push_back(expr_hole(TypeSpec::same_as(0)));
    } else {
      holes.push_back(expr_hole(TypeSpec::exactly(want.exact), true));
      holes.push_back(expr_hole(TypeSpec::exactly(want.exact)));
    }
    push("expr.assign", {}, std::move(holes));
  }
  {
    std::vector<HoleSpec> holes;
    holes.push_back(expr_hole(TypeSpec::exactly(Type::bool_type())));
    if (want.any || want.iterable) {
      holes.push_back(expr_hole(hole.type));
      holes.push_back(expr_hole(TypeSpec::same_as(1)));
    } else {
      holes.push_back(expr_hole(TypeSpec::exactly(want.exact)));
      holes.push_back(expr_hole(TypeSpec::exactly(want.exact)));
    }
    push("expr.ternary", {}, std::move(holes));
  }
  for (const auto& c : vocab_.casts) {
    if (!want.matches(c.target)) continue;
    NodePayload p;
    p.type = c.target;
    push(cast_label(c.target, c.source), std::move(p),
         {expr_hole(TypeSpec::exactly(c.source))});
  }
  for (const auto& f : vocab_.fields) {
    if (!want.matches(f.type)) continue;
    NodePayload p;
    p.name = f.field;
    p.type = f.type;
    push(field_label(f.object, f.field), std::move(p), {expr_hole(TypeSpec::exactly(f.object))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

namespace {

struct Projector {
  const TreeStore& store;
  const EntrySchema& schema;
  size_t n_locals = 0;

  ExprPtr expr(NodeId id) const {
    const ArenaNode& n = store.at(id);
    const std::string& label = n.payload.label;
    if (label == "expr.assign") {
      ExprPtr lhs = expr(n.kids[0]);
      ExprPtr rhs = expr(n.kids[1]);
      TypeRef t = lhs->type;
      return make_assign(std::move(t), std::move(lhs), std::move(rhs));
    }
    if (label == "expr.ternary") {
      ExprPtr c = expr(n.kids[0]);
      ExprPtr a = expr(n.kids[1]);
      ExprPtr b = expr(n.kids[2]);
      TypeRef t = a->type;
      return make_ternary(std::move(t), std::move(c), std::move(a), std::move(b));
    }
    if (label.rfind("expr.var:", 0) == 0) return make_var(n.payload.type, n.payload.name);
    if (label.rfind("expr.const:", 0) == 0) return make_const(n.payload.type, n.payload.value);
    if (label.rfind("expr.new:", 0) == 0) return make_invoke(n.payload.type, "new", {});
    if (label.rfind("expr.invoke:", 0) == 0) {
      std::vector<ExprPtr> args;
      for (NodeId k : n.kids) args.push_back(expr(k));
      return make_invoke(n.payload.type, n.payload.name, std::move(args));
    }
    if (label.rfind("expr.cast:", 0) == 0) return make_cast(n.payload.type, expr(n.kids[0]));
    if (label.rfind("expr.field:", 0) == 0)
      return make_field(n.payload.type, expr(n.kids[0]), n.payload.name);
    throw std::logic_error("not an expression node: " + label);
  }

  StmtPtr stmt(NodeId id, size_t foreach_depth) const {
    const ArenaNode& n = store.at(id);
    const std::string& label = n.payload.label;
    if (label == "stmt.expr") return make_expr_stmt(expr(n.kids[0]));
    if (label == "stmt.if")
      return make_if(expr(n.kids[0]), block(n.kids[1], foreach_depth),
                     block(n.kids[2], foreach_depth));
    if (label == "stmt.foreach") {
      ExprPtr iterable = expr(n.kids[0]);
      TypeRef elem = elem_of(iterable->type);
      VarDecl var{elem, "var" + std::to_string(schema.params.size() + n_locals + foreach_depth)};
      auto body = block(n.kids[1], foreach_depth + 1);
      return make_foreach(std::move(var), std::move(iterable), std::move(body));
    }
    if (label == "stmt.while")
      return make_while(expr(n.kids[0]), block(n.kids[1], foreach_depth),
                        block(n.kids[2], foreach_depth));
    if (label == "stmt.break") return make_break();
    if (label == "stmt.continue") return make_continue();
    if (label == "stmt.return") return make_return(expr(n.kids[0]), schema.return_type);
    if (label == "stmt.noop") return make_noop();
    throw std::logic_error("not a statement node: " + label);
  }

  std::vector<StmtPtr> block(NodeId id, size_t foreach_depth) const {
    std::vector<StmtPtr> out;
    NodeId cur = id;
    while (store.at(cur).payload.label == "stmts.item") {
      out.push_back(stmt(store.at(cur).kids[0], foreach_depth));
      cur = store.at(cur).kids[1];
    }
    return out;
  }
};

}  // namespace

Program UastGrammar::to_program(const TreeStore& store, const PartialTree& t) const {
  if (!t.complete()) throw std::invalid_argument("cannot project an incomplete tree");
  const ArenaNode& root = store.at(t.root);
  FuncDecl main;
  main.kind = FuncKind::Func;
  main.name = kMainName;
  main.return_type = schema_.return_type;
  main.params = schema_.params;

  NodeId cur = root.kids[0];
  size_t index = schema_.params.size();
  while (store.at(cur).payload.label != "locals.end") {
    main.locals.push_back({store.at(cur).payload.type, "var" + std::to_string(index++)});
    cur = store.at(cur).kids[0];
  }

  Projector proj{store, schema_, main.locals.size()};
  main.body = proj.block(root.kids[1], 0);

  Program p;
  p.funcs.push_back(std::move(main));
  return p;
}

// ---------------------------------------------------------------------------
// Expression grammar
// ---------------------------------------------------------------------------

ExprGrammar::ExprGrammar(TypeRef target, std::vector<VarDecl> vars, DecodeVocab vocab)
    : target_(std::move(target)), vars_(std::move(vars)), vocab_(std::move(vocab)) {}

PartialTree ExprGrammar::seed(TreeStore& store) const {
  ArenaNode hole;
  hole.is_hole = true;
  hole.hole = expr_hole(TypeSpec::exactly(target_));
  ArenaNode root;
  root.payload.label = "expr-root";
  root.kids = {store.add(std::move(hole))};
  PartialTree t;
  t.root = store.add(std::move(root));
  t.holes = {{0}};
  t.node_count = 0;
  return t;
}

std::vector<Production> ExprGrammar::legal(const TreeStore& store, const PartialTree& t,
                                           std::span<const int> hole_path) const {
  NodeId hole_id = resolve_path(store, t.root, hole_path);
  const ArenaNode& hole_node = store.at(hole_id);
  if (!hole_node.is_hole) throw std::invalid_argument("unknown hole");
  ResolvedType want = resolve_spec(store, t.root, hole_path, hole_node.hole.type);

  std::vector<Production> out;
  int order = 0;
  auto push = [&](std::string label, NodePayload payload, std::vector<HoleSpec> holes) {
    payload.label = label;
    out.push_back({std::move(label), std::move(payload), std::move(holes), order++});
  };
  for (const auto& v : vars_) {
    if (!want.matches(v.type)) continue;
    NodePayload p;
    p.name = v.name;
    p.type = v.type;
    push(var_label(v.name), std::move(p), {});
  }
  for (const auto& c : vocab_.constants) {
    if (!want.matches(c.type)) continue;
    NodePayload p;
    p.type = c.type;
    p.value = c.value;
    push(const_label(c.type, c.value), std::move(p), {});
  }
  for (const auto& sig : vocab_.invokes) {
    if (!want.matches(sig.result)) continue;
    NodePayload p;
    p.name = sig.callee;
    p.type = sig.result;
    p.arg_types = sig.args;
    std::vector<HoleSpec> holes;
    for (const auto& a : sig.args) holes.push_back(expr_hole(TypeSpec::exactly(a)));
    push(invoke_label(sig.callee, sig.result, sig.args), std::move(p), std::move(holes));
  }
  return out;
}

ExprPtr ExprGrammar::to_expr(const TreeStore& store, const PartialTree& t) const {
  if (!t.complete()) throw std::invalid_argument("cannot project an incomplete tree");
  EntrySchema dummy{vars_, target_};
  Projector proj{store, dummy, 0};
  return proj.expr(store.at(t.root).kids[0]);
}

// ---------------------------------------------------------------------------
// End-to-end decode
// ---------------------------------------------------------------------------

std::vector<ScoredProgram> decode(const Scorer& scorer, const SearchConfig& cfg,
                                  const EntrySchema& skeleton, const DecodeVocab& vocab) {
  UastGrammar grammar(skeleton, vocab);
  TreeStore store;
  std::vector<PartialTree> trees = decode_trees(store, grammar, scorer, cfg);
  std::vector<ScoredProgram> out;
  out.reserve(trees.size());
  for (const auto& t : trees) out.push_back({grammar.to_program(store, t), t.score});
  return out;
}

}  // namespace uast
