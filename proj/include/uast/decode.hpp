#pragma once

#include <deque>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "uast/check.hpp"
#include "uast/core.hpp"

namespace uast {

// ---------------------------------------------------------------------------
// Persistent tree store
// ---------------------------------------------------------------------------

using NodeId = uint32_t;
inline constexpr NodeId kNoNode = 0xFFFFFFFFu;

// What a hole expects. SameAsSibling/ElemOfSibling defer to an earlier child
// of the same parent, which leftmost expansion guarantees is complete by the
// time the hole is reached.
struct TypeSpec {
  enum class Mode { Any, AnyIterable, Exact, SameAsSibling, ElemOfSibling };
  Mode mode = Mode::Any;
  TypeRef exact;
  int sibling = -1;

  static TypeSpec any() { return {}; }
  static TypeSpec iterable() { return {Mode::AnyIterable, nullptr, -1}; }
  static TypeSpec exactly(TypeRef t) { return {Mode::Exact, std::move(t), -1}; }
  static TypeSpec same_as(int sibling) { return {Mode::SameAsSibling, nullptr, sibling}; }
  static TypeSpec elem_of(int sibling) { return {Mode::ElemOfSibling, nullptr, sibling}; }
};

enum class HoleCat { Locals, StmtList, Stmt, Expr };

struct HoleSpec {
  HoleCat cat = HoleCat::Expr;
  TypeSpec type;
  bool place_only = false;  // assignment targets
  bool in_loop = false;
  int list_index = 0;  // position within a cons chain
};

struct NodePayload {
  std::string label;   // production label, e.g. "stmt.if", "expr.var:var0"
  std::string name;    // variable name / callee / field name
  TypeRef type;        // result type, local type, cast target
  ConstVal value{int64_t{0}};
  std::vector<TypeRef> arg_types;  // invoke signature
};

struct ArenaNode {
  bool is_hole = false;
  HoleSpec hole;
  NodePayload payload;
  std::vector<NodeId> kids;
};

// Append-only arena. Nodes are immutable once inserted; forking a tree copies
// only the path from the changed hole to the root, so siblings are shared
// between versions.
class TreeStore {
 public:
  NodeId add(ArenaNode n) {
    arena_.push_back(std::move(n));
    return static_cast<NodeId>(arena_.size() - 1);
  }
  const ArenaNode& at(NodeId id) const { return arena_[id]; }
  size_t size() const { return arena_.size(); }

 private:
  std::deque<ArenaNode> arena_;  // stable references while appending
};

struct PartialTree {
  NodeId root = kNoNode;
  // Child-slot paths of the remaining holes, leftmost first. Paths stay valid
  // across forks because node arity is fixed at creation.
  std::vector<std::vector<int>> holes;
  double score = 0;       // cumulative log-probability
  int node_count = 0;     // filled productions
  uint64_t seq = 0;       // insertion order, breaking score ties
  bool complete() const { return holes.empty(); }
};

NodeId resolve_path(const TreeStore& store, NodeId root, std::span<const int> path);

// ---------------------------------------------------------------------------
// Productions, grammar, scoring
// ---------------------------------------------------------------------------

struct Production {
  std::string label;
  NodePayload payload;
  std::vector<HoleSpec> child_holes;
  int decl_order = 0;
};

struct HoleContext {
  // (ancestor label, descended child slot) pairs from the root to the hole.
  std::vector<std::pair<std::string, int>> path;
  // Hash of every completed production label in leftmost derivation order:
  // the whole-tree summary a scorer can condition on.
  uint64_t derivation_hash = 0;
  std::string parent_label;
  int slot = -1;
  const HoleSpec* hole = nullptr;
  std::vector<std::string> left_sibling_labels;
  std::vector<std::string> right_sibling_labels;  // open holes render as "?"
};

class Grammar {
 public:
  virtual ~Grammar() = default;
  virtual PartialTree seed(TreeStore& store) const = 0;
  virtual std::vector<Production> legal(const TreeStore& store, const PartialTree& t,
                                        std::span<const int> hole_path) const = 0;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  // Returns (index into legal, log-prob <= 0) pairs; any subset of legal.
  virtual std::vector<std::pair<size_t, double>> score_extensions(
      const HoleContext& ctx, const std::vector<Production>& legal) const = 0;
};

struct SearchConfig {
  size_t queue_capacity = 64;
  size_t expansions_per_step = 64;
  size_t max_tree_nodes = 256;
};

HoleContext make_context(const TreeStore& store, const PartialTree& t,
                         std::span<const int> hole_path);

std::vector<Production> legal_extensions(const TreeStore& store, const Grammar& grammar,
                                         const PartialTree& t, std::span<const int> hole_path);

// Forks a new tree with the hole filled by `prod`. The original tree remains
// addressable and structurally unchanged; at most depth + arity + 1 arena
// nodes are allocated. Throws std::invalid_argument when the hole is unknown
// or the production does not fit its category.
PartialTree extend(TreeStore& store, const PartialTree& t, std::span<const int> hole_path,
                   const Production& prod, double log_prob = 0.0);

// Best-first loop: every incomplete tree in the queue expands its leftmost
// hole with up to expansions_per_step scored productions; forks are pruned to
// queue_capacity by cumulative score; completed trees accumulate and are
// returned ranked by descending score (ties by insertion order).
std::vector<PartialTree> decode_trees(TreeStore& store, const Grammar& grammar,
                                      const Scorer& scorer, const SearchConfig& cfg);

// ---------------------------------------------------------------------------
// Scorers
// ---------------------------------------------------------------------------

class UniformScorer : public Scorer {
 public:
  std::vector<std::pair<size_t, double>> score_extensions(
      const HoleContext& ctx, const std::vector<Production>& legal) const override;
};

// Production frequencies harvested from a corpus, conditioned on structural
// context with backoff: ancestor-path key, then (parent, slot, list index),
// then (parent, slot), then the bare nonterminal. Add-1 smoothing at every
// level; deterministic.
class FrequencyScorer : public Scorer {
 public:
  explicit FrequencyScorer(std::span<const Program> corpus);
  std::vector<std::pair<size_t, double>> score_extensions(
      const HoleContext& ctx, const std::vector<Production>& legal) const override;

 private:
  struct Table {
    std::map<std::string, std::map<std::string, int64_t>> counts;
    std::map<std::string, int64_t> totals;
  };
  Table table_;
  void count_event(const std::string& key, const std::string& label);
  friend struct CorpusWalker;
};

std::unique_ptr<Scorer> frequency_scorer(std::span<const Program> corpus);

// ---------------------------------------------------------------------------
// UAST grammar instance
// ---------------------------------------------------------------------------

// Finite derivation vocabulary: everything the decoder may instantiate beyond
// the grammar's fixed productions comes from here.
struct DecodeVocab {
  struct TypedConst {
    TypeRef type;
    ConstVal value;
  };
  struct InvokeSig {
    std::string callee;
    TypeRef result;
    std::vector<TypeRef> args;
  };
  struct CastSig {
    TypeRef target, source;
  };
  struct FieldSig {
    TypeRef object;
    std::string field;
    TypeRef type;
  };

  std::vector<TypedConst> constants;  // corpus constants plus {-1,0,1,2,10}
  std::vector<InvokeSig> invokes;
  std::vector<CastSig> casts;
  std::vector<FieldSig> fields;
  std::vector<TypeRef> new_types;
  std::vector<TypeRef> local_types;
  size_t max_locals = 6;

  static DecodeVocab from_corpus(std::span<const Program> corpus);
};

// Decodes whole programs: a fixed __main__ skeleton (entry signature), a
// locals chain, and a statement chain, all holes fully type-constrained.
class UastGrammar : public Grammar {
 public:
  UastGrammar(EntrySchema schema, DecodeVocab vocab);

  PartialTree seed(TreeStore& store) const override;
  std::vector<Production> legal(const TreeStore& store, const PartialTree& t,
                                std::span<const int> hole_path) const override;

  Program to_program(const TreeStore& store, const PartialTree& t) const;

  const EntrySchema& schema() const { return schema_; }
  const DecodeVocab& vocab() const { return vocab_; }

 private:
  EntrySchema schema_;
  DecodeVocab vocab_;
};

// Single-expression grammar over explicit variables and vocabulary; used for
// small enumerable search spaces.
class ExprGrammar : public Grammar {
 public:
  ExprGrammar(TypeRef target, std::vector<VarDecl> vars, DecodeVocab vocab);

  PartialTree seed(TreeStore& store) const override;
  std::vector<Production> legal(const TreeStore& store, const PartialTree& t,
                                std::span<const int> hole_path) const override;

  ExprPtr to_expr(const TreeStore& store, const PartialTree& t) const;

 private:
  TypeRef target_;
  std::vector<VarDecl> vars_;
  DecodeVocab vocab_;
};

struct ScoredProgram {
  Program program;
  double score = 0;
};

// Full pipeline for the entry-schema grammar.
std::vector<ScoredProgram> decode(const Scorer& scorer, const SearchConfig& cfg,
                                  const EntrySchema& skeleton, const DecodeVocab& vocab);

}  // namespace uast
