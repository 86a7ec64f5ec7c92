#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "uast/core.hpp"

namespace uast {

class Value;

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const;
};

using ArrayData = std::vector<Value>;
using SetData = std::set<Value, ValueLess>;
using MapData = std::map<Value, Value, ValueLess>;
struct RecordData;

using ArrayRef = std::shared_ptr<ArrayData>;
using SetRef = std::shared_ptr<SetData>;
using MapRef = std::shared_ptr<MapData>;
using RecordRef = std::shared_ptr<RecordData>;

// Runtime value. Containers have reference semantics (assignment aliases,
// mirroring the Java programs the corpus comes from); scalars are copied.
class Value {
 public:
  using Node =
      std::variant<bool, CharLit, int64_t, double, ArrayRef, SetRef, MapRef, RecordRef>;

  Value() : v_(int64_t{0}) {}
  Value(bool b) : v_(b) {}
  Value(CharLit c) : v_(c) {}
  Value(int64_t i) : v_(i) {}
  Value(double d) : v_(d) {}
  Value(ArrayRef a) : v_(std::move(a)) {}
  Value(SetRef s) : v_(std::move(s)) {}
  Value(MapRef m) : v_(std::move(m)) {}
  Value(RecordRef r) : v_(std::move(r)) {}

  enum class Kind { Bool, Char, Int, Real, Array, Set, Map, Record };
  Kind kind() const { return static_cast<Kind>(v_.index()); }

  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_char() const { return kind() == Kind::Char; }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_real() const { return kind() == Kind::Real; }
  bool is_numeric() const { return is_int() || is_real(); }
  bool is_array() const { return kind() == Kind::Array; }

  bool as_bool() const { return std::get<bool>(v_); }
  CharLit as_char() const { return std::get<CharLit>(v_); }
  int64_t as_int() const { return std::get<int64_t>(v_); }
  double as_real() const { return std::get<double>(v_); }
  const ArrayRef& as_array() const { return std::get<ArrayRef>(v_); }
  const SetRef& as_set() const { return std::get<SetRef>(v_); }
  const MapRef& as_map() const { return std::get<MapRef>(v_); }
  const RecordRef& as_record() const { return std::get<RecordRef>(v_); }

  // int or real widened to double.
  double numeric() const { return is_int() ? static_cast<double>(as_int()) : as_real(); }

  const Node& node() const { return v_; }

  static Value array() { return Value(std::make_shared<ArrayData>()); }
  static Value set() { return Value(std::make_shared<SetData>()); }
  static Value map() { return Value(std::make_shared<MapData>()); }
  static Value string(const std::string& utf8);

 private:
  Node v_;
};

struct RecordData {
  std::string name;
  std::vector<std::pair<std::string, Value>> fields;  // declaration order

  Value* find(std::string_view field);
  const Value* find(std::string_view field) const;
};

// Deep structural equality; container identity is irrelevant.
bool deep_equal(const Value& a, const Value& b);

// Deep comparison where real leaves match within
// max(rel_tol * |expected|, rel_tol). Ints and reals never match each other.
bool match_with_tolerance(const Value& expected, const Value& actual, double rel_tol);

// Registry of record declarations, needed to build default record instances
// and to decode record values from JSON.
class RecordTable {
 public:
  RecordTable() = default;
  explicit RecordTable(const Program& p);
  const RecordDecl* find(std::string_view name) const;

 private:
  std::map<std::string, const RecordDecl*, std::less<>> by_name_;
};

// Zero value of a type: false, '\0', 0, 0.0, empty containers, records with
// default fields. Throws on excessively recursive record types.
Value default_value(const Type& t, const RecordTable& records);

// JSON encoding: ints and reals as numbers, chars and char arrays as strings,
// arrays as arrays, sets as {"set":[...]}, maps as {"map":[[k,v],...]},
// records as {"record":name,"fields":{...}}.
nlohmann::ordered_json value_to_json(const Value& v);
Value value_from_json(const nlohmann::ordered_json& j, const Type& type,
                      const RecordTable& records);
std::string value_text(const Value& v);

// True if v conforms to the given type tag (deep check).
bool value_conforms(const Value& v, const Type& t);

}  // namespace uast
