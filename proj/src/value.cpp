#include "uast/value.hpp"

#include <cmath>
#include <stdexcept>

#include "uast/serde.hpp"
#include "uast/unicode.hpp"

namespace uast {

Value Value::string(const std::string& utf8) {
  auto arr = std::make_shared<ArrayData>();
  for (uint32_t cp : utf8_decode(utf8)) arr->push_back(Value(CharLit{cp}));
  return Value(std::move(arr));
}

Value* RecordData::find(std::string_view field) {
  for (auto& [name, value] : fields)
    if (name == field) return &value;
  return nullptr;
}

const Value* RecordData::find(std::string_view field) const {
  for (const auto& [name, value] : fields)
    if (name == field) return &value;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Ordering and equality
// ---------------------------------------------------------------------------

namespace {

// -1 / 0 / 1 deep comparison; kinds ordered by variant index when they differ.
int cmp(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) {
    // Mixed int/real compare numerically so that sets of numerics behave.
    if (a.is_numeric() && b.is_numeric()) {
      double x = a.numeric(), y = b.numeric();
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  }
  switch (a.kind()) {
    case Value::Kind::Bool:
      return a.as_bool() == b.as_bool() ? 0 : (a.as_bool() ? 1 : -1);
    case Value::Kind::Char:
      return a.as_char().code == b.as_char().code ? 0 : (a.as_char().code < b.as_char().code ? -1 : 1);
    case Value::Kind::Int:
      return a.as_int() == b.as_int() ? 0 : (a.as_int() < b.as_int() ? -1 : 1);
    case Value::Kind::Real: {
      double x = a.as_real(), y = b.as_real();
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    case Value::Kind::Array: {
      const auto& x = *a.as_array();
      const auto& y = *b.as_array();
      size_t n = std::min(x.size(), y.size());
      for (size_t i = 0; i < n; ++i)
        if (int c = cmp(x[i], y[i])) return c;
      return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
    }
    case Value::Kind::Set: {
      const auto& x = *a.as_set();
      const auto& y = *b.as_set();
      auto i = x.begin();
      auto j = y.begin();
      for (; i != x.end() && j != y.end(); ++i, ++j)
        if (int c = cmp(*i, *j)) return c;
      return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
    }
    case Value::Kind::Map: {
      const auto& x = *a.as_map();
      const auto& y = *b.as_map();
      auto i = x.begin();
      auto j = y.begin();
      for (; i != x.end() && j != y.end(); ++i, ++j) {
        if (int c = cmp(i->first, j->first)) return c;
        if (int c = cmp(i->second, j->second)) return c;
      }
      return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
    }
    case Value::Kind::Record: {
      const auto& x = *a.as_record();
      const auto& y = *b.as_record();
      if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
      size_t n = std::min(x.fields.size(), y.fields.size());
      for (size_t i = 0; i < n; ++i) {
        if (int c = x.fields[i].first.compare(y.fields[i].first)) return c < 0 ? -1 : 1;
        if (int c = cmp(x.fields[i].second, y.fields[i].second)) return c;
      }
      return x.fields.size() == y.fields.size() ? 0 : (x.fields.size() < y.fields.size() ? -1 : 1);
    }
  }
  return 0;
}

}  // namespace

bool ValueLess::operator()(const Value& a, const Value& b) const { return cmp(a, b) < 0; }

bool deep_equal(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;  // int 3 != real 3.0
  return cmp(a, b) == 0;
}

bool match_with_tolerance(const Value& expected, const Value& actual, double rel_tol) {
  if (expected.kind() != actual.kind()) return false;
  switch (expected.kind()) {
    case Value::Kind::Real: {
      double e = expected.as_real(), a = actual.as_real();
      if (std::isnan(e) || std::isnan(a)) return std::isnan(e) && std::isnan(a);
      return std::abs(e - a) <= std::max(rel_tol * std::abs(e), rel_tol);
    }
    case Value::Kind::Array: {
      const auto& x = *expected.as_array();
      const auto& y = *actual.as_array();
      if (x.size() != y.size()) return false;
      for (size_t i = 0; i < x.size(); ++i)
        if (!match_with_tolerance(x[i], y[i], rel_tol)) return false;
      return true;
    }
    case Value::Kind::Set: {
      // Tolerance inside unordered collections is ill-defined; fall back to
      // pairwise matching of the ordered representations.
      const auto& x = *expected.as_set();
      const auto& y = *actual.as_set();
      if (x.size() != y.size()) return false;
      auto i = x.begin();
      auto j = y.begin();
      for (; i != x.end(); ++i, ++j)
        if (!match_with_tolerance(*i, *j, rel_tol)) return false;
      return true;
    }
    case Value::Kind::Map: {
      const auto& x = *expected.as_map();
      const auto& y = *actual.as_map();
      if (x.size() != y.size()) return false;
      auto i = x.begin();
      auto j = y.begin();
      for (; i != x.end(); ++i, ++j) {
        if (!match_with_tolerance(i->first, j->first, rel_tol)) return false;
        if (!match_with_tolerance(i->second, j->second, rel_tol)) return false;
      }
      return true;
    }
    case Value::Kind::Record: {
      const auto& x = *expected.as_record();
      const auto& y = *actual.as_record();
      if (x.name != y.name || x.fields.size() != y.fields.size()) return false;
      for (size_t i = 0; i < x.fields.size(); ++i) {
        if (x.fields[i].first != y.fields[i].first) return false;
        if (!match_with_tolerance(x.fields[i].second, y.fields[i].second, rel_tol)) return false;
      }
      return true;
    }
    default:
      return deep_equal(expected, actual);
  }
}

// ---------------------------------------------------------------------------
// Record table and defaults
// ---------------------------------------------------------------------------

RecordTable::RecordTable(const Program& p) {
  for (const auto& r : p.records) by_name_.emplace(r.name, &r);
}

const RecordDecl* RecordTable::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

namespace {

Value default_value_impl(const Type& t, const RecordTable& records, int depth) {
  if (depth > 16) throw std::runtime_error("record type nests too deeply to default-initialize");
  switch (t.kind()) {
    case TypeKind::Bool: return Value(false);
    case TypeKind::Char: return Value(CharLit{0});
    case TypeKind::Int: return Value(int64_t{0});
    case TypeKind::Real: return Value(0.0);
    case TypeKind::Array: return Value::array();
    case TypeKind::Set: return Value::set();
    case TypeKind::Map: return Value::map();
    case TypeKind::Record: {
      const RecordDecl* decl = records.find(t.record_name());
      if (!decl) throw std::runtime_error("unknown record type '" + t.record_name() + "'");
      auto rec = std::make_shared<RecordData>();
      rec->name = decl->name;
      for (const auto& f : decl->fields)
        rec->fields.emplace_back(f.name, default_value_impl(*f.type, records, depth + 1));
      return Value(std::move(rec));
    }
    case TypeKind::Void:
      throw std::runtime_error("void has no value");
  }
  return {};
}

}  // namespace

Value default_value(const Type& t, const RecordTable& records) {
  return default_value_impl(t, records, 0);
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

namespace {

bool is_char_array(const Value& v) {
  if (!v.is_array()) return false;
  for (const auto& e : *v.as_array())
    if (!e.is_char()) return false;
  return true;
}

}  // namespace

nlohmann::ordered_json value_to_json(const Value& v) {
  using J = nlohmann::ordered_json;
  switch (v.kind()) {
    case Value::Kind::Bool: return J(v.as_bool());
    case Value::Kind::Int: return J(v.as_int());
    case Value::Kind::Real: return J(v.as_real());
    case Value::Kind::Char: {
      std::string s;
      utf8_append(s, v.as_char().code);
      return J(s);
    }
    case Value::Kind::Array: {
      if (is_char_array(v)) {
        std::string s;
        for (const auto& e : *v.as_array()) utf8_append(s, e.as_char().code);
        return J(s);
      }
      J arr = J::array();
      for (const auto& e : *v.as_array()) arr.push_back(value_to_json(e));
      return arr;
    }
    case Value::Kind::Set: {
      J elems = J::array();
      for (const auto& e : *v.as_set()) elems.push_back(value_to_json(e));
      J out = J::object();
      out["set"] = std::move(elems);
      return out;
    }
    case Value::Kind::Map: {
      J entries = J::array();
      for (const auto& [k, val] : *v.as_map())
        entries.push_back(J::array({value_to_json(k), value_to_json(val)}));
      J out = J::object();
      out["map"] = std::move(entries);
      return out;
    }
    case Value::Kind::Record: {
      const auto& r = *v.as_record();
      J fields = J::object();
      for (const auto& [name, val] : r.fields) fields[name] = value_to_json(val);
      J out = J::object();
      out["record"] = r.name;
      out["fields"] = std::move(fields);
      return out;
    }
  }
  return {};
}

Value value_from_json(const nlohmann::ordered_json& j, const Type& type,
                      const RecordTable& records) {
  auto fail = [&](const std::string& message) -> Value {
    throw std::invalid_argument(message + " (expected type '" + type_text(type) + "')");
  };
  switch (type.kind()) {
    case TypeKind::Bool:
      if (!j.is_boolean()) return fail("expected a boolean");
      return Value(j.get<bool>());
    case TypeKind::Char:
      if (!j.is_string()) return fail("expected a one-character string");
      return Value(CharLit{utf8_decode_one(j.get<std::string>())});
    case TypeKind::Int:
      if (!j.is_number_integer() && !j.is_number_unsigned()) return fail("expected an integer");
      return Value(j.get<int64_t>());
    case TypeKind::Real:
      if (!j.is_number()) return fail("expected a number");
      return Value(j.get<double>());
    case TypeKind::Array: {
      if (type.elem()->kind() == TypeKind::Char && j.is_string())
        return Value::string(j.get<std::string>());
      if (!j.is_array()) return fail("expected an array");
      auto arr = std::make_shared<ArrayData>();
      for (const auto& e : j) arr->push_back(value_from_json(e, *type.elem(), records));
      return Value(std::move(arr));
    }
    case TypeKind::Set: {
      if (!j.is_object() || !j.contains("set") || !j["set"].is_array())
        return fail("expected {\"set\": [...]}");
      auto set = std::make_shared<SetData>();
      for (const auto& e : j["set"]) set->insert(value_from_json(e, *type.elem(), records));
      return Value(std::move(set));
    }
    case TypeKind::Map: {
      if (!j.is_object() || !j.contains("map") || !j["map"].is_array())
        return fail("expected {\"map\": [[k,v],...]}");
      auto map = std::make_shared<MapData>();
      for (const auto& e : j["map"]) {
        if (!e.is_array() || e.size() != 2) return fail("map entries must be [key, value] pairs");
        map->emplace(value_from_json(e[0], *type.key(), records),
                     value_from_json(e[1], *type.value(), records));
      }
      return Value(std::move(map));
    }
    case TypeKind::Record: {
      if (!j.is_object() || !j.contains("record") || !j.contains("fields"))
        return fail("expected {\"record\": name, \"fields\": {...}}");
      const RecordDecl* decl = records.find(type.record_name());
      if (!decl) return fail("unknown record type");
      if (j["record"].get<std::string>() != decl->name) return fail("record name mismatch");
      auto rec = std::make_shared<RecordData>();
      rec->name = decl->name;
      for (const auto& f : decl->fields) {
        if (!j["fields"].contains(f.name)) return fail("missing record field '" + f.name + "'");
        rec->fields.emplace_back(f.name, value_from_json(j["fields"][f.name], *f.type, records));
      }
      return Value(std::move(rec));
    }
    case TypeKind::Void:
      return fail("void has no value");
  }
  return {};
}

std::string value_text(const Value& v) { return value_to_json(v).dump(); }

bool value_conforms(const Value& v, const Type& t) {
  switch (t.kind()) {
    case TypeKind::Bool: return v.is_bool();
    case TypeKind::Char: return v.is_char();
    case TypeKind::Int: return v.is_int();
    case TypeKind::Real: return v.is_real();
    case TypeKind::Array: {
      if (!v.is_array()) return false;
      for (const auto& e : *v.as_array())
        if (!value_conforms(e, *t.elem())) return false;
      return true;
    }
    case TypeKind::Set: {
      if (v.kind() != Value::Kind::Set) return false;
      for (const auto& e : *v.as_set())
        if (!value_conforms(e, *t.elem())) return false;
      return true;
    }
    case TypeKind::Map: {
      if (v.kind() != Value::Kind::Map) return false;
      for (const auto& [k, val] : *v.as_map()) {
        if (!value_conforms(k, *t.key())) return false;
        if (!value_conforms(val, *t.value())) return false;
      }
      return true;
    }
    case TypeKind::Record:
      return v.kind() == Value::Kind::Record && v.as_record()->name == t.record_name();
    case TypeKind::Void:
      return false;
  }
  return false;
}

}  // namespace uast
