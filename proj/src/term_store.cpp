// Copyright 2026 The coinfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coinfer/term_store.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace coinfer {
namespace {

template <typename Field>
void sort_and_check(std::vector<Field>& fields) {
  std::sort(fields.begin(), fields.end(),
            [](const Field& a, const Field& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < fields.size(); ++i) {
    if (fields[i].name == fields[i - 1].name) {
      throw std::invalid_argument("duplicate field '" + fields[i].name + "'");
    }
  }
}

std::string type_key(const TypeNode& n) {
  switch (n.kind) {
    case TypeKind::kInt:
      return "I";
    case TypeKind::kUnion:
      return "U" + std::to_string(n.left.value) + "," +
             std::to_string(n.right.value);
    case TypeKind::kObj: {
      std::string key = "O" + n.class_name + "(";
      for (const auto& f : n.fields) {
        key += f.name + ":" + std::to_string(f.type.value) + ",";
      }
      return key + ")";
    }
    case TypeKind::kPending:
      break;
  }
  throw std::logic_error("pending node has no structural key");
}

std::string value_key(const ValueNode& n) {
  switch (n.kind) {
    case ValueKind::kInt:
      return "N" + std::to_string(n.integer);
    case ValueKind::kObj: {
      std::string key = "O" + n.class_name + "(";
      for (const auto& f : n.fields) {
        key += f.name + ":" + std::to_string(f.value.value) + ",";
      }
      return key + ")";
    }
    case ValueKind::kPending:
      break;
  }
  throw std::logic_error("pending node has no structural key");
}

}  // namespace

void normalize_fields(std::vector<TypeField>& fields) { sort_and_check(fields); }
void normalize_fields(std::vector<ValueField>& fields) { sort_and_check(fields); }

std::vector<TypeId> TypeNode::children() const {
  switch (kind) {
    case TypeKind::kUnion:
      return {left, right};
    case TypeKind::kObj: {
      std::vector<TypeId> out;
      out.reserve(fields.size());
      for (const auto& f : fields) out.push_back(f.type);
      return out;
    }
    default:
      return {};
  }
}

std::vector<ValueId> ValueNode::children() const {
  std::vector<ValueId> out;
  if (kind == ValueKind::kObj) {
    out.reserve(fields.size());
    for (const auto& f : fields) out.push_back(f.value);
  }
  return out;
}

TypeId TypeStore::push(TypeNode node) {
  nodes_.push_back(std::move(node));
  return TypeId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

TypeId TypeStore::intern(TypeNode node) {
  std::string key = type_key(node);
  if (auto it = hashcons_.find(key); it != hashcons_.end()) return it->second;
  TypeId id = push(std::move(node));
  hashcons_.emplace(std::move(key), id);
  return id;
}

TypeId TypeStore::make_int() {
  TypeNode n;
  n.kind = TypeKind::kInt;
  return intern(std::move(n));
}

TypeId TypeStore::make_obj(std::string class_name,
                           std::vector<TypeField> fields) {
  sort_and_check(fields);
  for (const auto& f : fields) (void)node(f.type);
  TypeNode n;
  n.kind = TypeKind::kObj;
  n.class_name = std::move(class_name);
  n.fields = std::move(fields);
  return intern(std::move(n));
}

TypeId TypeStore::make_union(TypeId left, TypeId right) {
  (void)node(left);
  (void)node(right);
  TypeNode n;
  n.kind = TypeKind::kUnion;
  n.left = left;
  n.right = right;
  return intern(std::move(n));
}

TypeId TypeStore::reserve() { return push(TypeNode{}); }

void TypeStore::define(TypeId id, TypeNode shape) {
  TypeNode& slot = nodes_.at(id.value);
  if (slot.kind != TypeKind::kPending) {
    throw std::logic_error("define() on a node that is already defined");
  }
  if (shape.kind == TypeKind::kPending) {
    throw std::logic_error("define() with a pending shape");
  }
  if (shape.kind == TypeKind::kObj) sort_and_check(shape.fields);
  for (TypeId c : shape.children()) (void)node(c);
  slot = std::move(shape);
}

TypeId TypeStore::with_field(TypeId obj, const std::string& field,
                             TypeId type) {
  TypeNode copy = node(obj);
  if (copy.kind != TypeKind::kObj) {
    throw std::logic_error("with_field() on a non-object node");
  }
  for (auto& f : copy.fields) {
    if (f.name == field) f.type = type;
  }
  return intern(std::move(copy));
}

std::optional<TypeId> TypeStore::lookup_canonical(
    const std::string& signature) const {
  if (auto it = canonical_.find(signature); it != canonical_.end()) {
    return it->second;
  }
  return std::nullopt;
}

void TypeStore::register_canonical(const std::string& signature, TypeId root) {
  canonical_.emplace(signature, root);
}

ValueId ValueStore::push(ValueNode node) {
  nodes_.push_back(std::move(node));
  return ValueId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

ValueId ValueStore::intern(ValueNode node) {
  std::string key = value_key(node);
  if (auto it = hashcons_.find(key); it != hashcons_.end()) return it->second;
  ValueId id = push(std::move(node));
  hashcons_.emplace(std::move(key), id);
  return id;
}

ValueId ValueStore::make_int(std::int64_t value) {
  ValueNode n;
  n.kind = ValueKind::kInt;
  n.integer = value;
  return intern(std::move(n));
}

ValueId ValueStore::make_obj(std::string class_name,
                             std::vector<ValueField> fields) {
  sort_and_check(fields);
  for (const auto& f : fields) (void)node(f.value);
  ValueNode n;
  n.kind = ValueKind::kObj;
  n.class_name = std::move(class_name);
  n.fields = std::move(fields);
  return intern(std::move(n));
}

ValueId ValueStore::reserve() { return push(ValueNode{}); }

void ValueStore::define(ValueId id, ValueNode shape) {
  ValueNode& slot = nodes_.at(id.value);
  if (slot.kind != ValueKind::kPending) {
    throw std::logic_error("define() on a node that is already defined");
  }
  if (shape.kind == ValueKind::kPending) {
    throw std::logic_error("define() with a pending shape");
  }
  if (shape.kind == ValueKind::kObj) sort_and_check(shape.fields);
  for (ValueId c : shape.children()) (void)node(c);
  slot = std::move(shape);
}

std::optional<ValueId> ValueStore::lookup_canonical(
    const std::string& signature) const {
  if (auto it = canonical_.find(signature); it != canonical_.end()) {
    return it->second;
  }
  return std::nullopt;
}

void ValueStore::register_canonical(const std::string& signature,
                                    ValueId root) {
  canonical_.emplace(signature, root);
}

}  // namespace coinfer
