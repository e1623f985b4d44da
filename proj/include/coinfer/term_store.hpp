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

// Append-only node stores for regular (rational) type and value terms.
//
// A term is a node id into a store. Cycles are built by reserving a pending
// node and defining it afterwards, so every regular tree has a finite
// graph. Object fields are kept sorted by name; field order is never
// significant.

#ifndef COINFER_TERM_STORE_HPP_
#define COINFER_TERM_STORE_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace coinfer {

struct TypeId {
  std::uint32_t value = 0;
  auto operator<=>(const TypeId&) const = default;
};

struct ValueId {
  std::uint32_t value = 0;
  auto operator<=>(const ValueId&) const = default;
};

enum class TypeKind : std::uint8_t { kInt, kObj, kUnion, kPending };

struct TypeField {
  std::string name;
  TypeId type;
};

struct TypeNode {
  TypeKind kind = TypeKind::kPending;
  std::string class_name;          // kObj
  std::vector<TypeField> fields;   // kObj, sorted by name
  TypeId left;                     // kUnion
  TypeId right;                    // kUnion

  /// Successor ids in a fixed order: union (left, right), obj fields by name.
  std::vector<TypeId> children() const;
};

class TypeStore {
 public:
  TypeStore() = default;
  TypeStore(const TypeStore&) = delete;
  TypeStore& operator=(const TypeStore&) = delete;
  TypeStore(TypeStore&&) = default;
  TypeStore& operator=(TypeStore&&) = default;

  // Hash-consed constructors. Children must already exist (they may still
  // be pending).
  TypeId make_int();
  TypeId make_obj(std::string class_name, std::vector<TypeField> fields);
  TypeId make_union(TypeId left, TypeId right);

  /// Returns a fresh pending node to be defined later; used to close cycles.
  TypeId reserve();
  /// Gives a pending node its shape. Throws std::logic_error if `id` is not
  /// pending or the shape is itself pending.
  void define(TypeId id, TypeNode shape);

  const TypeNode& node(TypeId id) const { return nodes_.at(id.value); }
  std::size_t size() const { return nodes_.size(); }

  /// Copy of an obj node with one field retyped (used by rule distr).
  TypeId with_field(TypeId obj, const std::string& field, TypeId type);

  std::optional<TypeId> lookup_canonical(const std::string& signature) const;
  void register_canonical(const std::string& signature, TypeId root);

 private:
  TypeId push(TypeNode node);
  TypeId intern(TypeNode node);

  std::vector<TypeNode> nodes_;
  std::unordered_map<std::string, TypeId> hashcons_;
  std::unordered_map<std::string, TypeId> canonical_;
};

enum class ValueKind : std::uint8_t { kInt, kObj, kPending };

struct ValueField {
  std::string name;
  ValueId value;
};

struct ValueNode {
  ValueKind kind = ValueKind::kPending;
  std::int64_t integer = 0;         // kInt
  std::string class_name;           // kObj
  std::vector<ValueField> fields;   // kObj, sorted by name

  std::vector<ValueId> children() const;
};

class ValueStore {
 public:
  ValueStore() = default;
  ValueStore(const ValueStore&) = delete;
  ValueStore& operator=(const ValueStore&) = delete;
  ValueStore(ValueStore&&) = default;
  ValueStore& operator=(ValueStore&&) = default;

  ValueId make_int(std::int64_t value);
  ValueId make_obj(std::string class_name, std::vector<ValueField> fields);
  ValueId reserve();
  void define(ValueId id, ValueNode shape);

  const ValueNode& node(ValueId id) const { return nodes_.at(id.value); }
  std::size_t size() const { return nodes_.size(); }

  std::optional<ValueId> lookup_canonical(const std::string& signature) const;
  void register_canonical(const std::string& signature, ValueId root);

 private:
  ValueId push(ValueNode node);
  ValueId intern(ValueNode node);

  std::vector<ValueNode> nodes_;
  std::unordered_map<std::string, ValueId> hashcons_;
  std::unordered_map<std::string, ValueId> canonical_;
};

/// Sorts fields by name and rejects duplicates (std::invalid_argument).
void normalize_fields(std::vector<TypeField>& fields);
void normalize_fields(std::vector<ValueField>& fields);

}  // namespace coinfer

template <>
struct std::hash<coinfer::TypeId> {
  std::size_t operator()(coinfer::TypeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

template <>
struct std::hash<coinfer::ValueId> {
  std::size_t operator()(coinfer::ValueId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

#endif  // COINFER_TERM_STORE_HPP_
