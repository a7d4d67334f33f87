#pragma once

#include <string>
#include <variant>
#include <vector>

#include "clean2hs/box.hpp"
#include "clean2hs/source.hpp"

namespace clean2hs::clean {

enum class AttrKind { none, unique, var, anon_dot };

/// Uniqueness attribute attached to every type node: `*`, `u:`, `.` or none.
struct Attr {
  AttrKind kind = AttrKind::none;
  std::string var;  // set iff kind == var
  Loc loc;

  bool operator==(const Attr&) const = default;

  static Attr none() { return {}; }
  static Attr unique(Loc l = {}) { return {AttrKind::unique, {}, l}; }
  static Attr variable(std::string name, Loc l = {}) {
    return {AttrKind::var, std::move(name), l};
  }
  static Attr dot(Loc l = {}) { return {AttrKind::anon_dot, {}, l}; }
};

struct AttrType;

struct TyBase {
  std::string name;
  bool operator==(const TyBase&) const = default;
};
struct TyVar {
  std::string name;
  bool operator==(const TyVar&) const = default;
};
struct TyApply {
  Box<AttrType> head;
  std::vector<AttrType> args;
  bool operator==(const TyApply&) const = default;
};
/// A zero-element tuple is the unit type.
struct TyTuple {
  std::vector<AttrType> elems;
  bool operator==(const TyTuple&) const = default;
};
struct TyList {
  Box<AttrType> elem;
  bool operator==(const TyList&) const = default;
};
struct TyArray {
  Box<AttrType> elem;
  bool operator==(const TyArray&) const = default;
};
struct TyFunction {
  Box<AttrType> arg;
  Box<AttrType> result;
  bool operator==(const TyFunction&) const = default;
};
struct TyOptional {
  Box<AttrType> elem;
  bool operator==(const TyOptional&) const = default;
};
/// `A.a b: t`
struct TyForall {
  std::vector<std::string> vars;
  Box<AttrType> body;
  bool operator==(const TyForall&) const = default;
};

using TypeShape =
    std::variant<TyBase, TyVar, TyApply, TyTuple, TyList, TyArray, TyFunction, TyOptional, TyForall>;

struct AttrType {
  TypeShape shape;
  Attr attr;
  bool strict = false;  // `!t` in argument and field positions
  Loc loc;

  bool operator==(const AttrType&) const = default;
};

inline AttrType base_type(std::string name, Attr a = {}) { return {TyBase{std::move(name)}, a}; }
inline AttrType var_type(std::string name, Attr a = {}) { return {TyVar{std::move(name)}, a}; }
inline AttrType tuple_type(std::vector<AttrType> elems, Attr a = {}) {
  return {TyTuple{std::move(elems)}, a};
}
inline AttrType list_type(AttrType elem, Attr a = {}) { return {TyList{std::move(elem)}, a}; }
inline AttrType array_type(AttrType elem, Attr a = {}) { return {TyArray{std::move(elem)}, a}; }
inline AttrType optional_type(AttrType elem, Attr a = {}) {
  return {TyOptional{std::move(elem)}, a};
}
inline AttrType function_type(AttrType arg, AttrType result) {
  return {TyFunction{std::move(arg), std::move(result)}, {}};
}
inline AttrType apply_type(AttrType head, std::vector<AttrType> args, Attr a = {}) {
  return {TyApply{std::move(head), std::move(args)}, a};
}

/// `v <= u`: v is at most as unique as u.
struct AttrConstraint {
  std::string lesser;
  std::string greater;
  Loc loc;
  bool operator==(const AttrConstraint&) const = default;
};

/// Class constraint `C t0 t1 ...` from a `| ...` context.
struct ClassConstraint {
  std::string class_name;
  std::vector<AttrType> args;
  Loc loc;
  bool operator==(const ClassConstraint&) const = default;
};

/// Signature: juxtaposed argument types, result, contexts.
struct FunSig {
  std::vector<std::string> quantified;  // top-level `A.a:`
  std::vector<AttrType> args;
  AttrType result;
  std::vector<ClassConstraint> context;
  std::vector<AttrConstraint> attr_constraints;
  Loc loc;
  bool operator==(const FunSig&) const = default;
};

}  // namespace clean2hs::clean
