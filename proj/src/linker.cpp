#include "clean2hs/linker.hpp"

#include <algorithm>
#include <map>

#include "clean2hs/uniqueness.hpp"

namespace clean2hs {

using namespace clean;

namespace {

// Curried function type of a signature, so that `a -> b -> c` compares
// equal whatever the split between arguments and result.
AttrType curried(const FunSig& s) {
  AttrType t = s.result;
  for (auto it = s.args.rbegin(); it != s.args.rend(); ++it) t = function_type(*it, std::move(t));
  return t;
}

void clear_strictness(AttrType& t) {
  t.strict = false;
  std::visit(
      [](auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, TyApply>) {
          clear_strictness(*n.head);
          for (auto& a : n.args) clear_strictness(a);
        } else if constexpr (std::is_same_v<N, TyTuple>) {
          for (auto& e : n.elems) clear_strictness(e);
        } else if constexpr (std::is_same_v<N, TyList> || std::is_same_v<N, TyArray> ||
                             std::is_same_v<N, TyOptional>) {
          clear_strictness(*n.elem);
        } else if constexpr (std::is_same_v<N, TyFunction>) {
          clear_strictness(*n.arg);
          clear_strictness(*n.result);
        } else if constexpr (std::is_same_v<N, TyForall>) {
          clear_strictness(*n.body);
        }
      },
      t.shape);
}

struct Comparable {
  AttrType type;
  std::vector<ClassConstraint> context;
  bool operator==(const Comparable&) const = default;
};

Comparable comparable(const FunSig& s, bool erased) {
  FunSig plain = erased ? erase(s).first : s;
  Comparable c{curried(plain), plain.context};
  clear_strictness(c.type);
  for (auto& k : c.context)
    for (auto& a : k.args) clear_strictness(a);
  if (!erased) c.context = erase(s).first.context;
  return c;
}

void compare_sigs(const std::string& name, const FunSig& d, const FunSig& i, const Loc& loc,
                  std::vector<Diagnostic>& diags) {
  if (comparable(d, true) != comparable(i, true)) {
    diags.push_back(make_diagnostic(Severity::error, rules::link_signature_mismatch, loc.span,
                                    "the type of '" + name +
                                        "' differs between the definition and implementation "
                                        "modules"));
  } else if (comparable(d, false) != comparable(i, false)) {
    diags.push_back(make_diagnostic(Severity::warning, rules::link_attr_mismatch, loc.span,
                                    "uniqueness attributes of '" + name +
                                        "' differ between the definition and implementation "
                                        "modules"));
  }
}

template <class T>
const T* find_named(const std::vector<T>& xs, const std::string& name) {
  auto it = std::find_if(xs.begin(), xs.end(), [&](const T& x) { return x.name == name; });
  return it == xs.end() ? nullptr : &*it;
}

// Moves result arrows into the arguments until the count matches arity.
std::optional<FunSig> fit_arity(FunSig s, std::size_t arity) {
  while (s.args.size() < arity) {
    auto* fn = std::get_if<TyFunction>(&s.result.shape);
    if (!fn || s.result.attr.kind != AttrKind::none) break;
    AttrType arg = *fn->arg;
    AttrType res = *fn->result;
    s.args.push_back(std::move(arg));
    s.result = std::move(res);
  }
  if (s.args.size() != arity) return std::nullopt;
  return s;
}

}  // namespace

LinkResult link(const CleanModule& dcl, const CleanModule& icl) {
  if (dcl.name != icl.name)
    throw ModuleNameMismatch(dcl.loc.span, "definition module '" + dcl.name +
                                               "' does not match implementation module '" +
                                               icl.name + "'");
  LinkResult r;
  auto missing = [&](const std::string& what, const std::string& name, const Loc& loc) {
    r.diagnostics.push_back(make_diagnostic(Severity::error, rules::link_missing, loc.span,
                                            what + " '" + name +
                                                "' is declared in the definition module but not "
                                                "defined in the implementation module"));
  };
  auto private_name = [&](const std::string& what, const std::string& name, const Loc& loc) {
    r.diagnostics.push_back(make_diagnostic(Severity::info, rules::link_private, loc.span,
                                            what + " '" + name + "' is private (not exported)"));
  };

  for (auto& d : dcl.typedefs) {
    if (!find_named(icl.typedefs, d.name)) {
      missing("type", d.name, d.loc);
      continue;
    }
    bool bare = std::holds_alternative<Abstract>(d.body) || std::holds_alternative<Synonym>(d.body);
    r.exports.items.push_back({bare ? ExportKind::type : ExportKind::type_with_ctors, d.name});
  }
  for (auto& c : dcl.classes) {
    if (!find_named(icl.classes, c.name)) {
      missing("class", c.name, c.loc);
      continue;
    }
    r.exports.items.push_back({ExportKind::class_, c.name});
  }
  for (auto& f : dcl.functions) {
    const FunDef* impl = find_named(icl.functions, f.name);
    if (!impl || impl->clauses.empty()) {
      missing("function", f.name, f.loc);
      continue;
    }
    if (f.sig && impl->sig) compare_sigs(f.name, *f.sig, *impl->sig, impl->loc, r.diagnostics);
    r.exports.items.push_back({ExportKind::function, f.name});
  }

  for (auto& d : icl.typedefs)
    if (!find_named(dcl.typedefs, d.name)) private_name("type", d.name, d.loc);
  for (auto& c : icl.classes)
    if (!find_named(dcl.classes, c.name)) private_name("class", c.name, c.loc);
  for (auto& f : icl.functions)
    if (!find_named(dcl.functions, f.name)) private_name("function", f.name, f.loc);
  return r;
}

std::vector<hs::ExportItem> export_items(const ExportList& exports,
                                         const std::vector<ClassDef>& classes,
                                         const std::vector<TypeDef>& typedefs) {
  auto class_names = target_class_names(classes, typedefs);
  std::vector<hs::ExportItem> out;
  for (auto& e : exports.items) {
    switch (e.kind) {
      case ExportKind::function:
        out.push_back({e.name == "Start" ? "main" : target_value_name(e.name), false});
        break;
      case ExportKind::type:
        out.push_back({e.name, false});
        break;
      case ExportKind::type_with_ctors:
        out.push_back({e.name, true});
        break;
      case ExportKind::class_: {
        auto it = class_names.find(e.name);
        out.push_back({it != class_names.end() ? it->second : e.name, true});
        break;
      }
    }
  }
  return out;
}

LinkedTranslation translate_linked(const std::optional<CleanModule>& dcl, const CleanModule& icl,
                                   const TranslateOptions& opts) {
  LinkedTranslation out;
  if (!dcl) {
    out.diagnostics.push_back(make_diagnostic(
        Severity::info, rules::link_standalone, icl.loc.span,
        "no definition module for '" + icl.name + "'; every top-level name is exported"));
    TranslationResult t = translate_module(icl, std::nullopt, opts);
    out.module = std::move(t.module);
    out.uniqueness = std::move(t.uniqueness);
    out.diagnostics.insert(out.diagnostics.end(), t.diagnostics.begin(), t.diagnostics.end());
    return out;
  }

  LinkResult linked = link(*dcl, icl);
  out.diagnostics = std::move(linked.diagnostics);

  CleanModule impl = icl;
  for (auto& f : impl.functions) {
    if (f.sig || f.clauses.empty()) continue;
    const FunDef* decl = find_named(dcl->functions, f.name);
    if (decl && decl->sig) f.sig = fit_arity(*decl->sig, f.arity());
  }
  std::vector<TypeDef> extra_types;
  for (auto& d : dcl->typedefs)
    if (!find_named(icl.typedefs, d.name)) extra_types.push_back(d);
  std::vector<ClassDef> extra_classes;
  for (auto& c : dcl->classes)
    if (!find_named(icl.classes, c.name)) extra_classes.push_back(c);

  std::vector<ClassDef> all_classes = icl.classes;
  all_classes.insert(all_classes.end(), extra_classes.begin(), extra_classes.end());
  std::vector<TypeDef> all_types = icl.typedefs;
  all_types.insert(all_types.end(), extra_types.begin(), extra_types.end());
  auto items = export_items(linked.exports, all_classes, all_types);

  TranslationResult t = translate_module(impl, items, opts, extra_types, extra_classes);
  out.module = std::move(t.module);
  out.uniqueness = std::move(t.uniqueness);
  out.diagnostics.insert(out.diagnostics.end(), t.diagnostics.begin(), t.diagnostics.end());
  out.exports = std::move(linked.exports);
  return out;
}

}  // namespace clean2hs
