#include "clean2hs/uniqueness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace clean2hs {

using namespace clean;

UniquenessCounts& UniquenessCounts::operator+=(const UniquenessCounts& o) {
  erased_unique += o.erased_unique;
  erased_vars += o.erased_vars;
  erased_dots += o.erased_dots;
  constraints += o.constraints;
  return *this;
}

void UniquenessReport::add(ErasureEntry e) {
  switch (e.kind) {
    case ErasedKind::unique:
      ++counts.erased_unique;
      break;
    case ErasedKind::variable:
      ++counts.erased_vars;
      break;
    case ErasedKind::anonymous_dot:
      ++counts.erased_dots;
      break;
    case ErasedKind::constraint:
      ++counts.constraints;
      break;
  }
  entries.push_back(std::move(e));
}

void UniquenessReport::merge(const UniquenessReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  counts += other.counts;
}

std::string attr_text(const Attr& a) {
  switch (a.kind) {
    case AttrKind::unique:
      return "*";
    case AttrKind::var:
      return a.var + ":";
    case AttrKind::anon_dot:
      return ".";
    case AttrKind::none:
      break;
  }
  return "";
}

namespace {

// Works on both const and mutable types.
template <class T, class F>
void for_each_child(T& t, F&& f) {
  std::visit(
      [&](auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, TyApply>) {
          f(*n.head);
          for (auto& a : n.args) f(a);
        } else if constexpr (std::is_same_v<N, TyTuple>) {
          for (auto& e : n.elems) f(e);
        } else if constexpr (std::is_same_v<N, TyList> || std::is_same_v<N, TyArray> ||
                             std::is_same_v<N, TyOptional>) {
          f(*n.elem);
        } else if constexpr (std::is_same_v<N, TyFunction>) {
          f(*n.arg);
          f(*n.result);
        } else if constexpr (std::is_same_v<N, TyForall>) {
          f(*n.body);
        }
      },
      t.shape);
}

bool is_container(const AttrType& t) {
  return std::holds_alternative<TyTuple>(t.shape) || std::holds_alternative<TyList>(t.shape) ||
         std::holds_alternative<TyArray>(t.shape) || std::holds_alternative<TyOptional>(t.shape);
}

void propagate_in_place(AttrType& t) {
  bool unique_component = false;
  for_each_child(t, [&](AttrType& c) {
    propagate_in_place(c);
    if (c.attr.kind == AttrKind::unique) unique_component = true;
  });
  if (is_container(t) && unique_component && t.attr.kind == AttrKind::none)
    t.attr = Attr::unique(t.loc);
}

void collect_vars(const AttrType& t, std::set<std::string>& out) {
  if (t.attr.kind == AttrKind::var) out.insert(t.attr.var);
  for_each_child(t, [&](const AttrType& c) { collect_vars(c, out); });
}

void erase_in_place(AttrType& t, UniquenessReport& r) {
  if (t.attr.kind != AttrKind::none) {
    ErasureEntry e;
    e.span = t.attr.loc.span.end.byte_offset != 0 || t.attr.loc.span.start.byte_offset != 0
                 ? t.attr.loc.span
                 : t.loc.span;
    e.original = attr_text(t.attr);
    switch (t.attr.kind) {
      case AttrKind::unique:
        e.kind = ErasedKind::unique;
        e.action = "removed unique attribute";
        break;
      case AttrKind::var:
        e.kind = ErasedKind::variable;
        e.action = "removed attribute variable " + t.attr.var;
        break;
      default:
        e.kind = ErasedKind::anonymous_dot;
        e.action = "removed anonymous attribute (shared within signature)";
        break;
    }
    r.add(std::move(e));
    t.attr = Attr::none();
  }
  for_each_child(t, [&](AttrType& c) { erase_in_place(c, r); });
}

}  // namespace

AttrType propagate(const AttrType& t) {
  AttrType out = t;
  propagate_in_place(out);
  return out;
}

FunSig propagate(const FunSig& s) {
  FunSig out = s;
  for (auto& a : out.args) propagate_in_place(a);
  propagate_in_place(out.result);
  return out;
}

std::vector<Diagnostic> check_constraints(const FunSig& s) {
  std::vector<Diagnostic> out;
  std::set<std::string> known;
  for (auto& a : s.args) collect_vars(a, known);
  collect_vars(s.result, known);
  for (auto& c : s.context)
    for (auto& a : c.args) collect_vars(a, known);

  for (auto& c : s.attr_constraints) {
    for (const std::string* v : {&c.lesser, &c.greater}) {
      if (known.count(*v) == 0)
        out.push_back(make_diagnostic(Severity::warning, rules::attr_unknown_variable, c.loc.span,
                                      "attribute variable '" + *v +
                                          "' in constraint does not occur in the signature"));
    }
  }

  // Strongly connected components of the `lesser -> greater` graph (Tarjan).
  std::map<std::string, std::vector<std::string>> edges;
  std::map<std::string, SourceSpan> where;
  for (auto& c : s.attr_constraints) {
    edges[c.lesser].push_back(c.greater);
    edges[c.greater];
    where.emplace(c.lesser, c.loc.span);
  }
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  int counter = 0;
  std::vector<std::vector<std::string>> components;
  std::function<void(const std::string&)> strong = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (auto& w : edges[v]) {
      if (!index.count(w)) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      if (comp.size() > 1) components.push_back(std::move(comp));
    }
  };
  for (auto& [v, _] : edges)
    if (!index.count(v)) strong(v);

  std::sort(components.begin(), components.end(),
            [](auto& a, auto& b) { return *std::min_element(a.begin(), a.end()) <
                                          *std::min_element(b.begin(), b.end()); });
  for (auto& comp : components) {
    std::sort(comp.begin(), comp.end());
    std::string names;
    for (auto& n : comp) names += (names.empty() ? "" : ", ") + n;
    SourceSpan span = where.count(comp.front()) ? where[comp.front()] : s.loc.span;
    out.push_back(make_diagnostic(Severity::info, rules::attr_equal_uniqueness, span,
                                  "attribute variables " + names + " are equally unique"));
  }
  return out;
}

std::pair<AttrType, UniquenessReport> erase(const AttrType& t) {
  UniquenessReport r;
  AttrType out = t;
  erase_in_place(out, r);
  return {std::move(out), std::move(r)};
}

std::pair<FunSig, UniquenessReport> erase(const FunSig& s) {
  UniquenessReport r;
  FunSig out = s;
  for (auto& a : out.args) erase_in_place(a, r);
  erase_in_place(out.result, r);
  for (auto& c : out.context)
    for (auto& a : c.args) erase_in_place(a, r);
  for (auto& c : out.attr_constraints) {
    r.add({c.loc.span, "[" + c.lesser + "<=" + c.greater + "]", ErasedKind::constraint,
           "dropped attribute constraint"});
  }
  out.attr_constraints.clear();
  return {std::move(out), std::move(r)};
}

}  // namespace clean2hs
