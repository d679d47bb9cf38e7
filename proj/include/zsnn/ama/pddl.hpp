#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "zsnn/ama/oracle.hpp"
#include "zsnn/bitvec.hpp"
#include "zsnn/errors.hpp"

namespace zsnn {

// Latent bit n maps onto the predicate pair (bn-true)/(bn-false); exactly
// one of the two holds in any state a plan can reach.
inline std::string pddl_literal(int bit, bool value) {
  return "b" + std::to_string(bit) + (value ? "-true" : "-false");
}

inline std::vector<std::string> pddl_literals(const BitVec& b) {
  std::vector<std::string> out;
  out.reserve(b.size());
  for (std::size_t n = 0; n < b.size(); ++n)
    out.push_back(pddl_literal(static_cast<int>(n), b.bits[n] != 0));
  return out;
}

namespace detail {

inline std::string pddl_name(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (c == '-' || c == '_')
      out += c;
    else
      out += '-';
  }
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0])))
    out = "d" + out;
  return out;
}

}  // namespace detail

struct PddlExport {
  std::string domain;
  std::string problem;
};

// STRIPS export: one grounded action per distinct observed edge. The
// precondition conjoins the full source state; effects touch only the bits
// that change.
inline PddlExport export_pddl(const OracleModel& oracle,
                              const std::string& domain_name,
                              const BitVec& init, const BitVec& goal,
                              int max_bits = 200) {
  const int N = oracle.n_bits;
  if (N < 1) throw ParamError("export_pddl: oracle has no bits");
  if (N > max_bits)
    throw ResourceError("export_pddl: latent width exceeds the export bound");
  if (static_cast<int>(init.size()) != N ||
      static_cast<int>(goal.size()) != N)
    throw ShapeError("export_pddl: init/goal length != oracle bits");

  const std::string name = detail::pddl_name(domain_name);

  std::vector<std::pair<BitVec, BitVec>> edges;
  edges.reserve(oracle.edge_count);
  for (const auto& [s, sucs] : oracle.adjacency)
    for (const auto& t : sucs) edges.emplace_back(s, t);
  std::sort(edges.begin(), edges.end());

  std::string d;
  d += ";; Observed-transition oracle exported as grounded STRIPS.\n";
  d += ";; Predicates: each latent bit n is (bn-true)/(bn-false).\n";
  d += "(define (domain " + name + ")\n";
  d += "  (:requirements :strips)\n";
  d += "  (:predicates\n";
  for (int n = 0; n < N; ++n)
    d += "    (" + pddl_literal(n, true) + ") (" + pddl_literal(n, false) +
         ")\n";
  d += "  )\n";
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& [s, t] = edges[e];
    d += "  (:action a" + std::to_string(e) + "\n";
    d += "    :precondition (and";
    for (const auto& lit : pddl_literals(s)) d += " (" + lit + ")";
    d += ")\n    :effect (and";
    for (int n = 0; n < N; ++n)
      if (s.bits[n] != t.bits[n]) {
        d += " (" + pddl_literal(n, t.bits[n] != 0) + ")";
        d += " (not (" + pddl_literal(n, s.bits[n] != 0) + "))";
      }
    d += ")\n  )\n";
  }
  d += ")\n";

  std::string p;
  p += "(define (problem " + name + "-instance)\n";
  p += "  (:domain " + name + ")\n";
  p += "  (:init";
  for (const auto& lit : pddl_literals(init)) p += " (" + lit + ")";
  p += ")\n  (:goal (and";
  for (const auto& lit : pddl_literals(goal)) p += " (" + lit + ")";
  p += "))\n)\n";

  return {d, p};
}

// ---------------------------------------------------------------------------
// In-repo well-formedness checker: s-expression parse plus STRIPS surface
// rules (balanced parens, declared zero-ary predicates only, action shape).

struct Sexp {
  bool is_list = false;
  std::string atom;
  std::vector<Sexp> kids;
};

namespace detail {

inline std::vector<std::string> pddl_tokens(const std::string& text) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      toks.emplace_back(1, c);
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != '(' && text[j] != ')' && text[j] != ';')
        ++j;
      toks.push_back(text.substr(i, j - i));
      i = j;
    }
  }
  return toks;
}

inline bool parse_sexp(const std::vector<std::string>& toks, std::size_t& pos,
                       Sexp& out) {
  if (pos >= toks.size()) return false;
  if (toks[pos] == "(") {
    ++pos;
    out.is_list = true;
    while (pos < toks.size() && toks[pos] != ")") {
      Sexp kid;
      if (!parse_sexp(toks, pos, kid)) return false;
      out.kids.push_back(std::move(kid));
    }
    if (pos >= toks.size()) return false;  // unbalanced
    ++pos;                                 // consume ')'
    return true;
  }
  if (toks[pos] == ")") return false;
  out.atom = toks[pos++];
  return true;
}

inline bool is_atom(const Sexp& s) { return !s.is_list; }

inline bool head_is(const Sexp& s, const std::string& name) {
  return s.is_list && !s.kids.empty() && is_atom(s.kids[0]) &&
         s.kids[0].atom == name;
}

}  // namespace detail

// Parses every top-level form; returns false (with a message) on imbalance.
inline bool parse_pddl(const std::string& text, std::vector<Sexp>& forms,
                       std::string& error) {
  auto toks = detail::pddl_tokens(text);
  std::size_t pos = 0;
  while (pos < toks.size()) {
    Sexp form;
    if (!detail::parse_sexp(toks, pos, form)) {
      error = "unbalanced or malformed s-expression";
      return false;
    }
    forms.push_back(std::move(form));
  }
  if (forms.empty()) {
    error = "no forms";
    return false;
  }
  return true;
}

struct PddlAction {
  std::string name;
  std::vector<std::string> pre;  // positive zero-ary literals
  std::vector<std::string> add;
  std::vector<std::string> del;
};

struct PddlDomainInfo {
  std::string name;
  std::set<std::string> predicates;
  std::vector<PddlAction> actions;
};

namespace detail {

// (lit) -> name; returns empty on shape violation.
inline std::string literal_name(const Sexp& s) {
  if (!s.is_list || s.kids.size() != 1 || !is_atom(s.kids[0])) return "";
  return s.kids[0].atom;
}

inline void check_conj(const Sexp& conj, const std::string& where,
                       const std::set<std::string>& declared,
                       std::vector<std::string>& issues,
                       std::vector<std::string>* pos_out,
                       std::vector<std::string>* neg_out) {
  if (!head_is(conj, "and")) {
    issues.push_back(where + ": expected (and ...)");
    return;
  }
  for (std::size_t i = 1; i < conj.kids.size(); ++i) {
    const Sexp& lit = conj.kids[i];
    if (head_is(lit, "not")) {
      std::string name =
          lit.kids.size() == 2 ? literal_name(lit.kids[1]) : "";
      if (name.empty()) {
        issues.push_back(where + ": malformed negative literal");
        continue;
      }
      if (!declared.count(name))
        issues.push_back(where + ": undeclared predicate " + name);
      if (neg_out) neg_out->push_back(name);
    } else {
      std::string name = literal_name(lit);
      if (name.empty()) {
        issues.push_back(where + ": malformed literal");
        continue;
      }
      if (!declared.count(name))
        issues.push_back(where + ": undeclared predicate " + name);
      if (pos_out) pos_out->push_back(name);
    }
  }
}

}  // namespace detail

inline std::vector<std::string> pddl_check_domain(
    const std::string& text, PddlDomainInfo* info = nullptr) {
  std::vector<std::string> issues;
  std::vector<Sexp> forms;
  std::string perr;
  if (!parse_pddl(text, forms, perr)) return {perr};
  if (forms.size() != 1 || !detail::head_is(forms[0], "define"))
    return {"domain: expected a single (define ...) form"};
  const Sexp& def = forms[0];

  PddlDomainInfo dom;
  bool saw_predicates = false;
  for (std::size_t i = 1; i < def.kids.size(); ++i) {
    const Sexp& part = def.kids[i];
    if (detail::head_is(part, "domain")) {
      if (part.kids.size() == 2 && detail::is_atom(part.kids[1]))
        dom.name = part.kids[1].atom;
      else
        issues.push_back("domain: malformed (domain name)");
    } else if (detail::head_is(part, ":requirements")) {
      for (std::size_t r = 1; r < part.kids.size(); ++r)
        if (!detail::is_atom(part.kids[r]) || part.kids[r].atom != ":strips")
          issues.push_back("domain: only :strips is supported");
    } else if (detail::head_is(part, ":predicates")) {
      saw_predicates = true;
      for (std::size_t pi = 1; pi < part.kids.size(); ++pi) {
        std::string name = detail::literal_name(part.kids[pi]);
        if (name.empty())
          issues.push_back("domain: predicates must be zero-ary (name)");
        else if (!dom.predicates.insert(name).second)
          issues.push_back("domain: duplicate predicate " + name);
      }
    } else if (detail::head_is(part, ":action")) {
      PddlAction act;
      if (part.kids.size() < 2 || !detail::is_atom(part.kids[1])) {
        issues.push_back("domain: action without a name");
        continue;
      }
      act.name = part.kids[1].atom;
      const Sexp* pre = nullptr;
      const Sexp* eff = nullptr;
      for (std::size_t k = 2; k + 1 < part.kids.size(); k += 2) {
        if (!detail::is_atom(part.kids[k])) continue;
        if (part.kids[k].atom == ":precondition") pre = &part.kids[k + 1];
        if (part.kids[k].atom == ":effect") eff = &part.kids[k + 1];
      }
      if (!pre || !eff) {
        issues.push_back("domain: action " + act.name +
                         " needs :precondition and :effect");
        continue;
      }
      std::vector<std::string> pre_neg;
      detail::check_conj(*pre, "action " + act.name + " precondition",
                         dom.predicates, issues, &act.pre, &pre_neg);
      if (!pre_neg.empty())
        issues.push_back("action " + act.name +
                         ": negative preconditions are outside STRIPS");
      detail::check_conj(*eff, "action " + act.name + " effect",
                         dom.predicates, issues, &act.add, &act.del);
      dom.actions.push_back(std::move(act));
    }
  }
  if (dom.name.empty()) issues.push_back("domain: missing (domain name)");
  if (!saw_predicates) issues.push_back("domain: missing :predicates");
  if (info) *info = std::move(dom);
  return issues;
}

inline std::vector<std::string> pddl_check_problem(
    const std::string& text, const PddlDomainInfo& dom) {
  std::vector<std::string> issues;
  std::vector<Sexp> forms;
  std::string perr;
  if (!parse_pddl(text, forms, perr)) return {perr};
  if (forms.size() != 1 || !detail::head_is(forms[0], "define"))
    return {"problem: expected a single (define ...) form"};
  const Sexp& def = forms[0];
  bool saw_name = false, saw_domain = false, saw_init = false, saw_goal = false;
  for (std::size_t i = 1; i < def.kids.size(); ++i) {
    const Sexp& part = def.kids[i];
    if (detail::head_is(part, "problem")) {
      saw_name = true;
    } else if (detail::head_is(part, ":domain")) {
      saw_domain = true;
      if (part.kids.size() != 2 || !detail::is_atom(part.kids[1]) ||
          part.kids[1].atom != dom.name)
        issues.push_back("problem: :domain does not match the domain name");
    } else if (detail::head_is(part, ":init")) {
      saw_init = true;
      for (std::size_t k = 1; k < part.kids.size(); ++k) {
        std::string name = detail::literal_name(part.kids[k]);
        if (name.empty())
          issues.push_back("problem: malformed init literal");
        else if (!dom.predicates.count(name))
          issues.push_back("problem: undeclared predicate " + name);
      }
    } else if (detail::head_is(part, ":goal")) {
      saw_goal = true;
      if (part.kids.size() != 2)
        issues.push_back("problem: malformed :goal");
      else
        detail::check_conj(part.kids[1], "goal", dom.predicates, issues,
                           nullptr, nullptr);
    }
  }
  if (!saw_name) issues.push_back("problem: missing (problem name)");
  if (!saw_domain) issues.push_back("problem: missing :domain");
  if (!saw_init) issues.push_back("problem: missing :init");
  if (!saw_goal) issues.push_back("problem: missing :goal");
  return issues;
}

}  // namespace zsnn
