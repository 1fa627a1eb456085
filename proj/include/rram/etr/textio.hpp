#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rram/etr/formula.hpp"

namespace rram::etr {

namespace detail {

enum class Dialect { Native, SmtLib };

inline void write_node(const Formula& f, std::uint32_t id, Dialect d, std::string& out) {
  const Node& n = f.node(id);
  auto bin = [&](const char* op) {
    out += "(";
    out += op;
    out += " ";
    write_node(f, n.a, d, out);
    out += " ";
    write_node(f, n.b, d, out);
    out += ")";
  };
  switch (n.kind) {
    case NodeKind::Zero: out += d == Dialect::SmtLib ? "0.0" : "0"; break;
    case NodeKind::One: out += d == Dialect::SmtLib ? "1.0" : "1"; break;
    case NodeKind::Var: out += f.variables()[n.a]; break;
    case NodeKind::Add: bin("+"); break;
    case NodeKind::Mul: bin("*"); break;
    case NodeKind::Eq: bin("="); break;
    case NodeKind::Le: bin("<="); break;
    case NodeKind::Lt: bin("<"); break;
    case NodeKind::Not:
      out += "(not ";
      write_node(f, n.a, d, out);
      out += ")";
      break;
    case NodeKind::And:
    case NodeKind::Or: {
      bool is_and = n.kind == NodeKind::And;
      if (d == Dialect::SmtLib && n.b == 0) {
        out += is_and ? "true" : "false";
        break;
      }
      if (d == Dialect::SmtLib && n.b == 1) {
        write_node(f, f.child(n, 0), d, out);
        break;
      }
      out += is_and ? "(and" : "(or";
      for (std::uint32_t i = 0; i < n.b; ++i) {
        out += " ";
        write_node(f, f.child(n, i), d, out);
      }
      out += ")";
      break;
    }
  }
}

struct SExpr {
  std::string atom;  // empty for lists
  std::vector<SExpr> items;
  bool is_list() const { return atom.empty(); }
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : s_(text) {}

  bool at_end() {
    skip();
    return pos_ >= s_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= s_.size()) throw Error(ErrorKind::ParseError, "unexpected end of formula text");
    if (s_[pos_] == ')') throw Error(ErrorKind::ParseError, "unbalanced ')' at offset " + std::to_string(pos_));
    if (s_[pos_] == '(') {
      ++pos_;
      SExpr list;
      for (;;) {
        skip();
        if (pos_ >= s_.size()) throw Error(ErrorKind::ParseError, "missing ')'");
        if (s_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read());
      }
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')' && s_[pos_] != ';')
      ++pos_;
    SExpr atom;
    atom.atom = std::string(s_.substr(start, pos_ - start));
    return atom;
  }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  std::string_view s_;
  std::size_t pos_ = 0;
};

inline bool valid_symbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '!' || c == '$')) return false;
  return true;
}

class Builder {
 public:
  Builder(Formula& f, bool declared_only) : f_(f), declared_only_(declared_only) {}

  Term term(const SExpr& e) {
    if (!e.is_list()) {
      if (e.atom == "0" || e.atom == "0.0") return f_.zero();
      if (e.atom == "1" || e.atom == "1.0") return f_.one();
      if (!valid_symbol(e.atom)) throw Error(ErrorKind::ParseError, "bad term '" + e.atom + "'");
      if (declared_only_ && !f_.has_var(e.atom))
        throw Error(ErrorKind::UnboundVariable, "variable '" + e.atom + "' is not in the quantifier list");
      return f_.var(e.atom);
    }
    if (e.items.size() != 3 || e.items[0].is_list()) throw Error(ErrorKind::ParseError, "malformed term");
    const auto& op = e.items[0].atom;
    if (op == "+") return f_.add(term(e.items[1]), term(e.items[2]));
    if (op == "*") return f_.mul(term(e.items[1]), term(e.items[2]));
    throw Error(ErrorKind::ParseError, "unknown term operator '" + op + "'");
  }

  Prop prop(const SExpr& e) {
    if (!e.is_list()) {
      if (e.atom == "true") return f_.and_({});
      if (e.atom == "false") return f_.or_({});
      throw Error(ErrorKind::ParseError, "expected a proposition, got '" + e.atom + "'");
    }
    if (e.items.empty() || e.items[0].is_list()) throw Error(ErrorKind::ParseError, "malformed proposition");
    const auto& op = e.items[0].atom;
    if (op == "and" || op == "or") {
      std::vector<Prop> ps;
      for (std::size_t i = 1; i < e.items.size(); ++i) ps.push_back(prop(e.items[i]));
      return op == "and" ? f_.and_(ps) : f_.or_(ps);
    }
    if (op == "not") {
      if (e.items.size() != 2) throw Error(ErrorKind::ParseError, "not takes one argument");
      return f_.not_(prop(e.items[1]));
    }
    if (e.items.size() != 3) throw Error(ErrorKind::ParseError, "'" + op + "' takes two arguments");
    if (op == "=") return f_.eq(term(e.items[1]), term(e.items[2]));
    if (op == "<=") return f_.le(term(e.items[1]), term(e.items[2]));
    if (op == "<") return f_.lt(term(e.items[1]), term(e.items[2]));
    throw Error(ErrorKind::ParseError, "unknown operator '" + op + "'");
  }

 private:
  Formula& f_;
  bool declared_only_;
};

}  // namespace detail

/// "(exists (v1 ... vk) body)" in prefix notation.
inline std::string to_text(const Formula& f) {
  std::string out = "(exists (";
  const auto& vs = f.variables();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += " ";
    out += vs[i];
  }
  out += ") ";
  detail::write_node(f, f.root().id, detail::Dialect::Native, out);
  out += ")\n";
  return out;
}

inline Formula parse_formula(std::string_view text, std::uint64_t node_cap = 10'000'000) {
  detail::SExprReader reader(text);
  detail::SExpr top = reader.read();
  if (!reader.at_end()) throw Error(ErrorKind::ParseError, "trailing text after formula");
  if (!top.is_list() || top.items.size() != 3 || top.items[0].atom != "exists" || !top.items[1].is_list())
    throw Error(ErrorKind::ParseError, "expected (exists (vars...) body)");
  Formula f(node_cap);
  for (const auto& v : top.items[1].items) {
    if (v.is_list() || !detail::valid_symbol(v.atom)) throw Error(ErrorKind::ParseError, "bad variable name");
    f.var(v.atom);
  }
  detail::Builder b(f, true);
  f.set_root(b.prop(top.items[2]));
  return f;
}

/// SMT-LIB2 script: one real constant per variable, the body as a single assertion.
inline std::string export_smtlib(const Formula& f) {
  std::string out = "(set-logic QF_NRA)\n";
  for (const auto& v : f.variables()) out += "(declare-const " + v + " Real)\n";
  out += "(assert ";
  detail::write_node(f, f.root().id, detail::Dialect::SmtLib, out);
  out += ")\n(check-sat)\n(exit)\n";
  return out;
}

/// Reads back the subset of SMT-LIB2 that export_smtlib writes.
inline Formula parse_smtlib(std::string_view text, std::uint64_t node_cap = 10'000'000) {
  detail::SExprReader reader(text);
  Formula f(node_cap);
  std::vector<Prop> asserts;
  detail::Builder b(f, true);
  while (!reader.at_end()) {
    detail::SExpr cmd = reader.read();
    if (!cmd.is_list() || cmd.items.empty() || cmd.items[0].is_list())
      throw Error(ErrorKind::ParseError, "expected an SMT-LIB command");
    const auto& head = cmd.items[0].atom;
    if (head == "declare-const") {
      if (cmd.items.size() != 3 || cmd.items[2].atom != "Real")
        throw Error(ErrorKind::ParseError, "only Real constants are supported");
      f.var(cmd.items[1].atom);
    } else if (head == "declare-fun") {
      if (cmd.items.size() != 4 || !cmd.items[2].items.empty() || cmd.items[3].atom != "Real")
        throw Error(ErrorKind::ParseError, "only nullary Real functions are supported");
      f.var(cmd.items[1].atom);
    } else if (head == "assert") {
      if (cmd.items.size() != 2) throw Error(ErrorKind::ParseError, "assert takes one argument");
      asserts.push_back(b.prop(cmd.items[1]));
    } else if (head == "set-logic" || head == "check-sat" || head == "exit" || head == "set-info" ||
               head == "set-option") {
      continue;
    } else {
      throw Error(ErrorKind::ParseError, "unsupported command '" + head + "'");
    }
  }
  f.set_root(asserts.size() == 1 ? asserts[0] : f.and_(asserts));
  return f;
}

/// Witness file: one "name value" pair per line, values as rational literals.
inline std::string export_assignment(const Formula& f, const Assignment& a) {
  std::string out;
  for (const auto& v : f.variables()) {
    auto it = a.find(v);
    if (it == a.end()) continue;
    out += v + " " + it->second.str() + "\n";
  }
  return out;
}

inline Assignment parse_assignment(std::string_view text) {
  Assignment a;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string name, value, extra;
    if (!(ls >> name)) continue;
    if (!(ls >> value) || (ls >> extra))
      throw Error(ErrorKind::ParseError, "witness line " + std::to_string(lineno) + ": expected 'name value'");
    a[name] = Rational::parse(value);
  }
  return a;
}

}  // namespace rram::etr
