#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rram/error.hpp"

namespace rram {

enum class Opcode : std::uint8_t {
  WCONST, WMOV, WSTORE, WLOAD,
  WADD, WSUB, WMULLO, WMULHI, WDIV, WMOD, WNAND,
  RZERO, RONE, RCONSTW, RCASTW, RMOV, RSTORE, RLOAD,
  RADD, RSUB, RMUL, RDIV, RSQRT,
  WJEQ, WJLT, RJZ, RJPOS,
  GOTO, HALT, ACCEPT, REJECT,
};

inline constexpr std::size_t kOpcodeCount = static_cast<std::size_t>(Opcode::REJECT) + 1;

/// Operand layout of an opcode: how many word parameters, and whether the last one is a line target.
struct OpcodeInfo {
  std::string_view name;
  int params;       // total operands including the target
  bool has_target;  // last operand is a line number
};

constexpr OpcodeInfo opcode_info(Opcode op) {
  switch (op) {
    case Opcode::WCONST: return {"WCONST", 2, false};
    case Opcode::WMOV: return {"WMOV", 2, false};
    case Opcode::WSTORE: return {"WSTORE", 2, false};
    case Opcode::WLOAD: return {"WLOAD", 2, false};
    case Opcode::WADD: return {"WADD", 3, false};
    case Opcode::WSUB: return {"WSUB", 3, false};
    case Opcode::WMULLO: return {"WMULLO", 3, false};
    case Opcode::WMULHI: return {"WMULHI", 3, false};
    case Opcode::WDIV: return {"WDIV", 3, false};
    case Opcode::WMOD: return {"WMOD", 3, false};
    case Opcode::WNAND: return {"WNAND", 3, false};
    case Opcode::RZERO: return {"RZERO", 1, false};
    case Opcode::RONE: return {"RONE", 1, false};
    case Opcode::RCONSTW: return {"RCONSTW", 2, false};
    case Opcode::RCASTW: return {"RCASTW", 2, false};
    case Opcode::RMOV: return {"RMOV", 2, false};
    case Opcode::RSTORE: return {"RSTORE", 2, false};
    case Opcode::RLOAD: return {"RLOAD", 2, false};
    case Opcode::RADD: return {"RADD", 3, false};
    case Opcode::RSUB: return {"RSUB", 3, false};
    case Opcode::RMUL: return {"RMUL", 3, false};
    case Opcode::RDIV: return {"RDIV", 3, false};
    case Opcode::RSQRT: return {"RSQRT", 2, false};
    case Opcode::WJEQ: return {"WJEQ", 3, true};
    case Opcode::WJLT: return {"WJLT", 3, true};
    case Opcode::RJZ: return {"RJZ", 2, true};
    case Opcode::RJPOS: return {"RJPOS", 2, true};
    case Opcode::GOTO: return {"GOTO", 1, true};
    case Opcode::HALT: return {"HALT", 0, false};
    case Opcode::ACCEPT: return {"ACCEPT", 0, false};
    case Opcode::REJECT: return {"REJECT", 0, false};
  }
  return {"?", 0, false};
}

constexpr std::string_view to_string(Opcode op) { return opcode_info(op).name; }

inline std::optional<Opcode> opcode_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kOpcodeCount; ++i) {
    auto op = static_cast<Opcode>(i);
    if (opcode_info(op).name == name) return op;
  }
  return std::nullopt;
}

constexpr bool is_comparison(Opcode op) {
  return op == Opcode::WJEQ || op == Opcode::WJLT || op == Opcode::RJZ || op == Opcode::RJPOS;
}

/// Instructions after which control never falls through to the next line.
constexpr bool is_terminal_or_jump(Opcode op) {
  return op == Opcode::GOTO || op == Opcode::HALT || op == Opcode::ACCEPT || op == Opcode::REJECT;
}

struct Instruction {
  Opcode op = Opcode::HALT;
  std::array<std::uint64_t, 3> a{0, 0, 0};  // i, j, k in order; targets are 1-based lines

  std::uint64_t target() const { return a[static_cast<std::size_t>(opcode_info(op).params - 1)]; }

  std::string str() const {
    auto info = opcode_info(op);
    std::string out(info.name);
    for (int p = 0; p < info.params; ++p) out += " " + std::to_string(a[static_cast<std::size_t>(p)]);
    return out;
  }

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct Program {
  std::string name;
  std::vector<Instruction> code;                 // line ℓ is code[ℓ-1]
  std::unordered_map<std::string, std::size_t> labels;
  std::optional<std::size_t> real_arity;         // from ".arity n m"
  std::optional<std::size_t> word_arity;

  std::size_t size() const { return code.size(); }
  const Instruction& line(std::uint64_t l) const { return code.at(l - 1); }

  /// Canonical text: numeric targets, no labels.
  std::string str() const {
    std::string out;
    if (!name.empty()) out += ".name " + name + "\n";
    if (real_arity && word_arity)
      out += ".arity " + std::to_string(*real_arity) + " " + std::to_string(*word_arity) + "\n";
    for (const auto& ins : code) out += ins.str() + "\n";
    return out;
  }
};

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty() || s.size() > 19) return false;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = v;
  return true;
}

inline bool valid_label(std::string_view s) {
  if (s.empty() || (s[0] >= '0' && s[0] <= '9')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

}  // namespace detail

/// Parses the assembly text. Lines hold one instruction, optionally prefixed
/// by "label:"; '#' starts a comment. Targets are 1-based line numbers or labels.
inline Program parse_program(std::string_view text) {
  struct Pending {
    std::size_t source_line;
    std::size_t index;
    std::string label;
  };
  Program prog;
  std::vector<Pending> pending;
  std::vector<std::size_t> source_lines;

  auto fail = [](std::size_t line, const std::string& msg) {
    return Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
  };

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto toks = detail::split_ws(raw);
    if (toks.empty()) {
      if (nl == text.size()) break;
      continue;
    }

    if (toks[0] == ".name") {
      if (toks.size() != 2) throw fail(lineno, ".name expects one word");
      prog.name = toks[1];
      continue;
    }
    if (toks[0] == ".arity") {
      std::uint64_t n = 0, m = 0;
      if (toks.size() != 3 || !detail::parse_u64(toks[1], n) || !detail::parse_u64(toks[2], m))
        throw fail(lineno, ".arity expects two counts");
      prog.real_arity = n;
      prog.word_arity = m;
      continue;
    }

    std::size_t first = 0;
    while (first < toks.size() && toks[first].size() > 1 && toks[first].back() == ':') {
      std::string label = toks[first].substr(0, toks[first].size() - 1);
      if (!detail::valid_label(label)) throw fail(lineno, "bad label '" + label + "'");
      if (prog.labels.count(label)) throw fail(lineno, "duplicate label '" + label + "'");
      prog.labels[label] = prog.code.size() + 1;
      ++first;
    }
    if (first == toks.size()) continue;  // label binds to the next instruction

    auto op = opcode_from_name(toks[first]);
    if (!op) throw fail(lineno, "unknown opcode '" + toks[first] + "'");
    auto info = opcode_info(*op);
    std::size_t given = toks.size() - first - 1;
    if (given != static_cast<std::size_t>(info.params))
      throw fail(lineno, std::string(info.name) + " takes " + std::to_string(info.params) +
                             " operands, got " + std::to_string(given));

    Instruction ins;
    ins.op = *op;
    for (int p = 0; p < info.params; ++p) {
      const std::string& tok = toks[first + 1 + static_cast<std::size_t>(p)];
      bool is_target = info.has_target && p == info.params - 1;
      std::uint64_t v = 0;
      if (detail::parse_u64(tok, v)) {
        ins.a[static_cast<std::size_t>(p)] = v;
      } else if (is_target && detail::valid_label(tok)) {
        pending.push_back({lineno, prog.code.size(), tok});
      } else {
        throw fail(lineno, "bad operand '" + tok + "'");
      }
    }
    prog.code.push_back(ins);
    source_lines.push_back(lineno);
  }

  for (const auto& p : pending) {
    auto it = prog.labels.find(p.label);
    if (it == prog.labels.end()) throw fail(p.source_line, "dangling label '" + p.label + "'");
    auto& ins = prog.code[p.index];
    ins.a[static_cast<std::size_t>(opcode_info(ins.op).params - 1)] = it->second;
  }

  if (prog.code.empty()) throw Error(ErrorKind::ParseError, "empty program");
  const std::size_t L = prog.code.size();
  for (std::size_t idx = 0; idx < L; ++idx) {
    const auto& ins = prog.code[idx];
    if (opcode_info(ins.op).has_target && (ins.target() < 1 || ins.target() > L))
      throw fail(source_lines[idx], "target " + std::to_string(ins.target()) + " outside [1," +
                                        std::to_string(L) + "]");
  }
  if (!is_terminal_or_jump(prog.code.back().op))
    throw fail(source_lines.back(), "last instruction may fall through past the end of the program");
  return prog;
}

}  // namespace rram
