#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "rram/ram/machine.hpp"

namespace rram {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct InputFile {
  Input input;
  unsigned w = 0;
};

/// "n m w" followed by n rational literals and m words, whitespace separated; '#' comments.
inline InputFile parse_input(std::string_view text) {
  std::string cleaned;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    cleaned.append(line);
    cleaned.push_back(' ');
    pos = nl + 1;
  }
  std::istringstream in(cleaned);
  std::string tok;
  auto next = [&](const char* what) {
    if (!(in >> tok)) throw Error(ErrorKind::ParseError, std::string("input file: missing ") + what);
    return tok;
  };
  auto count = [&](const char* what) {
    std::uint64_t v = 0;
    if (!detail::parse_u64(next(what), v)) throw Error(ErrorKind::ParseError, std::string("input file: bad ") + what);
    return v;
  };
  InputFile f;
  std::uint64_t n = count("n");
  std::uint64_t m = count("m");
  std::uint64_t w = count("w");
  if (w < 1 || w > 63) throw Error(ErrorKind::InvalidConfig, "input file: word size must lie in [1,63]");
  f.w = static_cast<unsigned>(w);
  for (std::uint64_t i = 0; i < n; ++i) f.input.reals.push_back(Rational::parse(next("real value")));
  for (std::uint64_t i = 0; i < m; ++i) f.input.words.push_back(count("word value"));
  if (in >> tok) throw Error(ErrorKind::ParseError, "input file: trailing token '" + tok + "'");
  return f;
}

/// One line per step: "t pc opcode [branch=0|1]".
inline std::string export_trace(const ExecutionTrace& trace) {
  std::string out;
  for (const auto& s : trace.steps) {
    out += std::to_string(s.t) + " " + std::to_string(s.pc) + " " + std::string(to_string(s.ins.op));
    if (s.branch) out += *s.branch ? " branch=1" : " branch=0";
    out += "\n";
  }
  return out;
}

}  // namespace rram
