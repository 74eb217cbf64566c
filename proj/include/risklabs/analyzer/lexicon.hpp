#pragma once

#include <cctype>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "risklabs/analyzer/builtin_lexicon.hpp"
#include "risklabs/core/errors.hpp"
#include "risklabs/ingest/io.hpp"

namespace risklabs::analyzer {

struct Lexicon {
  std::set<std::string> positive;
  std::set<std::string> negative;
  std::set<std::string> risk;

  /// Sections `[positive]`, `[negative]`, `[risk]`, one word per line, `#` comments.
  static Lexicon parse(std::string_view text, const std::string& source = "<lexicon>") {
    Lexicon lex;
    std::set<std::string>* current = nullptr;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string word{risklabs::detail::trim(line)};
      if (word.empty() || word[0] == '#') continue;
      if (word.front() == '[' && word.back() == ']') {
        const std::string name = word.substr(1, word.size() - 2);
        if (name == "positive") current = &lex.positive;
        else if (name == "negative") current = &lex.negative;
        else if (name == "risk") current = &lex.risk;
        else throw ParseError(source, line_no, "unknown lexicon section '" + name + "'");
        continue;
      }
      if (!current) throw ParseError(source, line_no, "word outside a section");
      for (char c : word) {
        if (!std::islower(static_cast<unsigned char>(c))) {
          throw ParseError(source, line_no, "lexicon words must be lowercase letters: '" + word + "'");
        }
      }
      current->insert(word);
    }
    return lex;
  }

  static Lexicon load(const std::filesystem::path& path) {
    return parse(read_text_file(path), path.string());
  }

  static const Lexicon& builtin() {
    static const Lexicon lex = parse(kBuiltinLexicon, "<builtin lexicon>");
    return lex;
  }

  friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

/// Lowercased alphanumeric tokens.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

/// Number of `.`/`!`/`?`-delimited chunks that contain at least one token character.
inline std::size_t count_sentences(std::string_view text) {
  std::size_t n = 0;
  bool has_word = false;
  for (char ch : text) {
    if (ch == '.' || ch == '!' || ch == '?') {
      if (has_word) ++n;
      has_word = false;
    } else if (std::isalnum(static_cast<unsigned char>(ch))) {
      has_word = true;
    }
  }
  return n + (has_word ? 1 : 0);
}

}  // namespace risklabs::analyzer
