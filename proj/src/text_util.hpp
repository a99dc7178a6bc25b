#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "poly/error.hpp"

namespace poly::text {

struct Tok {
  enum Kind { Ident, Int, Punct, End } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

// Small tokenizer shared by the text formats. '#' starts a comment.
class Lexer {
public:
  explicit Lexer(std::string_view src, int line = 1, int col = 1) {
    std::size_t i = 0;
    auto adv = [&](std::size_t k) {
      for (std::size_t t = 0; t < k; ++t, ++i) {
        if (src[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < src.size()) {
      char ch = src[i];
      if (ch == '#') {
        while (i < src.size() && src[i] != '\n')
          adv(1);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        adv(1);
        continue;
      }
      Tok t;
      t.line = line;
      t.col = col;
      std::size_t j = i;
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        while (j < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
          ++j;
        t.kind = Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
        t.kind = Tok::Int;
      } else if (src.substr(i, 2) == "=>" || src.substr(i, 2) == "->") {
        j = i + 2;
        t.kind = Tok::Punct;
      } else if (std::string_view("(),:;*=+[]^").find(ch) != std::string_view::npos) {
        j = i + 1;
        t.kind = Tok::Punct;
      } else {
        throw ParseError(line, col, std::string("unexpected character '") + ch + "'");
      }
      t.text = std::string(src.substr(i, j - i));
      toks_.push_back(t);
      adv(j - i);
    }
    Tok end;
    end.line = line;
    end.col = col;
    toks_.push_back(end);
  }

  const Tok &peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Tok &next() { return pos_ + 1 < toks_.size() ? toks_[pos_++] : toks_.back(); }
  bool at_end() const { return peek().kind == Tok::End; }

  bool accept(std::string_view p) {
    if (peek().kind == Tok::Punct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_word(std::string_view w) {
    if (peek().kind == Tok::Ident && peek().text == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view p) {
    if (!accept(p))
      fail(peek(), "expected '" + std::string(p) + "'");
  }
  const Tok &expect_ident(const std::string &what) {
    if (peek().kind != Tok::Ident)
      fail(peek(), "expected " + what);
    return next();
  }
  int expect_int() {
    if (peek().kind != Tok::Int)
      fail(peek(), "expected an integer");
    return std::stoi(next().text);
  }
  void expect_end() {
    if (!at_end())
      fail(peek(), "unexpected '" + peek().text + "'");
  }
  [[noreturn]] void fail(const Tok &t, const std::string &msg) const {
    throw ParseError(t.line, t.col, t.kind == Tok::End ? msg + " at end of input" : msg);
  }

private:
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

} // namespace poly::text
