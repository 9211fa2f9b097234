#include "treelogic/parser.hpp"

#include <cctype>
#include <charconv>

namespace treelogic {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out;
}

struct Token {
  enum Type { LParen, RParen, Word, End } type;
  std::string_view text;
  size_t pos;
};

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) { advance(); }

  Formula parse_top() {
    Formula f = formula();
    if (tok_.type != Token::End) syntax({"end of input"});
    return f;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    if (i_ >= text_.size()) {
      tok_ = {Token::End, {}, i_};
      return;
    }
    char c = text_[i_];
    if (c == '(' || c == ')') {
      tok_ = {c == '(' ? Token::LParen : Token::RParen, text_.substr(i_, 1), i_};
      ++i_;
      return;
    }
    size_t start = i_;
    while (i_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i_])) &&
           text_[i_] != '(' && text_[i_] != ')')
      ++i_;
    tok_ = {Token::Word, text_.substr(start, i_ - start), start};
  }

  [[noreturn]] void syntax(std::vector<std::string> expected) {
    std::string found = tok_.type == Token::End ? "end of input" : "'" + std::string(tok_.text) + "'";
    throw ParseError(ParseError::Reason::Syntax, tok_.pos, expected,
                     "syntax error at offset " + std::to_string(tok_.pos) + ": found " + found +
                         ", expected " + join(expected));
  }

  void expect_rparen() {
    if (tok_.type != Token::RParen) syntax({"')'"});
    advance();
  }

  Var variable() {
    if (tok_.type != Token::Word) syntax({"variable x or y"});
    if (tok_.text == "x" || tok_.text == "y") {
      Var v = tok_.text == "x" ? Var::X : Var::Y;
      advance();
      return v;
    }
    throw ParseError(ParseError::Reason::BadVariable, tok_.pos, {"x", "y"},
                     "variable '" + std::string(tok_.text) + "' at offset " +
                         std::to_string(tok_.pos) + ": only x and y are allowed");
  }

  uint32_t natural() {
    if (tok_.type != Token::Word) syntax({"natural number"});
    std::string_view t = tok_.text;
    if (!t.empty() && t[0] == '-') {
      throw ParseError(ParseError::Reason::NegativeCount, tok_.pos, {"natural number"},
                       "negative count '" + std::string(t) + "' at offset " +
                           std::to_string(tok_.pos));
    }
    uint32_t n = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
    if (ec != std::errc() || ptr != t.data() + t.size()) syntax({"natural number"});
    advance();
    return n;
  }

  Formula formula() {
    if (tok_.type == Token::Word) {
      if (tok_.text == "true") {
        advance();
        return mk_true();
      }
      if (tok_.text == "false") {
        advance();
        return mk_false();
      }
      syntax({"'('", "true", "false"});
    }
    if (tok_.type != Token::LParen) syntax({"'('", "true", "false"});
    advance();
    if (tok_.type != Token::Word) syntax({"operator or symbol"});
    std::string_view head = tok_.text;
    size_t head_pos = tok_.pos;
    advance();
    Formula r;
    if (head == "and" || head == "or" || head == "implies") {
      Formula a = formula();
      Formula b = formula();
      r = head == "and" ? mk_and(a, b) : head == "or" ? mk_or(a, b) : mk_implies(a, b);
    } else if (head == "not") {
      r = mk_not(formula());
    } else if (head == "exists" || head == "forall") {
      Var v = variable();
      Formula body = formula();
      r = head == "exists" ? mk_exists(v, body) : mk_forall(v, body);
    } else if (head == "count>=" || head == "count<=" || head == "count=") {
      uint32_t n = natural();
      Var v = variable();
      Formula body = formula();
      r = head == "count>=" ? mk_count_geq(n, v, body)
          : head == "count<=" ? mk_count_leq(n, v, body)
                              : mk_count_eq(n, v, body);
    } else if (head == "=") {
      Var a = variable();
      Var b = variable();
      r = mk_eq(a, b);
    } else if (head == "child" || head == "descendant" || head == "next" || head == "following") {
      Nav n = head == "child" ? Nav::Child
              : head == "descendant" ? Nav::Descendant
              : head == "next" ? Nav::Next
                               : Nav::Following;
      Var a = variable();
      Var b = variable();
      r = mk_nav(n, a, b);
    } else if (auto u = sig_.find_unary(head)) {
      r = mk_unary(static_cast<uint32_t>(*u), variable());
    } else if (auto bsym = sig_.find_binary(head)) {
      Var a = variable();
      Var b = variable();
      r = mk_binary(static_cast<uint32_t>(*bsym), a, b);
    } else {
      throw ParseError(ParseError::Reason::UnknownSymbol, head_pos, {},
                       "unknown symbol '" + std::string(head) + "' at offset " +
                           std::to_string(head_pos));
    }
    expect_rparen();
    return r;
  }

  std::string_view text_;
  const Signature& sig_;
  size_t i_ = 0;
  Token tok_{Token::End, {}, 0};
};

void print(const Formula& f, const Signature& sig, std::string& out) {
  auto var = [&](Var v) {
    out += ' ';
    out += var_name(v);
  };
  switch (f->kind) {
    case Kind::True: out += "true"; return;
    case Kind::False: out += "false"; return;
    case Kind::Unary:
      out += '(' + sig.unary().at(f->sym);
      var(f->v1);
      out += ')';
      return;
    case Kind::Binary:
      out += '(' + sig.binary().at(f->sym);
      var(f->v1);
      var(f->v2);
      out += ')';
      return;
    case Kind::NavAtom:
      out += '(';
      out += nav_name(f->nav());
      var(f->v1);
      var(f->v2);
      out += ')';
      return;
    case Kind::Equal:
      out += "(=";
      var(f->v1);
      var(f->v2);
      out += ')';
      return;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      out += f->kind == Kind::And ? "(and " : f->kind == Kind::Or ? "(or " : "(implies ";
      print(f->a, sig, out);
      out += ' ';
      print(f->b, sig, out);
      out += ')';
      return;
    case Kind::Not:
      out += "(not ";
      print(f->a, sig, out);
      out += ')';
      return;
    case Kind::Exists:
    case Kind::Forall:
      out += f->kind == Kind::Exists ? "(exists" : "(forall";
      var(f->v1);
      out += ' ';
      print(f->a, sig, out);
      out += ')';
      return;
    case Kind::CountGeq:
    case Kind::CountLeq:
    case Kind::CountEq:
      out += f->kind == Kind::CountGeq ? "(count>= " : f->kind == Kind::CountLeq ? "(count<= " : "(count= ";
      out += std::to_string(f->count);
      var(f->v1);
      out += ' ';
      print(f->a, sig, out);
      out += ')';
      return;
  }
}

}  // namespace

ParseError::ParseError(Reason reason, size_t position, std::vector<std::string> expected,
                       const std::string& message)
    : std::runtime_error(message),
      reason_(reason),
      position_(position),
      expected_(std::move(expected)) {}

Formula parse(std::string_view text, const Signature& sig) { return Parser(text, sig).parse_top(); }

std::string pretty(const Formula& f, const Signature& sig) {
  std::string out;
  print(f, sig, out);
  return out;
}

}  // namespace treelogic
