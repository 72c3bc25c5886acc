#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tact/ast.hpp"
#include "tact/diagnostics.hpp"

namespace tact {

struct ParseError : std::runtime_error {
  SourceLoc loc;
  ParseError(std::string msg, SourceLoc l)
      : std::runtime_error(std::to_string(l.line) + ":" + std::to_string(l.column) + ": " + msg),
        loc(l) {}
};

namespace detail {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_trivia();
    tok_ = Token{};
    tok_.loc = {line_, col_};
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        take();
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        v = v * 10 + (src_[pos_] - '0');
        take();
      }
      tok_.kind = Token::Kind::Int;
      tok_.value = v;
      return;
    }
    // multi-char punctuation
    static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
    for (const char* p : two) {
      if (src_.substr(pos_, 2) == p) {
        tok_.kind = Token::Kind::Punct;
        tok_.text = p;
        take();
        take();
        return;
      }
    }
    tok_.kind = Token::Kind::Punct;
    tok_.text = std::string(1, c);
    take();
  }

  void skip_trivia() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) take();
      if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
        continue;
      }
      if (src_.substr(pos_, 2) == "/*") {
        SourceLoc open{line_, col_};
        take();
        take();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") take();
        if (pos_ >= src_.size()) throw ParseError("unterminated block comment", open);
        take();
        take();
        continue;
      }
      break;
    }
  }

  void take() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Model parse_model() {
    Model m;
    while (!at_end()) {
      if (peek_ident("reactiveclass")) {
        m.classes.push_back(parse_class());
      } else if (peek_ident("main")) {
        parse_main(m);
      } else {
        throw ParseError("expected 'reactiveclass' or 'main'", lex_.peek().loc);
      }
    }
    validate(m);
    return m;
  }

 private:
  Lexer lex_;

  bool at_end() { return lex_.peek().kind == Token::Kind::End; }
  bool peek_ident(std::string_view s) {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == s;
  }
  bool peek_punct(std::string_view s) {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == s;
  }
  Token expect_ident() {
    if (lex_.peek().kind != Token::Kind::Ident)
      throw ParseError("expected identifier, got '" + lex_.peek().text + "'", lex_.peek().loc);
    return lex_.next();
  }
  Token expect_ident(std::string_view kw) {
    Token t = expect_ident();
    if (t.text != kw)
      throw ParseError("expected '" + std::string(kw) + "', got '" + t.text + "'", t.loc);
    return t;
  }
  Token expect_punct(std::string_view s) {
    if (!peek_punct(s))
      throw ParseError("expected '" + std::string(s) + "', got '" + lex_.peek().text + "'",
                       lex_.peek().loc);
    return lex_.next();
  }
  std::int64_t expect_int() {
    if (lex_.peek().kind != Token::Kind::Int)
      throw ParseError("expected integer literal", lex_.peek().loc);
    return lex_.next().value;
  }

  Type parse_type() {
    Token t = expect_ident();
    if (t.text == "int") return Type::Int;
    if (t.text == "bool") return Type::Bool;
    if (t.text == "time") return Type::Time;
    throw ParseError("unknown type '" + t.text + "'", t.loc);
  }

  ActorClass parse_class() {
    ActorClass cls;
    cls.loc = lex_.peek().loc;
    expect_ident("reactiveclass");
    cls.name = expect_ident().text;
    if (peek_punct("(")) {
      expect_punct("(");
      std::int64_t cap = expect_int();
      if (cap <= 0) throw ParseError("mailbox capacity must be positive", cls.loc);
      cls.capacity = static_cast<int>(cap);
      expect_punct(")");
    }
    expect_punct("{");
    if (peek_ident("knownrebecs")) {
      lex_.next();
      expect_punct("{");
      while (!peek_punct("}")) {
        KnownSlot slot;
        slot.class_name = expect_ident().text;
        slot.name = expect_ident().text;
        expect_punct(";");
        cls.known.push_back(slot);
      }
      expect_punct("}");
    }
    if (peek_ident("statevars")) {
      lex_.next();
      expect_punct("{");
      while (!peek_punct("}")) {
        StateVar v;
        if (peek_ident("interval")) {
          lex_.next();
          v.interval = true;
        }
        SourceLoc tloc = lex_.peek().loc;
        v.type = parse_type();
        if (v.interval && v.type != Type::Time)
          throw ParseError("interval variables must have type time", tloc);
        v.name = expect_ident().text;
        expect_punct(";");
        cls.state_vars.push_back(v);
      }
      expect_punct("}");
    }
    while (!peek_punct("}")) {
      cls.servers.push_back(parse_server());
    }
    expect_punct("}");
    return cls;
  }

  MessageServer parse_server() {
    MessageServer srv;
    srv.loc = lex_.peek().loc;
    // annotations
    struct PendingAbstract {
      std::string param;
      ExprPtr guard;
      SourceLoc loc;
    };
    std::vector<PendingAbstract> abstracts;
    while (peek_punct("@")) {
      expect_punct("@");
      Token a = expect_ident();
      if (a.text == "priority") {
        expect_punct("(");
        bool neg = false;
        if (peek_punct("-")) {
          lex_.next();
          neg = true;
        }
        std::int64_t p = expect_int();
        srv.priority = static_cast<int>(neg ? -p : p);
        expect_punct(")");
      } else if (a.text == "abstract") {
        expect_punct("(");
        PendingAbstract pa;
        pa.loc = a.loc;
        pa.param = expect_ident().text;
        expect_punct(",");
        pa.guard = parse_expr();
        expect_punct(")");
        abstracts.push_back(std::move(pa));
      } else {
        throw ParseError("unknown annotation '@" + a.text + "'", a.loc);
      }
    }
    expect_ident("msgsrv");
    srv.name = expect_ident().text;
    expect_punct("(");
    if (!peek_punct(")")) {
      for (;;) {
        Param p;
        p.type = parse_type();
        p.name = expect_ident().text;
        srv.params.push_back(p);
        if (peek_punct(",")) {
          lex_.next();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    for (auto& pa : abstracts) {
      bool found = false;
      for (auto& p : srv.params) {
        if (p.name == pa.param) {
          p.abstract_guard = pa.guard;
          found = true;
        }
      }
      if (!found)
        throw ParseError("@abstract names unknown parameter '" + pa.param + "'", pa.loc);
    }
    srv.body = parse_block();
    return srv;
  }

  Block parse_block() {
    expect_punct("{");
    Block b;
    while (!peek_punct("}")) {
      b.push_back(parse_stmt());
    }
    expect_punct("}");
    return b;
  }

  Block parse_block_or_stmt() {
    if (peek_punct("{")) return parse_block();
    Block b;
    b.push_back(parse_stmt());
    return b;
  }

  Statement parse_stmt() {
    Statement st;
    st.loc = lex_.peek().loc;
    if (peek_ident("if")) {
      lex_.next();
      st.kind = Statement::Kind::If;
      expect_punct("(");
      st.cond = parse_expr();
      expect_punct(")");
      st.then_block = parse_block_or_stmt();
      if (peek_ident("else")) {
        lex_.next();
        st.else_block = parse_block_or_stmt();
      }
      return st;
    }
    if (peek_ident("delay")) {
      lex_.next();
      st.kind = Statement::Kind::Delay;
      expect_punct("(");
      st.delay_amount = parse_expr();
      expect_punct(")");
      expect_punct(";");
      return st;
    }
    if (peek_ident("skip")) {
      lex_.next();
      expect_punct(";");
      st.kind = Statement::Kind::Skip;
      return st;
    }
    if (peek_ident("self")) {
      lex_.next();
      expect_punct(".");
      return parse_send_tail(st, SendTarget::Self, "", nullptr);
    }
    if (peek_ident("find")) {
      lex_.next();
      expect_punct("(");
      ExprPtr id = parse_expr();
      expect_punct(")");
      expect_punct(".");
      return parse_send_tail(st, SendTarget::Lookup, "", id);
    }
    Token name = expect_ident();
    if (peek_punct(".")) {
      lex_.next();
      return parse_send_tail(st, SendTarget::Slot, name.text, nullptr);
    }
    expect_punct("=");
    st.target = name.text;
    if (peek_punct("?")) {
      lex_.next();
      st.kind = Statement::Kind::NondetAssign;
      expect_punct("(");
      st.choices.push_back(parse_expr());
      while (peek_punct(",")) {
        lex_.next();
        st.choices.push_back(parse_expr());
      }
      expect_punct(")");
    } else {
      st.kind = Statement::Kind::Assign;
      st.value = parse_expr();
    }
    expect_punct(";");
    return st;
  }

  Statement parse_send_tail(Statement st, SendTarget target, std::string slot, ExprPtr lookup) {
    st.kind = Statement::Kind::Send;
    st.send_target = target;
    st.slot = std::move(slot);
    st.lookup_id = std::move(lookup);
    st.message = expect_ident().text;
    expect_punct("(");
    if (!peek_punct(")")) {
      st.args.push_back(parse_expr());
      while (peek_punct(",")) {
        lex_.next();
        st.args.push_back(parse_expr());
      }
    }
    expect_punct(")");
    // `after` and `deadline` may come in either order
    for (int i = 0; i < 2; ++i) {
      if (peek_ident("after")) {
        lex_.next();
        expect_punct("(");
        st.after = parse_expr();
        expect_punct(")");
      } else if (peek_ident("deadline")) {
        lex_.next();
        expect_punct("(");
        st.deadline = parse_expr();
        expect_punct(")");
      }
    }
    expect_punct(";");
    return st;
  }

  // expr := or_expr
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (peek_punct("||")) {
      SourceLoc loc = lex_.next().loc;
      e = Expr::binary(BinOp::Or, e, parse_and(), loc);
    }
    return e;
  }
  ExprPtr parse_and() {
    ExprPtr e = parse_cmp();
    while (peek_punct("&&")) {
      SourceLoc loc = lex_.next().loc;
      e = Expr::binary(BinOp::And, e, parse_cmp(), loc);
    }
    return e;
  }
  ExprPtr parse_cmp() {
    ExprPtr e = parse_add();
    for (;;) {
      BinOp op;
      if (peek_punct("==")) op = BinOp::Eq;
      else if (peek_punct("!=")) op = BinOp::Ne;
      else if (peek_punct("<=")) op = BinOp::Le;
      else if (peek_punct(">=")) op = BinOp::Ge;
      else if (peek_punct("<")) op = BinOp::Lt;
      else if (peek_punct(">")) op = BinOp::Gt;
      else break;
      SourceLoc loc = lex_.next().loc;
      e = Expr::binary(op, e, parse_add(), loc);
    }
    return e;
  }
  ExprPtr parse_add() {
    ExprPtr e = parse_unary();
    for (;;) {
      BinOp op;
      if (peek_punct("+")) op = BinOp::Add;
      else if (peek_punct("-")) op = BinOp::Sub;
      else break;
      SourceLoc loc = lex_.next().loc;
      e = Expr::binary(op, e, parse_unary(), loc);
    }
    return e;
  }
  ExprPtr parse_unary() {
    if (peek_punct("!")) {
      SourceLoc loc = lex_.next().loc;
      return Expr::unary(UnOp::Not, parse_unary(), loc);
    }
    if (peek_punct("-")) {
      SourceLoc loc = lex_.next().loc;
      return Expr::unary(UnOp::Neg, parse_unary(), loc);
    }
    return parse_primary();
  }
  ExprPtr parse_primary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Int) {
      Token v = lex_.next();
      return Expr::int_lit(v.value, v.loc);
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "true" || t.text == "false") {
        Token v = lex_.next();
        return Expr::bool_lit(v.text == "true", v.loc);
      }
      if (t.text == "now") {
        Token v = lex_.next();
        return Expr::now(v.loc);
      }
      Token v = lex_.next();
      return Expr::var(v.text, v.loc);
    }
    if (peek_punct("(")) {
      lex_.next();
      ExprPtr e = parse_expr();
      expect_punct(")");
      return e;
    }
    throw ParseError("expected expression, got '" + t.text + "'", t.loc);
  }

  void parse_main(Model& m) {
    expect_ident("main");
    expect_punct("{");
    while (!peek_punct("}")) {
      Instance inst;
      inst.loc = lex_.peek().loc;
      inst.class_name = expect_ident().text;
      inst.name = expect_ident().text;
      expect_punct("(");
      if (!peek_punct(")")) {
        inst.bindings.push_back(expect_ident().text);
        while (peek_punct(",")) {
          lex_.next();
          inst.bindings.push_back(expect_ident().text);
        }
      }
      expect_punct(")");
      expect_punct(":");
      expect_punct("(");
      if (!peek_punct(")")) {
        for (;;) {
          inst.ctor_args.push_back(parse_ctor_arg());
          if (peek_punct(",")) {
            lex_.next();
            continue;
          }
          break;
        }
      }
      expect_punct(")");
      expect_punct(";");
      m.instances.push_back(std::move(inst));
    }
    expect_punct("}");
  }

  CtorArg parse_ctor_arg() {
    CtorArg a;
    if (peek_ident("true") || peek_ident("false")) {
      a.type = Type::Bool;
      a.bool_value = lex_.next().text == "true";
      return a;
    }
    bool neg = false;
    if (peek_punct("-")) {
      lex_.next();
      neg = true;
    }
    a.type = Type::Int;
    a.int_value = expect_int();
    if (neg) a.int_value = -a.int_value;
    return a;
  }

  // Structural checks that belong to parsing proper: name resolution of the
  // main block and basic class well-formedness. Deeper semantic restrictions
  // live in static_check.
  void validate(const Model& m) {
    for (const auto& cls : m.classes) {
      for (std::size_t i = 0; i < cls.state_vars.size(); ++i) {
        for (std::size_t j = i + 1; j < cls.state_vars.size(); ++j) {
          if (cls.state_vars[i].name == cls.state_vars[j].name)
            throw ParseError("duplicate state variable '" + cls.state_vars[i].name + "' in class " +
                                 cls.name,
                             cls.loc);
        }
      }
      for (std::size_t i = 0; i < cls.servers.size(); ++i) {
        for (std::size_t j = i + 1; j < cls.servers.size(); ++j) {
          if (cls.servers[i].name == cls.servers[j].name)
            throw ParseError("duplicate message server '" + cls.servers[i].name + "' in class " +
                                 cls.name,
                             cls.servers[j].loc);
        }
      }
      if (!cls.find_server(cls.name))
        throw ParseError("class " + cls.name + " has no constructor message server", cls.loc);
    }
    for (std::size_t i = 0; i < m.instances.size(); ++i) {
      const Instance& inst = m.instances[i];
      for (std::size_t j = i + 1; j < m.instances.size(); ++j) {
        if (m.instances[j].name == inst.name)
          throw ParseError("duplicate instance name '" + inst.name + "'", m.instances[j].loc);
      }
      const ActorClass* cls = m.find_class(inst.class_name);
      if (!cls) throw ParseError("unknown class '" + inst.class_name + "' in main", inst.loc);
      if (inst.bindings.size() != cls->known.size())
        throw ParseError("instance " + inst.name + " binds " +
                             std::to_string(inst.bindings.size()) + " known rebecs, class " +
                             cls->name + " declares " + std::to_string(cls->known.size()),
                         inst.loc);
      for (const auto& b : inst.bindings) {
        bool ok = false;
        for (const auto& other : m.instances) {
          if (other.name == b) ok = true;
        }
        if (!ok) throw ParseError("known-rebec binding '" + b + "' does not resolve", inst.loc);
      }
      const MessageServer* ctor = cls->find_server(cls->name);
      if (ctor && ctor->params.size() != inst.ctor_args.size())
        throw ParseError("constructor of " + cls->name + " takes " +
                             std::to_string(ctor->params.size()) + " arguments, got " +
                             std::to_string(inst.ctor_args.size()),
                         inst.loc);
    }
  }
};

}  // namespace detail

/// Parse a `.tam` model source. Throws ParseError with line/column on
/// malformed input.
inline Model parse_model(std::string_view source) {
  detail::Parser p(source);
  return p.parse_model();
}

}  // namespace tact
