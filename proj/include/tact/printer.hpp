#pragma once

#include <sstream>
#include <string>

#include "tact/ast.hpp"

namespace tact {

namespace detail {

inline int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 4;
  }
  return 0;
}

inline const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
  }
  return "?";
}

inline void print_expr(std::ostream& os, const ExprPtr& e, int parent_prec = 0) {
  switch (e->kind) {
    case Expr::Kind::IntLit: os << e->int_value; return;
    case Expr::Kind::BoolLit: os << (e->bool_value ? "true" : "false"); return;
    case Expr::Kind::Var: os << e->name; return;
    case Expr::Kind::Now: os << "now"; return;
    case Expr::Kind::Unary:
      os << (e->un_op == UnOp::Not ? "!" : "-");
      os << "(";
      print_expr(os, e->lhs);
      os << ")";
      return;
    case Expr::Kind::Binary: {
      int prec = precedence(e->bin_op);
      bool parens = prec < parent_prec;
      if (parens) os << "(";
      print_expr(os, e->lhs, prec);
      os << " " << op_text(e->bin_op) << " ";
      print_expr(os, e->rhs, prec + 1);
      if (parens) os << ")";
      return;
    }
  }
}

inline std::string indent(int n) { return std::string(static_cast<std::size_t>(n) * 2, ' '); }

inline void print_block(std::ostream& os, const Block& b, int depth);

inline void print_stmt(std::ostream& os, const Statement& st, int depth) {
  os << indent(depth);
  switch (st.kind) {
    case Statement::Kind::Assign:
      os << st.target << " = ";
      print_expr(os, st.value);
      os << ";\n";
      return;
    case Statement::Kind::NondetAssign:
      os << st.target << " = ?(";
      for (std::size_t i = 0; i < st.choices.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, st.choices[i]);
      }
      os << ");\n";
      return;
    case Statement::Kind::If:
      os << "if (";
      print_expr(os, st.cond);
      os << ") {\n";
      print_block(os, st.then_block, depth + 1);
      os << indent(depth) << "}";
      if (!st.else_block.empty()) {
        os << " else {\n";
        print_block(os, st.else_block, depth + 1);
        os << indent(depth) << "}";
      }
      os << "\n";
      return;
    case Statement::Kind::Delay:
      os << "delay(";
      print_expr(os, st.delay_amount);
      os << ");\n";
      return;
    case Statement::Kind::Send:
      switch (st.send_target) {
        case SendTarget::Self: os << "self"; break;
        case SendTarget::Slot: os << st.slot; break;
        case SendTarget::Lookup:
          os << "find(";
          print_expr(os, st.lookup_id);
          os << ")";
          break;
      }
      os << "." << st.message << "(";
      for (std::size_t i = 0; i < st.args.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, st.args[i]);
      }
      os << ")";
      if (st.after) {
        os << " after(";
        print_expr(os, st.after);
        os << ")";
      }
      if (st.deadline) {
        os << " deadline(";
        print_expr(os, st.deadline);
        os << ")";
      }
      os << ";\n";
      return;
    case Statement::Kind::Skip:
      os << "skip;\n";
      return;
  }
}

inline void print_block(std::ostream& os, const Block& b, int depth) {
  for (const auto& st : b) print_stmt(os, st, depth);
}

}  // namespace detail

inline std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  detail::print_expr(os, e);
  return os.str();
}

/// Canonical source rendering of a model; parse(print(m)) is structurally
/// identical to m.
inline std::string print_model(const Model& m) {
  std::ostringstream os;
  for (const auto& cls : m.classes) {
    os << "reactiveclass " << cls.name << "(" << cls.capacity << ") {\n";
    if (!cls.known.empty()) {
      os << "  knownrebecs {\n";
      for (const auto& k : cls.known) os << "    " << k.class_name << " " << k.name << ";\n";
      os << "  }\n";
    }
    if (!cls.state_vars.empty()) {
      os << "  statevars {\n";
      for (const auto& v : cls.state_vars) {
        os << "    " << (v.interval ? "interval " : "") << type_name(v.type) << " " << v.name
           << ";\n";
      }
      os << "  }\n";
    }
    for (const auto& srv : cls.servers) {
      if (srv.priority != 0) os << "  @priority(" << srv.priority << ")\n";
      for (const auto& p : srv.params) {
        if (p.abstract_guard) {
          os << "  @abstract(" << p.name << ", " << print_expr(p.abstract_guard) << ")\n";
        }
      }
      os << "  msgsrv " << srv.name << "(";
      for (std::size_t i = 0; i < srv.params.size(); ++i) {
        if (i) os << ", ";
        os << type_name(srv.params[i].type) << " " << srv.params[i].name;
      }
      os << ") {\n";
      detail::print_block(os, srv.body, 2);
      os << "  }\n";
    }
    os << "}\n\n";
  }
  os << "main {\n";
  for (const auto& inst : m.instances) {
    os << "  " << inst.class_name << " " << inst.name << "(";
    for (std::size_t i = 0; i < inst.bindings.size(); ++i) {
      if (i) os << ", ";
      os << inst.bindings[i];
    }
    os << "):(";
    for (std::size_t i = 0; i < inst.ctor_args.size(); ++i) {
      if (i) os << ", ";
      if (inst.ctor_args[i].type == Type::Bool) {
        os << (inst.ctor_args[i].bool_value ? "true" : "false");
      } else {
        os << inst.ctor_args[i].int_value;
      }
    }
    os << ");\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tact
