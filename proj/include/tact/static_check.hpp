#pragma once

#include <string>
#include <vector>

#include "tact/ast.hpp"
#include "tact/diagnostics.hpp"
#include "tact/printer.hpp"

namespace tact {

namespace detail {

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::IntLit: return a->int_value == b->int_value;
    case Expr::Kind::BoolLit: return a->bool_value == b->bool_value;
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::Now: return true;
    case Expr::Kind::Unary: return a->un_op == b->un_op && expr_equal(a->lhs, b->lhs);
    case Expr::Kind::Binary:
      return a->bin_op == b->bin_op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
  return false;
}

inline bool contains_var(const ExprPtr& e, const std::string& name) {
  if (!e) return false;
  if (e->kind == Expr::Kind::Var) return e->name == name;
  return contains_var(e->lhs, name) || contains_var(e->rhs, name);
}

inline bool contains_now(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == Expr::Kind::Now) return true;
  return contains_now(e->lhs) || contains_now(e->rhs);
}

class StaticChecker {
 public:
  explicit StaticChecker(const Model& model) : model_(model) {}

  std::vector<Diagnostic> run() {
    for (const auto& cls : model_.classes) check_class(cls);
    check_main();
    return std::move(diags_);
  }

 private:
  const Model& model_;
  std::vector<Diagnostic> diags_;
  const ActorClass* cls_ = nullptr;
  const MessageServer* srv_ = nullptr;

  void error(const std::string& msg, SourceLoc loc = {}) {
    diags_.push_back({Severity::Error, msg, loc});
  }

  bool is_interval_var(const std::string& name) const {
    int idx = cls_->var_index(name);
    return idx >= 0 && cls_->state_vars[static_cast<std::size_t>(idx)].interval;
  }

  const Param* find_param(const std::string& name) const {
    if (!srv_) return nullptr;
    for (const auto& p : srv_->params) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }

  void check_class(const ActorClass& cls) {
    cls_ = &cls;
    for (const auto& srv : cls.servers) {
      srv_ = &srv;
      for (const auto& p : srv.params) {
        if (p.abstract_guard) check_guard_spec(srv, p);
      }
      check_block(srv.body);
    }
    srv_ = nullptr;
    cls_ = nullptr;
  }

  // A guard must be a propositional formula over comparisons of the annotated
  // parameter against integer constants, so it is evaluable from the
  // parameter value alone.
  void check_guard_spec(const MessageServer& srv, const Param& p) {
    if (!valid_guard(p.abstract_guard, p.name)) {
      error("guard for @abstract(" + p.name + ") in " + cls_->name + "." + srv.name +
                " must be propositional logic over comparisons of " + p.name +
                " with integer constants",
            srv.loc);
    }
  }

  bool valid_guard(const ExprPtr& g, const std::string& pname) {
    if (!g) return false;
    switch (g->kind) {
      case Expr::Kind::Unary:
        return g->un_op == UnOp::Not && valid_guard(g->lhs, pname);
      case Expr::Kind::Binary:
        switch (g->bin_op) {
          case BinOp::And:
          case BinOp::Or:
            return valid_guard(g->lhs, pname) && valid_guard(g->rhs, pname);
          case BinOp::Eq:
          case BinOp::Ne:
          case BinOp::Lt:
          case BinOp::Le:
          case BinOp::Gt:
          case BinOp::Ge: {
            bool lv = g->lhs->kind == Expr::Kind::Var && g->lhs->name == pname;
            bool rc = g->rhs->kind == Expr::Kind::IntLit;
            bool rv = g->rhs->kind == Expr::Kind::Var && g->rhs->name == pname;
            bool lc = g->lhs->kind == Expr::Kind::IntLit;
            return (lv && rc) || (rv && lc);
          }
          default:
            return false;
        }
      default:
        return false;
    }
  }

  void check_block(const Block& b) {
    for (const auto& st : b) check_stmt(st);
  }

  void check_stmt(const Statement& st) {
    switch (st.kind) {
      case Statement::Kind::Assign: {
        check_target(st);
        bool interval = is_interval_var(st.target);
        if (interval) {
          // Interval variables are only ever refreshed from the clock.
          if (st.value->kind != Expr::Kind::Now) {
            error("interval variable misuse: '" + st.target + "' may only be assigned now",
                  st.loc);
          }
        } else {
          check_expr(st.value, /*in_condition=*/false);
        }
        break;
      }
      case Statement::Kind::NondetAssign: {
        check_target(st);
        if (is_interval_var(st.target)) {
          error("interval variable misuse: '" + st.target + "' in nondeterministic assignment",
                st.loc);
        }
        for (const auto& c : st.choices) check_expr(c, false);
        break;
      }
      case Statement::Kind::If:
        check_expr(st.cond, /*in_condition=*/true);
        check_block(st.then_block);
        check_block(st.else_block);
        break;
      case Statement::Kind::Delay:
        check_expr(st.delay_amount, false);
        break;
      case Statement::Kind::Send: {
        for (const auto& a : st.args) check_expr(a, false);
        if (st.after) check_expr(st.after, false);
        if (st.deadline) check_expr(st.deadline, false);
        if (st.send_target == SendTarget::Lookup) {
          check_expr(st.lookup_id, false);
        }
        check_send_resolution(st);
        break;
      }
      case Statement::Kind::Skip:
        break;
    }
  }

  void check_target(const Statement& st) {
    if (cls_->var_index(st.target) < 0 && !find_param(st.target)) {
      error("assignment to unknown variable '" + st.target + "' in " + cls_->name + "." +
                srv_->name,
            st.loc);
    }
    const Param* p = find_param(st.target);
    if (p && p->abstract_guard) {
      error("abstractable parameter escapes condition: '" + st.target + "' assigned in " +
                cls_->name + "." + srv_->name,
            st.loc);
    }
  }

  // Expression restrictions:
  //  * `now` appears only as `now - x` with x an interval variable (the bare
  //    assignment form is handled in check_stmt before recursing here);
  //  * interval variables appear only as the subtrahend of such expressions;
  //  * abstractable parameters appear only inside if-conditions, and there
  //    only as subtrees syntactically equal to their declared guard.
  void check_expr(const ExprPtr& e, bool in_condition) {
    if (!e) return;
    if (e->kind == Expr::Kind::Now) {
      error("'now' may only be assigned to an interval variable or used as 'now - x'", e->loc);
      return;
    }
    if (e->kind == Expr::Kind::Var) {
      if (is_interval_var(e->name)) {
        error("interval variable misuse: '" + e->name + "' may only appear in 'now - " + e->name +
                  "'",
              e->loc);
        return;
      }
      const Param* p = find_param(e->name);
      if (p && p->abstract_guard) {
        error("abstractable parameter escapes condition: '" + e->name + "' used outside its guard",
              e->loc);
        return;
      }
      if (cls_->var_index(e->name) < 0 && !find_param(e->name)) {
        error("unknown variable '" + e->name + "' in " + cls_->name + "." + srv_->name, e->loc);
      }
      return;
    }
    if (e->kind == Expr::Kind::Binary) {
      // The one blessed clock-reading expression.
      if (e->bin_op == BinOp::Sub && e->lhs->kind == Expr::Kind::Now &&
          e->rhs->kind == Expr::Kind::Var && is_interval_var(e->rhs->name)) {
        return;
      }
      if (in_condition && srv_) {
        // A subtree equal to a declared guard is the blessed occurrence of an
        // abstractable parameter.
        for (const auto& p : srv_->params) {
          if (p.abstract_guard && expr_equal(e, p.abstract_guard)) return;
        }
      }
      check_expr(e->lhs, in_condition);
      check_expr(e->rhs, in_condition);
      return;
    }
    if (e->kind == Expr::Kind::Unary) {
      check_expr(e->lhs, in_condition);
    }
  }

  // Slot-addressed sends are resolvable at this point: the slot must exist
  // and the target class must own the message server with matching arity.
  void check_send_resolution(const Statement& st) {
    const ActorClass* target = nullptr;
    if (st.send_target == SendTarget::Self) {
      target = cls_;
    } else if (st.send_target == SendTarget::Slot) {
      for (const auto& k : cls_->known) {
        if (k.name == st.slot) {
          target = model_.find_class(k.class_name);
          break;
        }
      }
      if (!target) {
        error("send through unknown known-rebec slot '" + st.slot + "' in " + cls_->name + "." +
                  srv_->name,
              st.loc);
        return;
      }
    } else {
      return;  // dynamic lookup resolves at run time
    }
    const MessageServer* ms = target->find_server(st.message);
    if (!ms) {
      error("class " + target->name + " has no message server '" + st.message + "'", st.loc);
      return;
    }
    if (ms->params.size() != st.args.size()) {
      error("send of '" + st.message + "' passes " + std::to_string(st.args.size()) +
                " arguments, server takes " + std::to_string(ms->params.size()),
            st.loc);
    }
  }

  void check_main() {
    for (const auto& inst : model_.instances) {
      const ActorClass* cls = model_.find_class(inst.class_name);
      if (!cls) continue;  // parser already rejects; defensive for built models
      for (std::size_t i = 0; i < inst.bindings.size() && i < cls->known.size(); ++i) {
        int idx = model_.instance_index(inst.bindings[i]);
        if (idx < 0) {
          error("known-rebec binding '" + inst.bindings[i] + "' does not resolve", inst.loc);
          continue;
        }
        const auto& bound = model_.instances[static_cast<std::size_t>(idx)];
        if (bound.class_name != cls->known[i].class_name) {
          error("instance " + inst.name + " binds slot '" + cls->known[i].name + "' (type " +
                    cls->known[i].class_name + ") to " + bound.name + " of class " +
                    bound.class_name,
                inst.loc);
        }
      }
    }
  }
};

}  // namespace detail

/// Verifies the now-usage restriction, interval-variable discipline,
/// abstractable-parameter usage, and known-binding resolution. An empty
/// result means the model is admissible for relaxed-shift reduction.
inline std::vector<Diagnostic> static_check(const Model& model) {
  detail::StaticChecker c(model);
  return c.run();
}

}  // namespace tact
