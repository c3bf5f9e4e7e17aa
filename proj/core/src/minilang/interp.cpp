#include "cegen/minilang/interp.hpp"

#include <cassert>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace cegen::minilang {

namespace {

struct ObjData;
using Obj = std::shared_ptr<const ObjData>;

struct Value {
    std::variant<std::int64_t, bool, std::string, Obj> v;

    std::int64_t as_int() const { return std::get<std::int64_t>(v); }
    bool as_bool() const { return std::get<bool>(v); }
    const std::string& as_str() const { return std::get<std::string>(v); }
    const Obj& as_obj() const { return std::get<Obj>(v); }
};

struct ObjData {
    int record_index;
    std::vector<Value> fields;
};

struct AssertFail {
    std::uint32_t pos;
};
struct Fault {
    RuntimeFault kind;
};

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

class Interp {
public:
    Interp(const Program& prog, std::uint64_t fuel) : prog_(prog), fuel_(fuel) {}

    RunOutcome run() {
        try {
            Frame frame;
            const FuncDecl& main = prog_.main();
            std::optional<Value> ret = exec_block(main.body, frame);
            if (!ret) throw Fault{RuntimeFault::MissingReturn};
            return RunOutcome{RunStatus::AllPass, 0, RuntimeFault::DivByZero};
        } catch (const AssertFail& f) {
            return RunOutcome{RunStatus::AssertFailed, f.pos, RuntimeFault::DivByZero};
        } catch (const Fault& f) {
            return RunOutcome{RunStatus::RuntimeError, 0, f.kind};
        }
    }

private:
    using Frame = std::unordered_map<std::string, Value>;

    const Program& prog_;
    std::uint64_t fuel_;

    void spend() {
        if (fuel_ == 0) throw Fault{RuntimeFault::FuelExhausted};
        --fuel_;
    }

    std::optional<Value> exec_block(const Block& block, Frame& frame) {
        for (const StmtPtr& stmt : block.stmts) {
            spend();
            switch (stmt->kind) {
                case Stmt::Kind::Decl:
                case Stmt::Kind::Assign:
                    frame[stmt->name] = eval(*stmt->value, frame);
                    break;
                case Stmt::Kind::Assert:
                    if (!eval(*stmt->value, frame).as_bool()) throw AssertFail{stmt->span.begin};
                    break;
                case Stmt::Kind::Return:
                    return eval(*stmt->value, frame);
                case Stmt::Kind::If: {
                    if (eval(*stmt->cond, frame).as_bool()) {
                        if (auto r = exec_block(stmt->then_block, frame)) return r;
                    } else if (stmt->has_else) {
                        if (auto r = exec_block(stmt->else_block, frame)) return r;
                    }
                    break;
                }
            }
        }
        return std::nullopt;
    }

    Value call_method(const Obj& receiver, const Method& method, std::vector<Value> args) {
        Frame frame;
        const RecordDecl& rec = prog_.records[static_cast<std::size_t>(receiver->record_index)];
        for (std::size_t i = 0; i < rec.fields.size(); ++i)
            frame[rec.fields[i].name] = receiver->fields[i];
        for (std::size_t i = 0; i < method.params.size(); ++i)
            frame[method.params[i].name] = std::move(args[i]);
        std::optional<Value> ret = exec_block(method.body, frame);
        if (!ret) throw Fault{RuntimeFault::MissingReturn};
        return *ret;
    }

    Value eval(const Expr& e, Frame& frame) {
        spend();
        switch (e.kind) {
            case Expr::Kind::IntLit: return Value{e.int_value};
            case Expr::Kind::BoolLit: return Value{e.bool_value};
            case Expr::Kind::StrLit: return Value{e.str_value};
            case Expr::Kind::Paren: return eval(*e.lhs, frame);
            case Expr::Kind::VarRef: {
                auto it = frame.find(e.name);
                assert(it != frame.end());
                return it->second;
            }
            case Expr::Kind::FieldAccess: {
                Value recv = eval(*e.lhs, frame);
                return recv.as_obj()->fields[static_cast<std::size_t>(e.member_index)];
            }
            case Expr::Kind::MethodCall: {
                Value recv = eval(*e.lhs, frame);
                std::vector<Value> args;
                args.reserve(e.args.size());
                for (const ExprPtr& a : e.args) args.push_back(eval(*a, frame));
                const RecordDecl& rec =
                    prog_.records[static_cast<std::size_t>(e.record_index)];
                return call_method(recv.as_obj(),
                                   rec.methods[static_cast<std::size_t>(e.member_index)],
                                   std::move(args));
            }
            case Expr::Kind::New: {
                auto obj = std::make_shared<ObjData>();
                obj->record_index = e.record_index;
                obj->fields.reserve(e.args.size());
                for (const ExprPtr& a : e.args) obj->fields.push_back(eval(*a, frame));
                return Value{Obj(std::move(obj))};
            }
            case Expr::Kind::Binary: return eval_binary(e, frame);
        }
        assert(false);
        return Value{std::int64_t{0}};
    }

    Value eval_binary(const Expr& e, Frame& frame) {
        // Short-circuit the boolean connectives.
        if (e.op == BinOp::And) {
            if (!eval(*e.lhs, frame).as_bool()) return Value{false};
            return Value{eval(*e.rhs, frame).as_bool()};
        }
        if (e.op == BinOp::Or) {
            if (eval(*e.lhs, frame).as_bool()) return Value{true};
            return Value{eval(*e.rhs, frame).as_bool()};
        }
        Value a = eval(*e.lhs, frame);
        Value b = eval(*e.rhs, frame);
        switch (e.op) {
            case BinOp::Add:
                if (std::holds_alternative<std::string>(a.v))
                    return Value{a.as_str() + b.as_str()};
                return Value{wrap_add(a.as_int(), b.as_int())};
            case BinOp::Sub: return Value{wrap_sub(a.as_int(), b.as_int())};
            case BinOp::Mul: return Value{wrap_mul(a.as_int(), b.as_int())};
            case BinOp::Div: {
                std::int64_t d = b.as_int();
                if (d == 0) throw Fault{RuntimeFault::DivByZero};
                std::int64_t n = a.as_int();
                if (n == INT64_MIN && d == -1) return Value{n};  // wrap
                return Value{n / d};
            }
            case BinOp::Eq: return Value{a.v == b.v};
            case BinOp::Ne: return Value{!(a.v == b.v)};
            case BinOp::Lt: return Value{a.as_int() < b.as_int()};
            case BinOp::Le: return Value{a.as_int() <= b.as_int()};
            case BinOp::Gt: return Value{a.as_int() > b.as_int()};
            case BinOp::Ge: return Value{a.as_int() >= b.as_int()};
            default: break;
        }
        assert(false);
        return Value{std::int64_t{0}};
    }
};

}  // namespace

RunOutcome run_tests(const Program& prog, std::uint64_t fuel) {
    return Interp(prog, fuel).run();
}

}  // namespace cegen::minilang
