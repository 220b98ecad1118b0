#include <cctype>
#include <charconv>

#include "iostd/core.hpp"

namespace iostd {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : t_(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Parse, "expected " + what + " at offset " + std::to_string(p_) + " in '" +
                                      std::string(t_) + "'");
  }

  bool done() const { return p_ >= t_.size(); }
  char peek() const { return done() ? '\0' : t_[p_]; }
  bool accept(std::string_view s) {
    if (t_.substr(p_, s.size()) != s) return false;
    p_ += s.size();
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("'" + std::string(s) + "'");
  }
  void end() {
    if (!done()) fail("end of text");
  }

  std::string name() {
    std::size_t b = p_;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++p_;
    if (b == p_) fail("name");
    return std::string(t_.substr(b, p_ - b));
  }

  std::int64_t integer() {
    std::size_t b = p_;
    if (peek() == '-') ++p_;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++p_;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t_.data() + b, t_.data() + p_, v);
    if (ec != std::errc() || ptr != t_.data() + p_) fail("integer");
    return v;
  }

  Value value() {
    if (accept("@")) return Value(ObjectId{name()});
    if (peek() == '-' || std::isdigit(static_cast<unsigned char>(peek()))) return Value(integer());
    std::string n = name();
    if (n == "true") return Value(true);
    if (n == "false") return Value(false);
    return Value(EnumConst{n});
  }

  VarAssignment assignment() {
    VarAssignment a;
    expect("{");
    if (accept("}")) return a;
    do {
      std::string n = name();
      expect("=");
      a.set(n, value());
    } while (accept(", "));
    expect("}");
    return a;
  }

  Tag tag() {
    Tag t;
    t.owner = name();
    expect(":");
    t.index = integer();
    return t;
  }

  MessageKind kind() {
    std::string k = name();
    if (k == "seq") return MessageKind::SequCall;
    if (k == "conc") return MessageKind::ConcCall;
    if (k == "ret") return MessageKind::Ret;
    fail("message kind");
  }

  Message message() {
    Message m;
    m.snd.name = name();
    expect("->");
    m.rec.name = name();
    expect(" ");
    m.tt = tag();
    expect(" ");
    m.mn = name();
    expect(" ");
    m.kind = kind();
    expect(" ");
    m.ar = assignment();
    return m;
  }

  ServiceInvocation invocation() {
    ServiceInvocation inv;
    expect("(");
    inv.pc.service = name();
    expect(".");
    inv.pc.state = name();
    expect(" ");
    inv.args = assignment();
    expect(" ");
    inv.locals = assignment();
    expect(" ");
    inv.caller.name = name();
    expect(" ");
    inv.invoked_as = kind();
    expect(")");
    return inv;
  }

  ObjectState state() {
    ObjectState s;
    s.self.name = name();
    if (accept(" ERROR")) s.error = true;
    expect(" at");
    s.at = assignment();
    expect(" st{");
    if (!accept("}")) {
      do {
        Tag t = tag();
        expect("=[");
        InvocationStack st;
        do {
          st = st.push(invocation());
        } while (accept(" "));
        expect("]");
        s.set_stack(t, st);
      } while (accept(", "));
      expect("}");
    }
    expect(" pt{");
    if (!accept("}")) {
      do {
        s.pool.insert(tag());
      } while (accept(", "));
      expect("}");
    }
    return s;
  }

 private:
  std::string_view t_;
  std::size_t p_ = 0;
};

}  // namespace

Value parse_value(std::string_view text) {
  Reader r(text);
  Value v = r.value();
  r.end();
  return v;
}

Message parse_message(std::string_view text) {
  Reader r(text);
  Message m = r.message();
  r.end();
  return m;
}

std::vector<Message> parse_messages(std::string_view text) {
  Reader r(text);
  std::vector<Message> out;
  r.expect("[");
  if (!r.accept("]")) {
    do {
      out.push_back(r.message());
    } while (r.accept("; "));
    r.expect("]");
  }
  r.end();
  return out;
}

ObjectState parse_object_state(std::string_view text) {
  Reader r(text);
  ObjectState s = r.state();
  r.end();
  return s;
}

}  // namespace iostd
