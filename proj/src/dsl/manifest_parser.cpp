#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "iostd/dsl.hpp"
#include "iostd/manifest.hpp"
#include "parser_base.hpp"

namespace iostd {

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

namespace dsl {
namespace {

class ManifestParser : public ParserBase {
 public:
  ManifestParser(std::vector<Token> toks, std::vector<ParseError>& errors, const FileReader& reader)
      : ParserBase(std::move(toks), errors), reader_(reader) {}

  RunManifest run() {
    try {
      expect_kw("manifest");
      if (check(Tok::Ident)) m_.name = advance().text;
      expect(Tok::LBrace, "'{'");
    } catch (const Bail&) {
      return m_;
    }
    block_items([&] { item(); });
    try {
      expect(Tok::RBrace, "'}'");
      if (!at_end()) fail(peek(), "end of input");
    } catch (const Bail&) {
    }
    return m_;
  }

 private:
  std::uint64_t count(const std::string& what) {
    std::int64_t v = parse_signed_int();
    if (v < 0) fail(toks_[pos_ - 1], "nonnegative " + what);
    return static_cast<std::uint64_t>(v);
  }

  Value literal(const BehaviorDescription* beh) {
    Scope s;
    s.beh = beh;
    Typed t = parse_expr(s);
    try {
      return eval_expr(t.expr, {});
    } catch (const Error& e) {
      fail(t.span, "constant value", e.what());
    }
  }

  void item() {
    const Token& kw = peek();
    if (accept_kw("spec")) return spec();
    if (accept_kw("object")) return object();
    if (accept_kw("inject")) return inject();
    if (accept_kw("invariant")) return invariant();
    if (accept_kw("alphabet")) return alphabet();
    if (check(Tok::Ident)) {
      const std::string k = advance().text;
      if (k == "scheduler") {
        const Token& v = expect(Tok::Ident, "scheduler name");
        auto s = parse_scheduler(v.text);
        if (!s) fail(v, "'random', 'roundrobin', or 'exhaustive'");
        m_.scheduler = *s;
      } else if (k == "policy") {
        const Token& v = expect(Tok::Ident, "policy name");
        auto p = parse_policy(v.text);
        if (!p) fail(v, "'reject' or 'havoc'");
        m_.policy = *p;
      } else if (k == "seed") {
        m_.seed = count("seed");
      } else if (k == "bound") {
        m_.bound = count("bound");
      } else if (k == "steps") {
        m_.script.max_steps = static_cast<std::int64_t>(count("step budget"));
      } else {
        fail(kw, "manifest item");
      }
      expect(Tok::Semi, "';'");
      return;
    }
    fail(kw, "manifest item");
  }

  void spec() {
    const Token& p = expect(Tok::String, "spec file path");
    expect(Tok::Semi, "';'");
    std::string text;
    try {
      text = reader_(p.text);
    } catch (const Error& e) {
      fail(p.span, "readable spec file", e.what());
    }
    ParseOutcome o = parse(text, p.text);
    if (!o.ok()) {
      for (auto& e : o.errors) errors_.push_back(e);
      throw Bail{};
    }
    if (m_.behavior(o.behavior->name)) fail(p.span, "one spec per behavior name", o.behavior->name);
    m_.specs.push_back({p.text, fnv1a_hex(text)});
    m_.behaviors.push_back(std::make_shared<const BehaviorDescription>(std::move(*o.behavior)));
  }

  void object() {
    ObjectDecl d;
    const Token& id = expect_name("object name");
    if (id.text == "env" || find_object(id.text)) fail(id, "unique object name other than 'env'");
    d.id = id.text;
    expect(Tok::Colon, "':'");
    const Token& b = expect(Tok::Ident, "behavior name");
    const BehaviorDescription* beh = m_.behavior(b.text);
    if (!beh) fail(b, "behavior declared by an earlier spec");
    d.behavior = b.text;
    if (accept_kw("pool")) d.pool = static_cast<std::int64_t>(count("pool size"));
    expect(Tok::LBrace, "'{'");
    block_items([&] {
      const Token& a = expect(Tok::Ident, "attribute name");
      const VarDecl* decl = beh->find_attribute(a.text);
      if (!decl) fail(a, "attribute of " + beh->name);
      expect(Tok::Eq, "'='");
      d.select.set(a.text, literal(beh));
      expect(Tok::Semi, "';'");
    });
    expect(Tok::RBrace, "'}'");
    m_.objects.push_back(std::move(d));
  }

  const ObjectDecl* find_object(const std::string& id) const {
    for (const auto& o : m_.objects)
      if (o.id == id) return &o;
    return nullptr;
  }

  void inject() {
    Injection inj;
    Message& msg = inj.msg;
    const Token& target = expect(Tok::Ident, "object name");
    const ObjectDecl* obj = find_object(target.text);
    if (!obj) fail(target, "object declared earlier");
    const BehaviorDescription* beh = m_.behavior(obj->behavior);
    msg.rec.name = obj->id;
    msg.snd.name = "env";
    expect(Tok::Dot, "'.'");
    const Token& svc = expect(Tok::Ident, "service name or 'ret'");
    msg.mn = svc.text;
    expect(Tok::LParen, "'('");
    if (!check(Tok::RParen)) {
      do {
        const Token& n = expect(Tok::Ident, "argument name");
        if (msg.ar.contains(n.text)) fail(n, "distinct argument names");
        expect(Tok::Eq, "'='");
        msg.ar.set(n.text, literal(beh));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    if (accept_kw("seq"))
      msg.kind = MessageKind::SequCall;
    else if (accept_kw("conc"))
      msg.kind = MessageKind::ConcCall;
    else if (accept_kw("ret"))
      msg.kind = MessageKind::Ret;
    else
      fail(peek(), "'seq', 'conc', or 'ret'");
    if ((msg.kind == MessageKind::Ret) != (msg.mn == kRetName))
      fail(svc, "'ret' exactly for ret messages");
    if (msg.kind != MessageKind::Ret) {
      const ServiceSTD* s = beh->find_service(msg.mn);
      if (!s) fail(svc, "service of " + beh->name);
      std::set<std::string> params;
      for (const auto& p : s->params) params.insert(p.name);
      if (params != msg.ar.names()) fail(svc, "arguments named after the parameters of " + s->name);
    }
    msg.tt = Tag{"env", static_cast<std::int64_t>(m_.script.injections.size())};
    while (true) {
      if (check_kw("at")) {
        advance();
        inj.at = static_cast<std::int64_t>(count("injection step"));
      } else if (check_kw("tag")) {
        advance();
        msg.tt.owner = expect(Tok::Ident, "tag owner").text;
        expect(Tok::Colon, "':'");
        msg.tt.index = static_cast<std::int64_t>(count("tag index"));
        if (msg.tt.owner != "env") fail(toks_[pos_ - 1], "environment tag 'env:N'");
      } else if (accept_kw("from")) {
        msg.snd.name = expect(Tok::Ident, "sender name").text;
      } else {
        break;
      }
    }
    expect(Tok::Semi, "';'");
    m_.script.injections.push_back(std::move(inj));
  }

  void invariant() {
    Invariant inv;
    inv.name = expect(Tok::Ident, "invariant name").text;
    if (accept_kw("terminal"))
      inv.terminal_only = true;
    else if (!accept_kw("always"))
      fail(peek(), "'terminal' or 'always'");
    if (accept_kw("each")) inv.each = true;
    expect(Tok::Colon, "':'");
    Scope s;
    s.allow_builtins = true;
    for (const auto& b : m_.behaviors) {
      for (const auto& a : b->attributes) s.vars.emplace(a.name, ScopeVar{a.type, false});
      if (!s.beh) s.beh = b.get();
    }
    s.vars["self"] = {IdType{}, false};
    Typed t = parse_bool_expr(s, "boolean invariant");
    std::set<std::string> plain, primed;
    collect_vars(t.expr, plain, primed);
    // Without `each` attributes are only reachable through sum(..).
    if (!inv.each && !plain.empty()) fail(t.span, "invariant without bare attributes (use 'each')", *plain.begin());
    inv.pred = std::move(t.expr);
    expect(Tok::Semi, "';'");
    m_.invariants.push_back(std::move(inv));
  }

  void alphabet() {
    while (!check(Tok::Semi) && !at_end()) {
      if (check_kw("tags")) {
        advance();
        m_.alphabet.external_tags = static_cast<std::int64_t>(count("tag count"));
      } else if (check_kw("services")) {
        advance();
        expect(Tok::LBracket, "'['");
        m_.alphabet.services.clear();
        do {
          m_.alphabet.services.push_back(expect(Tok::Ident, "service name").text);
        } while (accept(Tok::Comma));
        expect(Tok::RBracket, "']'");
      } else if (accept_kw("seq")) {
        m_.alphabet.kinds = {MessageKind::SequCall};
      } else if (accept_kw("conc")) {
        m_.alphabet.kinds = {MessageKind::ConcCall};
      } else if (accept_kw("both")) {
        m_.alphabet.kinds = {MessageKind::SequCall, MessageKind::ConcCall};
      } else {
        fail(peek(), "'tags', 'services', 'seq', 'conc', or 'both'");
      }
    }
    expect(Tok::Semi, "';'");
  }

  const FileReader& reader_;
  RunManifest m_;
};

}  // namespace
}  // namespace dsl

const BehaviorDescription* RunManifest::behavior(const std::string& n) const {
  for (const auto& b : behaviors)
    if (b->name == n) return b.get();
  return nullptr;
}

Universe RunManifest::universe() const {
  Universe u;
  for (const auto& o : objects) u.ids.push_back(ObjectId{o.id});
  std::sort(u.ids.begin(), u.ids.end());
  return u;
}

Configuration RunManifest::configuration() const {
  Configuration cfg;
  const Universe u = universe();
  for (const auto& o : objects) {
    std::shared_ptr<const BehaviorDescription> beh;
    for (const auto& b : behaviors)
      if (b->name == o.behavior) beh = b;
    ObjectId id{o.id};
    std::vector<MachineState> matching;
    for (auto& s : initial_states(*beh, id, make_pool(id, o.pool), u)) {
      bool ok = std::all_of(o.select.begin(), o.select.end(), [&](const auto& kv) {
        const Value* v = s.at.find(kv.first);
        return v && *v == kv.second;
      });
      if (ok) matching.push_back(std::move(s));
    }
    if (matching.size() != 1)
      throw Error(ErrorCode::Usage, "selector of object " + o.id + " matches " + std::to_string(matching.size()) +
                                        " initial states, need exactly one");
    cfg.objects.emplace(id, ObjectEntry{beh, std::move(matching.front())});
  }
  return cfg;
}

std::vector<Message> RunManifest::injections() const {
  std::vector<Message> r;
  for (const auto& i : script.injections) r.push_back(i.msg);
  return r;
}

TraceHeader RunManifest::header() const {
  TraceHeader h;
  h.emplace_back("manifest", name.empty() ? "-" : name);
  for (const auto& s : specs) h.emplace_back("spec", s.path + " " + s.digest);
  h.emplace_back("scheduler", std::string(to_string(scheduler)));
  h.emplace_back("seed", std::to_string(seed));
  h.emplace_back("policy", std::string(to_string(policy)));
  return h;
}

RunManifest parse_manifest(std::string_view text, const std::string& file, const FileReader& reader) {
  std::vector<ParseError> errors;
  dsl::ManifestParser p(dsl::lex(text, file), errors, reader);
  RunManifest m = p.run();
  if (!errors.empty()) {
    ParseOutcome o;
    o.errors = std::move(errors);
    throw Error(ErrorCode::Parse, o.error_text());
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  const std::string text = read_file(path);
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  return parse_manifest(text, path, [&](const std::string& rel) {
    std::filesystem::path p(rel);
    return read_file(p.is_absolute() ? rel : (dir / p).string());
  });
}

}  // namespace iostd
