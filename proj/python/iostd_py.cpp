// Python bindings: text in, text or dicts out. Library errors surface as
// iostd.IostdError with the error code name in `code`.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iostd/check.hpp"
#include "iostd/dsl.hpp"
#include "iostd/manifest.hpp"
#include "iostd/validate.hpp"

namespace py = pybind11;
using namespace iostd;

namespace {

py::dict finding_dict(const Finding& f) {
  py::dict d;
  d["severity"] = std::string(to_string(f.severity));
  d["code"] = f.code;
  d["subject"] = f.subject;
  d["message"] = f.message;
  d["witness"] = f.witness;
  d["attachment"] = f.attachment;
  return d;
}

py::list finding_list(const std::vector<Finding>& fs) {
  py::list r;
  for (const auto& f : fs) r.append(finding_dict(f));
  return r;
}

RunManifest load(const std::string& path, std::optional<std::uint64_t> seed, std::optional<std::string> policy,
                 std::optional<std::size_t> bound) {
  RunManifest m = load_manifest(path);
  if (seed) m.seed = *seed;
  if (policy) {
    auto p = parse_policy(*policy);
    if (!p) throw Error(ErrorCode::Usage, "unknown policy " + *policy);
    m.policy = *p;
  }
  if (bound) m.bound = *bound;
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interleaved service behaviors: validation, simulation, exploration, audit";

  static py::exception<Error> exc(m, "IostdError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::handle(exc.ptr())(e.what());
      err.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  m.def(
      "format_behavior", [](const std::string& text) { return print(parse_or_throw(text)); },
      py::arg("text"), "Parse a behavior and return its canonical text.");

  m.def(
      "validate", [](const std::string& text) { return finding_list(validate(parse_or_throw(text)).findings); },
      py::arg("text"), "Static findings of a behavior; raises IostdError on syntax errors.");

  m.def(
      "enabledness", [](const std::string& text) { return finding_list(enabledness_report(parse_or_throw(text))); },
      py::arg("text"));

  m.def(
      "run",
      [](const std::string& manifest, std::optional<std::uint64_t> seed, std::optional<std::string> policy) {
        RunManifest mf = load(manifest, seed, policy, std::nullopt);
        Trace t = run(mf.configuration(), mf.script, Scheduler{mf.scheduler, mf.seed, mf.bound}, mf.policy,
                      mf.header());
        return t.text();
      },
      py::arg("manifest"), py::arg("seed") = py::none(), py::arg("policy") = py::none(),
      "Simulate a manifest file and return the trace text.");

  m.def(
      "explore",
      [](const std::string& manifest, std::optional<std::size_t> bound) {
        RunManifest mf = load(manifest, std::nullopt, std::nullopt, bound);
        ExplorationReport r = explore(mf.configuration(), mf.script, mf.bound, mf.policy, mf.invariants,
                                      mf.header());
        py::dict d;
        d["configurations"] = r.configurations();
        d["transitions"] = r.transitions;
        d["terminals"] = r.terminals.size();
        py::list v;
        for (const auto& x : r.violations) {
          py::dict e;
          e["invariant"] = x.invariant;
          e["count"] = x.count;
          e["witness"] = x.witness.text();
          v.append(e);
        }
        d["violations"] = v;
        d["text"] = r.text();
        return d;
      },
      py::arg("manifest"), py::arg("bound") = py::none());

  m.def(
      "audit", [](const std::string& trace) { return finding_list(audit_trace(parse_trace(trace))); },
      py::arg("trace"), "Legality findings of a trace text.");

  m.def(
      "replay",
      [](const std::string& trace, const std::string& manifest) {
        return replay(parse_trace(trace), load_manifest(manifest).configuration()).text();
      },
      py::arg("trace"), py::arg("manifest"), "Regenerate a trace; raises IostdError on divergence.");

  m.def(
      "check_serializability",
      [](const std::string& manifest, std::optional<std::size_t> bound) {
        RunManifest mf = load(manifest, std::nullopt, std::nullopt, bound);
        return finding_list(
            serializability_check(mf.configuration(), mf.injections(), mf.bound, mf.policy, mf.header()).findings);
      },
      py::arg("manifest"), py::arg("bound") = py::none());

  m.def(
      "export_machine",
      [](const std::string& manifest, std::optional<std::string> object, std::optional<std::string> policy,
         std::optional<std::size_t> bound) {
        RunManifest mf = load(manifest, std::nullopt, policy, bound);
        const ObjectDecl* decl = nullptr;
        for (const auto& d : mf.objects)
          if ((object && d.id == *object) || (!object && mf.objects.size() == 1)) decl = &d;
        if (!decl) throw Error(ErrorCode::Usage, "object must name one object of the manifest");
        ObjectId id{decl->id};
        return enumerate_machine(*mf.behavior(decl->behavior), id, make_pool(id, decl->pool), mf.bound, mf.policy,
                                 mf.alphabet, mf.universe())
            .text();
      },
      py::arg("manifest"), py::arg("object") = py::none(), py::arg("policy") = py::none(),
      py::arg("bound") = py::none());
}
