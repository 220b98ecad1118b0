#include "iostd/sim.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace iostd {

Universe Configuration::universe() const {
  Universe u;
  for (const auto& [id, e] : objects) u.ids.push_back(id);
  return u;
}

void Configuration::enqueue(Message m) {
  if (m.rec == env) {
    env_inbox.push_back(std::move(m));
    return;
  }
  ChannelKey key{m.snd, m.rec};
  channels[key].push_back(std::move(m));
}

std::string Configuration::digest() const {
  std::string r;
  for (const auto& [id, e] : objects) r += to_string(e.state) + "; ";
  for (const auto& [key, q] : channels) {
    r += "chan " + key.first.name + "->" + key.second.name + " " +
         to_string(std::vector<Message>(q.begin(), q.end())) + "; ";
  }
  std::vector<Message> inbox = env_inbox;
  std::sort(inbox.begin(), inbox.end());
  return r + "inbox " + to_string(inbox);
}

std::string_view to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::SeededRandom: return "random";
    case SchedulerKind::RoundRobin: return "roundrobin";
    case SchedulerKind::Exhaustive: return "exhaustive";
  }
  return "?";
}

std::optional<SchedulerKind> parse_scheduler(std::string_view s) {
  for (auto k : {SchedulerKind::SeededRandom, SchedulerKind::RoundRobin, SchedulerKind::Exhaustive})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::size_t seeded_choice(std::uint64_t seed, std::uint64_t index, std::size_t n) {
  if (n == 0) throw std::invalid_argument("seeded_choice over no candidates");
  return static_cast<std::size_t>(splitmix64(seed ^ splitmix64(index)) % n);
}

// ---------------------------------------------------------------------------

Simulator::Simulator(Configuration cfg, ChaosPolicy policy, TraceHeader header)
    : cfg_(std::move(cfg)), policy_(policy) {
  trace_.header = std::move(header);
  for (const auto& [id, e] : cfg_.objects) {
    TraceEvent ev;
    ev.kind = EventKind::Init;
    ev.object = id;
    ev.state = e.state;
    trace_.events.push_back(std::move(ev));
  }
}

std::vector<ChannelKey> Simulator::ready() const {
  std::vector<ChannelKey> r;
  for (const auto& [key, q] : cfg_.channels)
    if (!q.empty()) r.push_back(key);
  return r;
}

std::vector<StepResult> Simulator::candidates(const ChannelKey& key) const {
  const Message& head = cfg_.channels.at(key).front();
  const ObjectEntry& obj = cfg_.objects.at(head.rec);
  auto results = step(*obj.beh, obj.state, head, policy_, cfg_.universe());
  for (const auto& r : results)
    for (const auto& m : r.out)
      if (m.rec != cfg_.env && !cfg_.objects.count(m.rec))
        throw Error(ErrorCode::IllegalInput, "output to unknown object " + m.rec.name);
  return results;
}

void Simulator::record_send(const Message& m) {
  if (m.kind == MessageKind::SequCall) {
    ++open_calls_[{m.tt, {m.snd, m.rec}}];
  } else if (m.kind == MessageKind::Ret) {
    auto it = open_calls_.find({m.tt, {m.rec, m.snd}});
    if (it != open_calls_.end() && --it->second == 0) open_calls_.erase(it);
  }
}

void Simulator::inject(const Message& m) {
  if (!cfg_.objects.count(m.rec))
    throw Error(ErrorCode::IllegalInput, "injection to unknown object " + m.rec.name);
  TraceEvent ev;
  ev.kind = EventKind::Inject;
  ev.step = steps_;
  ev.msg = m;
  trace_.events.push_back(std::move(ev));
  record_send(m);
  cfg_.enqueue(m);
}

void Simulator::deliver(const ChannelKey& key, const std::vector<StepResult>& results, std::size_t choice) {
  auto qit = cfg_.channels.find(key);
  const Message head = qit->second.front();
  const StepResult& r = results.at(choice);
  ObjectEntry& obj = cfg_.objects.at(head.rec);
  LegalityReport legal = check_step_legal(obj.state, head, r);
  if (!legal.legal())
    throw std::logic_error("illegal step (" + std::string(rule_letter(legal.violations[0].rule)) +
                           "): " + legal.violations[0].detail);
  qit->second.pop_front();
  if (qit->second.empty()) cfg_.channels.erase(qit);
  ++steps_;

  TraceEvent d;
  d.kind = EventKind::Deliver;
  d.step = steps_;
  d.msg = head;
  d.choice = choice;
  d.of = results.size();
  d.chaotic = r.chaotic;
  trace_.events.push_back(std::move(d));

  obj.state = r.successor;
  for (const auto& m : r.out) {
    TraceEvent e;
    e.kind = EventKind::Emit;
    e.step = steps_;
    e.msg = m;
    trace_.events.push_back(std::move(e));
    record_send(m);
    cfg_.enqueue(m);
  }
  TraceEvent s;
  s.kind = EventKind::State;
  s.step = steps_;
  s.object = head.rec;
  s.state = obj.state;
  trace_.events.push_back(std::move(s));
}

void Simulator::abort(const Message& head, const Error& e) {
  TraceEvent ev;
  ev.kind = EventKind::Abort;
  ev.step = steps_ + 1;
  ev.msg = head;
  ev.code = e.code();
  ev.detail = e.what();
  trace_.events.push_back(std::move(ev));
}

Trace Simulator::finish(EndReason reason) {
  trace_.end = reason;
  trace_.warnings.clear();
  const bool settled = reason == EndReason::Quiescent || reason == EndReason::Abort;
  for (const auto& [key, n] : open_calls_)
    for (int i = 0; i < n; ++i)
      trace_.warnings.push_back(std::string(settled ? "LeakedInvocation " : "PendingCall ") +
                                to_string(key.first) + " " + key.second.first.name + "->" +
                                key.second.second.name);
  return trace_;
}

// ---------------------------------------------------------------------------

Trace run(const Configuration& cfg, const Script& script, const Scheduler& sched, ChaosPolicy policy,
          const TraceHeader& header) {
  if (sched.kind == SchedulerKind::Exhaustive)
    throw Error(ErrorCode::Usage, "run needs the random or roundrobin scheduler; use explore");
  Simulator sim(cfg, policy, header);
  std::vector<Injection> pending = script.injections;
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Injection& a, const Injection& b) { return a.at < b.at; });
  std::size_t next = 0;
  std::uint64_t choices = 0;
  std::optional<ChannelKey> last;

  while (true) {
    while (next < pending.size() && pending[next].at <= sim.steps()) sim.inject(pending[next++].msg);
    auto ready = sim.ready();
    if (ready.empty()) {
      if (next < pending.size()) {
        // Nothing in flight: the next injection happens now.
        const std::int64_t at = pending[next].at;
        while (next < pending.size() && pending[next].at == at) sim.inject(pending[next++].msg);
        continue;
      }
      return sim.finish(EndReason::Quiescent);
    }
    if (script.max_steps && sim.steps() >= *script.max_steps) return sim.finish(EndReason::StepBudget);

    ChannelKey key;
    if (sched.kind == SchedulerKind::SeededRandom) {
      key = ready[seeded_choice(sched.seed, choices++, ready.size())];
    } else {
      auto it = last ? std::upper_bound(ready.begin(), ready.end(), *last) : ready.begin();
      key = it == ready.end() ? ready.front() : *it;
      last = key;
    }
    std::vector<StepResult> results;
    try {
      results = sim.candidates(key);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IllegalInput && e.code() != ErrorCode::TagPoolExhausted) throw;
      sim.abort(sim.config().channels.at(key).front(), e);
      return sim.finish(EndReason::Abort);
    }
    std::size_t choice = 0;
    if (sched.kind == SchedulerKind::SeededRandom) choice = seeded_choice(sched.seed, choices++, results.size());
    sim.deliver(key, results, choice);
  }
}

Trace replay(const Trace& trace, const Configuration& cfg) {
  std::optional<ChaosPolicy> policy;
  for (const auto& [k, v] : trace.header)
    if (k == "policy") policy = parse_policy(v);
  if (!policy) throw Error(ErrorCode::Parse, "trace header names no chaos policy");

  Simulator sim(cfg, *policy, trace.header);
  for (const auto& ev : trace.events) {
    const std::int64_t at = ev.kind == EventKind::Inject ? ev.step : sim.steps() + 1;
    switch (ev.kind) {
      case EventKind::Init:
      case EventKind::Emit:
      case EventKind::State:
        break;
      case EventKind::Inject:
        try {
          sim.inject(ev.msg);
        } catch (const Error& e) {
          throw ReplayDivergence(at, e.what());
        }
        break;
      case EventKind::Deliver:
      case EventKind::Abort: {
        ChannelKey key{ev.msg.snd, ev.msg.rec};
        auto it = sim.config().channels.find(key);
        if (it == sim.config().channels.end() || it->second.front() != ev.msg)
          throw ReplayDivergence(at, "recorded message is not at the head of its channel: " + to_string(ev.msg));
        std::vector<StepResult> results;
        try {
          results = sim.candidates(key);
        } catch (const Error& e) {
          if (ev.kind == EventKind::Abort && e.code() == ev.code) {
            sim.abort(ev.msg, e);
            break;
          }
          throw ReplayDivergence(at, std::string("step failed: ") + e.what());
        }
        if (ev.kind == EventKind::Abort) throw ReplayDivergence(at, "recorded abort did not recur");
        if (results.size() != ev.of || ev.choice >= results.size())
          throw ReplayDivergence(at, "recorded choice " + std::to_string(ev.choice) + "/" +
                                         std::to_string(ev.of) + " but " + std::to_string(results.size()) +
                                         " result(s) available");
        sim.deliver(key, results, ev.choice);
        break;
      }
    }
  }
  if (trace.end == EndReason::Quiescent && !sim.config().quiescent())
    throw ReplayDivergence(sim.steps(), "recorded quiescence but messages remain in flight");
  Trace out = sim.finish(trace.end);

  std::istringstream a(trace.text()), b(out.text());
  std::string la, lb;
  std::int64_t last_step = 0;
  while (true) {
    bool ga = static_cast<bool>(std::getline(a, la));
    bool gb = static_cast<bool>(std::getline(b, lb));
    if (!ga && !gb) break;
    if (ga) {
      auto bar = la.find(" | ");
      if (bar != std::string::npos && la[0] != '#' && la.rfind("init", 0) != 0) {
        try {
          last_step = std::stoll(la.substr(0, bar));
        } catch (...) {
        }
      }
    }
    if (!ga || !gb || la != lb)
      throw ReplayDivergence(last_step, "regenerated trace differs: expected '" + (ga ? la : "<end>") +
                                            "', got '" + (gb ? lb : "<end>") + "'");
  }
  return out;
}

}  // namespace iostd
