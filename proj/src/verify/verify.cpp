#include "smc2/verify.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "smc2/erasure.hpp"
#include "smc2/error.hpp"

namespace smc2 {

namespace {

const char* verdict_text(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skip: return "SKIP";
  }
  return "FAIL";
}

CheckResult fail_result(const std::string& name, std::string detail) { return {name, Verdict::Fail, std::move(detail)}; }

CheckResult fault_result(const std::string& name, const Error& e) {
  return {name, Verdict::Fail, std::string("fault: ") + e.what(), true};
}

std::string first_code_divergence(const std::vector<Code>& a, const std::vector<Code>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i]))
      return "D[" + std::to_string(i) + "] " + a[i].name + "@" + std::to_string(a[i].acc) + " vs " + b[i].name + "@" +
             std::to_string(b[i].acc);
  if (a.size() != b.size()) return "D length " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
  return {};
}

std::string first_location_divergence(const std::vector<Location>& a, const std::vector<Location>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i])) return "L[" + std::to_string(i) + "] " + to_string(a[i]) + " vs " + to_string(b[i]);
  if (a.size() != b.size()) return "L length " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
  return {};
}

// Differences an observer without shares could see: block layout,
// permissions, labels and every public byte.
std::string public_divergence(const Memory& a, const Memory& b) {
  const auto& x = a.blocks();
  const auto& y = b.blocks();
  if (x.size() != y.size()) return "block count " + std::to_string(x.size()) + " vs " + std::to_string(y.size());
  for (auto ia = x.begin(), ib = y.begin(); ia != x.end(); ++ia, ++ib) {
    const auto& [id, p] = *ia;
    const auto& [jd, q] = *ib;
    std::string where = "block #" + std::to_string(id);
    if (id != jd) return "block ids " + std::to_string(id) + " vs " + std::to_string(jd);
    if (!(p.type == q.type) || p.count != q.count || p.origin != q.origin || p.bytes.size() != q.bytes.size())
      return where + ": shape differs";
    if (p.meta != q.meta) return where + ": metadata differs";
    for (std::size_t k = 0; k < p.bytes.size(); ++k)
      if (p.meta[k].label == Label::Public && p.bytes[k] != q.bytes[k])
        return where + " offset " + std::to_string(k) + ": public byte differs";
  }
  return {};
}

std::string party_divergence(const Smc2Party& a, const Smc2Party& b) {
  if (auto d = first_code_divergence(a.trace.d, b.trace.d); !d.empty()) return d;
  if (auto d = first_location_divergence(a.trace.l, b.trace.l); !d.empty()) return d;
  if (auto d = public_divergence(a.mem, b.mem); !d.empty()) return d;
  if (!(a.env == b.env)) return "environments differ";
  return {};
}

}  // namespace

std::string format(const CheckResult& r) {
  std::string out = "CHECK " + r.name + " " + verdict_text(r.verdict);
  if (!r.detail.empty()) out += " " + r.detail;
  return out;
}

CheckResult check_correctness(const std::string& name, const Program& program, const InputSet& inputs,
                              const RunOptions& options) {
  try {
    Smc2State smc = run_smc2(program, inputs, options);
    VanillaResult van = run_vanilla(erase_program(program), inputs, options.field.q, options.loop_budget);
    if (smc.misaligned || van.misaligned) return {name, Verdict::Skip, "misaligned out-of-bounds access"};
    for (std::size_t k = 0; k < smc.parties.size(); ++k) {
      std::string party = "party " + std::to_string(k + 1) + ": ";
      auto cc = code_congruent(smc.parties[k].trace.d, van.parties[k].trace.d);
      if (!cc.ok) return fail_result(name, party + "codes: " + cc.detail);
      auto pc = psi_congruent(smc, van.parties[k]);
      if (!pc.ok) return fail_result(name, party + "state: " + pc.detail);
      if (smc.parties[k].outputs != van.parties[k].outputs) return fail_result(name, party + "outputs differ");
    }
    return {name, Verdict::Pass, std::to_string(smc.parties[0].trace.d.size()) + " codes"};
  } catch (const Error& e) {
    return fault_result(name, e);
  }
}

NIReport check_noninterference(const Program& program, const InputSet& a, const InputSet& b, const RunOptions& options,
                               std::optional<std::uint64_t> seed_b) {
  RunOptions other = options;
  if (seed_b) other.seed = *seed_b;
  Smc2State x = run_smc2(program, a, options);
  Smc2State y = run_smc2(program, b, other);
  for (std::size_t k = 0; k < x.parties.size(); ++k) {
    if (auto d = party_divergence(x.parties[k], y.parties[k]); !d.empty())
      return {false, "party " + std::to_string(k + 1) + ": " + d};
  }
  if (!(x.rounds == y.rounds)) return {false, "protocol counts differ"};
  return {};
}

NIReport check_confluence(const Smc2State& state) {
  for (std::size_t k = 1; k < state.parties.size(); ++k) {
    if (auto d = party_divergence(state.parties[0], state.parties[k]); !d.empty())
      return {false, "party " + std::to_string(k + 1) + " vs party 1: " + d};
  }
  return {};
}

CheckResult check_branch_oracle(const std::string& name, const Program& program, const InputSet& inputs,
                                const RunOptions& options) {
  struct Pending {
    VanillaState clone;
    Env env;
  };
  std::map<std::uint32_t, Pending> pending;
  std::string failure;
  std::size_t checked = 0;
  RunOptions opt = options;
  opt.hook = [&](const BranchEvent& ev) {
    if (!ev.on_taken_path || !failure.empty()) return;
    const Smc2State& s = *ev.state;
    std::string where = "if #" + std::to_string(ev.instance) + ": ";
    try {
      if (ev.phase == BranchEvent::Phase::Before) {
        ErasedState e = erase_memory(s);
        Pending p;
        p.env = e.env;
        p.clone.env = e.env;
        p.clone.mem = std::move(e.mem);
        p.clone.functions = std::move(e.functions);
        TypeEnv tenv;
        for (const auto& b : s.parties[0].env.visible()) tenv.declare(b.name, b.type);
        StmtPtr branch = erase_stmt(ev.taken ? *ev.stmt->then_branch : *ev.stmt->else_branch, tenv);
        InputSet none;
        exec_vanilla(p.clone, *branch, none, 1, static_cast<int>(s.parties.size()), options.loop_budget);
        p.clone.env = p.env;
        pending[ev.instance] = std::move(p);
        return;
      }
      auto it = pending.find(ev.instance);
      if (it == pending.end()) return;
      auto c = same_state(erase_memory(s), it->second.clone.mem, it->second.clone.env);
      if (!c.ok) failure = where + c.detail;
      ++checked;
      pending.erase(it);
    } catch (const Error& e) {
      failure = where + "plaintext branch raised " + e.what();
    }
  };
  try {
    run_smc2(program, inputs, opt);
  } catch (const Error& e) {
    return fault_result(name, e);
  }
  if (!failure.empty()) return fail_result(name, failure);
  return {name, Verdict::Pass, std::to_string(checked) + " branches"};
}

namespace {

// Every array of length 1..max_len over 0..p-1, in lexicographic order.
template <typename F>
void each_array(std::uint64_t p, std::size_t max_len, F&& f) {
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::vector<std::int64_t> a(n, 0);
    while (true) {
      f(a);
      std::size_t i = 0;
      while (i < n && ++a[i] == static_cast<std::int64_t>(p)) a[i++] = 0;
      if (i == n) break;
    }
  }
}

}  // namespace

std::vector<CheckResult> check_protocol_axioms(const mpc::FieldParams& field) {
  std::vector<CheckResult> out;
  mpc::Engine eng(field, 7);
  const auto p = static_cast<std::int64_t>(field.p);
  auto mod = [&](std::int64_t v) { return static_cast<std::uint64_t>(((v % p) + p) % p); };

  struct Op {
    const char* name;
    std::function<mpc::Shares(const mpc::Shares&, const mpc::Shares&)> run;
    std::function<std::int64_t(std::int64_t, std::int64_t)> plain;
  };
  std::vector<Op> ops = {
      {"axiom.add", [&](const auto& a, const auto& b) { return eng.add(a, b); }, [](auto a, auto b) { return a + b; }},
      {"axiom.sub", [&](const auto& a, const auto& b) { return eng.sub(a, b); }, [](auto a, auto b) { return a - b; }},
      {"axiom.mult", [&](const auto& a, const auto& b) { return eng.mult(a, b); }, [](auto a, auto b) { return a * b; }},
  };
  for (const auto& op : ops) {
    std::size_t cases = 0;
    std::string bad;
    for (std::int64_t a = 0; a < p; ++a)
      for (std::int64_t b = 0; b < p; ++b) {
        ++cases;
        auto r = op.run(eng.share(a), eng.share(b));
        if (eng.reconstruct_raw(r) != mod(op.plain(a, b)) && bad.empty())
          bad = std::to_string(a) + "," + std::to_string(b);
      }
    out.push_back(bad.empty() ? CheckResult{op.name, Verdict::Pass, std::to_string(cases) + " cases"}
                              : fail_result(op.name, "wrong at " + bad));
  }

  {
    mpc::Engine x(field, 42);
    mpc::Engine y(field, 42);
    bool same = true;
    for (std::int64_t v = 0; v < p; ++v) {
      auto a = x.share(v);
      auto b = y.share(v);
      same = same && a == b && x.mult(a, a) == y.mult(b, b);
    }
    out.push_back(same ? CheckResult{"axiom.determinism", Verdict::Pass, "seeded replay"}
                       : fail_result("axiom.determinism", "replay diverged"));
  }

  std::size_t ar_cases = 0;
  std::size_t aw_cases = 0;
  std::size_t dv_cases = 0;
  std::string ar_bad;
  std::string aw_bad;
  std::string dv_bad;
  std::int64_t counter = 0;
  each_array(field.p, 4, [&](const std::vector<std::int64_t>& a) {
    std::vector<mpc::Shares> elems;
    for (auto v : a) elems.push_back(eng.share(v));
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto idx = eng.share(static_cast<std::int64_t>(i));
      ++ar_cases;
      if (eng.reconstruct_raw(eng.ar(idx, elems)) != mod(a[i]) && ar_bad.empty()) ar_bad = "index " + std::to_string(i);

      std::int64_t v = counter++ % p;
      auto written = eng.aw(idx, elems, eng.share(v));
      ++aw_cases;
      for (std::size_t j = 0; j < a.size(); ++j)
        if (eng.reconstruct_raw(written[j]) != mod(j == i ? v : a[j]) && aw_bad.empty())
          aw_bad = "index " + std::to_string(i) + " slot " + std::to_string(j);

      std::vector<mpc::Shares> tags;
      for (std::size_t j = 0; j < a.size(); ++j) tags.push_back(eng.share(j == i ? 1 : 0));
      ++dv_cases;
      if (eng.reconstruct_raw(eng.dv(elems, tags)) != mod(a[i]) && dv_bad.empty()) dv_bad = "tag " + std::to_string(i);
    }
  });
  auto mux = [&](const char* name, std::size_t cases, const std::string& bad) {
    out.push_back(bad.empty() ? CheckResult{name, Verdict::Pass, std::to_string(cases) + " cases"}
                              : fail_result(name, "wrong at " + bad));
  };
  mux("axiom.ar", ar_cases, ar_bad);
  mux("axiom.aw", aw_cases, aw_bad);
  mux("axiom.dv", dv_cases, dv_bad);
  return out;
}

}  // namespace smc2
