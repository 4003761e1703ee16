#include "smc2/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "smc2/erasure.hpp"
#include "smc2/error.hpp"
#include "smc2/parser.hpp"

namespace smc2 {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Program load_smc2(const fs::path& path) { return parse(slurp(path), {Dialect::Smc2, false}); }

// Plain C runs directly; SMC2 sources are erased first.
Program load_vanilla(const fs::path& path) {
  std::string src = slurp(path);
  try {
    return parse(src, {Dialect::Vanilla, false});
  } catch (const Error&) {
    return erase_program(parse(src, {Dialect::Smc2, false}));
  }
}

Expect parse_expect(const std::string& s) {
  if (s == "pass") return Expect::Pass;
  if (s == "skip") return Expect::Skip;
  if (s == "oblivious_fault") return Expect::ObliviousFault;
  throw std::runtime_error("unknown expectation '" + s + "'");
}

std::string stem(const std::string& program) { return fs::path(program).replace_extension().string(); }

std::string psi_log(const Smc2State& s) {
  json swaps = json::array();
  for (const auto& pair : s.psi) {
    json entry = json::array();
    for (const auto& l : pair) entry.push_back({{"block", l.block}, {"offset", l.offset}});
    swaps.push_back(entry);
  }
  return json{{"psi", swaps}}.dump(2) + "\n";
}

void write_run(const fs::path& dir, const Smc2State& s) {
  fs::create_directories(dir);
  std::vector<Trace> traces;
  std::vector<Outputs> outs;
  for (const auto& p : s.parties) {
    traces.push_back(p.trace);
    outs.push_back(p.outputs);
  }
  spit(dir / "trace.d", format_codes(traces));
  spit(dir / "trace.l", format_locations(traces));
  spit(dir / "psi.json", psi_log(s));
  write_outputs(dir, outs);
}

void print_outputs(std::ostream& out, const std::vector<Outputs>& per_party) {
  for (std::size_t k = 0; k < per_party.size(); ++k)
    for (const auto& line : per_party[k]) out << "party " << k + 1 << ": " << line.var << " = " << line.value << "\n";
}

}  // namespace

Corpus load_manifest(const fs::path& manifest) {
  json j = json::parse(slurp(manifest));
  Corpus c;
  c.root = manifest.parent_path();
  for (const auto& e : j.at("programs")) {
    CorpusEntry entry;
    entry.program = e.at("program").get<std::string>();
    if (e.contains("inputs")) entry.inputs = e.at("inputs").get<std::vector<std::string>>();
    if (e.contains("expect")) entry.expect = parse_expect(e.at("expect").get<std::string>());
    c.entries.push_back(std::move(entry));
  }
  return c;
}

std::vector<CheckResult> check_entry(const Corpus& corpus, const CorpusEntry& entry, const RunOptions& options,
                                     const std::vector<std::uint64_t>& seeds) {
  const std::string name = stem(entry.program);
  const int q = options.field.q;
  std::vector<InputSet> sets;
  for (const auto& base : entry.inputs) sets.push_back(InputSet::load(corpus.root / base, q));
  if (sets.empty()) sets.emplace_back();

  Program program;
  try {
    program = load_smc2(corpus.root / entry.program);
  } catch (const Error& e) {
    return {{name + ".parse", Verdict::Fail, e.what(), true}};
  }

  if (entry.expect == Expect::ObliviousFault) {
    try {
      run_smc2(program, sets[0], options);
      return {{name + ".oblivious", Verdict::Fail, "ran to completion"}};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ObliviousFault) return {{name + ".oblivious", Verdict::Pass, e.what()}};
      return {{name + ".oblivious", Verdict::Fail, std::string("wrong fault: ") + e.what(), true}};
    }
  }

  std::vector<CheckResult> out;
  CheckResult correct = check_correctness(name + ".correct", program, sets[0], options);
  if (entry.expect == Expect::Skip && correct.verdict != Verdict::Skip && !correct.fault) {
    correct.verdict = Verdict::Fail;
    correct.detail = "expected a misaligned skip, got: " + correct.detail;
  } else if (entry.expect == Expect::Pass && correct.verdict == Verdict::Skip) {
    correct.verdict = Verdict::Fail;
  }
  out.push_back(correct);
  out.push_back(check_branch_oracle(name + ".oracle", program, sets[0], options));

  try {
    std::size_t runs = 0;
    std::string conf_fail;
    for (auto seed : seeds) {
      RunOptions o = options;
      o.seed = seed;
      for (const auto& in : sets) {
        ++runs;
        auto r = check_confluence(run_smc2(program, in, o));
        if (!r.pass && conf_fail.empty()) conf_fail = "seed " + std::to_string(seed) + ": " + r.detail;
      }
    }
    out.push_back(conf_fail.empty() ? CheckResult{name + ".confluence", Verdict::Pass, std::to_string(runs) + " runs"}
                                    : CheckResult{name + ".confluence", Verdict::Fail, conf_fail});

    // Same-seed pairs of distinct secrets, then one input set across seeds.
    std::size_t pairs = 0;
    std::string ni_fail;
    for (auto seed : seeds) {
      RunOptions o = options;
      o.seed = seed;
      for (std::size_t a = 0; a < sets.size(); ++a)
        for (std::size_t b = a + 1; b < sets.size(); ++b) {
          ++pairs;
          auto r = check_noninterference(program, sets[a], sets[b], o);
          if (!r.pass && ni_fail.empty())
            ni_fail = entry.inputs[a] + " vs " + entry.inputs[b] + " seed " + std::to_string(seed) + ": " + r.detail;
        }
    }
    for (std::size_t i = 1; i < seeds.size(); ++i) {
      RunOptions o = options;
      o.seed = seeds[0];
      ++pairs;
      auto r = check_noninterference(program, sets[0], sets[0], o, seeds[i]);
      if (!r.pass && ni_fail.empty())
        ni_fail = "seed " + std::to_string(seeds[0]) + " vs " + std::to_string(seeds[i]) + ": " + r.detail;
    }
    out.push_back(ni_fail.empty() ? CheckResult{name + ".ni", Verdict::Pass, std::to_string(pairs) + " pairs"}
                                  : CheckResult{name + ".ni", Verdict::Fail, ni_fail});
  } catch (const Error& e) {
    out.push_back({name + ".ni", Verdict::Fail, std::string("fault: ") + e.what(), true});
  }
  return out;
}

namespace {

struct Flags {
  int parties = 3;
  int threshold = 1;
  std::uint64_t prime = mpc::kDefaultPrime;
  std::uint64_t seed = 1;
  std::string inputs;
  std::vector<std::string> alt_inputs;
  std::string tracking = "auto";
  bool count_rounds = false;
  bool legacy = false;
  std::string out_dir = ".";
  std::string program;
  std::string manifest;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("-q,--parties", f.parties, "number of parties")->check(CLI::PositiveNumber);
  cmd->add_option("-t,--threshold", f.threshold, "sharing threshold")->check(CLI::NonNegativeNumber);
  cmd->add_option("-p,--prime", f.prime, "field prime");
  cmd->add_option("--seed", f.seed, "randomness seed (SMC2_SEED overrides)");
  cmd->add_option("--inputs", f.inputs, "input base path; reads <base>.1 .. <base>.q");
  cmd->add_option("--tracking", f.tracking, "branch tracking scheme")
      ->check(CLI::IsMember({"auto", "variable", "location"}));
  cmd->add_flag("--legacy-per-statement", f.legacy, "resolve every write inside a private branch on the spot");
}

RunOptions options_from(const Flags& f) {
  RunOptions o;
  o.field.q = f.parties;
  o.field.t = f.threshold;
  o.field.p = f.prime;
  o.field.validate();
  o.seed = f.seed;
  if (const char* env = std::getenv("SMC2_SEED")) o.seed = std::stoull(env);
  o.tracking = f.tracking == "variable" ? Tracking::Variable
               : f.tracking == "location" ? Tracking::Location
                                          : Tracking::Auto;
  o.legacy = f.legacy;
  return o;
}

InputSet inputs_from(const std::string& base, int q) { return base.empty() ? InputSet{} : InputSet::load(base, q); }

int report(std::ostream& out, const std::vector<CheckResult>& results) {
  int code = kExitPass;
  for (const auto& r : results) {
    out << format(r) << "\n";
    if (r.fault)
      code = std::max<int>(code, kExitFault);
    else if (!r.passed())
      code = std::max<int>(code, kExitProperty);
  }
  return code;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed-mode secure multiparty C interpreter"};
  app.require_subcommand(1);
  Flags f;

  auto* run = app.add_subcommand("run", "execute a program under secret sharing");
  auto* van = app.add_subcommand("run-vanilla", "execute the erased, unlabeled program");
  auto* erase = app.add_subcommand("erase", "print the erased program");
  auto* correct = app.add_subcommand("check-correct", "compare a run against its erased counterpart");
  auto* ni = app.add_subcommand("check-ni", "compare runs on two input sets");
  auto* all = app.add_subcommand("check-all", "run every check over a corpus manifest");
  for (auto* cmd : {run, van, erase, correct, ni, all}) add_common(cmd, f);
  for (auto* cmd : {run, van, erase, correct, ni}) cmd->add_option("program", f.program, "source file")->required();
  for (auto* cmd : {run, van}) {
    cmd->add_option("--out-dir", f.out_dir, "directory for output and trace files");
  }
  run->add_flag("--count-rounds", f.count_rounds, "print protocol invocation counts");
  ni->add_option("--alt-inputs", f.alt_inputs, "input bases to compare against --inputs")->required();
  all->add_option("manifest", f.manifest, "manifest path")->default_val(std::string(SMC2_CORPUS_DIR) + "/manifest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    RunOptions opt = options_from(f);
    InputSet inputs = inputs_from(f.inputs, opt.field.q);

    if (*run) {
      Smc2State s = run_smc2(load_smc2(f.program), inputs, opt);
      write_run(f.out_dir, s);
      std::vector<Outputs> outs;
      for (const auto& p : s.parties) outs.push_back(p.outputs);
      print_outputs(out, outs);
      if (f.count_rounds) out << to_string(s.rounds) << "\n";
      return kExitPass;
    }
    if (*van) {
      VanillaResult r = run_vanilla(load_vanilla(f.program), inputs, opt.field.q, opt.loop_budget);
      std::vector<Outputs> outs;
      for (const auto& p : r.parties) outs.push_back(p.outputs);
      fs::create_directories(f.out_dir);
      write_outputs(f.out_dir, outs);
      print_outputs(out, outs);
      return kExitPass;
    }
    if (*erase) {
      out << print(erase_program(load_smc2(f.program)));
      return kExitPass;
    }
    if (*correct) {
      return report(out, {check_correctness(stem(fs::path(f.program).filename().string()) + ".correct",
                                            load_smc2(f.program), inputs, opt)});
    }
    if (*ni) {
      Program p = load_smc2(f.program);
      std::vector<CheckResult> results;
      for (const auto& alt : f.alt_inputs) {
        auto r = check_noninterference(p, inputs, InputSet::load(alt, opt.field.q), opt);
        results.push_back({"ni " + alt, r.pass ? Verdict::Pass : Verdict::Fail, r.detail});
      }
      return report(out, results);
    }
    // check-all
    Corpus corpus = load_manifest(f.manifest);
    std::vector<CheckResult> results;
    for (const auto& e : corpus.entries) {
      auto r = check_entry(corpus, e, opt, {opt.seed, opt.seed + 1, opt.seed + 2});
      results.insert(results.end(), r.begin(), r.end());
    }
    int code = report(out, results);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed() ? 0 : 1;
    out << results.size() - failed << "/" << results.size() << " checks passed\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFault;
  }
}

}  // namespace smc2
