#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "smc2/smc2.hpp"
#include "smc2/verify.hpp"

namespace smc2 {

enum ExitCode : int { kExitPass = 0, kExitProperty = 1, kExitFault = 2, kExitUsage = 64 };

enum class Expect { Pass, Skip, ObliviousFault };

// One manifest record. Input paths are bases relative to the manifest:
// "inputs/paygap/a" means inputs/paygap/a.1 .. a.<q>.
struct CorpusEntry {
  std::string program;
  std::vector<std::string> inputs;  // first set drives the runs, every pair feeds noninterference
  Expect expect = Expect::Pass;
};

struct Corpus {
  std::filesystem::path root;
  std::vector<CorpusEntry> entries;
};

Corpus load_manifest(const std::filesystem::path& manifest);

// Every property the suite checks for one entry: correctness, branch oracle,
// confluence and noninterference over all input pairs and seeds (or, for
// negative programs, that the run stops with ObliviousFault).
std::vector<CheckResult> check_entry(const Corpus& corpus, const CorpusEntry& entry, const RunOptions& options,
                                     const std::vector<std::uint64_t>& seeds);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smc2
