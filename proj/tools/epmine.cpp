#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "episode_miner/episode_miner.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConsistency = 3;

struct StreamDeleter {
  void operator()(epm_stream* s) const { epm_stream_free(s); }
};
struct ResultDeleter {
  void operator()(epm_result* r) const { epm_result_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { epm_string_free(s); }
};
using StreamPtr = std::unique_ptr<epm_stream, StreamDeleter>;
using ResultPtr = std::unique_ptr<epm_result, ResultDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct Failure {
  int exit_code;
};

// Library failures are input errors except for broken internal invariants.
void check(epm_status status) {
  if (status == EPM_OK) return;
  std::cerr << "error: " << epm_status_name(status) << ": " << epm_last_error() << '\n';
  const bool internal = status == EPM_NO_JOIN || status == EPM_INTERNAL;
  throw Failure{internal ? kExitConsistency : kExitInput};
}

std::string take(char* s) {
  OwnedString owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

StreamPtr load(const std::string& path, bool sort) {
  epm_stream* s = nullptr;
  check(epm_stream_load(path.c_str(), sort ? 1 : 0, &s));
  return StreamPtr(s);
}

epm_strategy parse_strategy(const std::string& name) {
  if (name == "auto") return EPM_STRATEGY_AUTO;
  if (name == "episode") return EPM_STRATEGY_EPISODE_PARALLEL;
  return EPM_STRATEGY_SEGMENT_PARALLEL;
}

ResultPtr run_mine(const epm_stream* stream, const epm_mine_options& options) {
  epm_result* r = nullptr;
  check(epm_mine(stream, &options, &r));
  return ResultPtr(r);
}

void print_summary(const epm_result* result) {
  const auto reports = nlohmann::json::parse(take([&] {
    char* json = nullptr;
    check(epm_result_report_json(result, &json));
    return json;
  }()));
  for (const auto& r : reports) {
    std::fprintf(stderr, "level %zu: %zu candidates", r["level"].get<std::size_t>(),
                 r["candidates"].get<std::size_t>());
    if (r["two_pass"].get<bool>()) {
      std::fprintf(stderr, ", %zu eliminated by relaxed pass (%.3fs, %s)",
                   r["eliminated_first_pass"].get<std::size_t>(), r["first_pass_seconds"].get<double>(),
                   r["first_pass_strategy"].get<std::string>().c_str());
    }
    std::fprintf(stderr, ", %zu exact-counted (%.3fs, %s), %zu frequent\n", r["survivors"].get<std::size_t>(),
                 r["second_pass_seconds"].get<double>(), r["second_pass_strategy"].get<std::string>().c_str(),
                 r["frequent"].get<std::size_t>());
  }
}

std::string result_tsv(const epm_result* result) {
  char* tsv = nullptr;
  check(epm_result_tsv(result, &tsv));
  return take(tsv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequent serial episode mining with inter-event constraints"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(epm_version()));

  bool sort = false;
  app.add_flag("--sort", sort, "Sort input events by time instead of rejecting unsorted files");

  // mine
  auto* mine = app.add_subcommand("mine", "Level-wise mining; TSV table on stdout, counting report on stderr");
  std::string mine_file, mine_constraints, mine_strategy = "auto";
  std::uint64_t mine_threshold = 1;
  std::size_t mine_max_level = 0, mine_segments = 0, mine_workers = 0;
  bool mine_one_pass = false;
  mine->add_option("stream", mine_file, "Event stream file")->required();
  mine->add_option("--constraints", mine_constraints, "Allowed inter-event intervals, e.g. \"(5,10];(10,15]\"")
      ->required();
  mine->add_option("--threshold", mine_threshold, "Minimum non-overlapped count")
      ->required()
      ->check(CLI::PositiveNumber);
  mine->add_option("--max-level", mine_max_level, "Largest episode size to mine (0 = no limit)");
  mine->add_option("--segments", mine_segments, "Stream segments for segment-parallel counting (power of two)");
  mine->add_flag("--one-pass", mine_one_pass, "Skip relaxed elimination and count every candidate exactly");
  mine->add_option("--workers", mine_workers, "Worker threads (0 = all cores)");
  mine->add_option("--strategy", mine_strategy, "Counting strategy")
      ->check(CLI::IsMember({"auto", "episode", "segment"}));

  // count
  auto* count = app.add_subcommand("count", "Count non-overlapped occurrences of one episode");
  std::string count_file, count_episode;
  bool count_relaxed = false;
  std::size_t count_segments = 0, count_workers = 0;
  count->add_option("stream", count_file, "Event stream file")->required();
  count->add_option("--episode", count_episode, "Episode, e.g. \"A -(5,10]-> B\"")->required();
  auto* relaxed_flag = count->add_flag("--relaxed", count_relaxed, "Use the relaxed counter (lower bounds must be 0)");
  count->add_option("--segments", count_segments, "Count through P segment summaries and cross-check")
      ->excludes(relaxed_flag);
  count->add_option("--workers", count_workers, "Worker threads (0 = all cores)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic spike train with embedded causal chains");
  epm_gen_options gen_options;
  epm_gen_options_init(&gen_options);
  std::vector<std::string> gen_chains;
  std::string gen_out, gen_ledger;
  gen->add_option("--neurons", gen_options.neurons, "Number of neurons")->check(CLI::PositiveNumber);
  gen->add_option("--rate", gen_options.basal_rate, "Basal firing rate in Hz");
  gen->add_option("--duration", gen_options.duration, "Duration in seconds");
  gen->add_option("--chain", gen_chains, "Causal chain, e.g. \"A>B>C@(0.001,0.005]p0.9\" (repeatable)");
  gen->add_option("--seed", gen_options.seed, "PRNG seed");
  gen->add_option("-o,--output", gen_out, "Output stream file")->required();
  gen->add_option("--ledger", gen_ledger, "Injection ledger file (default: <output>.ledger.json)");

  // bench
  auto* bench = app.add_subcommand("bench", "Per-level timing of counting configurations");
  std::string bench_file, bench_constraints = "(0.001,0.005]";
  std::size_t bench_levels = 3, bench_segments = 0, bench_workers = 0;
  std::uint64_t bench_threshold = 50;
  bench->add_option("stream", bench_file, "Event stream file")->required();
  bench->add_option("--levels", bench_levels, "Largest episode size")->check(CLI::PositiveNumber);
  bench->add_option("--constraints", bench_constraints, "Allowed inter-event intervals")->capture_default_str();
  bench->add_option("--threshold", bench_threshold, "Minimum non-overlapped count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--segments", bench_segments, "Stream segments (power of two)");
  bench->add_option("--workers", bench_workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*mine) {
      const StreamPtr stream = load(mine_file, sort);
      epm_mine_options options;
      epm_mine_options_init(&options);
      options.constraints = mine_constraints.c_str();
      options.threshold = mine_threshold;
      options.max_level = mine_max_level;
      options.segments = mine_segments;
      options.workers = mine_workers;
      options.one_pass = mine_one_pass ? 1 : 0;
      options.strategy = parse_strategy(mine_strategy);
      const ResultPtr result = run_mine(stream.get(), options);
      std::cout << result_tsv(result.get());
      print_summary(result.get());
    } else if (*count) {
      const StreamPtr stream = load(count_file, sort);
      std::uint64_t n = 0;
      if (count_relaxed) {
        check(epm_count(stream.get(), count_episode.c_str(), EPM_COUNT_RELAXED, 0, count_workers, &n));
      } else if (count->count("--segments") > 0) {
        std::uint64_t serial = 0;
        check(epm_count(stream.get(), count_episode.c_str(), EPM_COUNT_SEGMENTED, count_segments, count_workers, &n));
        check(epm_count(stream.get(), count_episode.c_str(), EPM_COUNT_SERIAL, 0, 0, &serial));
        if (n != serial) {
          std::cerr << "consistency failure: segmented count " << n << " != serial count " << serial << " for "
                    << count_episode << " with " << count_segments << " segments\n";
          return kExitConsistency;
        }
      } else {
        check(epm_count(stream.get(), count_episode.c_str(), EPM_COUNT_SERIAL, 0, 0, &n));
      }
      std::cout << n << '\n';
    } else if (*gen) {
      std::vector<const char*> chains;
      for (const auto& c : gen_chains) chains.push_back(c.c_str());
      gen_options.chains = chains.data();
      gen_options.chain_count = chains.size();
      epm_stream* raw = nullptr;
      check(epm_generate(&gen_options, &raw));
      const StreamPtr stream(raw);
      check(epm_stream_save(stream.get(), gen_out.c_str()));

      char* json = nullptr;
      check(epm_stream_ledger_json(stream.get(), &json));
      const std::string ledger = take(json);
      const std::string ledger_path = gen_ledger.empty() ? gen_out + ".ledger.json" : gen_ledger;
      std::FILE* f = std::fopen(ledger_path.c_str(), "wb");
      if (!f || std::fputs(ledger.c_str(), f) < 0 || std::fputc('\n', f) == EOF || std::fclose(f) != 0) {
        std::cerr << "error: cannot write " << ledger_path << '\n';
        return kExitInput;
      }
      std::cerr << "wrote " << epm_stream_size(stream.get()) << " events to " << gen_out << ", ledger to "
                << ledger_path << '\n';
    } else if (*bench) {
      const StreamPtr stream = load(bench_file, sort);
      struct Config {
        const char* name;
        int one_pass;
        epm_strategy strategy;
      };
      const Config configs[] = {
          {"two-pass/episode", 0, EPM_STRATEGY_EPISODE_PARALLEL},
          {"two-pass/segment", 0, EPM_STRATEGY_SEGMENT_PARALLEL},
          {"one-pass/episode", 1, EPM_STRATEGY_EPISODE_PARALLEL},
          {"one-pass/segment", 1, EPM_STRATEGY_SEGMENT_PARALLEL},
      };
      std::string reference;
      std::cout << "config\tlevel\tcandidates\teliminated\tfrequent\tfirst_pass_s\tsecond_pass_s\n";
      for (const auto& config : configs) {
        epm_mine_options options;
        epm_mine_options_init(&options);
        options.constraints = bench_constraints.c_str();
        options.threshold = bench_threshold;
        options.max_level = bench_levels;
        options.segments = bench_segments;
        options.workers = bench_workers;
        options.one_pass = config.one_pass;
        options.strategy = config.strategy;
        const ResultPtr result = run_mine(stream.get(), options);

        const std::string tsv = result_tsv(result.get());
        if (reference.empty()) {
          reference = tsv;
        } else if (tsv != reference) {
          std::cerr << "consistency failure: " << config.name << " produced a different result table\n";
          return kExitConsistency;
        }
        char* json = nullptr;
        check(epm_result_report_json(result.get(), &json));
        for (const auto& r : nlohmann::json::parse(take(json))) {
          std::printf("%s\t%zu\t%zu\t%zu\t%zu\t%.6f\t%.6f\n", config.name, r["level"].get<std::size_t>(),
                      r["candidates"].get<std::size_t>(), r["eliminated_first_pass"].get<std::size_t>(),
                      r["frequent"].get<std::size_t>(), r["first_pass_seconds"].get<double>(),
                      r["second_pass_seconds"].get<double>());
        }
      }
    }
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kExitOk;
}
