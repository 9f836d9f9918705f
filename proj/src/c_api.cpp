#include "episode_miner/episode_miner.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "episode_miner/dispatch.hpp"
#include "episode_miner/miner.hpp"
#include "episode_miner/relaxed_counter.hpp"
#include "episode_miner/segmented_counter.hpp"
#include "episode_miner/serial_counter.hpp"
#include "episode_miner/synth.hpp"
#include "episode_miner/text_format.hpp"
#include "episode_miner/two_pass.hpp"

struct epm_stream {
  epm::EventStream stream;
  std::vector<std::string> chains;
  std::vector<epm::ChainLedger> ledger;
};

struct epm_result {
  struct Row {
    std::size_t level;
    std::string episode;
    std::uint64_t count;
  };
  std::vector<Row> rows;
  std::vector<epm::PassReport> reports;
};

namespace {

thread_local std::string last_error;
thread_local std::int64_t last_position = -1;

epm_status to_status(epm::ErrorCode code) {
  switch (code) {
    case epm::ErrorCode::InvalidArgument: return EPM_INVALID_ARGUMENT;
    case epm::ErrorCode::UnsortedStream: return EPM_UNSORTED_STREAM;
    case epm::ErrorCode::UnknownSymbol: return EPM_UNKNOWN_SYMBOL;
    case epm::ErrorCode::InvalidTimestamp: return EPM_INVALID_TIMESTAMP;
    case epm::ErrorCode::MalformedLine: return EPM_MALFORMED_LINE;
    case epm::ErrorCode::ParseError: return EPM_PARSE_ERROR;
    case epm::ErrorCode::EmptyStream: return EPM_EMPTY_STREAM;
    case epm::ErrorCode::RelaxationRequired: return EPM_RELAXATION_REQUIRED;
    case epm::ErrorCode::DegenerateFit: return EPM_DEGENERATE_FIT;
    case epm::ErrorCode::NoJoin: return EPM_NO_JOIN;
    case epm::ErrorCode::InstanceTooLarge: return EPM_INSTANCE_TOO_LARGE;
    case epm::ErrorCode::Io: return EPM_IO;
  }
  return EPM_INTERNAL;
}

epm_status fail(epm_status status, std::string message, std::int64_t position = -1) {
  last_error = std::move(message);
  last_position = position;
  return status;
}

// Runs `body`, translating every exception into a status code.
template <typename F>
epm_status guarded(F&& body) {
  last_error.clear();
  last_position = -1;
  try {
    body();
    return EPM_OK;
  } catch (const epm::Error& e) {
    return fail(to_status(e.code()), e.what(), e.position() ? static_cast<std::int64_t>(*e.position()) : -1);
  } catch (const std::bad_alloc&) {
    return fail(EPM_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(EPM_INTERNAL, e.what());
  } catch (...) {
    return fail(EPM_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw epm::Error(epm::ErrorCode::InvalidArgument, what);
}

std::optional<epm::Strategy> to_strategy(epm_strategy s) {
  switch (s) {
    case EPM_STRATEGY_AUTO: return std::nullopt;
    case EPM_STRATEGY_EPISODE_PARALLEL: return epm::Strategy::EpisodeParallel;
    case EPM_STRATEGY_SEGMENT_PARALLEL: return epm::Strategy::SegmentParallel;
  }
  throw epm::Error(epm::ErrorCode::InvalidArgument, "unknown strategy");
}

epm_strategy from_strategy(epm::Strategy s) {
  return s == epm::Strategy::EpisodeParallel ? EPM_STRATEGY_EPISODE_PARALLEL : EPM_STRATEGY_SEGMENT_PARALLEL;
}

nlohmann::json report_json(const epm::PassReport& r) {
  nlohmann::json j = {
      {"level", r.level},
      {"candidates", r.candidates_in},
      {"eliminated_first_pass", r.eliminated_first_pass},
      {"survivors", r.survivors},
      {"frequent", r.final_frequent},
      {"two_pass", r.two_pass},
      {"first_pass_seconds", r.first_pass_seconds},
      {"second_pass_seconds", r.second_pass_seconds},
      {"second_pass_strategy", epm::to_string(r.second_pass_strategy)},
  };
  j["first_pass_strategy"] = r.first_pass_strategy ? nlohmann::json(epm::to_string(*r.first_pass_strategy))
                                                   : nlohmann::json(nullptr);
  return j;
}

}  // namespace

extern "C" {

const char* epm_last_error(void) { return last_error.c_str(); }

int64_t epm_last_error_position(void) { return last_position; }

const char* epm_status_name(epm_status status) {
  switch (status) {
    case EPM_OK: return "Ok";
    case EPM_INVALID_ARGUMENT: return "InvalidArgument";
    case EPM_UNSORTED_STREAM: return "UnsortedStream";
    case EPM_UNKNOWN_SYMBOL: return "UnknownSymbol";
    case EPM_INVALID_TIMESTAMP: return "InvalidTimestamp";
    case EPM_MALFORMED_LINE: return "MalformedLine";
    case EPM_PARSE_ERROR: return "ParseError";
    case EPM_EMPTY_STREAM: return "EmptyStream";
    case EPM_RELAXATION_REQUIRED: return "RelaxationRequired";
    case EPM_DEGENERATE_FIT: return "DegenerateFit";
    case EPM_NO_JOIN: return "NoJoin";
    case EPM_INSTANCE_TOO_LARGE: return "InstanceTooLarge";
    case EPM_IO: return "Io";
    case EPM_INTERNAL: return "Internal";
    case EPM_OUT_OF_MEMORY: return "OutOfMemory";
  }
  return "Unknown";
}

const char* epm_version(void) { return "0.1.0"; }

void epm_string_free(char* s) { std::free(s); }

epm_status epm_stream_parse(const char* text, size_t length, int sort, epm_stream** out) {
  return guarded([&] {
    require(out != nullptr && (text != nullptr || length == 0), "null argument");
    auto s = std::make_unique<epm_stream>();
    s->stream = epm::parse_stream(std::string_view(text ? text : "", length), {sort != 0});
    *out = s.release();
  });
}

epm_status epm_stream_load(const char* path, int sort, epm_stream** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto s = std::make_unique<epm_stream>();
    s->stream = epm::load_stream(path, {sort != 0});
    *out = s.release();
  });
}

epm_status epm_stream_save(const epm_stream* stream, const char* path) {
  return guarded([&] {
    require(stream != nullptr && path != nullptr, "null argument");
    epm::save_stream(path, stream->stream);
  });
}

epm_status epm_stream_write(const epm_stream* stream, char** out_text) {
  return guarded([&] {
    require(stream != nullptr && out_text != nullptr, "null argument");
    *out_text = dup_string(epm::write_stream(stream->stream));
  });
}

size_t epm_stream_size(const epm_stream* stream) { return stream ? stream->stream.size() : 0; }

size_t epm_stream_alphabet_size(const epm_stream* stream) { return stream ? stream->stream.alphabet().size() : 0; }

epm_status epm_stream_ledger_json(const epm_stream* stream, char** out_json) {
  return guarded([&] {
    require(stream != nullptr && out_json != nullptr, "null argument");
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < stream->ledger.size(); ++i) {
      const auto& l = stream->ledger[i];
      j.push_back({{"chain", stream->chains[i]},
                   {"source_spikes", l.source_spikes},
                   {"injected_spikes", l.injected_spikes},
                   {"complete", l.complete},
                   {"non_overlapped", l.non_overlapped}});
    }
    *out_json = dup_string(j.dump(2));
  });
}

void epm_stream_free(epm_stream* stream) { delete stream; }

void epm_gen_options_init(epm_gen_options* options) {
  if (!options) return;
  const epm::GeneratorConfig defaults;
  options->neurons = defaults.neurons;
  options->basal_rate = defaults.basal_rate;
  options->duration = defaults.duration;
  options->seed = defaults.seed;
  options->chains = nullptr;
  options->chain_count = 0;
}

epm_status epm_generate(const epm_gen_options* options, epm_stream** out) {
  return guarded([&] {
    require(options != nullptr && out != nullptr, "null argument");
    require(options->chain_count == 0 || options->chains != nullptr, "null chain list");
    require(options->neurons > 0, "neuron count must be positive");
    epm::GeneratorConfig config;
    config.neurons = options->neurons;
    config.basal_rate = options->basal_rate;
    config.duration = options->duration;
    config.seed = options->seed;
    auto s = std::make_unique<epm_stream>();
    for (std::size_t i = 0; i < options->chain_count; ++i) {
      require(options->chains[i] != nullptr, "null chain text");
      config.chains.push_back(epm::parse_chain(options->chains[i], config.neurons));
      s->chains.push_back(epm::write_chain(config.chains.back(), config.neurons));
    }
    epm::GeneratedStream generated = epm::generate(config);
    s->stream = std::move(generated.stream);
    s->ledger = std::move(generated.ledger);
    *out = s.release();
  });
}

epm_status epm_count(const epm_stream* stream, const char* episode, epm_count_mode mode, size_t segments,
                     size_t workers, uint64_t* out_count) {
  return guarded([&] {
    require(stream != nullptr && episode != nullptr && out_count != nullptr, "null argument");
    const epm::Episode ep = epm::parse_episode(episode, stream->stream.alphabet());
    switch (mode) {
      case EPM_COUNT_SERIAL:
        *out_count = epm::count_serial(ep, stream->stream).count;
        return;
      case EPM_COUNT_RELAXED:
        *out_count = epm::count_relaxed(ep, stream->stream).count;
        return;
      case EPM_COUNT_SEGMENTED: {
        epm::CountingOptions options;
        options.workers = workers;
        options.segments = segments;
        *out_count = epm::count_segmented(ep, stream->stream, epm::effective_segments(options), workers).count;
        return;
      }
    }
    throw epm::Error(epm::ErrorCode::InvalidArgument, "unknown count mode");
  });
}

epm_status epm_relax_episode(const epm_stream* stream, const char* episode, char** out_episode) {
  return guarded([&] {
    require(stream != nullptr && episode != nullptr && out_episode != nullptr, "null argument");
    const auto& alphabet = stream->stream.alphabet();
    *out_episode = dup_string(epm::write_episode(epm::relax(epm::parse_episode(episode, alphabet)), alphabet));
  });
}

void epm_mine_options_init(epm_mine_options* options) {
  if (!options) return;
  options->constraints = nullptr;
  options->threshold = 1;
  options->max_level = 0;
  options->segments = 0;
  options->workers = 0;
  options->one_pass = 0;
  options->strategy = EPM_STRATEGY_AUTO;
}

epm_status epm_mine(const epm_stream* stream, const epm_mine_options* options, epm_result** out) {
  return guarded([&] {
    require(stream != nullptr && options != nullptr && out != nullptr, "null argument");
    require(options->constraints != nullptr, "constraints are required");
    epm::MiningConfig config;
    config.threshold = options->threshold;
    config.constraints = epm::parse_constraints(options->constraints);
    if (options->max_level) config.max_level = options->max_level;
    config.segments = options->segments;
    config.workers = options->workers;
    config.one_pass = options->one_pass != 0;
    config.forced_strategy = to_strategy(options->strategy);

    const epm::MiningResult mined = epm::mine(stream->stream, config);
    auto r = std::make_unique<epm_result>();
    const auto& alphabet = stream->stream.alphabet();
    for (const auto& level : mined.levels) {
      for (const auto& ec : level.frequent) {
        r->rows.push_back({level.size, epm::write_episode(ec.episode, alphabet), ec.count});
      }
      r->reports.push_back(level.report);
    }
    *out = r.release();
  });
}

size_t epm_result_level_count(const epm_result* result) { return result ? result->reports.size() : 0; }

size_t epm_result_size(const epm_result* result) { return result ? result->rows.size() : 0; }

epm_status epm_result_row(const epm_result* result, size_t i, size_t* out_level, const char** out_episode,
                          uint64_t* out_count) {
  return guarded([&] {
    require(result != nullptr, "null result");
    require(i < result->rows.size(), "row index out of range");
    const auto& row = result->rows[i];
    if (out_level) *out_level = row.level;
    if (out_episode) *out_episode = row.episode.c_str();
    if (out_count) *out_count = row.count;
  });
}

epm_status epm_result_tsv(const epm_result* result, char** out_tsv) {
  return guarded([&] {
    require(result != nullptr && out_tsv != nullptr, "null argument");
    std::string tsv = "level\tepisode\tcount\n";
    for (const auto& row : result->rows) {
      tsv += std::to_string(row.level) + '\t' + row.episode + '\t' + std::to_string(row.count) + '\n';
    }
    *out_tsv = dup_string(tsv);
  });
}

epm_status epm_result_report_json(const epm_result* result, char** out_json) {
  return guarded([&] {
    require(result != nullptr && out_json != nullptr, "null argument");
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : result->reports) j.push_back(report_json(r));
    *out_json = dup_string(j.dump(2));
  });
}

void epm_result_free(epm_result* result) { delete result; }

void epm_dispatch_params_reference(epm_dispatch_params* params) {
  if (!params) return;
  const auto ref = epm::DispatchParams::gpu_reference();
  params->multiprocessors = ref.multiprocessors;
  params->blocks_per_multiprocessor = ref.blocks_per_multiprocessor;
  params->threads_per_block = ref.threads_per_block;
  params->f_a = ref.f_a;
  params->f_b = ref.f_b;
  params->use_reference_table = 1;
}

epm_status epm_choose_strategy(size_t candidates, size_t episode_size, const epm_dispatch_params* params,
                               epm_strategy* out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "null argument");
    epm::DispatchParams p;
    p.multiprocessors = params->multiprocessors;
    p.blocks_per_multiprocessor = params->blocks_per_multiprocessor;
    p.threads_per_block = params->threads_per_block;
    p.f_a = params->f_a;
    p.f_b = params->f_b;
    if (params->use_reference_table) p.crossover_table = epm::gpu_crossover_table();
    *out = from_strategy(epm::choose_strategy(candidates, episode_size, p));
  });
}

epm_status epm_fit_crossover(size_t multiprocessors, size_t blocks_per_multiprocessor, size_t threads_per_block,
                             epm_fit_form form, double* out_a, double* out_b, double* out_residual) {
  return guarded([&] {
    require(form == EPM_FIT_RECIPROCAL || form == EPM_FIT_LINEAR, "unknown fit form");
    const auto fit = epm::fit_crossover(epm::gpu_crossover_table(), multiprocessors, blocks_per_multiprocessor,
                                        threads_per_block,
                                        form == EPM_FIT_RECIPROCAL ? epm::FitForm::Reciprocal : epm::FitForm::Linear);
    if (out_a) *out_a = fit.a;
    if (out_b) *out_b = fit.b;
    if (out_residual) *out_residual = fit.residual;
  });
}

}  // extern "C"
