#include "posthoc.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "posthoc/config_io.hpp"
#include "posthoc/emit.hpp"
#include "posthoc/errors.hpp"
#include "posthoc/oracle.hpp"
#include "posthoc/plot.hpp"
#include "posthoc/sweep.hpp"
#include "posthoc/validate.hpp"
#include "posthoc/version.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ph_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const posthoc::ConfigError& e) {
    g_last_error = e.what();
    return PH_ERR_CONFIG;
  } catch (const posthoc::BudgetError& e) {
    g_last_error = e.what();
    return PH_ERR_BUDGET;
  } catch (const posthoc::InsufficientDataError& e) {
    g_last_error = e.what();
    return PH_ERR_INSUFFICIENT_DATA;
  } catch (const posthoc::PreconditionError& e) {
    g_last_error = e.what();
    return PH_ERR_PRECONDITION;
  } catch (const posthoc::IoError& e) {
    g_last_error = e.what();
    return PH_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PH_ERR_INTERNAL;
  }
}

ph_status fail_precondition(const char* msg) {
  g_last_error = msg;
  return PH_ERR_PRECONDITION;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct ph_config {
  ph_config_kind kind = PH_CONFIG_MODEL;
  std::string name;  // preset name, or the generic job noun
  std::vector<std::string> defaults_applied;

  // PH_CONFIG_MODEL / PH_CONFIG_SWEEP (trials and seed live inside)
  posthoc::SweepConfig run;

  // PH_CONFIG_SCATTER / PH_CONFIG_HISTOGRAM
  posthoc::ScatterJob scatter;
  posthoc::HistogramJob histogram;
  std::uint64_t job_seed = 42;

  // PH_CONFIG_ORACLE
  posthoc::ParsedOracleConfig oracle;

  // The resolved config as a plain run config (for digests of the job kinds).
  posthoc::SweepConfig as_run_config() const {
    switch (kind) {
      case PH_CONFIG_MODEL:
      case PH_CONFIG_SWEEP:
        return run;
      case PH_CONFIG_SCATTER: {
        posthoc::SweepConfig c;
        c.base = scatter.model;
        c.n_trials = scatter.n_pairs;
        c.master_seed = job_seed;
        return c;
      }
      case PH_CONFIG_HISTOGRAM: {
        posthoc::SweepConfig c;
        c.base = histogram.model;
        c.n_trials = histogram.n_trials;
        c.master_seed = job_seed;
        return c;
      }
      case PH_CONFIG_ORACLE:
        break;
    }
    return run;
  }
};

struct ph_result {
  ph_config_kind kind = PH_CONFIG_MODEL;
  std::uint64_t seed = 0;
  std::string digest;
  std::vector<std::string> defaults_applied;

  // PH_CONFIG_MODEL
  posthoc::DecompositionReport report;
  double sd_mu = 0.0;
  double sd_mu_hat = 0.0;

  // PH_CONFIG_SWEEP
  posthoc::SweepResult sweep;
  std::optional<double> crossing;

  // PH_CONFIG_SCATTER / PH_CONFIG_HISTOGRAM
  posthoc::ScatterData scatter;
  posthoc::HistogramData histogram;

  // PH_CONFIG_ORACLE
  posthoc::ExactReport exact;
  bool has_zscores = false;
  std::vector<posthoc::ZScore> zscores;
  bool has_mc_report = false;
  posthoc::DecompositionReport mc_report;
};

extern "C" {

const char* ph_engine_version(void) { return posthoc::kEngineVersion; }

const char* ph_last_error(void) { return g_last_error.c_str(); }

void ph_string_free(char* s) { delete[] s; }

ph_status ph_config_parse(const char* json_text, ph_config** out) {
  if (json_text == nullptr || out == nullptr) {
    return fail_precondition("ph_config_parse: null argument");
  }
  return guarded([&]() {
    const posthoc::ParsedConfig parsed = posthoc::parse_config(json_text);
    auto* cfg = new ph_config();
    cfg->kind = parsed.is_sweep ? PH_CONFIG_SWEEP : PH_CONFIG_MODEL;
    cfg->name = parsed.is_sweep ? "sweep" : "simulate";
    cfg->run = parsed.config;
    cfg->defaults_applied = parsed.defaults_applied;
    *out = cfg;
    return PH_OK;
  });
}

ph_status ph_config_load(const char* path, ph_config** out) {
  if (path == nullptr || out == nullptr) {
    return fail_precondition("ph_config_load: null argument");
  }
  return guarded([&]() {
    const posthoc::ParsedConfig parsed = posthoc::parse_config_file(path);
    auto* cfg = new ph_config();
    cfg->kind = parsed.is_sweep ? PH_CONFIG_SWEEP : PH_CONFIG_MODEL;
    cfg->name = parsed.is_sweep ? "sweep" : "simulate";
    cfg->run = parsed.config;
    cfg->defaults_applied = parsed.defaults_applied;
    *out = cfg;
    return PH_OK;
  });
}

ph_status ph_config_preset(const char* name, ph_config** out) {
  if (name == nullptr || out == nullptr) {
    return fail_precondition("ph_config_preset: null argument");
  }
  return guarded([&]() {
    const posthoc::FigurePreset preset = posthoc::figure_preset(name);
    auto* cfg = new ph_config();
    cfg->name = preset.name;
    switch (preset.kind) {
      case posthoc::FigureKind::scatter:
        cfg->kind = PH_CONFIG_SCATTER;
        cfg->scatter = preset.scatter;
        break;
      case posthoc::FigureKind::histogram:
        cfg->kind = PH_CONFIG_HISTOGRAM;
        cfg->histogram = preset.histogram;
        break;
      case posthoc::FigureKind::sweep:
        cfg->kind = PH_CONFIG_SWEEP;
        cfg->run = preset.sweep;
        break;
    }
    *out = cfg;
    return PH_OK;
  });
}

ph_status ph_oracle_config_parse(const char* json_text, ph_config** out) {
  if (json_text == nullptr || out == nullptr) {
    return fail_precondition("ph_oracle_config_parse: null argument");
  }
  return guarded([&]() {
    auto* cfg = new ph_config();
    cfg->kind = PH_CONFIG_ORACLE;
    cfg->name = "oracle";
    cfg->oracle = posthoc::parse_oracle_config(json_text);
    cfg->defaults_applied = cfg->oracle.defaults_applied;
    *out = cfg;
    return PH_OK;
  });
}

ph_status ph_oracle_config_load(const char* path, ph_config** out) {
  if (path == nullptr || out == nullptr) {
    return fail_precondition("ph_oracle_config_load: null argument");
  }
  return guarded([&]() {
    auto* cfg = new ph_config();
    cfg->kind = PH_CONFIG_ORACLE;
    cfg->name = "oracle";
    cfg->oracle = posthoc::parse_oracle_config_file(path);
    cfg->defaults_applied = cfg->oracle.defaults_applied;
    *out = cfg;
    return PH_OK;
  });
}

void ph_config_free(ph_config* config) { delete config; }

ph_status ph_config_kind_of(const ph_config* config, ph_config_kind* out) {
  if (config == nullptr || out == nullptr) {
    return fail_precondition("ph_config_kind_of: null argument");
  }
  *out = config->kind;
  return PH_OK;
}

ph_status ph_config_set_seed(ph_config* config, uint64_t seed) {
  if (config == nullptr) return fail_precondition("ph_config_set_seed: null config");
  switch (config->kind) {
    case PH_CONFIG_MODEL:
    case PH_CONFIG_SWEEP:
      config->run.master_seed = seed;
      break;
    case PH_CONFIG_SCATTER:
    case PH_CONFIG_HISTOGRAM:
      config->job_seed = seed;
      break;
    case PH_CONFIG_ORACLE:
      config->oracle.seed = seed;
      break;
  }
  return PH_OK;
}

ph_status ph_config_set_trials(ph_config* config, int64_t trials) {
  if (config == nullptr) return fail_precondition("ph_config_set_trials: null config");
  if (trials < 1) {
    g_last_error = "trials must be positive";
    return PH_ERR_CONFIG;
  }
  switch (config->kind) {
    case PH_CONFIG_MODEL:
    case PH_CONFIG_SWEEP:
      config->run.n_trials = trials;
      break;
    case PH_CONFIG_SCATTER:
      config->scatter.n_pairs = trials;
      break;
    case PH_CONFIG_HISTOGRAM:
      config->histogram.n_trials = trials;
      break;
    case PH_CONFIG_ORACLE:
      config->oracle.trials = trials;
      break;
  }
  return PH_OK;
}

ph_status ph_config_digest(const ph_config* config, char** out_hex) {
  if (config == nullptr || out_hex == nullptr) {
    return fail_precondition("ph_config_digest: null argument");
  }
  return guarded([&]() {
    const std::string digest =
        config->kind == PH_CONFIG_ORACLE
            ? posthoc::oracle_config_digest(config->oracle)
            : posthoc::config_digest(config->as_run_config());
    *out_hex = dup_string(digest);
    return PH_OK;
  });
}

ph_status ph_config_to_json(const ph_config* config, char** out_json) {
  if (config == nullptr || out_json == nullptr) {
    return fail_precondition("ph_config_to_json: null argument");
  }
  return guarded([&]() {
    const std::string text =
        config->kind == PH_CONFIG_ORACLE
            ? posthoc::serialize_oracle_config(config->oracle)
            : posthoc::serialize_config(config->as_run_config());
    *out_json = dup_string(text);
    return PH_OK;
  });
}

ph_status ph_run(const ph_config* config, int workers, ph_result** out) {
  if (config == nullptr || out == nullptr) {
    return fail_precondition("ph_run: null argument");
  }
  return guarded([&]() {
    auto result = std::make_unique<ph_result>();
    result->kind = config->kind;
    result->defaults_applied = config->defaults_applied;
    switch (config->kind) {
      case PH_CONFIG_MODEL: {
        result->seed = config->run.master_seed;
        result->digest = posthoc::config_digest(config->run);
        result->report = posthoc::run_single(config->run.base, config->run.n_trials,
                                             {config->run.master_seed, 0}, workers);
        result->sd_mu = config->run.base.universe.mu_dist.sd();
        result->sd_mu_hat = std::sqrt(config->run.base.universe.mu_dist.variance() +
                                      config->run.base.universe.eps_dist.variance());
        break;
      }
      case PH_CONFIG_SWEEP: {
        result->seed = config->run.master_seed;
        result->digest = posthoc::config_digest(config->run);
        result->sweep = posthoc::run_sweep(config->run, workers);
        try {
          result->crossing = posthoc::find_crossing(result->sweep);
        } catch (const posthoc::PreconditionError&) {
          result->crossing = std::nullopt;  // not enough defined points
        }
        break;
      }
      case PH_CONFIG_SCATTER: {
        result->seed = config->job_seed;
        result->digest = posthoc::config_digest(config->as_run_config());
        result->scatter = posthoc::run_scatter(config->scatter, {config->job_seed, 0});
        break;
      }
      case PH_CONFIG_HISTOGRAM: {
        result->seed = config->job_seed;
        result->digest = posthoc::config_digest(config->as_run_config());
        result->histogram =
            posthoc::run_histogram(config->histogram, {config->job_seed, 0});
        result->sd_mu = config->histogram.model.universe.mu_dist.sd();
        result->sd_mu_hat =
            std::sqrt(config->histogram.model.universe.mu_dist.variance() +
                      config->histogram.model.universe.eps_dist.variance());
        break;
      }
      case PH_CONFIG_ORACLE: {
        result->seed = config->oracle.seed;
        result->digest = posthoc::oracle_config_digest(config->oracle);
        if (config->oracle.random_mu) {
          result->exact = posthoc::enumerate_exact(config->oracle.random);
        } else {
          result->exact = posthoc::enumerate_exact(config->oracle.fixed);
          if (config->oracle.trials >= 10000) {
            result->zscores = posthoc::mc_vs_oracle(
                config->oracle.fixed, config->oracle.trials, {config->oracle.seed, 0});
            result->has_zscores = true;
            result->mc_report = posthoc::mc_report_fixed_mu(
                config->oracle.fixed, config->oracle.trials, {config->oracle.seed, 0});
            result->has_mc_report = true;
          }
        }
        break;
      }
    }
    *out = result.release();
    return PH_OK;
  });
}

ph_status ph_result_to_json(const ph_result* result, char** out) {
  if (result == nullptr || out == nullptr) {
    return fail_precondition("ph_result_to_json: null argument");
  }
  return guarded([&]() {
    std::string text;
    switch (result->kind) {
      case PH_CONFIG_MODEL:
        text = posthoc::report_to_json(result->report);
        break;
      case PH_CONFIG_SWEEP:
        text = posthoc::sweep_to_json(result->sweep, result->crossing);
        break;
      case PH_CONFIG_SCATTER:
        text = posthoc::scatter_to_json(result->scatter);
        break;
      case PH_CONFIG_HISTOGRAM:
        text = posthoc::histogram_to_json(result->histogram);
        break;
      case PH_CONFIG_ORACLE:
        text = posthoc::oracle_to_json(result->exact,
                                       result->has_zscores ? &result->zscores : nullptr,
                                       result->has_mc_report ? &result->mc_report
                                                             : nullptr);
        break;
    }
    *out = dup_string(text);
    return PH_OK;
  });
}

ph_status ph_result_to_csv(const ph_result* result, char** out) {
  if (result == nullptr || out == nullptr) {
    return fail_precondition("ph_result_to_csv: null argument");
  }
  return guarded([&]() {
    std::string text;
    switch (result->kind) {
      case PH_CONFIG_MODEL:
        text = posthoc::report_to_csv(result->report, result->sd_mu, result->sd_mu_hat);
        break;
      case PH_CONFIG_SWEEP:
        text = posthoc::sweep_to_csv(result->sweep);
        break;
      case PH_CONFIG_SCATTER:
        text = posthoc::scatter_to_csv(result->scatter);
        break;
      case PH_CONFIG_HISTOGRAM:
        text = result->histogram.report_ok
                   ? posthoc::report_to_csv(result->histogram.report, result->sd_mu,
                                            result->sd_mu_hat)
                   : posthoc::failed_report_to_csv(result->histogram.report_reason,
                                                   result->sd_mu, result->sd_mu_hat);
        break;
      case PH_CONFIG_ORACLE:
        text = posthoc::zscores_to_csv(result->zscores);
        break;
    }
    *out = dup_string(text);
    return PH_OK;
  });
}

ph_status ph_result_emit(const ph_result* result, const char* out_dir, const char* stem,
                         int formats, int with_plots, const char* command,
                         char** manifest_path_out) {
  if (result == nullptr || out_dir == nullptr || stem == nullptr) {
    return fail_precondition("ph_result_emit: null argument");
  }
  return guarded([&]() {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      throw posthoc::IoError("cannot create output directory " + std::string(out_dir) +
                             ": " + ec.message());
    }
    const fs::path dir(out_dir);

    posthoc::RunManifest manifest;
    manifest.command = command != nullptr ? command : "";
    manifest.config_digest = result->digest;
    manifest.master_seed = result->seed;
    manifest.engine_version = posthoc::kEngineVersion;
    manifest.defaults_applied = result->defaults_applied;
    manifest.timestamp = posthoc::iso8601_utc_now();

    const auto write_out = [&](const std::string& name, const std::string& content) {
      const std::string path = (dir / name).string();
      posthoc::write_text_file_atomic(path, content);
      manifest.outputs.push_back(path);
    };

    if ((formats & PH_FORMAT_CSV) != 0) {
      char* csv = nullptr;
      const ph_status st = ph_result_to_csv(result, &csv);
      if (st != PH_OK) return st;
      write_out(std::string(stem) + ".csv", csv);
      ph_string_free(csv);
    }
    if ((formats & PH_FORMAT_JSON) != 0) {
      char* js = nullptr;
      const ph_status st = ph_result_to_json(result, &js);
      if (st != PH_OK) return st;
      write_out(std::string(stem) + ".json", js);
      ph_string_free(js);
    }

    if (with_plots != 0) {
      posthoc::PlotWarnings warnings;
      switch (result->kind) {
        case PH_CONFIG_SCATTER:
          write_out(std::string(stem) + ".svg",
                    posthoc::scatter_svg(result->scatter, warnings));
          break;
        case PH_CONFIG_HISTOGRAM: {
          const posthoc::HistogramData& h = result->histogram;
          write_out(std::string(stem) + "_all.svg",
                    posthoc::histogram_pair_svg(h.all_O, h.all_D, h.hurdle,
                                                "Measured quality of selected ideas "
                                                "(all trials)",
                                                warnings));
          write_out(std::string(stem) + "_published.svg",
                    posthoc::histogram_pair_svg(h.pub_O, h.pub_D, h.hurdle,
                                                "Measured quality of selected ideas "
                                                "(published only)",
                                                warnings));
          break;
        }
        case PH_CONFIG_SWEEP:
          write_out(std::string(stem) + ".svg",
                    posthoc::sweep_svg(result->sweep, result->crossing, warnings));
          break;
        case PH_CONFIG_MODEL:
        case PH_CONFIG_ORACLE:
          warnings.push_back("this result kind has no chart; plot flag ignored");
          break;
      }
      manifest.warnings.insert(manifest.warnings.end(), warnings.begin(),
                               warnings.end());
    }

    const std::string manifest_path = (dir / (std::string(stem) + "_manifest.json")).string();
    posthoc::write_text_file_atomic(manifest_path, posthoc::manifest_to_json(manifest));
    if (manifest_path_out != nullptr) *manifest_path_out = dup_string(manifest_path);
    return PH_OK;
  });
}

void ph_result_free(ph_result* result) { delete result; }

ph_status ph_validate(int quick, uint64_t seed, int workers, char** out_report,
                      int* out_n_failed) {
  if (out_report == nullptr || out_n_failed == nullptr) {
    return fail_precondition("ph_validate: null argument");
  }
  return guarded([&]() {
    const posthoc::ValidationOutcome outcome =
        posthoc::run_validation(quick != 0, seed, workers);
    *out_report = dup_string(outcome.text());
    *out_n_failed = outcome.n_failed();
    return PH_OK;
  });
}

}  // extern "C"
