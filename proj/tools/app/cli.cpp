/*
 * Copyright 2026 The shapbox Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "app/cli.hpp"

#include <signal.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "app/engine.hpp"
#include "app/server.hpp"

namespace shapbox::app {
namespace {

struct EngineFlags {
  EngineConfig config;
  std::string background_mode = "full";
  std::string samples = "auto";

  void Register(CLI::App* cmd) {
    auto* model = cmd->add_option("--model", config.model_path, "Model JSON document");
    auto* command = cmd->add_option("--model-cmd", config.model_command,
                                    "External model process (line-delimited JSON)");
    model->excludes(command);
    cmd->add_option("--model-timeout-ms", config.model_timeout_ms,
                    "Per-batch timeout for --model-cmd")
        ->capture_default_str();
    cmd->add_option("--background", config.background_path, "Background CSV")
        ->required();
    cmd->add_option("--metadata", config.metadata_path, "Metadata sidecar JSON");
    cmd->add_option("--background-mode", background_mode,
                    "full, median or sample:k:seed")
        ->capture_default_str();
  }

  EngineConfig Resolve() {
    config.background_mode = BackgroundMode::Parse(background_mode);
    return config;
  }
};

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw AppError(SHAPBOX_ERR_IO, Origin::kInput, "cannot read " + path, "instance");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// JSON array, {"instance": [...]}, or @file holding either.
std::vector<double> LoadInstance(const std::string& arg) {
  const std::string text = !arg.empty() && arg[0] == '@' ? ReadText(arg.substr(1)) : arg;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw AppError(SHAPBOX_ERR_INVALID_ARGUMENT, Origin::kInput,
                   std::string("instance is not valid JSON: ") + e.what(), "instance");
  }
  if (doc.is_object() && doc.contains("instance")) return ParseInstance(doc["instance"], "instance");
  return ParseInstance(doc, "instance");
}

int ExitCodeFor(const AppError& e) {
  return e.origin() == Origin::kModel ? kExitModel : kExitUsage;
}

int RunExplain(EngineFlags& flags, const std::string& instance_arg, std::uint64_t seed,
               const std::string& format, std::ostream& out) {
  const Engine engine(flags.Resolve());
  ExplainRequest request;
  request.instance = LoadInstance(instance_arg);
  request.samples = ParseSamples(flags.samples);
  request.seed = seed;
  const auto result = engine.Explain(request);
  if (format == "csv") {
    out << "feature,value,phi\n";
    for (std::size_t j = 0; j < result.phi.size(); ++j) {
      out << engine.feature_names()[j] << ',' << FormatDouble(request.instance[j]) << ','
          << FormatDouble(result.phi[j]) << '\n';
    }
    out << "base_value,," << FormatDouble(result.base_value) << '\n'
        << "prediction,," << FormatDouble(result.prediction) << '\n';
  } else {
    out << engine.ExplainJson(result).dump(2) << '\n';
  }
  return kExitOk;
}

int RunPredict(const std::string& model_path, const std::string& instance_arg,
               std::ostream& out) {
  shapbox_model* raw = nullptr;
  Check(shapbox_model_load_file(model_path.c_str(), &raw), Origin::kModel, "model",
        "model");
  const ModelPtr model(raw);
  const auto x = LoadInstance(instance_arg);
  const std::size_t width = shapbox_model_width(raw);
  if (width != 0 && width != x.size()) {
    throw AppError(SHAPBOX_ERR_SHAPE, Origin::kInput,
                   "instance has " + std::to_string(x.size()) +
                       " features, model expects " + std::to_string(width),
                   "instance");
  }
  double prediction = 0;
  const shapbox_status s = shapbox_model_predict(raw, x.data(), 1, x.size(), &prediction);
  if (s != SHAPBOX_OK) Check(s, IsModelStatus(s) ? Origin::kModel : Origin::kInput, "predict");
  out << nlohmann::json{{"prediction", prediction}}.dump() << '\n';
  return kExitOk;
}

int RunServe(EngineFlags& flags, ServerOptions options, std::ostream& err) {
  auto config = flags.Resolve();
  config.default_samples = ParseSamples(flags.samples);
  if (options.port < 1 || options.port > 65535) {
    throw AppError(SHAPBOX_ERR_INVALID_ARGUMENT, Origin::kInput,
                   "port must be in [1, 65535]", "port");
  }
  auto engine = std::make_shared<const Engine>(config);

  // Signals are taken synchronously by a watcher thread; worker threads
  // inherit the blocked mask.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  Server server(engine, options);
  if (server.Bind() < 0) {
    err << "shapbox: cannot listen on " << options.host << ':' << options.port
        << " (address in use?)\n";
    return kExitPortInUse;
  }
  err << "shapbox: serving " << engine->num_features() << " features on http://"
      << options.host << ':' << options.port << '\n';

  std::atomic<bool> done{false};
  std::thread watcher([&] {
    const timespec tick{0, 200 * 1000 * 1000};
    while (!done.load()) {
      if (sigtimedwait(&stop_signals, nullptr, &tick) > 0) {
        server.Stop();
        return;
      }
    }
  });
  server.Run();
  done = true;
  watcher.join();
  err << "shapbox: stopped\n";
  return kExitOk;
}

struct BenchRow {
  std::string label;
  double mean_ms = 0;
  double stddev_ms = 0;
  double mean_abs_error = 0;
};

int RunBench(EngineFlags& flags, const std::string& instances_path,
             const std::vector<std::string>& budgets, int repeats, std::uint64_t seed,
             std::ostream& out) {
  if (repeats < 1) {
    throw AppError(SHAPBOX_ERR_INVALID_ARGUMENT, Origin::kInput,
                   "--repeats must be at least 1", "repeats");
  }
  if (budgets.empty()) {
    throw AppError(SHAPBOX_ERR_INVALID_ARGUMENT, Origin::kInput,
                   "--samples needs at least one budget", "samples");
  }
  std::vector<std::int64_t> parsed;
  for (const auto& b : budgets) {
    parsed.push_back(b == "full" ? std::numeric_limits<std::int64_t>::max()
                                 : ParseSamples(b));
  }

  const Engine engine(flags.Resolve());
  shapbox_dataset* raw = nullptr;
  Check(shapbox_dataset_load_csv(
            instances_path.c_str(),
            flags.config.metadata_path.empty() ? nullptr
                                               : flags.config.metadata_path.c_str(),
            &raw),
        Origin::kInput, "instances", "instances");
  const DatasetPtr instances(raw);
  const std::size_t m = shapbox_dataset_cols(raw);
  const std::size_t n = shapbox_dataset_rows(raw);
  if (m != engine.num_features()) {
    throw AppError(SHAPBOX_ERR_SHAPE, Origin::kInput,
                   "instances have " + std::to_string(m) + " columns, model expects " +
                       std::to_string(engine.num_features()),
                   "instances");
  }

  std::vector<std::vector<double>> rows(n);
  std::vector<std::vector<double>> reference(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* data = shapbox_dataset_data(raw) + i * m;
    rows[i].assign(data, data + m);
    ExplainRequest request{rows[i], std::numeric_limits<std::int64_t>::max(), 0};
    reference[i] = engine.Explain(request).phi;
  }

  out << "samples,mean_ms,stddev_ms,mean_abs_error\n";
  for (std::size_t b = 0; b < parsed.size(); ++b) {
    std::vector<double> times;
    double error_sum = 0;
    std::size_t error_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (int r = 0; r < repeats; ++r) {
        ExplainRequest request{rows[i], parsed[b], seed + static_cast<std::uint64_t>(r)};
        const auto result = engine.Explain(request);
        times.push_back(result.elapsed_ms);
        for (std::size_t j = 0; j < m; ++j) {
          error_sum += std::abs(result.phi[j] - reference[i][j]);
          ++error_count;
        }
      }
    }
    double mean = 0;
    for (double t : times) mean += t;
    mean /= static_cast<double>(times.size());
    double var = 0;
    for (double t : times) var += (t - mean) * (t - mean);
    const double stddev =
        times.size() > 1 ? std::sqrt(var / static_cast<double>(times.size() - 1)) : 0.0;
    out << budgets[b] << ',' << FormatDouble(mean) << ',' << FormatDouble(stddev) << ','
        << FormatDouble(error_count ? error_sum / static_cast<double>(error_count) : 0.0)
        << '\n';
  }
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel SHAP explanations for tabular models"};
  app.set_version_flag("--version", std::string(shapbox_version()));
  app.require_subcommand(1);

  EngineFlags explain_flags;
  std::string instance;
  std::uint64_t seed = 0;
  std::string format = "json";
  auto* explain = app.add_subcommand("explain", "Explain one instance");
  explain_flags.Register(explain);
  explain->add_option("--instance", instance, "JSON array or @file")->required();
  explain->add_option("--samples", explain_flags.samples, "Coalition budget or 'auto'")
      ->capture_default_str();
  explain->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  explain->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  std::string predict_model;
  std::string predict_instance;
  auto* predict = app.add_subcommand("predict", "Evaluate a model on one instance");
  predict->add_option("--model", predict_model, "Model JSON document")->required();
  predict->add_option("--instance", predict_instance, "JSON array or @file")->required();

  EngineFlags serve_flags;
  ServerOptions options;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve_flags.Register(serve);
  serve->add_option("--samples", serve_flags.samples, "Default coalition budget")
      ->capture_default_str();
  serve->add_option("--host", options.host)->capture_default_str();
  serve->add_option("--port", options.port)->capture_default_str();
  serve->add_option("--cors-origin", options.cors_allow_origin,
                    "Access-Control-Allow-Origin value")
      ->capture_default_str();

  EngineFlags bench_flags;
  std::string instances_path;
  std::vector<std::string> budgets;
  int repeats = 5;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "Time explanations across budgets");
  bench_flags.Register(bench);
  bench->add_option("--instances", instances_path, "CSV of instances")->required();
  bench->add_option("--samples", budgets, "Budgets, e.g. 256,1024,full")
      ->delimiter(',')
      ->required();
  bench->add_option("--repeats", repeats)->capture_default_str();
  bench->add_option("--seed", bench_seed, "First seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << shapbox_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests arrive here as well.
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "shapbox: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*explain) return RunExplain(explain_flags, instance, seed, format, out);
    if (*predict) return RunPredict(predict_model, predict_instance, out);
    if (*serve) {
      options.log_level = LogLevelFromEnv();
      return RunServe(serve_flags, options, err);
    }
    if (*bench) {
      return RunBench(bench_flags, instances_path, budgets, repeats, bench_seed, out);
    }
  } catch (const AppError& e) {
    err << "shapbox: " << e.code() << ": " << e.what() << '\n';
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    err << "shapbox: " << e.what() << '\n';
    return kExitModel;
  }
  return kExitUsage;
}

}  // namespace shapbox::app
