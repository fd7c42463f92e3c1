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

// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "app/engine.hpp"
#include "app/server.hpp"
#include "core/error.hpp"
#include "core/explainer.hpp"
#include "core/sampler.hpp"
#include "httplib.h"
#include "models/model_json.hpp"
#include "models/subprocess_model.hpp"
#include "oracle/exact.hpp"
#include "testing/test_util.hpp"

namespace shapbox {
namespace {

using testing::PermutationShapley;
using testing::PermutedModel;
using testing::RandomEnsemble;
using testing::RandomLinear;
using testing::RandomMatrix;
using testing::RandomVector;

// Pinned tolerances and sizes.
constexpr double kExactTol = 1e-6;
constexpr double kExactBudgetSeconds = 60.0;
constexpr int kExactCases = 50;
constexpr double kEfficiencyRelTol = 1e-9;
constexpr int kEfficiencyCases = 1000;
constexpr int kNullCases = 200;
constexpr int kSymmetryCases = 100;
constexpr int kDeterminismCases = 100;
constexpr int kConvergenceSeeds = 20;
constexpr double kConvergenceInversionTol = 0.05;
constexpr double kConvergenceFinalFraction = 0.02;
constexpr int kPerfRuns = 50;
constexpr double kPerfMedianMs = 200.0;
constexpr int kParityFixtures = 20;

const std::string kData = SHAPBOX_DATA_DIR;
const std::string kFixtures = SHAPBOX_FIXTURE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

std::uint64_t Bits(double v) { return std::bit_cast<std::uint64_t>(v); }

bool BitEqual(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (Bits(a[j]) != Bits(b[j])) return false;
  }
  return true;
}

std::shared_ptr<const Model> RandomModel(std::size_t m, std::mt19937_64& rng) {
  if (rng() % 2 == 0) return RandomLinear(m, rng);
  const auto transform =
      rng() % 2 == 0 ? OutputTransform::kIdentity : OutputTransform::kSigmoid;
  return RandomEnsemble(m, 1 + static_cast<int>(rng() % 6),
                        1 + static_cast<int>(rng() % 4), rng, transform);
}

// ---- criteria --------------------------------------------------------------

Outcome OracleExactness() {
  std::mt19937_64 rng(20261015);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  double worst_independent = 0.0;
  int independent_checks = 0;
  Outcome out;
  for (int c = 0; c < kExactCases; ++c) {
    const std::size_t m = 2 + static_cast<std::size_t>(c % 9);  // 2..10
    const std::size_t n = c % 2 == 0 ? 1 : 5;
    const auto model = c % 2 == 0 ? std::shared_ptr<const Model>(RandomLinear(m, rng))
                                  : RandomEnsemble(m, 4, 3, rng);
    const auto x = RandomVector(m, rng);
    const auto bg = RandomMatrix(n, m, rng);
    ExplainerConfig config;
    config.n_samples = NonTrivialCoalitionCount(static_cast<int>(m));
    config.seed = static_cast<std::uint64_t>(c);
    const auto kernel = Explain(*model, x, bg, config);
    const auto exact = ExactShapley(*model, x, bg);
    if (!kernel.full_enumeration || kernel.num_varying() != static_cast<int>(m)) {
      out.pass = false;
    }
    for (std::size_t j = 0; j < m; ++j) {
      worst = std::max(worst, std::abs(kernel.phi[j] - exact.phi[j]));
    }
    if (m <= 7) {
      // The exact module itself is checked against an ordering-based oracle.
      const auto perm = PermutationShapley(*model, x, bg);
      ++independent_checks;
      for (std::size_t j = 0; j < m; ++j) {
        worst_independent = std::max(worst_independent, std::abs(exact.phi[j] - perm[j]));
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.pass = out.pass && worst <= kExactTol && worst_independent <= kExactTol &&
             seconds < kExactBudgetSeconds;
  out.detail = std::to_string(kExactCases) + " cases, max |kernel - exact| = " +
               Fmt("%.3g", worst) + ", max |exact - ordering oracle| = " +
               Fmt("%.3g", worst_independent) + " over " +
               std::to_string(independent_checks) + " cases, " +
               Fmt("%.2f s", seconds);
  return out;
}

Outcome EfficiencyIdentity() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int partial = 0;
  for (int c = 0; c < kEfficiencyCases; ++c) {
    const std::size_t m = 2 + rng() % 15;  // 2..16
    const std::size_t n = 1 + rng() % 8;
    const auto model = RandomModel(m, rng);
    const auto x = RandomVector(m, rng);
    const auto bg = RandomMatrix(n, m, rng);
    ExplainerConfig config;
    config.seed = rng();
    switch (c % 3) {
      case 0:
        break;  // AUTO
      case 1:
        config.n_samples = 2 + static_cast<std::int64_t>(rng() % 64);
        break;
      default:
        config.n_samples = 2 + static_cast<std::int64_t>(rng() % 1024);
        break;
    }
    const auto ex = Explain(*model, x, bg, config);
    if (!ex.full_enumeration) ++partial;
    const double total =
        std::accumulate(ex.phi.begin(), ex.phi.end(), ex.base_value);
    worst = std::max(worst, std::abs(total - ex.prediction) /
                                std::max(1.0, std::abs(ex.prediction)));
  }
  return {worst <= kEfficiencyRelTol,
          std::to_string(kEfficiencyCases) + " explanations (" +
              std::to_string(partial) + " partial), max relative gap " +
              Fmt("%.3g", worst)};
}

Outcome NullPlayer() {
  std::mt19937_64 rng(4242);
  int pinned_total = 0;
  int nonzero = 0;
  for (int c = 0; c < kNullCases; ++c) {
    const std::size_t m = 2 + rng() % 13;
    const std::size_t n = 1 + rng() % 5;
    const auto model = RandomModel(m, rng);
    auto x = RandomVector(m, rng);
    auto bg = RandomMatrix(n, m, rng);
    const std::size_t pins = 1 + rng() % (m - 1);
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t p = 0; p < pins; ++p) {
      const std::size_t j = idx[p];
      for (std::size_t r = 0; r < n; ++r) bg(r, j) = x[j];
    }
    ExplainerConfig config;
    config.seed = rng();
    if (c % 2 == 1) config.n_samples = 2 + static_cast<std::int64_t>(rng() % 200);
    const auto ex = Explain(*model, x, bg, config);
    for (std::size_t p = 0; p < pins; ++p) {
      ++pinned_total;
      if (ex.phi[idx[p]] != 0.0) ++nonzero;
    }
  }
  return {nonzero == 0, std::to_string(kNullCases) + " cases, " +
                            std::to_string(pinned_total) + " pinned features, " +
                            std::to_string(nonzero) + " nonzero"};
}

Outcome SymmetryAndDeterminism() {
  std::mt19937_64 rng(99);
  int equivariance_failures = 0;
  for (int c = 0; c < kSymmetryCases; ++c) {
    const std::size_t m = 2 + rng() % 9;  // full enumeration range
    const std::size_t n = 1 + rng() % 3;
    const auto model = RandomModel(m, rng);
    const auto x = RandomVector(m, rng);
    const auto bg = RandomMatrix(n, m, rng);
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<double> xp(m);
    Matrix bgp(n, m);
    for (std::size_t j = 0; j < m; ++j) {
      xp[j] = x[perm[j]];
      for (std::size_t r = 0; r < n; ++r) bgp(r, j) = bg(r, perm[j]);
    }
    const PermutedModel permuted(model, perm);
    ExplainerConfig config;
    config.seed = 1;
    const auto a = Explain(*model, x, bg, config);
    const auto b = Explain(permuted, xp, bgp, config);
    std::vector<double> mapped(m);
    for (std::size_t j = 0; j < m; ++j) mapped[j] = a.phi[perm[j]];
    if (!a.full_enumeration || !BitEqual(mapped, b.phi) ||
        Bits(a.base_value) != Bits(b.base_value)) {
      ++equivariance_failures;
    }
  }

  int determinism_failures = 0;
  for (int c = 0; c < kDeterminismCases; ++c) {
    const std::size_t m = 2 + rng() % 15;
    const std::size_t n = 1 + rng() % 4;
    const auto model = RandomModel(m, rng);
    const auto x = RandomVector(m, rng);
    const auto bg = RandomMatrix(n, m, rng);
    ExplainerConfig config;
    config.seed = rng();
    if (c % 2 == 0) config.n_samples = 2 + static_cast<std::int64_t>(rng() % 300);
    const auto a = Explain(*model, x, bg, config);
    const auto b = Explain(*model, x, bg, config);
    if (!BitEqual(a.phi, b.phi) || Bits(a.base_value) != Bits(b.base_value) ||
        a.samples_used != b.samples_used) {
      ++determinism_failures;
    }
  }
  return {equivariance_failures == 0 && determinism_failures == 0,
          "equivariance " + std::to_string(kSymmetryCases - equivariance_failures) +
              "/" + std::to_string(kSymmetryCases) + " bit-identical, repeat runs " +
              std::to_string(kDeterminismCases - determinism_failures) + "/" +
              std::to_string(kDeterminismCases) + " bit-identical"};
}

app::EngineConfig DemoEngineConfig(const std::string& mode) {
  app::EngineConfig config;
  config.model_path = kData + "/loan-demo.model.json";
  config.background_path = kData + "/loan-demo.csv";
  config.metadata_path = kData + "/loan-demo.meta.json";
  config.background_mode = app::BackgroundMode::Parse(mode);
  return config;
}

// Demo rows and the one-row median background, through the C API.
struct DemoData {
  app::Engine engine{DemoEngineConfig("median")};
  std::vector<std::vector<double>> rows;
  std::vector<double> median;

  DemoData() {
    const double* bg = shapbox_dataset_data(engine.background());
    median.assign(bg, bg + engine.num_features());
    shapbox_dataset* raw = nullptr;
    app::Check(shapbox_dataset_load_csv((kData + "/loan-demo.csv").c_str(),
                                        (kData + "/loan-demo.meta.json").c_str(), &raw),
               app::Origin::kInput, "demo");
    const app::DatasetPtr data(raw);
    const std::size_t m = shapbox_dataset_cols(raw);
    for (std::size_t i = 0; i < shapbox_dataset_rows(raw); ++i) {
      const double* r = shapbox_dataset_data(raw) + i * m;
      rows.emplace_back(r, r + m);
    }
  }

  // Row 0 with every feature moved off the median: a feature that matches
  // it takes the first differing value observed in its column.
  std::vector<double> FullyVaryingRow() const {
    auto x = rows.front();
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (const auto& r : rows) {
        if (x[j] != median[j]) break;
        x[j] = r[j];
      }
    }
    return x;
  }
};

Outcome Convergence(const DemoData& demo) {
  const auto model = LoadModelFile(kData + "/loan-demo.model.json");
  const Matrix bg = Matrix::FromRows({demo.median});
  // Fifteen varying features: take a fully varying row and pin the last
  // feature to its background value.
  auto x = demo.FullyVaryingRow();
  x.back() = demo.median.back();

  ExplainerConfig full_config;
  full_config.n_samples = NonTrivialCoalitionCount(15);
  const auto reference = Explain(*model, x, bg, full_config);
  if (reference.num_varying() != 15 || !reference.full_enumeration) {
    return {false, "demo instance does not have 15 varying features"};
  }
  const auto [lo, hi] = std::minmax_element(reference.phi.begin(), reference.phi.end());
  const double spread = *hi - *lo;

  const std::vector<std::int64_t> budgets{256, 512, 1024, 2048, 4096};
  std::vector<double> errors;
  for (const auto budget : budgets) {
    double sum = 0.0;
    for (int s = 0; s < kConvergenceSeeds; ++s) {
      ExplainerConfig config;
      config.n_samples = budget;
      config.seed = static_cast<std::uint64_t>(s);
      const auto ex = Explain(*model, x, bg, config);
      for (std::size_t j = 0; j < x.size(); ++j) {
        sum += std::abs(ex.phi[j] - reference.phi[j]);
      }
    }
    errors.push_back(sum / (kConvergenceSeeds * static_cast<double>(15)));
  }
  int inversions = 0;
  bool large_inversion = false;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (errors[k] > errors[k - 1]) {
      ++inversions;
      if (errors[k] > errors[k - 1] * (1.0 + kConvergenceInversionTol)) {
        large_inversion = true;
      }
    }
  }
  const double limit = kConvergenceFinalFraction * spread;
  std::string detail = "mean |phi - phi_full| by budget:";
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    detail += " " + std::to_string(budgets[k]) + "=" + Fmt("%.3g", errors[k]);
  }
  detail += Fmt("; final %.3g vs limit %.3g (spread %.3g)", errors.back(), limit, spread);
  return {inversions <= 1 && !large_inversion && errors.back() <= limit, detail};
}

Outcome Performance(const DemoData& demo) {
  app::ExplainRequest request;
  request.instance = demo.FullyVaryingRow();
  std::vector<double> ms;
  std::int64_t samples = 0;
  for (int r = 0; r < kPerfRuns; ++r) {
    request.seed = static_cast<std::uint64_t>(r);
    const auto start = std::chrono::steady_clock::now();
    const auto result = demo.engine.Explain(request);
    ms.push_back(std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count());
    samples = result.samples_used;
  }
  std::sort(ms.begin(), ms.end());
  const double median = (ms[ms.size() / 2 - 1] + ms[ms.size() / 2]) / 2.0;
  return {median < kPerfMedianMs && samples == 2 * 16 + 2048,
          Fmt("M = M_v = 16, AUTO budget (%.0f coalitions), median %.2f ms, max %.2f ms",
              static_cast<double>(samples), median, ms.back())};
}

Outcome ProtocolConformance() {
  const std::string fake = SHAPBOX_FAKE_MODEL;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("shapbox_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto responses = dir / "responses.jsonl";
  const auto record = dir / "record.jsonl";
  {
    std::ofstream out(responses, std::ios::binary);
    out << "{\"id\":1,\"preds\":[2.5]}\n{\"id\":2,\"preds\":[0.5,2.75]}\n";
  }
  std::vector<std::string> failures;
  {
    const SubprocessModel model(fake + " replay " + responses.string() + " " +
                                    record.string(),
                                std::chrono::milliseconds(5000));
    const auto a = model.PredictBatch(Matrix::FromRows({{3, 4}}));
    const auto b = model.PredictBatch(Matrix::FromRows({{1, 2}, {0.5, -1.25}}));
    if (a != std::vector<double>{2.5} || b != std::vector<double>{0.5, 2.75}) {
      failures.push_back("golden responses");
    }
  }
  std::stringstream recorded;
  recorded << std::ifstream(record, std::ios::binary).rdbuf();
  if (recorded.str() !=
      "{\"id\":1,\"rows\":[[3.0,4.0]]}\n{\"id\":2,\"rows\":[[1.0,2.0],[0.5,-1.25]]}\n") {
    failures.push_back("golden request bytes");
  }
  std::filesystem::remove_all(dir);

  const auto expect_adapter = [&](const std::string& args, int timeout_ms,
                                  const std::string& needle) {
    const SubprocessModel model(fake + " " + args,
                                std::chrono::milliseconds(timeout_ms));
    try {
      model.PredictBatch(Matrix::FromRows({{3, 4}}));
      failures.push_back(args + ": no error");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAdapter ||
          std::string(e.what()).find(needle) == std::string::npos) {
        failures.push_back(args + ": " + e.what());
      }
    }
  };
  expect_adapter("sleep 3000", 200, "timed out");
  expect_adapter("wrong-id", 5000, "id mismatch");
  expect_adapter("exit-after 0", 5000, "broken pipe");
  expect_adapter("garbage", 5000, "not numeric");

  std::string detail = "golden transcript + timeout, id mismatch, early exit, non-numeric";
  for (const auto& f : failures) detail += "; FAILED " + f;
  return {failures.empty(), detail};
}

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) out += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return out + "'";
}

std::string RunCommand(const std::string& command, int& status) {
  std::string output;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return output;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
  status = ::pclose(pipe);
  return output;
}

Outcome CliApiParity(const DemoData& demo) {
  struct Setup {
    app::EngineConfig config;
    std::string mode;
  };
  app::EngineConfig linear;
  linear.model_path = kFixtures + "/linear.json";
  linear.background_path = kFixtures + "/bg.csv";
  const std::vector<Setup> setups{{linear, "full"},
                                  {DemoEngineConfig("median"), "median"},
                                  {DemoEngineConfig("sample:25:7"), "sample:25:7"}};

  int identical = 0;
  std::vector<std::string> failures;
  std::mt19937_64 rng(5);
  for (int f = 0; f < kParityFixtures; ++f) {
    const Setup& setup = setups[f < 4 ? 0 : 1 + f % 2];
    std::vector<double> instance;
    if (f < 4) {
      instance = {static_cast<double>(f) * 1.5 - 2.0, 0.25 * f + 3.0};
    } else {
      instance = demo.rows[static_cast<std::size_t>(f * 7) % demo.rows.size()];
    }
    const std::string samples = f % 3 == 0 ? "auto" : std::to_string(64 + 100 * f);
    const std::uint64_t seed = rng() % 1000;

    auto engine = std::make_shared<const app::Engine>(setup.config);
    app::ServerOptions options;
    options.port = 0;
    options.log_level = app::LogLevel::kOff;
    app::Server server(engine, options);
    const int port = server.Bind();
    std::thread runner([&] { server.Run(); });
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(60, 0);
    nlohmann::json body = {{"instance", instance}, {"seed", seed}};
    body["samples"] = samples == "auto" ? nlohmann::json("auto")
                                        : nlohmann::json(std::stoll(samples));
    const auto res = client.Post("/api/explain", body.dump(), "application/json");
    server.Stop();
    runner.join();

    std::string command = std::string(SHAPBOX_CLI) + " explain --model " +
                          ShellQuote(setup.config.model_path) + " --background " +
                          ShellQuote(setup.config.background_path) +
                          " --background-mode " + setup.mode + " --instance " +
                          ShellQuote(nlohmann::json(instance).dump()) + " --samples " +
                          samples + " --seed " + std::to_string(seed);
    if (!setup.config.metadata_path.empty()) {
      command += " --metadata " + ShellQuote(setup.config.metadata_path);
    }
    int status = 0;
    const std::string cli_out = RunCommand(command, status);

    if (!res || res->status != 200 || status != 0) {
      failures.push_back("fixture " + std::to_string(f) + " did not run");
      continue;
    }
    const auto http_doc = nlohmann::json::parse(res->body);
    const auto cli_doc = nlohmann::json::parse(cli_out);
    const auto http_phi = http_doc["phi"].get<std::vector<double>>();
    const auto cli_phi = cli_doc["phi"].get<std::vector<double>>();
    if (BitEqual(http_phi, cli_phi) &&
        Bits(http_doc["base_value"].get<double>()) ==
            Bits(cli_doc["base_value"].get<double>())) {
      ++identical;
    } else {
      failures.push_back("fixture " + std::to_string(f) + " differs");
    }
  }
  std::string detail = std::to_string(identical) + "/" + std::to_string(kParityFixtures) +
                       " fixtures bit-identical between CLI and HTTP";
  for (const auto& f : failures) detail += "; " + f;
  return {identical == kParityFixtures, detail};
}

int Report(const std::string& name, const std::function<Outcome()>& fn) {
  Outcome outcome;
  try {
    outcome = fn();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail
            << std::endl;
  return outcome.pass ? 0 : 1;
}

}  // namespace
}  // namespace shapbox

int main() {
  using namespace shapbox;
  const DemoData demo;
  int failed = 0;
  failed += Report("oracle-exactness", OracleExactness);
  failed += Report("efficiency-identity", EfficiencyIdentity);
  failed += Report("null-player", NullPlayer);
  failed += Report("symmetry-determinism", SymmetryAndDeterminism);
  failed += Report("convergence", [&] { return Convergence(demo); });
  failed += Report("performance", [&] { return Performance(demo); });
  failed += Report("protocol-conformance", ProtocolConformance);
  failed += Report("cli-api-parity", [&] { return CliApiParity(demo); });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) +
                                                          " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
