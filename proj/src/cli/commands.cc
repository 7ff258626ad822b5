// Copyright 2026 The rshd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rshd/cli/commands.h"

#include <filesystem>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "rshd/cli/pipeline.h"
#include "rshd/common/error.h"
#include "rshd/io/config_json.h"
#include "rshd/io/files.h"

namespace rshd {
namespace {

using nlohmann::json;

std::string_view CliCategory(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kConfig:
      return "config";
    case ErrorCategory::kNumeric:
      return "numeric";
    case ErrorCategory::kIo:
      return "io";
    case ErrorCategory::kData:
    case ErrorCategory::kDimension:
    case ErrorCategory::kContract:
      break;
  }
  return "data";
}

int ExitCode(std::string_view category) {
  if (category == "config") return 2;
  if (category == "data") return 3;
  if (category == "numeric") return 4;
  return 5;
}

// Flags shared by every subcommand.
struct Common {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out;
  bool force = false;
};

void AddCommon(CLI::App* cmd, Common& c, bool out_required) {
  cmd->add_option("--seed", c.seed, "Seed for every random stream of this stage")
      ->default_str("0, or the seed in --config");
  cmd->add_option("--config", c.config_path, "JSON file with per-stage settings")
      ->check(CLI::ExistingFile);
  auto* out = cmd->add_option("--out", c.out, "Output path");
  if (out_required) out->required();
  cmd->add_flag("--force", c.force, "Overwrite existing outputs");
}

json LoadConfig(const Common& c) {
  if (c.config_path.empty()) return json::object();
  json j = ParseJson(ReadFileBytes(c.config_path), c.config_path);
  if (!j.is_object()) ThrowConfig(c.config_path + ": expected a JSON object");
  static const char* kSections[] = {
      "synth",           "train_sid",        "smoothgrad", "pse",
      "train_pse",       "embedder",         "train_embedder",
      "train_classifier", "sanitizer",       "evaluate",   "sweep"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* s : kSections) known = known || key == s;
    if (!known) ThrowConfig(c.config_path + ": unknown section '" + key + "'");
  }
  return j;
}

template <typename T>
void Overlay(const json& config, const char* section, T& target) {
  if (config.contains(section)) from_json(config[section], target);
}

TrainConfig TrainFrom(const json& config, const char* section, TrainConfig base,
                      const Common& c) {
  Overlay(config, section, base);
  if (c.seed) base.seed = *c.seed;
  return base;
}

std::optional<Partition> PartitionFrom(const std::string& name) {
  if (name.empty()) return std::nullopt;
  return ParsePartition(name);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saliency-guided sanitization of speech representations"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::function<json()> action;
  Common c;
  std::string data, sid, saliency, pse, embedder, classifier, partition;
  std::optional<double> k, epsilon, clip_bound;
  std::optional<std::string> mode;
  std::vector<double> k_list, eps_list;
  std::optional<std::size_t> trials;

  auto* gen = app.add_subcommand("gen-data", "Generate the synthetic benchmark");
  AddCommon(gen, c, true);
  gen->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      GenDataOptions o;
      Overlay(config, "synth", o.synth);
      if (c.seed) o.synth.seed = *c.seed;
      o.out = c.out;
      o.force = c.force;
      return GenData(o);
    };
  });

  auto* tsid = app.add_subcommand("train-sid", "Train the speaker-ID model");
  AddCommon(tsid, c, true);
  tsid->add_option("--data", data, "Dataset directory or manifest")->required();
  tsid->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      TrainSidOptions o;
      o.data = data;
      o.train = TrainFrom(config, "train_sid", SidTrainDefaults(), c);
      o.out = c.out;
      o.force = c.force;
      return TrainSidStage(o);
    };
  });

  auto* bsal = app.add_subcommand("build-saliency", "SmoothGrad saliency maps");
  AddCommon(bsal, c, true);
  bsal->add_option("--data", data, "Dataset directory or manifest")->required();
  bsal->add_option("--sid", sid, "SID checkpoint")->required();
  bsal->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      BuildSaliencyOptions o;
      o.data = data;
      o.sid = sid;
      Overlay(config, "smoothgrad", o.smoothgrad);
      if (c.seed) o.smoothgrad.seed = *c.seed;
      o.out = c.out;
      o.force = c.force;
      return BuildSaliencyStage(o);
    };
  });

  auto* tpse = app.add_subcommand("train-pse", "Train the saliency estimator");
  AddCommon(tpse, c, true);
  tpse->add_option("--saliency", saliency, "Saliency dataset directory")->required();
  tpse->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      TrainPseOptions o;
      o.saliency = saliency;
      o.arch = DeskPseConfig(0);
      Overlay(config, "pse", o.arch);
      o.train = TrainFrom(config, "train_pse", PseTrainDefaults(), c);
      o.out = c.out;
      o.force = c.force;
      return TrainPseStage(o);
    };
  });

  auto* temb = app.add_subcommand("train-embedder", "Train the verification embedder");
  AddCommon(temb, c, true);
  temb->add_option("--data", data, "Dataset directory or manifest")->required();
  temb->add_option("--sid", sid, "SID checkpoint, for the speaker-disjointness check");
  temb->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      TrainEmbedderOptions o;
      o.data = data;
      if (!sid.empty()) o.sid = sid;
      Overlay(config, "embedder", o.arch);
      o.train = TrainFrom(config, "train_embedder", EmbedderTrainDefaults(), c);
      o.out = c.out;
      o.force = c.force;
      return TrainEmbedderStage(o);
    };
  });

  auto* tcls = app.add_subcommand("train-classifier", "Train the content classifier");
  AddCommon(tcls, c, true);
  tcls->add_option("--data", data, "Dataset directory or manifest")->required();
  tcls->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      TrainClassifierOptions o;
      o.data = data;
      o.train = TrainFrom(config, "train_classifier", ClassifierTrainDefaults(), c);
      o.out = c.out;
      o.force = c.force;
      return TrainClassifierStage(o);
    };
  });

  auto* san = app.add_subcommand("sanitize", "Add Laplace noise to the top-k% positions");
  AddCommon(san, c, true);
  san->add_option("--data", data, "Dataset directory or manifest")->required();
  san->add_option("--pse", pse, "PSE checkpoint (needed for --mode pse)");
  san->add_option("--k", k, "Percent of positions to perturb, 0..100")->default_str("20");
  san->add_option("--epsilon", epsilon, "Privacy parameter, > 0")->default_str("1");
  san->add_option("--mode", mode, "Selection mode")
      ->check(CLI::IsMember({"pse", "random"}))
      ->default_str("pse");
  san->add_option("--clip-bound", clip_bound, "Clip bound, > 0")->default_str("1");
  san->add_option("--partition", partition, "Only sanitize this partition")
      ->check(CLI::IsMember({"sid", "asv-train", "asv-eval"}));
  san->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      SanitizeOptions o;
      o.data = data;
      if (!pse.empty()) o.pse = pse;
      Overlay(config, "sanitizer", o.sanitizer);
      if (k) o.sanitizer.k_percent = *k;
      if (epsilon) o.sanitizer.eps_priv = *epsilon;
      if (clip_bound) o.sanitizer.clip_bound = *clip_bound;
      if (mode) o.sanitizer.mode = ParseMode(*mode);
      if (c.seed) o.sanitizer.seed = *c.seed;
      o.partition = PartitionFrom(partition);
      o.out = c.out;
      o.force = c.force;
      return SanitizeStage(o);
    };
  });

  auto* ev = app.add_subcommand("evaluate", "Verification EER and task accuracy");
  AddCommon(ev, c, false);
  ev->add_option("--data", data, "Dataset directory or manifest")->required();
  ev->add_option("--embedder", embedder, "Embedder checkpoint")->required();
  ev->add_option("--classifier", classifier, "Classifier checkpoint")->required();
  ev->add_option("--partition", partition, "Partition to score")
      ->check(CLI::IsMember({"sid", "asv-train", "asv-eval"}))
      ->default_str("asv-eval, or every record if untagged");
  ev->add_option("--trials", trials, "Number of verification trials")->default_str("4000");
  ev->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      EvaluateOptions o;
      o.data = data;
      o.embedder = embedder;
      o.classifier = classifier;
      o.partition = PartitionFrom(partition);
      if (config.contains("evaluate")) {
        const json& e = config["evaluate"];
        if (!e.is_object()) ThrowConfig("evaluate: expected a JSON object");
        for (const auto& [key, value] : e.items()) {
          if (key != "n_trials" && key != "trial_seed") {
            ThrowConfig("evaluate: unknown key '" + key + "'");
          }
          if (!value.is_number_unsigned()) {
            ThrowConfig("evaluate." + key + ": expected a non-negative integer");
          }
        }
        o.n_trials = e.value("n_trials", o.n_trials);
        o.trial_seed = e.value("trial_seed", o.trial_seed);
      }
      if (trials) o.n_trials = *trials;
      if (c.seed) o.trial_seed = *c.seed;
      if (!c.out.empty()) o.out = c.out;
      o.force = c.force;
      return EvaluateStage(o);
    };
  });

  auto* sw = app.add_subcommand("sweep", "Privacy-utility sweep over (k, epsilon)");
  AddCommon(sw, c, true);
  sw->add_option("--data", data, "Dataset directory or manifest")->required();
  sw->add_option("--pse", pse, "PSE checkpoint")->required();
  sw->add_option("--embedder", embedder, "Embedder checkpoint")->required();
  sw->add_option("--classifier", classifier, "Classifier checkpoint")->required();
  sw->add_option("--k", k_list, "Comma-separated k values")
      ->delimiter(',')
      ->default_str("20,40,60,80,100");
  sw->add_option("--epsilon", eps_list, "Comma-separated epsilon values")
      ->delimiter(',')
      ->default_str("0.5,1,2,4,8");
  sw->add_option("--mode", mode, "Restrict to one selection mode")
      ->check(CLI::IsMember({"pse", "random"}))
      ->default_str("both");
  sw->add_option("--clip-bound", clip_bound, "Clip bound, > 0")->default_str("1");
  sw->callback([&] {
    action = [&] {
      const json config = LoadConfig(c);
      SweepOptions o;
      o.data = data;
      o.pse = pse;
      o.embedder = embedder;
      o.classifier = classifier;
      Overlay(config, "sweep", o.spec);
      if (!k_list.empty()) o.spec.k_list = k_list;
      if (!eps_list.empty()) o.spec.eps_list = eps_list;
      if (mode) o.spec.modes = {ParseMode(*mode)};
      if (clip_bound) o.spec.clip_bound = *clip_bound;
      if (c.seed) {
        o.spec.seed = *c.seed;
        o.spec.trial_seed = *c.seed;
      }
      o.out = c.out;
      o.force = c.force;
      return SweepStage(o);
    };
  });

  std::vector<std::string> argv_storage{"rshd"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[config]: " << e.what() << "\n";
    return ExitCode("config");
  }

  try {
    out << action().dump() << "\n";
    return 0;
  } catch (const Error& e) {
    const auto category = CliCategory(e.category());
    err << "error[" << category << "]: " << e.what() << "\n";
    return ExitCode(category);
  } catch (const json::exception& e) {
    err << "error[data]: " << e.what() << "\n";
    return ExitCode("data");
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error[io]: " << e.what() << "\n";
    return ExitCode("io");
  } catch (const std::bad_alloc&) {
    err << "error[numeric]: out of memory\n";
    return ExitCode("numeric");
  }
}

}  // namespace rshd
