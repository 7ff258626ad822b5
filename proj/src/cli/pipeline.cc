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

#include "rshd/cli/pipeline.h"

#include <algorithm>
#include <map>
#include <set>

#include "rshd/common/error.h"
#include "rshd/common/parallel.h"
#include "rshd/io/checkpoint.h"
#include "rshd/io/config_json.h"
#include "rshd/io/digest.h"
#include "rshd/io/files.h"
#include "rshd/io/manifest.h"
#include "rshd/io/saliency_io.h"

namespace rshd {
namespace {

using nlohmann::json;

// {stage, seed, config, inputs, config_digest}; the digest covers the rest.
json Provenance(const char* stage, std::uint64_t seed, const json& config,
                const json& inputs) {
  json p{{"stage", stage}, {"seed", seed}, {"config", config}, {"inputs", inputs}};
  p["config_digest"] = ConfigDigest(p);
  return p;
}

std::string DataDigest(const Corpus& c) {
  return c.manifest.header.at("config_digest").get<std::string>();
}

std::vector<std::size_t> SortedSpeakers(const std::vector<const Utterance*>& us) {
  std::set<std::size_t> s;
  for (const Utterance* u : us) s.insert(u->speaker);
  return {s.begin(), s.end()};
}

std::size_t Rank(const std::vector<std::size_t>& sorted, std::size_t speaker) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), speaker);
  if (it == sorted.end() || *it != speaker) {
    ThrowData("speaker " + std::to_string(speaker) + " is unknown to the model");
  }
  return static_cast<std::size_t>(it - sorted.begin());
}

std::vector<const Utterance*> RequirePartition(const Corpus& c, Partition p) {
  auto us = c.InPartition(p);
  if (us.empty()) {
    ThrowData("manifest has no utterances in partition '" +
              std::string(PartitionName(p)) + "'");
  }
  return us;
}

json Report(const TrainReport& r) {
  return json{{"best_epoch", r.best_epoch},
              {"best_validation_loss", r.best_validation_loss},
              {"train_size", r.train_size},
              {"validation_size", r.validation_size}};
}

std::vector<std::size_t> CheckpointSpeakers(const Checkpoint& ckpt) {
  try {
    return ckpt.provenance.at("speakers").get<std::vector<std::size_t>>();
  } catch (const json::exception&) {
    ThrowData("checkpoint provenance lacks a speaker list");
  }
}

}  // namespace

fs::path ProvenancePath(const fs::path& csv) {
  fs::path p = csv;
  p += ".provenance.json";
  return p;
}

json GenData(const GenDataOptions& o) {
  CheckWritable(o.out / kManifestFileName, o.force);
  try {
    o.synth.Validate();
  } catch (const Error& e) {
    ThrowConfig(e.what());
  }
  SynthDataset ds = Generate(o.synth);
  const json header = DatasetHeader(ds);
  SaveCorpus(o.out, header, ds.utterances, o.force);
  json counts = json::object();
  for (Partition p : {Partition::kSid, Partition::kAsvTrain, Partition::kAsvEval}) {
    counts[std::string(PartitionName(p))] = ds.InPartition(p).size();
  }
  return json{{"stage", "gen-data"},
              {"utterances", ds.utterances.size()},
              {"partitions", counts},
              {"seed", o.synth.seed},
              {"config_digest", header["config_digest"]}};
}

json TrainSidStage(const TrainSidOptions& o) {
  CheckWritable(o.out, o.force);
  o.train.Validate();
  Corpus c = LoadCorpus(o.data);
  auto us = RequirePartition(c, Partition::kSid);
  const auto speakers = SortedSpeakers(us);
  std::vector<LabeledExample> data;
  for (const Utterance* u : us) data.push_back({u->features, Rank(speakers, u->speaker)});
  TrainReport report;
  SidModel model = TrainSid(data, speakers.size(), o.train, &report);
  const double accuracy = Accuracy(model, data);
  json prov = Provenance("train-sid", o.train.seed, json{{"train", o.train}},
                         json{{"data", DataDigest(c)}});
  prov["speakers"] = speakers;
  prov["validation_loss"] = report.best_validation_loss;
  prov["train_accuracy"] = accuracy;
  SaveCheckpoint(o.out, ToCheckpoint(model, prov));
  return json{{"stage", "train-sid"},
              {"classes", speakers.size()},
              {"train_accuracy", accuracy},
              {"report", Report(report)},
              {"seed", o.train.seed},
              {"config_digest", prov["config_digest"]}};
}

json BuildSaliencyStage(const BuildSaliencyOptions& o) {
  CheckWritable(o.out / kManifestFileName, o.force);
  o.smoothgrad.Validate();
  Corpus c = LoadCorpus(o.data);
  const Checkpoint ckpt = LoadCheckpoint(o.sid);
  SidModel sid = SidFromCheckpoint(ckpt);
  const auto speakers = CheckpointSpeakers(ckpt);
  auto us = RequirePartition(c, Partition::kSid);
  std::vector<LabeledFeatures> data;
  for (const Utterance* u : us) {
    data.push_back({u->id, &u->features, Rank(speakers, u->speaker)});
  }
  SaliencyDataset ds = BuildSaliencyDataset(data, sid, o.smoothgrad, FileSha256(o.sid));
  SaveSaliencyDataset(o.out, ds, o.smoothgrad.seed, o.force);
  const json header = SaliencyHeader(ds, o.smoothgrad.seed);
  return json{{"stage", "build-saliency"},
              {"pairs", ds.pairs.size()},
              {"seed", o.smoothgrad.seed},
              {"config_digest", header["config_digest"]}};
}

json TrainPseStage(const TrainPseOptions& o) {
  CheckWritable(o.out, o.force);
  o.train.Validate();
  const fs::path manifest = ResolveManifestPath(o.saliency);
  SaliencyDataset sal = LoadSaliencyDataset(manifest);
  if (sal.pairs.empty()) ThrowData("saliency dataset is empty");
  PseConfig arch = o.arch;
  arch.input_dim = sal.pairs.front().x.cols();
  std::vector<RegressionExample> data;
  for (const auto& p : sal.pairs) {
    if (p.x.cols() != arch.input_dim) ThrowData("saliency pairs differ in width");
    data.push_back({p.x, p.saliency.values()});
  }
  TrainReport report;
  PseModel model = TrainPse(data, arch, o.train, &report);
  arch.dropout = o.train.dropout;
  json prov = Provenance("train-pse", o.train.seed, json{{"train", o.train}, {"arch", arch}},
                         json{{"saliency", FileSha256(manifest)}});
  prov["validation_loss"] = report.best_validation_loss;
  SaveCheckpoint(o.out, ToCheckpoint(model, prov));
  return json{{"stage", "train-pse"},
              {"pairs", data.size()},
              {"report", Report(report)},
              {"seed", o.train.seed},
              {"config_digest", prov["config_digest"]}};
}

json TrainEmbedderStage(const TrainEmbedderOptions& o) {
  CheckWritable(o.out, o.force);
  o.train.Validate();
  Corpus c = LoadCorpus(o.data);
  auto us = RequirePartition(c, Partition::kAsvTrain);
  const auto speakers = SortedSpeakers(us);
  json inputs{{"data", DataDigest(c)}};
  if (o.sid) {
    const auto sid_speakers = CheckpointSpeakers(LoadCheckpoint(*o.sid));
    for (std::size_t s : sid_speakers) {
      if (std::binary_search(speakers.begin(), speakers.end(), s)) {
        ThrowContract("embedder speakers overlap the SID speakers (speaker " +
                  std::to_string(s) + ")");
      }
    }
    inputs["sid"] = FileSha256(*o.sid);
  }
  std::vector<LabeledExample> data;
  for (const Utterance* u : us) data.push_back({u->features, Rank(speakers, u->speaker)});
  EmbedderConfig arch = o.arch;
  arch.input_dim = us.front()->features.cols();
  arch.num_classes = speakers.size();
  TrainReport report;
  EmbedderModel model = TrainEmbedder(data, arch, o.train, &report);
  json prov = Provenance("train-embedder", o.train.seed, json{{"train", o.train}, {"arch", arch}}, inputs);
  prov["speakers"] = speakers;
  prov["validation_loss"] = report.best_validation_loss;
  SaveCheckpoint(o.out, ToCheckpoint(model, prov));
  return json{{"stage", "train-embedder"},
              {"speakers", speakers.size()},
              {"report", Report(report)},
              {"seed", o.train.seed},
              {"config_digest", prov["config_digest"]}};
}

json TrainClassifierStage(const TrainClassifierOptions& o) {
  CheckWritable(o.out, o.force);
  o.train.Validate();
  Corpus c = LoadCorpus(o.data);
  if (!c.HasContentLabels()) ThrowData("manifest lacks content labels");
  auto us = RequirePartition(c, Partition::kAsvTrain);
  std::size_t num_classes = 0;
  const json& header = c.manifest.header;
  if (header.contains("synth") && header["synth"].contains("n_content_classes")) {
    num_classes = header["synth"]["n_content_classes"].get<std::size_t>();
  }
  std::vector<LabeledExample> data;
  for (const Utterance* u : us) {
    data.push_back({u->features, u->content});
    num_classes = std::max(num_classes, u->content + 1);
  }
  TrainReport report;
  ClassifierModel model = TrainClassifier(data, num_classes, o.train, &report);
  const double accuracy = Accuracy(model, data);
  json prov = Provenance("train-classifier", o.train.seed, json{{"train", o.train}},
                         json{{"data", DataDigest(c)}});
  prov["validation_loss"] = report.best_validation_loss;
  prov["train_accuracy"] = accuracy;
  SaveCheckpoint(o.out, ToCheckpoint(model, prov));
  return json{{"stage", "train-classifier"},
              {"classes", num_classes},
              {"train_accuracy", accuracy},
              {"report", Report(report)},
              {"seed", o.train.seed},
              {"config_digest", prov["config_digest"]}};
}

json SanitizeStage(const SanitizeOptions& o) {
  CheckWritable(o.out / kManifestFileName, o.force);
  o.sanitizer.Validate();
  Corpus c = LoadCorpus(o.data);
  std::optional<PseModel> pse;
  json inputs{{"data", DataDigest(c)}};
  if (o.sanitizer.mode == SelectionMode::kPse && o.sanitizer.k_percent > 0.0) {
    if (!o.pse) ThrowConfig("sanitize: --mode pse needs --pse");
    pse.emplace(PseFromCheckpoint(LoadCheckpoint(*o.pse)));
    inputs["pse"] = FileSha256(*o.pse);
  }
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < c.utterances.size(); ++i) {
    if (!o.partition || c.utterances[i].partition == *o.partition) index.push_back(i);
  }
  std::vector<Utterance> out(index.size());
  ParallelFor(index.size(), [&](std::size_t j) {
    const std::size_t i = index[j];
    out[j] = c.utterances[i];
    out[j].features = SanitizePipeline(c.utterances[i].features, pse ? &*pse : nullptr,
                                       o.sanitizer, i);
  });
  json config{{"sanitizer", o.sanitizer}};
  if (o.partition) config["partition"] = std::string(PartitionName(*o.partition));
  json header = Provenance("sanitize", o.sanitizer.seed, config, inputs);
  header["type"] = "header";
  header["format"] = "rshd-dataset";
  header["version"] = 1;
  header["source"] = c.manifest.header;
  SaveCorpus(o.out, header, out, o.force);
  return json{{"stage", "sanitize"},
              {"utterances", out.size()},
              {"seed", o.sanitizer.seed},
              {"config_digest", header["config_digest"]}};
}

json EvaluateStage(const EvaluateOptions& o) {
  if (o.out) CheckWritable(*o.out, o.force);
  Corpus c = LoadCorpus(o.data);
  if (!c.HasContentLabels()) ThrowData("manifest lacks content labels");
  std::optional<Partition> part = o.partition;
  if (!part) {
    bool all_tagged = true;
    for (const auto& r : c.manifest.records) all_tagged = all_tagged && r.partition;
    if (all_tagged) part = Partition::kAsvEval;
  }
  std::vector<Utterance> eval;
  for (const auto& u : c.utterances) {
    if (!part || u.partition == *part) eval.push_back(u);
  }
  EmbedderModel embedder = EmbedderFromCheckpoint(LoadCheckpoint(o.embedder));
  ClassifierModel classifier = ClassifierFromCheckpoint(LoadCheckpoint(o.classifier));
  SweepModels models{nullptr, &embedder, &classifier};
  SweepRunner runner(models, eval, o.n_trials, o.trial_seed);
  SanitizerConfig clean;
  clean.k_percent = 0.0;
  const SweepRow row = runner.Evaluate(clean);
  json inputs{{"data", DataDigest(c)},
              {"embedder", FileSha256(o.embedder)},
              {"classifier", FileSha256(o.classifier)}};
  json config{{"n_trials", o.n_trials}, {"trial_seed", o.trial_seed}};
  if (part) config["partition"] = std::string(PartitionName(*part));
  json summary{{"stage", "evaluate"},
               {"utterances", eval.size()},
               {"trials", runner.num_trials()},
               {"eer", row.eer},
               {"task_accuracy", row.task_accuracy},
               {"provenance", Provenance("evaluate", o.trial_seed, config, inputs)}};
  if (o.out) WriteFileAtomic(*o.out, summary.dump(2) + "\n");
  return summary;
}

json SweepStage(const SweepOptions& o) {
  CheckWritable(o.out, o.force);
  CheckWritable(ProvenancePath(o.out), o.force);
  o.spec.Validate();
  Corpus c = LoadCorpus(o.data);
  if (!c.HasContentLabels()) ThrowData("manifest lacks content labels");
  std::vector<Utterance> eval;
  for (const Utterance* u : RequirePartition(c, Partition::kAsvEval)) eval.push_back(*u);
  PseModel pse = PseFromCheckpoint(LoadCheckpoint(o.pse));
  EmbedderModel embedder = EmbedderFromCheckpoint(LoadCheckpoint(o.embedder));
  ClassifierModel classifier = ClassifierFromCheckpoint(LoadCheckpoint(o.classifier));
  SweepModels models{&pse, &embedder, &classifier};
  SweepGrid grid = RunSweep(o.spec, models, eval);
  const json inputs{{"data", DataDigest(c)},
                    {"pse", FileSha256(o.pse)},
                    {"embedder", FileSha256(o.embedder)},
                    {"classifier", FileSha256(o.classifier)}};
  json prov = Provenance("sweep", o.spec.seed, json{{"sweep", o.spec}}, inputs);
  prov["clean_eer"] = grid.clean_eer;
  prov["clean_task_accuracy"] = grid.clean_accuracy;
  prov["task"] = grid.task_name;
  const std::string csv = grid.ToCsv();
  prov["csv_sha256"] = Sha256Hex(csv);
  WriteFileAtomic(o.out, csv);
  WriteFileAtomic(ProvenancePath(o.out), prov.dump(2) + "\n");
  return json{{"stage", "sweep"},
              {"rows", grid.rows.size()},
              {"clean_eer", grid.clean_eer},
              {"clean_task_accuracy", grid.clean_accuracy},
              {"seed", o.spec.seed},
              {"config_digest", prov["config_digest"]}};
}

json RunDefaultPipeline(const fs::path& dir, std::uint64_t seed, bool force) {
  json out = json::array();
  GenDataOptions gen;
  gen.synth.seed = seed;
  gen.out = dir / "data";
  gen.force = force;
  out.push_back(GenData(gen));

  TrainSidOptions sid{dir / "data", SidTrainDefaults(), dir / "sid.ckpt", force};
  sid.train.seed = seed;
  out.push_back(TrainSidStage(sid));

  BuildSaliencyOptions sal{dir / "data", dir / "sid.ckpt", {}, dir / "saliency", force};
  sal.smoothgrad.seed = seed;
  out.push_back(BuildSaliencyStage(sal));

  TrainPseOptions pse;
  pse.saliency = dir / "saliency";
  pse.arch = DeskPseConfig(gen.synth.d);
  pse.train.seed = seed;
  pse.out = dir / "pse.ckpt";
  pse.force = force;
  out.push_back(TrainPseStage(pse));

  TrainEmbedderOptions emb;
  emb.data = dir / "data";
  emb.sid = dir / "sid.ckpt";
  emb.train.seed = seed;
  emb.out = dir / "embedder.ckpt";
  emb.force = force;
  out.push_back(TrainEmbedderStage(emb));

  TrainClassifierOptions cls{dir / "data", ClassifierTrainDefaults(),
                             dir / "classifier.ckpt", force};
  cls.train.seed = seed;
  out.push_back(TrainClassifierStage(cls));

  SweepOptions sweep;
  sweep.data = dir / "data";
  sweep.pse = dir / "pse.ckpt";
  sweep.embedder = dir / "embedder.ckpt";
  sweep.classifier = dir / "classifier.ckpt";
  sweep.spec.seed = seed;
  sweep.spec.trial_seed = seed;
  sweep.out = dir / "sweep.csv";
  sweep.force = force;
  out.push_back(SweepStage(sweep));
  return out;
}

}  // namespace rshd
