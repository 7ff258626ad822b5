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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "rshd/common/rng.h"
#include "rshd/io/checkpoint.h"
#include "rshd/io/config_json.h"
#include "rshd/io/digest.h"
#include "rshd/io/files.h"
#include "rshd/io/manifest.h"
#include "rshd/io/matrix_file.h"
#include "rshd/io/saliency_io.h"
#include "temp_dir.h"
#include "test_util.h"

namespace rshd {
namespace {

using nlohmann::json;
using testing::RandomMatrix;
using testing::TempDir;
using testing::ThrowsCategory;

std::uint64_t ReadU64(const std::string& bytes, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
  return v;
}

::testing::AssertionResult IoErrorAtOffset(const std::function<void()>& fn,
                                           std::size_t offset) {
  try {
    fn();
  } catch (const Error& e) {
    const std::string what = e.what();
    if (e.category() != ErrorCategory::kIo) {
      return ::testing::AssertionFailure() << "category " << CategoryName(e.category());
    }
    if (what.find("offset " + std::to_string(offset)) == std::string::npos) {
      return ::testing::AssertionFailure() << "message lacks offset " << offset << ": " << what;
    }
    return ::testing::AssertionSuccess();
  }
  return ::testing::AssertionFailure() << "did not throw";
}

TEST(MatrixFile, RoundTripIsBitExact) {
  std::mt19937_64 gen(1);
  Matrix m = RandomMatrix(3, 5, gen, -1e3, 1e3);
  m(0, 0) = -0.0;
  m(0, 1) = std::numeric_limits<double>::denorm_min();
  m(0, 2) = std::numeric_limits<double>::max();
  const std::string bytes = EncodeMatrix(m);
  ASSERT_EQ(bytes.size(), 4u + 2 + 2 + 4 + 2 * 8 + 15 * 8);
  EXPECT_EQ(bytes.substr(0, 4), "RSHD");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 1);
  EXPECT_EQ(bytes[8], 2);
  EXPECT_EQ(ReadU64(bytes, 12), 3u);
  EXPECT_EQ(ReadU64(bytes, 20), 5u);
  // Row-major little-endian payload.
  EXPECT_EQ(ReadU64(bytes, 28 + 8 * 6), std::bit_cast<std::uint64_t>(m(1, 1)));
  EXPECT_TRUE(DecodeMatrix(bytes).BitEquals(m));

  TempDir dir;
  SaveMatrix(dir / "m.rshd", m);
  EXPECT_TRUE(LoadMatrix(dir / "m.rshd").BitEquals(m));
  const MatrixShape shape = PeekMatrixShape(dir / "m.rshd");
  EXPECT_EQ(shape.rows, 3u);
  EXPECT_EQ(shape.cols, 5u);
}

TEST(MatrixFile, EveryTruncationIsAnIoError) {
  std::mt19937_64 gen(2);
  const std::string bytes = EncodeMatrix(RandomMatrix(3, 5, gen));
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    EXPECT_TRUE(ThrowsCategory([&] { DecodeMatrix(std::string_view(bytes).substr(0, len)); },
                               ErrorCategory::kIo))
        << "length " << len;
  }
  // The offset names where the data ran out.
  EXPECT_TRUE(IoErrorAtOffset([&] { DecodeMatrix(std::string_view(bytes).substr(0, 30)); },
                              30));
  EXPECT_TRUE(IoErrorAtOffset([&] { DecodeMatrix(bytes + "x"); }, bytes.size()));
}

TEST(MatrixFile, CorruptHeaders) {
  std::mt19937_64 gen(3);
  const std::string good = EncodeMatrix(RandomMatrix(2, 2, gen));
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_TRUE(IoErrorAtOffset([&] { DecodeMatrix(bad); }, 0));
  bad = good;
  bad[4] = 2;
  EXPECT_TRUE(IoErrorAtOffset([&] { DecodeMatrix(bad); }, 4));
  bad = good;
  bad[6] = 7;
  EXPECT_TRUE(IoErrorAtOffset([&] { DecodeMatrix(bad); }, 6));
  bad = good;
  bad[8] = 3;
  EXPECT_TRUE(IoErrorAtOffset([&] { DecodeMatrix(bad); }, 8));
}

TEST(MatrixFile, TruncatedFileLeavesNoResult) {
  TempDir dir;
  std::mt19937_64 gen(4);
  const std::string bytes = EncodeMatrix(RandomMatrix(3, 5, gen));
  WriteFileAtomic(dir / "t.rshd", bytes.substr(0, bytes.size() - 3));
  Matrix out(1, 1);
  out(0, 0) = 42.0;
  EXPECT_TRUE(ThrowsCategory([&] { out = LoadMatrix(dir / "t.rshd"); }, ErrorCategory::kIo));
  EXPECT_EQ(out.rows(), 1u);
  EXPECT_EQ(out(0, 0), 42.0);
  EXPECT_TRUE(ThrowsCategory([&] { LoadMatrix(dir / "missing.rshd"); }, ErrorCategory::kIo));
}

TEST(Files, AtomicWriteAndForce) {
  TempDir dir;
  const auto path = dir / "a/b/c.txt";
  EXPECT_NO_THROW(CheckWritable(path, false));
  WriteFileAtomic(path, "hello");
  EXPECT_EQ(ReadFileBytes(path), "hello");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  EXPECT_TRUE(ThrowsCategory([&] { CheckWritable(path, false); }, ErrorCategory::kIo));
  EXPECT_NO_THROW(CheckWritable(path, true));
}

TEST(Digest, KnownVectorsAndCanonicalConfig) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(ConfigDigest(json::parse(R"({"b":1,"a":2})")),
            ConfigDigest(json::parse(R"({"a":2,"b":1})")));
  EXPECT_NE(ConfigDigest(json{{"a", 1}}), ConfigDigest(json{{"a", 2}}));
}

TEST(ConfigJson, RoundTripsAndRejectsBadInput) {
  SynthConfig synth;
  synth.n_speakers = 9;
  synth.identity_strength = 0.25;
  synth.identity_positions = {0, 2};
  const SynthConfig back = json(synth).get<SynthConfig>();
  EXPECT_EQ(json(back), json(synth));

  SweepSpec spec;
  spec.modes = {SelectionMode::kRandom};
  spec.k_list = {0, 50};
  EXPECT_EQ(json(json(spec).get<SweepSpec>()), json(spec));

  SanitizerConfig san;
  san.k_percent = 35;
  san.mode = SelectionMode::kRandom;
  EXPECT_EQ(json(json(san).get<SanitizerConfig>()), json(san));

  TrainConfig partial = json::parse(R"({"epochs": 3})").get<TrainConfig>();
  EXPECT_EQ(partial.epochs, 3u);
  EXPECT_EQ(partial.lr, TrainConfig{}.lr);

  EXPECT_TRUE(ThrowsCategory([] { json::parse(R"({"epochz": 3})").get<TrainConfig>(); },
                             ErrorCategory::kConfig));
  EXPECT_TRUE(ThrowsCategory([] { json::parse(R"({"epochs": -3})").get<TrainConfig>(); },
                             ErrorCategory::kConfig));
  EXPECT_TRUE(ThrowsCategory([] { json::parse(R"({"lr": "fast"})").get<TrainConfig>(); },
                             ErrorCategory::kConfig));
  EXPECT_TRUE(ThrowsCategory([] { ParseJson("{", "cfg.json"); }, ErrorCategory::kConfig));
}

json Provenance() { return json{{"seed", 3}, {"config_digest", "abc"}}; }

Matrix Probe(std::size_t t, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return RandomMatrix(t, d, gen, -2.0, 2.0);
}

TEST(Checkpoint, PseRoundTripReproducesForward) {
  Rng rng = MakeStream(5);
  const PseModel pse(DeskPseConfig(32), rng);
  TempDir dir;
  SaveCheckpoint(dir / "pse.ckpt", ToCheckpoint(pse, Provenance()));
  const Checkpoint loaded = LoadCheckpoint(dir / "pse.ckpt");
  EXPECT_EQ(loaded.kind, "pse");
  EXPECT_EQ(loaded.provenance, Provenance());
  const PseModel back = PseFromCheckpoint(loaded);
  for (std::size_t t : {1u, 7u, 30u}) {
    const Matrix x = Probe(t, 32, t);
    EXPECT_TRUE(back.Estimate(x).BitEquals(pse.Estimate(x)));
  }
  EXPECT_EQ(EncodeCheckpoint(ToCheckpoint(back, Provenance())),
            EncodeCheckpoint(ToCheckpoint(pse, Provenance())));
}

TEST(Checkpoint, PooledAndEmbedderRoundTrips) {
  Rng rng = MakeStream(6);
  const SidModel sid(PooledLinearConfig{16, 5}, rng);
  const ClassifierModel clf(PooledLinearConfig{16, 3}, rng);
  const EmbedderModel emb(EmbedderConfig{16, 12, 6, 4}, rng);
  const Matrix x = Probe(9, 16, 1);
  const SidModel sid2 = SidFromCheckpoint(DecodeCheckpoint(
      EncodeCheckpoint(ToCheckpoint(sid, Provenance()))));
  EXPECT_TRUE(sid2.Logits(Tensor(x)).value().BitEquals(sid.Logits(Tensor(x)).value()));
  const ClassifierModel clf2 = ClassifierFromCheckpoint(DecodeCheckpoint(
      EncodeCheckpoint(ToCheckpoint(clf, Provenance()))));
  EXPECT_TRUE(clf2.Logits(Tensor(x)).value().BitEquals(clf.Logits(Tensor(x)).value()));
  const EmbedderModel emb2 = EmbedderFromCheckpoint(DecodeCheckpoint(
      EncodeCheckpoint(ToCheckpoint(emb, Provenance()))));
  EXPECT_EQ(emb2.Embed(x), emb.Embed(x));

  EXPECT_TRUE(ThrowsCategory([&] { SidFromCheckpoint(ToCheckpoint(clf, Provenance())); },
                             ErrorCategory::kData));
  EXPECT_TRUE(ThrowsCategory([&] { ToCheckpoint(sid, json{{"seed", 1}}); },
                             ErrorCategory::kContract));
}

TEST(Checkpoint, CorruptionIsAnIoError) {
  Rng rng = MakeStream(7);
  const SidModel sid(PooledLinearConfig{8, 3}, rng);
  const std::string bytes = EncodeCheckpoint(ToCheckpoint(sid, Provenance()));
  for (std::size_t len = 0; len < bytes.size(); len += 7) {
    EXPECT_TRUE(ThrowsCategory([&] { DecodeCheckpoint(bytes.substr(0, len)); },
                               ErrorCategory::kIo))
        << "length " << len;
  }
  std::string bad = bytes;
  bad[1] = 'Z';
  EXPECT_TRUE(IoErrorAtOffset([&] { DecodeCheckpoint(bad); }, 0));
  EXPECT_TRUE(IoErrorAtOffset([&] { DecodeCheckpoint(bytes + "!"); }, bytes.size()));
}

TEST(Checkpoint, ShapeMismatchIsDataError) {
  Rng rng = MakeStream(8);
  const SidModel sid(PooledLinearConfig{8, 3}, rng);
  Checkpoint ckpt = ToCheckpoint(sid, Provenance());
  ckpt.tensors[0].second = Matrix(8, 4);
  EXPECT_TRUE(ThrowsCategory([&] { SidFromCheckpoint(ckpt); }, ErrorCategory::kData));
  ckpt = ToCheckpoint(sid, Provenance());
  ckpt.tensors[1].second(0, 0) = NAN;
  EXPECT_TRUE(ThrowsCategory([&] { SidFromCheckpoint(ckpt); }, ErrorCategory::kData));
}

json Header() {
  return json{{"type", "header"}, {"seed", 1}, {"config_digest", "d"}};
}

TEST(Manifest, EncodeDecodeRoundTrip) {
  Manifest m;
  m.header = Header();
  m.records.push_back({"a", "features/a.rshd", 3, 1, 4, 8, Partition::kSid});
  m.records.push_back({"b", "features/b.rshd", 2, std::nullopt, 5, 8, std::nullopt});
  const Manifest back = DecodeManifest(EncodeManifest(m), "m");
  EXPECT_EQ(back.header, m.header);
  ASSERT_EQ(back.records.size(), 2u);
  EXPECT_EQ(back.records[0].id, "a");
  EXPECT_EQ(back.records[0].content, std::optional<std::size_t>(1));
  EXPECT_EQ(back.records[0].partition, std::optional<Partition>(Partition::kSid));
  EXPECT_FALSE(back.records[1].content.has_value());
  EXPECT_EQ(EncodeManifest(back), EncodeManifest(m));
}

TEST(Manifest, RejectsMalformedInput) {
  const std::string header = Header().dump() + "\n";
  const std::string rec = R"({"id":"a","path":"a.rshd","speaker":0,"t":2,"d":3})";
  EXPECT_NO_THROW(DecodeManifest(header + rec + "\n", "m"));
  EXPECT_TRUE(ThrowsCategory([&] { DecodeManifest(header + rec + "\n" + rec + "\n", "m"); },
                             ErrorCategory::kData));
  EXPECT_TRUE(ThrowsCategory([&] { DecodeManifest(rec + "\n", "m"); }, ErrorCategory::kData));
  EXPECT_TRUE(ThrowsCategory([&] { DecodeManifest("", "m"); }, ErrorCategory::kData));
  EXPECT_TRUE(ThrowsCategory(
      [&] { DecodeManifest(header + R"({"id":"a","path":"a","speaker":0,"t":0,"d":3})", "m"); },
      ErrorCategory::kData));
  EXPECT_TRUE(ThrowsCategory(
      [&] { DecodeManifest(header + R"({"id":"a","speaker":0,"t":1,"d":3})", "m"); },
      ErrorCategory::kData));
  EXPECT_TRUE(ThrowsCategory([&] { DecodeManifest(header + "{nope", "m"); },
                             ErrorCategory::kData));
  EXPECT_TRUE(ThrowsCategory(
      [&] { DecodeManifest(json{{"type", "header"}, {"seed", 1}}.dump(), "m"); },
      ErrorCategory::kData));
}

std::vector<Utterance> SmallCorpus() {
  std::mt19937_64 gen(9);
  std::vector<Utterance> out;
  for (std::size_t i = 0; i < 6; ++i) {
    out.push_back({"utt-" + std::to_string(i), RandomMatrix(2 + i, 4, gen), i % 3, i % 2,
                   i < 2 ? Partition::kSid : Partition::kAsvEval});
  }
  return out;
}

TEST(Corpus, SaveLoadRoundTrip) {
  TempDir dir;
  const auto utts = SmallCorpus();
  SaveCorpus(dir / "data", Header(), utts, false);
  const Corpus corpus = LoadCorpus(dir / "data");
  EXPECT_EQ(LoadCorpus(dir / "data/manifest.jsonl").utterances.size(), utts.size());
  ASSERT_EQ(corpus.utterances.size(), utts.size());
  for (std::size_t i = 0; i < utts.size(); ++i) {
    EXPECT_EQ(corpus.utterances[i].id, utts[i].id);
    EXPECT_EQ(corpus.utterances[i].speaker, utts[i].speaker);
    EXPECT_EQ(corpus.utterances[i].content, utts[i].content);
    EXPECT_EQ(corpus.utterances[i].partition, utts[i].partition);
    EXPECT_TRUE(corpus.utterances[i].features.BitEquals(utts[i].features));
  }
  EXPECT_EQ(corpus.InPartition(Partition::kSid).size(), 2u);
  EXPECT_TRUE(corpus.HasContentLabels());
  EXPECT_TRUE(ThrowsCategory([&] { SaveCorpus(dir / "data", Header(), utts, false); },
                             ErrorCategory::kIo));
  EXPECT_NO_THROW(SaveCorpus(dir / "data", Header(), utts, true));
}

TEST(Corpus, MissingFilesAndShapeMismatch) {
  TempDir dir;
  const auto utts = SmallCorpus();
  SaveCorpus(dir.path(), Header(), utts, false);
  std::filesystem::remove(dir / "features/utt-3.rshd");
  EXPECT_TRUE(ThrowsCategory([&] { LoadCorpus(dir.path()); }, ErrorCategory::kIo));
  SaveMatrix(dir / "features/utt-3.rshd", Matrix(2, 2));
  EXPECT_TRUE(ThrowsCategory([&] { LoadCorpus(dir.path()); }, ErrorCategory::kData));
  EXPECT_TRUE(ThrowsCategory([&] { LoadCorpus(dir / "nowhere"); }, ErrorCategory::kIo));
}

TEST(Corpus, RejectsUnsafeOrDuplicateIds) {
  TempDir dir;
  auto utts = SmallCorpus();
  utts[1].id = "../escape";
  EXPECT_TRUE(ThrowsCategory([&] { SaveCorpus(dir.path(), Header(), utts, false); },
                             ErrorCategory::kData));
  utts = SmallCorpus();
  utts[1].id = utts[0].id;
  EXPECT_TRUE(ThrowsCategory([&] { SaveCorpus(dir.path(), Header(), utts, false); },
                             ErrorCategory::kData));
}

TEST(SaliencyIo, RoundTrip) {
  std::mt19937_64 gen(10);
  SaliencyDataset ds;
  ds.provenance = {"feedbeef", SmoothGradConfig{7, 0.2, 4}};
  for (std::size_t i = 0; i < 5; ++i) {
    ds.pairs.push_back({"p" + std::to_string(i), RandomMatrix(3 + i, 6, gen),
                        SaliencyMap(RandomMatrix(3 + i, 6, gen, 0.0, 2.0))});
  }
  TempDir dir;
  SaveSaliencyDataset(dir / "sal", ds, 11, false);
  const SaliencyDataset back = LoadSaliencyDataset(dir / "sal");
  EXPECT_EQ(back.provenance.sid_checkpoint, "feedbeef");
  EXPECT_EQ(back.provenance.smoothgrad.n_samples, 7u);
  EXPECT_EQ(back.provenance.smoothgrad.sigma, 0.2);
  EXPECT_EQ(back.provenance.smoothgrad.seed, 4u);
  ASSERT_EQ(back.pairs.size(), ds.pairs.size());
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    EXPECT_EQ(back.pairs[i].id, ds.pairs[i].id);
    EXPECT_TRUE(back.pairs[i].x.BitEquals(ds.pairs[i].x));
    EXPECT_TRUE(back.pairs[i].saliency.values().BitEquals(ds.pairs[i].saliency.values()));
  }
  const json header = SaliencyHeader(ds, 11);
  EXPECT_EQ(header["seed"], 11);
  EXPECT_TRUE(header.contains("config_digest"));
  EXPECT_TRUE(ThrowsCategory([&] { SaveSaliencyDataset(dir / "sal", ds, 11, false); },
                             ErrorCategory::kIo));
}

}  // namespace
}  // namespace rshd
