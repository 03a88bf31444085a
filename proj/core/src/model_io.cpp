// Copyright 2026 The MemQA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "memqa/retrieval.hpp"

static_assert(std::endian::native == std::endian::little,
              "model artifacts assume a little-endian host");

namespace memqa {

namespace {

nlohmann::json encoder_json(const EncoderConfig& cfg) {
  return {{"buckets", cfg.buckets}, {"dim", cfg.dim}, {"seed", cfg.seed}};
}

EncoderConfig encoder_from_json(const nlohmann::json& j) {
  EncoderConfig cfg;
  cfg.buckets = j.at("buckets").get<uint32_t>();
  cfg.dim = j.at("dim").get<uint32_t>();
  cfg.seed = j.at("seed").get<uint64_t>();
  return cfg;
}

void write_artifact(const nlohmann::json& header, const float* weights, size_t count,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model artifact: " + path);
  out << header.dump() << "\n";
  out.write(reinterpret_cast<const char*>(weights),
            static_cast<std::streamsize>(count * sizeof(float)));
  if (!out) throw Error("short write on model artifact: " + path);
}

struct Artifact {
  nlohmann::json header;
  std::vector<float> weights;
};

Artifact read_artifact(const std::string& path, const std::string& expected_role) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptArtifactError("cannot open model artifact: " + path);
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw CorruptArtifactError("model artifact has no header: " + path);
  }
  Artifact a;
  try {
    a.header = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptArtifactError("model artifact header is not JSON (" + path + "): " + e.what());
  }
  int version = a.header.value("format_version", -1);
  if (version != kModelFormatVersion) {
    throw VersionMismatchError("model artifact format_version " + std::to_string(version) +
                               " is not supported (expected " +
                               std::to_string(kModelFormatVersion) + "): " + path);
  }
  std::string role = a.header.value("role", "");
  if (role != expected_role) {
    throw CorruptArtifactError("model artifact role '" + role + "' does not match expected '" +
                               expected_role + "': " + path);
  }
  size_t count = 0;
  try {
    count = a.header.at("weights").at("count").get<size_t>();
    if (a.header.at("weights").at("dtype").get<std::string>() != "f32") {
      throw CorruptArtifactError("unsupported weight dtype in " + path);
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorruptArtifactError("model artifact header incomplete (" + path + "): " + e.what());
  }
  a.weights.resize(count);
  in.read(reinterpret_cast<char*>(a.weights.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (static_cast<size_t>(in.gcount()) != count * sizeof(float)) {
    throw CorruptArtifactError("model artifact blob is truncated: " + path);
  }
  char extra = 0;
  if (in.read(&extra, 1) && in.gcount() > 0) {
    throw CorruptArtifactError("model artifact has trailing bytes: " + path);
  }
  return a;
}

}  // namespace

void save_model(const DualEncoderModel& model, const std::string& path) {
  nlohmann::json header = {
      {"format_version", kModelFormatVersion},
      {"role", "pre"},
      {"encoder", encoder_json(model.config())},
      {"init_seed", model.init_seed()},
      {"weights", {{"count", model.weights().size()}, {"dtype", "f32"}}},
  };
  write_artifact(header, model.weights().data(), model.weights().size(), path);
}

void save_model(const JointClassifierModel& model, const std::string& path) {
  // The bias rides as the last float of the blob.
  std::vector<float> blob = model.weights();
  blob.push_back(model.bias());
  nlohmann::json header = {
      {"format_version", kModelFormatVersion},
      {"role", "dis"},
      {"encoder", encoder_json(model.config())},
      {"weights", {{"count", blob.size()}, {"dtype", "f32"}}},
  };
  write_artifact(header, blob.data(), blob.size(), path);
}

DualEncoderModel load_pre_model(const std::string& path) {
  Artifact a = read_artifact(path, "pre");
  EncoderConfig cfg = encoder_from_json(a.header.at("encoder"));
  uint64_t init_seed = a.header.value("init_seed", uint64_t{0});
  DualEncoderModel model(cfg, init_seed);
  if (a.weights.size() != model.weights().size()) {
    throw CorruptArtifactError("weight count does not match encoder config: " + path);
  }
  model.weights() = std::move(a.weights);
  return model;
}

JointClassifierModel load_dis_model(const std::string& path) {
  Artifact a = read_artifact(path, "dis");
  EncoderConfig cfg = encoder_from_json(a.header.at("encoder"));
  JointClassifierModel model(cfg);
  if (a.weights.size() != model.weights().size() + 1) {
    throw CorruptArtifactError("weight count does not match encoder config: " + path);
  }
  model.bias() = a.weights.back();
  a.weights.pop_back();
  model.weights() = std::move(a.weights);
  return model;
}

namespace {

std::string artifact_name(const std::string& manifest_path, const char* suffix) {
  std::filesystem::path p(manifest_path);
  return p.stem().string() + suffix;
}

}  // namespace

void save_bundle(const DetectorBundle& bundle, const std::string& manifest_path) {
  std::filesystem::path dir = std::filesystem::path(manifest_path).parent_path();
  std::string pre_name = artifact_name(manifest_path, ".pre.bin");
  std::string dis_name = artifact_name(manifest_path, ".dis.bin");
  save_model(bundle.pre, (dir / pre_name).string());
  save_model(bundle.dis, (dir / dis_name).string());
  nlohmann::json manifest = {
      {"format_version", kBundleFormatVersion},
      {"threshold", bundle.threshold},
      {"pre", pre_name},
      {"dis", dis_name},
  };
  std::ofstream out(manifest_path);
  if (!out) throw Error("cannot write bundle manifest: " + manifest_path);
  out << manifest.dump(2) << "\n";
}

DetectorBundle load_bundle(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw CorruptArtifactError("cannot open bundle manifest: " + manifest_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptArtifactError("bundle manifest is not JSON (" + manifest_path +
                               "): " + e.what());
  }
  int version = manifest.value("format_version", -1);
  if (version != kBundleFormatVersion) {
    throw VersionMismatchError("bundle format_version " + std::to_string(version) +
                               " is not supported: " + manifest_path);
  }
  std::filesystem::path dir = std::filesystem::path(manifest_path).parent_path();
  std::string pre_path = (dir / manifest.at("pre").get<std::string>()).string();
  std::string dis_path = (dir / manifest.at("dis").get<std::string>()).string();
  DetectorBundle bundle(load_pre_model(pre_path), load_dis_model(dis_path));
  bundle.threshold = manifest.value("threshold", 0.5);
  return bundle;
}

DetectorBundle load_bundle_parts(const std::string& pre_path, const std::string& dis_path,
                                 double threshold) {
  DetectorBundle bundle(load_pre_model(pre_path), load_dis_model(dis_path));
  bundle.threshold = threshold;
  return bundle;
}

}  // namespace memqa
