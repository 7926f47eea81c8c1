// Copyright 2026 The thermofoot Authors
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

#include "thermofoot/nn/serialize.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "thermofoot/errors.hpp"

namespace thermo::nn {
namespace {
constexpr char kMagic[4] = {'T', 'F', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_pod(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace

void save_params(const std::string& path, const std::vector<Param*>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path);
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint32_t>(params.size()));
  for (const Param* p : params) {
    write_pod(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    write_pod(out, static_cast<std::uint64_t>(p->value.size()));
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(float)));
  }
}

void load_params(const std::string& path, const std::vector<Param*>& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot open checkpoint " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw SchemaMismatch("not a thermofoot checkpoint: " + path);
  std::uint32_t version = 0, count = 0;
  read_pod(in, version);
  read_pod(in, count);
  if (version != kVersion)
    throw SchemaMismatch("unsupported checkpoint version " + std::to_string(version));
  if (count != params.size())
    throw SchemaMismatch("checkpoint has " + std::to_string(count) +
                         " params, model expects " + std::to_string(params.size()));
  for (Param* p : params) {
    std::uint32_t name_len = 0;
    read_pod(in, name_len);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    std::uint64_t n = 0;
    read_pod(in, n);
    if (name != p->name || n != p->value.size())
      throw SchemaMismatch("checkpoint param '" + name + "' does not match model '" +
                           p->name + "'");
    in.read(reinterpret_cast<char*>(p->value.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    if (!in) throw SchemaMismatch("truncated checkpoint " + path);
  }
}

void save_fit_log(const std::string& path, const FitResult& result,
                  const std::string& metric_name) {
  nlohmann::json j;
  j["metric"] = metric_name;
  j["best_epoch"] = result.best_epoch;
  j["best_metric"] = result.best_metric;
  j["epochs_run"] = result.epochs_run;
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : result.log) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_metric", e.val_metric},
                      {"lr", e.lr}});
  }
  j["epochs"] = epochs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace thermo::nn
