// Copyright 2026 The pscd Authors
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

#include "pscd/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pscd/error.hpp"

namespace pscd {

namespace {

constexpr char kMagic[8] = {'P', 'S', 'C', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

Error io_error(const std::string& what) { return Error("energy", ErrorCode::IoError, what); }

EnergyModel build(EnergyKind kind, std::vector<std::size_t> widths, std::vector<double> params) {
  if (kind == EnergyKind::GaussianQuadratic) {
    if (params.size() != 2) throw Error("energy", ErrorCode::InvalidShape, "GaussianQuadratic needs 2 params");
    auto model = EnergyModel::gaussian_quadratic(0.0, 1.0);
    model.set_params(std::move(params));
    return model;
  }
  return EnergyModel::mlp(std::move(widths), std::move(params));
}

template <typename T>
void put(std::string& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  auto bits = std::bit_cast<U>(value);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.append(bytes, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  if (pos + sizeof(T) > in.size()) throw io_error("binary checkpoint is truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(T);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::string checkpoint_json(const EnergyModel& model) {
  nlohmann::json j;
  j["format"] = "pscd-energy";
  j["version"] = kVersion;
  j["kind"] = to_string(model.kind());
  j["input_dim"] = model.input_dim();
  j["widths"] = model.kind() == EnergyKind::Mlp ? model.widths() : std::vector<std::size_t>{1};
  j["params"] = std::vector<double>(model.params().begin(), model.params().end());
  return j.dump(2) + "\n";
}

EnergyModel checkpoint_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "pscd-energy") throw io_error("not a pscd-energy checkpoint");
    if (j.at("version").get<std::uint32_t>() != kVersion) throw io_error("unsupported checkpoint version");
    const auto kind = energy_kind_from_string(j.at("kind").get<std::string>());
    return build(kind, j.at("widths").get<std::vector<std::size_t>>(), j.at("params").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("malformed checkpoint: ") + e.what());
  }
}

std::string checkpoint_binary(const EnergyModel& model) {
  std::string out(kMagic, sizeof(kMagic));
  put(out, kVersion);
  put(out, static_cast<std::uint32_t>(model.kind() == EnergyKind::Mlp ? 1 : 0));
  const auto widths = model.kind() == EnergyKind::Mlp ? model.widths() : std::vector<std::size_t>{1};
  put(out, static_cast<std::uint64_t>(widths.size()));
  for (auto w : widths) put(out, static_cast<std::uint64_t>(w));
  put(out, static_cast<std::uint64_t>(model.num_params()));
  for (double p : model.params()) put(out, p);
  return out;
}

EnergyModel checkpoint_from_binary(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw io_error("binary checkpoint has a bad magic header");
  }
  std::size_t pos = sizeof(kMagic);
  if (take<std::uint32_t>(bytes, pos) != kVersion) throw io_error("unsupported checkpoint version");
  const auto kind_code = take<std::uint32_t>(bytes, pos);
  if (kind_code > 1) throw io_error("unknown energy kind in checkpoint");
  const auto n_widths = take<std::uint64_t>(bytes, pos);
  if (n_widths > 1024) throw io_error("implausible width count in checkpoint");
  std::vector<std::size_t> widths(n_widths);
  for (auto& w : widths) w = take<std::uint64_t>(bytes, pos);
  const auto n_params = take<std::uint64_t>(bytes, pos);
  if (n_params > (bytes.size() - pos) / 8) throw io_error("binary checkpoint is truncated");
  std::vector<double> params(n_params);
  for (auto& p : params) p = take<double>(bytes, pos);
  if (pos != bytes.size()) throw io_error("trailing bytes after binary checkpoint");
  return build(kind_code == 1 ? EnergyKind::Mlp : EnergyKind::GaussianQuadratic, std::move(widths),
               std::move(params));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw io_error("failed writing '" + path + "'");
}

}  // namespace pscd
