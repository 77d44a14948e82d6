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

#include "pscd/datasets.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <numbers>
#include <set>

#include "pscd/csv.hpp"
#include "pscd/rng.hpp"

namespace pscd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBox = 4.5;

Error invalid_spec(const std::string& what) { return Error("datasets", ErrorCode::InvalidSpec, what); }

std::string normalize(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

double param_or(const DatasetSpec& spec, const std::string& key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

void reject_unknown_params(const DatasetSpec& spec, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : spec.params) {
    if (!allowed.contains(key)) {
      throw invalid_spec("unknown parameter '" + key + "' for dataset " + to_string(spec.name));
    }
    if (!std::isfinite(value)) throw invalid_spec("parameter '" + key + "' is not finite");
  }
}

using Point2 = std::pair<double, double>;

Point2 draw_cosine(Rng& rng) {
  const double x = rng.uniform(-4.0, 4.0);
  return {x, 2.0 * std::cos(x * kPi / 2.0) + 0.3 * rng.normal()};
}

Point2 draw_swiss_roll(Rng& rng) {
  const double t = 1.5 * kPi * (1.0 + 2.0 * rng.uniform());
  const double scale = 3.5 / (4.5 * kPi);
  const double nx = rng.normal();
  const double ny = rng.normal();
  return {t * std::cos(t) * scale + 0.1 * nx, t * std::sin(t) * scale + 0.1 * ny};
}

Point2 draw_moon(Rng& rng) {
  const double a = rng.uniform(0.0, kPi);
  const bool upper = rng.bernoulli(0.5);
  double x = upper ? std::cos(a) : 1.0 - std::cos(a);
  double y = upper ? std::sin(a) : 0.5 - std::sin(a);
  x = (x - 0.5) * 2.5;
  y = (y - 0.25) * 2.5;
  const double nx = rng.normal();
  const double ny = rng.normal();
  return {x + 0.1 * nx, y + 0.1 * ny};
}

Point2 draw_mog2d(Rng& rng) {
  const auto k = static_cast<double>(rng.below(8));
  const double angle = 2.0 * kPi * k / 8.0;
  const double nx = rng.normal();
  const double ny = rng.normal();
  return {3.0 * std::cos(angle) + 0.2 * nx, 3.0 * std::sin(angle) + 0.2 * ny};
}

Point2 draw_funnel(Rng& rng) {
  while (true) {
    const double v = rng.normal(0.0, 1.5);
    const double x = rng.normal(0.0, std::exp(v / 2.0));
    if (std::abs(v) <= 4.0 && std::abs(x) <= 4.0) return {v, x};
  }
}

Point2 draw_rings(Rng& rng) {
  const double radius = rng.bernoulli(0.5) ? 1.0 : 2.5;
  const double angle = rng.uniform(0.0, 2.0 * kPi);
  const double r = radius + 0.08 * rng.normal();
  return {r * std::cos(angle), r * std::sin(angle)};
}

PointSet sample_2d(const DatasetSpec& spec, Point2 (*draw)(Rng&)) {
  reject_unknown_params(spec, {});
  Rng rng(derive_seed(spec.seed, to_string(spec.name)));
  PointSet out(2);
  out.reserve(spec.n);
  while (out.size() < spec.n) {
    const auto [x, y] = draw(rng);
    if (std::isfinite(x) && std::isfinite(y) && std::abs(x) <= kBox && std::abs(y) <= kBox) {
      const double p[2] = {x, y};
      out.push_back(p);
    }
  }
  return out;
}

DensitySpec mog1d_from_params(const DatasetSpec& spec) {
  if (spec.params.empty()) return default_mog1d();
  std::vector<GaussianComponent> comps;
  std::set<std::string> allowed;
  for (std::size_t k = 0;; ++k) {
    const auto idx = std::to_string(k);
    if (!spec.params.contains("w" + idx)) break;
    for (const char* prefix : {"w", "m", "s"}) allowed.insert(prefix + idx);
    comps.push_back({spec.params.at("w" + idx), param_or(spec, "m" + idx, 0.0), param_or(spec, "s" + idx, 1.0)});
  }
  reject_unknown_params(spec, allowed);
  try {
    return DensitySpec(std::move(comps));
  } catch (const Error& e) {
    throw invalid_spec(std::string("bad MoG1D parameters: ") + e.what());
  }
}

void check_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio < 0.5)) throw invalid_spec("contamination ratio must lie in [0, 0.5)");
}

}  // namespace

std::string to_string(DatasetName name) {
  switch (name) {
    case DatasetName::Cosine: return "Cosine";
    case DatasetName::SwissRoll: return "SwissRoll";
    case DatasetName::Moon: return "Moon";
    case DatasetName::MoG2D: return "MoG2D";
    case DatasetName::Funnel: return "Funnel";
    case DatasetName::Rings: return "Rings";
    case DatasetName::MoG1D: return "MoG1D";
    case DatasetName::ContaminatedGaussian: return "ContaminatedGaussian";
  }
  return "Unknown";
}

DatasetName dataset_from_string(const std::string& name) {
  const auto key = normalize(name);
  for (auto d : {DatasetName::Cosine, DatasetName::SwissRoll, DatasetName::Moon, DatasetName::MoG2D,
                 DatasetName::Funnel, DatasetName::Rings, DatasetName::MoG1D, DatasetName::ContaminatedGaussian}) {
    if (normalize(to_string(d)) == key) return d;
  }
  if (key == "mog" || key == "mixtureofgaussians") return DatasetName::MoG2D;
  if (key == "moons") return DatasetName::Moon;
  throw invalid_spec("unknown dataset '" + name + "'");
}

const std::vector<DatasetName>& benchmark_datasets() {
  static const std::vector<DatasetName> names{DatasetName::Cosine, DatasetName::SwissRoll, DatasetName::Moon,
                                              DatasetName::MoG2D,  DatasetName::Funnel,    DatasetName::Rings};
  return names;
}

PointSet sample_dataset(const DatasetSpec& spec) {
  if (spec.n == 0) throw invalid_spec("dataset size must be >= 1");
  switch (spec.name) {
    case DatasetName::Cosine: return sample_2d(spec, draw_cosine);
    case DatasetName::SwissRoll: return sample_2d(spec, draw_swiss_roll);
    case DatasetName::Moon: return sample_2d(spec, draw_moon);
    case DatasetName::MoG2D: return sample_2d(spec, draw_mog2d);
    case DatasetName::Funnel: return sample_2d(spec, draw_funnel);
    case DatasetName::Rings: return sample_2d(spec, draw_rings);
    case DatasetName::MoG1D: {
      const auto density = mog1d_from_params(spec);
      Rng rng(derive_seed(spec.seed, to_string(spec.name)));
      return PointSet::from_scalars(density.sample(spec.n, rng));
    }
    case DatasetName::ContaminatedGaussian: {
      reject_unknown_params(spec, {"ratio", "target_mean", "target_std", "contaminant_mean", "contaminant_std"});
      if (!spec.params.contains("ratio")) throw invalid_spec("ContaminatedGaussian needs a 'ratio' parameter");
      ContaminationModel model;
      model.target_mean = param_or(spec, "target_mean", model.target_mean);
      model.target_std = param_or(spec, "target_std", model.target_std);
      model.contaminant_mean = param_or(spec, "contaminant_mean", model.contaminant_mean);
      model.contaminant_std = param_or(spec, "contaminant_std", model.contaminant_std);
      return PointSet::from_scalars(contaminated_gaussian(spec.n, spec.params.at("ratio"), spec.seed, model));
    }
  }
  throw invalid_spec("unknown dataset");
}

std::vector<double> contaminated_gaussian(std::size_t n, double ratio, std::uint64_t seed,
                                          const ContaminationModel& model) {
  check_ratio(ratio);
  if (!(model.target_std > 0.0) || !(model.contaminant_std > 0.0)) {
    throw invalid_spec("contamination model needs positive standard deviations");
  }
  Rng rng(derive_seed(seed, "ContaminatedGaussian"));
  std::vector<double> out(n);
  for (double& x : out) {
    const bool contaminant = rng.uniform() < ratio;
    const double z = rng.normal();
    x = contaminant ? model.contaminant_mean + model.contaminant_std * z : model.target_mean + model.target_std * z;
  }
  return out;
}

DensitySpec contaminated_density(double ratio, const ContaminationModel& model) {
  check_ratio(ratio);
  if (ratio == 0.0) return DensitySpec::gaussian(model.target_mean, model.target_std);
  return DensitySpec({{1.0 - ratio, model.target_mean, model.target_std},
                      {ratio, model.contaminant_mean, model.contaminant_std}});
}

DensitySpec default_mog1d() { return DensitySpec({{0.5, -1.5, 0.4}, {0.5, 1.2, 0.6}}); }

std::vector<std::pair<double, double>> mog2d_centres() {
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < 8; ++k) {
    const double angle = 2.0 * kPi * k / 8.0;
    out.emplace_back(3.0 * std::cos(angle), 3.0 * std::sin(angle));
  }
  return out;
}

std::string dataset_csv(const PointSet& points) {
  std::string out = points.dim() == 1 ? "x0\n" : "x0,x1\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto row = points[i];
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (d) out += ',';
      out += format_double(row[d]);
    }
    out += '\n';
  }
  return out;
}

std::string dataset_binary(const PointSet& points) {
  std::string out;
  out.reserve(points.values().size() * 8);
  for (double v : points.values()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.append(bytes, 8);
  }
  return out;
}

}  // namespace pscd
