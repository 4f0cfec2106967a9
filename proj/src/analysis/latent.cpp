#include "qovae/analysis/latent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qovae/analysis/csv.hpp"

namespace qovae::analysis {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(10);
  return out;
}

}  // namespace

std::vector<double> slerp(std::span<const double> z1, std::span<const double> z2, double t) {
  if (z1.size() != z2.size()) throw std::invalid_argument("slerp: dimension mismatch");
  double dot = 0, n1 = 0, n2 = 0;
  for (std::size_t i = 0; i < z1.size(); ++i) {
    dot += z1[i] * z2[i];
    n1 += z1[i] * z1[i];
    n2 += z2[i] * z2[i];
  }
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("slerp: zero vector");
  const double c = std::clamp(dot / std::sqrt(n1 * n2), -1.0, 1.0);
  const double omega = std::acos(c);
  if (std::numbers::pi - omega < 1e-6) throw std::invalid_argument("slerp: antipodal endpoints");
  std::vector<double> out(z1.size());
  if (omega < 1e-6) {
    for (std::size_t i = 0; i < z1.size(); ++i) out[i] = (1 - t) * z1[i] + t * z2[i];
    return out;
  }
  const double s = std::sin(omega);
  const double a = std::sin((1 - t) * omega) / s, b = std::sin(t * omega) / s;
  for (std::size_t i = 0; i < z1.size(); ++i) out[i] = a * z1[i] + b * z2[i];
  return out;
}

std::vector<InterpolationStep> interpolation_path(const vae::QovaeModel& model, const repr::Setup& from,
                                                  const repr::Setup& to, int steps,
                                                  const optics::SimulationConfig& sim) {
  if (steps < 2) throw std::invalid_argument("interpolation needs at least 2 steps");
  const std::vector<double> z1 = model.encode(from).mean, z2 = model.encode(to).mean;
  std::vector<InterpolationStep> out;
  for (int k = 0; k < steps; ++k) {
    InterpolationStep st;
    st.step = k;
    st.t = static_cast<double>(k) / (steps - 1);
    try {
      st.z = slerp(z1, z2, st.t);
    } catch (const std::invalid_argument&) {
      // antipodal or zero endpoint: fall back to the straight line
      st.z.resize(z1.size());
      for (std::size_t i = 0; i < z1.size(); ++i) st.z[i] = (1 - st.t) * z1[i] + st.t * z2[i];
    }
    st.setup = model.decode_setup(st.z, vae::DecodeMode::Argmax);
    const datagen::LabeledSetup lab = datagen::label(st.setup, sim);
    if (lab.skipped) st.error = lab.skip_reason;
    else st.entanglement = lab.entanglement();
    out.push_back(std::move(st));
  }
  return out;
}

void write_interpolation_csv(const std::filesystem::path& path, const std::vector<InterpolationStep>& steps) {
  auto out = open_csv(path);
  out << "step,t,S,length,tokens,error\n";
  for (const auto& s : steps) {
    out << s.step << ',' << s.t << ',' << s.entanglement << ',' << s.setup.length() << ','
        << csv_field(repr::render(s.setup)) << ',' << csv_field(s.error) << '\n';
  }
}

std::vector<DistancePair> distance_vs_ds(const Eigen::MatrixXd& latents, std::span<const double> s,
                                         std::size_t n_pairs, std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(latents.cols());
  if (n != s.size()) throw std::invalid_argument("distance_vs_ds: size mismatch");
  if (n < 2) throw std::invalid_argument("distance_vs_ds: needs at least 2 records");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<DistancePair> out;
  out.reserve(n_pairs);
  while (out.size() < n_pairs) {
    DistancePair p;
    p.i = pick(rng);
    p.j = pick(rng);
    if (p.i == p.j) continue;
    p.distance = (latents.col(static_cast<Eigen::Index>(p.i)) - latents.col(static_cast<Eigen::Index>(p.j))).norm();
    p.abs_ds = std::abs(s[p.i] - s[p.j]);
    out.push_back(p);
  }
  return out;
}

std::vector<DistancePair> distance_vs_ds(const vae::QovaeModel& model, const std::vector<datagen::LabeledSetup>& records,
                                         std::size_t n_pairs, std::uint64_t seed) {
  std::vector<repr::Setup> setups;
  std::vector<double> s;
  for (const auto& r : records) {
    setups.push_back(r.setup);
    s.push_back(r.entanglement());
  }
  return distance_vs_ds(model.encode_means(setups), s, n_pairs, seed);
}

std::vector<DistanceBin> bin_distances(const std::vector<DistancePair>& pairs, int bins) {
  if (bins < 1) throw std::invalid_argument("bin_distances: bins must be >= 1");
  std::vector<DistanceBin> out(static_cast<std::size_t>(bins));
  if (pairs.empty()) return out;
  double lo = pairs.front().distance, hi = lo;
  for (const auto& p : pairs) {
    lo = std::min(lo, p.distance);
    hi = std::max(hi, p.distance);
  }
  const double width = hi > lo ? (hi - lo) / bins : 1.0;
  for (int b = 0; b < bins; ++b) {
    out[static_cast<std::size_t>(b)].lo = lo + b * width;
    out[static_cast<std::size_t>(b)].hi = lo + (b + 1) * width;
  }
  for (const auto& p : pairs) {
    const int b = std::min(bins - 1, static_cast<int>((p.distance - lo) / width));
    auto& bin = out[static_cast<std::size_t>(b)];
    bin.count++;
    bin.mean_distance += p.distance;
    bin.mean_abs_ds += p.abs_ds;
  }
  for (auto& bin : out) {
    if (bin.count) {
      bin.mean_distance /= static_cast<double>(bin.count);
      bin.mean_abs_ds /= static_cast<double>(bin.count);
    }
  }
  return out;
}

void write_distance_csv(const std::filesystem::path& path, const std::vector<DistancePair>& pairs) {
  auto out = open_csv(path);
  out << "pair,i,j,distance,abs_dS\n";
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out << k << ',' << pairs[k].i << ',' << pairs[k].j << ',' << pairs[k].distance << ',' << pairs[k].abs_ds << '\n';
  }
}

void write_distance_bins_csv(const std::filesystem::path& path, const std::vector<DistanceBin>& bins) {
  auto out = open_csv(path);
  out << "bin,lo,hi,count,mean_distance,mean_abs_dS\n";
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const auto& b = bins[k];
    out << k << ',' << b.lo << ',' << b.hi << ',' << b.count << ',' << b.mean_distance << ',' << b.mean_abs_ds << '\n';
  }
}

std::string functional_group(const optics::DeviceOp& op, bool split_empty) {
  std::string g(optics::device_kind_name(op.kind));
  if (split_empty && op.touches_empty_path()) g += "-empty";
  return g;
}

std::vector<LatentMapRow> latent_map(const vae::QovaeModel& model, const std::vector<datagen::LabeledSetup>& records,
                                     std::array<int, 2> axes, bool split_empty) {
  for (int a : axes) {
    if (a < 0 || a >= model.latent_dim()) throw std::invalid_argument("latent_map: axis out of range");
  }
  std::vector<repr::Setup> setups;
  for (const auto& r : records) setups.push_back(r.setup);
  const Eigen::MatrixXd z = model.encode_means(setups);
  std::vector<LatentMapRow> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& devs = records[i].setup.devices;
    LatentMapRow row;
    row.index = i;
    row.x = z(axes[0], static_cast<Eigen::Index>(i));
    row.y = z(axes[1], static_cast<Eigen::Index>(i));
    row.entanglement = records[i].entanglement();
    row.length = static_cast<int>(devs.size());
    if (!devs.empty()) {
      row.last_device = devs.back().token();
      row.functional_group = functional_group(devs.back(), split_empty);
    }
    if (devs.size() >= 2) row.second_last_device = devs[devs.size() - 2].token();
    row.tokens = repr::render(records[i].setup);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_latent_map_csv(const std::filesystem::path& path, const std::vector<LatentMapRow>& rows) {
  auto out = open_csv(path);
  out << "index,x,y,S,length,last_device,second_last_device,functional_group,tokens\n";
  for (const auto& r : rows) {
    out << r.index << ',' << r.x << ',' << r.y << ',' << r.entanglement << ',' << r.length << ','
        << csv_field(r.last_device) << ',' << csv_field(r.second_last_device) << ',' << r.functional_group << ','
        << csv_field(r.tokens) << '\n';
  }
}

}  // namespace qovae::analysis
