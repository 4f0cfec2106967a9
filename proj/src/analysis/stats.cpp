#include "qovae/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace qovae::analysis {

double scott_bandwidth(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("kde needs at least 2 values");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0)) throw std::invalid_argument("kde bandwidth is zero: input has no variance");
  return sd * std::pow(static_cast<double>(n), -0.2);
}

std::vector<double> kde(std::span<const double> values, std::span<const double> grid) {
  const double h = scott_bandwidth(values);
  const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) {
    double acc = 0.0;
    for (double v : values) {
      const double u = (x - v) / h;
      acc += std::exp(-0.5 * u * u);
    }
    out.push_back(acc * norm);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("spearman: needs at least 3 pairs");
  const std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  SpearmanResult r;
  r.n = x.size();
  if (sxx == 0 || syy == 0) return r;
  r.rho = sxy / std::sqrt(sxx * syy);
  if (r.rho >= 1.0) {
    r.p_greater = 0.0;
  } else if (r.rho <= -1.0) {
    r.p_greater = 1.0;
  } else {
    const double dof = n - 2.0;
    const double t = r.rho * std::sqrt(dof / (1.0 - r.rho * r.rho));
    boost::math::students_t dist(dof);
    r.p_greater = boost::math::cdf(boost::math::complement(dist, t));
  }
  return r;
}

EntanglementStats entanglement_stats(std::span<const double> s) {
  EntanglementStats st;
  st.count = s.size();
  if (s.empty()) return st;
  std::map<long long, std::size_t> counts;
  std::size_t entangled = 0;
  double sum = 0.0;
  for (double v : s) {
    counts[std::llround(v * 1e6)]++;
    sum += v;
    if (v > 0) ++entangled;
  }
  // std::map iterates ascending, so strict > keeps the smallest tied value
  for (const auto& [key, c] : counts) {
    if (c > st.mode_count) {
      st.mode_count = c;
      st.mode = static_cast<double>(key) / 1e6;
    }
  }
  st.mean = sum / static_cast<double>(s.size());
  double ss = 0.0;
  for (double v : s) ss += (v - st.mean) * (v - st.mean);
  st.sd = std::sqrt(ss / static_cast<double>(s.size()));
  st.entangled_fraction = static_cast<double>(entangled) / static_cast<double>(s.size());
  return st;
}

UniqueNovel uniqueness_novelty(std::span<const std::string> generated, std::span<const std::string> training) {
  UniqueNovel out;
  if (generated.empty()) return out;
  const std::set<std::string> distinct(generated.begin(), generated.end());
  const std::set<std::string> train(training.begin(), training.end());
  std::size_t novel = 0;
  for (const auto& g : generated)
    if (!train.contains(g)) ++novel;
  out.unique = static_cast<double>(distinct.size()) / static_cast<double>(generated.size());
  out.novel = static_cast<double>(novel) / static_cast<double>(generated.size());
  return out;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts, int max_iter) {
  const Eigen::Index n = points.cols();
  if (k < 1 || n < k) throw std::invalid_argument("kmeans: need 1 <= k <= number of points");
  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < std::max(1, restarts); ++rep) {
    Eigen::MatrixXd centers(points.rows(), k);
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    centers.col(0) = points.col(first(rng));
    Eigen::VectorXd d2 = (points.colwise() - centers.col(0)).colwise().squaredNorm().transpose();
    for (int c = 1; c < k; ++c) {
      const double total = d2.sum();
      Eigen::Index pick = 0;
      if (total > 0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng), acc = 0.0;
        for (pick = 0; pick < n - 1; ++pick) {
          acc += d2(pick);
          if (target < acc) break;
        }
      } else {
        pick = first(rng);
      }
      centers.col(c) = points.col(pick);
      d2 = d2.cwiseMin((points.colwise() - centers.col(c)).colwise().squaredNorm().transpose());
    }

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    double inertia = 0.0;
    for (int it = 0; it < max_iter; ++it) {
      bool changed = false;
      inertia = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index c;
        inertia += (centers.colwise() - points.col(i)).colwise().squaredNorm().minCoeff(&c);
        if (labels[static_cast<std::size_t>(i)] != static_cast<int>(c)) {
          labels[static_cast<std::size_t>(i)] = static_cast<int>(c);
          changed = true;
        }
      }
      if (!changed) break;
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(points.rows(), k);
      std::vector<int> counts(static_cast<std::size_t>(k), 0);
      for (Eigen::Index i = 0; i < n; ++i) {
        sums.col(labels[static_cast<std::size_t>(i)]) += points.col(i);
        counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]++;
      }
      for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) centers.col(c) = sums.col(c) / counts[static_cast<std::size_t>(c)];
      }
    }
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.labels = labels;
      best.centers = centers;
    }
  }
  return best;
}

double cluster_purity(std::span<const int> clusters, std::span<const int> classes) {
  if (clusters.size() != classes.size()) throw std::invalid_argument("cluster_purity: size mismatch");
  if (clusters.empty()) return 0.0;
  std::map<int, std::map<int, std::size_t>> table;
  for (std::size_t i = 0; i < clusters.size(); ++i) table[clusters[i]][classes[i]]++;
  std::size_t hit = 0;
  for (const auto& [c, row] : table) {
    std::size_t m = 0;
    for (const auto& [cls, cnt] : row) m = std::max(m, cnt);
    hit += m;
  }
  return static_cast<double>(hit) / static_cast<double>(clusters.size());
}

double majority_fraction(std::span<const int> classes) {
  if (classes.empty()) return 0.0;
  std::map<int, std::size_t> counts;
  for (int c : classes) counts[c]++;
  std::size_t m = 0;
  for (const auto& [c, cnt] : counts) m = std::max(m, cnt);
  return static_cast<double>(m) / static_cast<double>(classes.size());
}

}  // namespace qovae::analysis
