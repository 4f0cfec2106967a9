#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qovae::analysis {

/// Gaussian-kernel density with bandwidth sd * n^(-1/5) (sample sd).
/// Throws std::invalid_argument for fewer than 2 values or zero variance.
double scott_bandwidth(std::span<const double> values);
std::vector<double> kde(std::span<const double> values, std::span<const double> grid);

/// `n` equally spaced points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

struct SpearmanResult {
  double rho = 0.0;
  /// One-sided p-value for rho > 0 (t approximation, n - 2 dof).
  double p_greater = 1.0;
  std::size_t n = 0;
};
/// Rank correlation with average ranks for ties. Needs n >= 3.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

/// Summary of S values. Mode is taken over values rounded to 6 decimals,
/// ties going to the smaller value.
struct EntanglementStats {
  std::size_t count = 0;
  double mode = 0.0;
  std::size_t mode_count = 0;
  double mean = 0.0;
  double sd = 0.0;  // population
  double entangled_fraction = 0.0;
};
EntanglementStats entanglement_stats(std::span<const double> s);

struct UniqueNovel {
  double unique = 0.0;  // distinct / total among generated
  double novel = 0.0;   // fraction of generated not present in the training set
};
/// Compares canonical token strings.
UniqueNovel uniqueness_novelty(std::span<const std::string> generated, std::span<const std::string> training);

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // dim x k
  double inertia = 0.0;
};
/// Lloyd iterations from k-means++ seeds, best of `restarts`. Points are columns.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts = 10, int max_iter = 300);

/// Sum over clusters of the majority class count, divided by n.
double cluster_purity(std::span<const int> clusters, std::span<const int> classes);
/// Largest class share: the purity of assigning everything to one cluster.
double majority_fraction(std::span<const int> classes);

}  // namespace qovae::analysis
