#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qovae/analysis/latent.hpp"
#include "qovae/analysis/report.hpp"
#include "qovae/analysis/stats.hpp"
#include "qovae/repr/setup.hpp"

using namespace qovae;
using namespace qovae::analysis;

namespace {
double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
}  // namespace

TEST_CASE("slerp endpoints, norm preservation and midpoint") {
  const std::vector<double> a{1, 0, 0}, b{0, 1, 0};
  CHECK(slerp(a, b, 0.0) == a);
  const auto end = slerp(a, b, 1.0);
  CHECK(end[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(end[1] == doctest::Approx(1.0));
  const auto mid = slerp(a, b, 0.5);
  CHECK(mid[0] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(mid[1] == doctest::Approx(1 / std::sqrt(2.0)));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    std::vector<double> x(5), y(5);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng);
    const double r = norm(x), scale = r / norm(y);
    for (auto& v : y) v *= scale;
    for (double t : {0.1, 0.37, 0.5, 0.9}) CHECK(norm(slerp(x, y, t)) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("slerp degenerate inputs") {
  const std::vector<double> a{1, 2}, neg{-1, -2}, zero{0, 0};
  CHECK_THROWS_AS(slerp(a, neg, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(slerp(a, zero, 0.5), std::invalid_argument);
  const auto same = slerp(a, a, 0.3);
  CHECK(same[0] == doctest::Approx(1.0));
  CHECK(same[1] == doctest::Approx(2.0));
}

TEST_CASE("KDE of a standard normal sample") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(10000);
  for (auto& v : x) v = g(rng);
  const std::vector<double> at0{0.0};
  CHECK(std::abs(kde(x, at0)[0] - 1 / std::sqrt(2 * std::numbers::pi)) < 0.02);
  const auto grid = linspace(-8, 8, 1601);
  const auto dens = kde(x, grid);
  double integral = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) integral += 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
  CHECK(std::abs(integral - 1.0) < 1e-3);
}

TEST_CASE("KDE is symmetric for symmetric data and rejects zero variance") {
  const std::vector<double> x{-3, -1, -0.5, 0.5, 1, 3};
  const auto grid = linspace(-4, 4, 81);
  const auto d = kde(x, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(d[i] == doctest::Approx(d[grid.size() - 1 - i]).epsilon(1e-12));
  const std::vector<double> flat{2, 2, 2};
  CHECK_THROWS_AS(kde(flat, grid), std::invalid_argument);
  const std::vector<double> one{1};
  CHECK_THROWS_AS(kde(one, grid), std::invalid_argument);
  // bandwidth: sd * n^(-1/5)
  const std::vector<double> y{1, 2, 3, 4};
  CHECK(scott_bandwidth(y) == doctest::Approx(std::sqrt(5.0 / 3.0) * std::pow(4.0, -0.2)));
}

TEST_CASE("Spearman correlation against reference values") {
  // references computed with an independent statistics package
  const std::vector<double> x1{1, 2, 3, 4, 5}, y1{5, 6, 7, 8, 7};
  const auto r1 = spearman(x1, y1);
  CHECK(r1.rho == doctest::Approx(0.8207826816681233).epsilon(1e-12));
  CHECK(r1.p_greater == doctest::Approx(0.08858700531354381 / 2).epsilon(1e-9));

  const std::vector<double> x2{0.3, 1.2, 2.2, 2.9, 4.1, 5.0, 6.3, 7.1, 8.4, 9.0};
  const std::vector<double> y2{1.0, 0.7, 2.5, 1.9, 2.0, 3.9, 3.1, 5.2, 4.4, 4.0};
  const auto r2 = spearman(x2, y2);
  CHECK(r2.rho == doctest::Approx(0.8909090909090909).epsilon(1e-12));
  CHECK(r2.p_greater == doctest::Approx(0.00027107211241693326).epsilon(1e-8));

  const std::vector<double> x3{1, 2, 2, 3, 4, 4, 4, 5}, y3{2, 1, 3, 3, 5, 4, 6, 6};
  const auto r3 = spearman(x3, y3);
  CHECK(r3.rho == doctest::Approx(0.9007775105401477).epsilon(1e-12));
  CHECK(r3.p_greater == doctest::Approx(0.0011320045323371317).epsilon(1e-8));

  std::vector<double> rev(x1.rbegin(), x1.rend());
  CHECK(spearman(x1, rev).rho == doctest::Approx(-1.0));
}

TEST_CASE("mode uses six-decimal rounding and prefers the smaller value on ties") {
  const std::vector<double> s{0.0, 4.3944491, 4.3944489, 2.0, 2.0, 1.0};
  const auto st = entanglement_stats(s);
  CHECK(st.mode == doctest::Approx(2.0));  // 2.0 and 4.394449 both appear twice
  CHECK(st.mode_count == 2u);
  CHECK(st.mean == doctest::Approx((4.3944491 + 4.3944489 + 5.0) / 6));
  CHECK(st.entangled_fraction == doctest::Approx(5.0 / 6));
  const std::vector<double> same{1.0, 1.0};
  CHECK(entanglement_stats(same).sd == 0.0);
}

TEST_CASE("uniqueness and novelty") {
  const std::vector<std::string> same(5, "BS(a,b)"), train{"BS(a,b)", "Ref(c)"};
  auto un = uniqueness_novelty(same, train);
  CHECK(un.unique == doctest::Approx(0.2));
  CHECK(un.novel == 0.0);
  un = uniqueness_novelty(train, train);
  CHECK(un.unique == 1.0);
  CHECK(un.novel == 0.0);
  const std::vector<std::string> fresh{"DP(a)", "DP(b)", "Ref(c)", "DP(a)"};
  un = uniqueness_novelty(fresh, train);
  CHECK(un.unique == doctest::Approx(0.75));
  CHECK(un.novel == doctest::Approx(0.75));
}

TEST_CASE("k-means separates well-separated blobs") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.3);
  const int per = 50;
  Eigen::MatrixXd pts(2, 3 * per);
  std::vector<int> cls;
  const double cx[3] = {0, 5, 0}, cy[3] = {0, 0, 5};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < per; ++i) {
      pts(0, c * per + i) = cx[c] + g(rng);
      pts(1, c * per + i) = cy[c] + g(rng);
      cls.push_back(c);
    }
  const auto km = kmeans(pts, 3, 7);
  CHECK(cluster_purity(km.labels, cls) == 1.0);
  CHECK(majority_fraction(cls) == doctest::Approx(1.0 / 3));
  CHECK_THROWS(kmeans(pts, 0, 1));
}

TEST_CASE("purity of a single cluster is the majority share") {
  const std::vector<int> clusters(6, 0), classes{1, 1, 1, 2, 2, 3};
  CHECK(cluster_purity(clusters, classes) == doctest::Approx(0.5));
  CHECK(majority_fraction(classes) == doctest::Approx(0.5));
}

TEST_CASE("distance pairs and bins") {
  Eigen::MatrixXd z(2, 3);
  z << 0, 0, 3, 0, 0, 4;
  const std::vector<double> s{1.0, 1.0, 2.5};
  const auto pairs = distance_vs_ds(z, s, 40, 3);
  CHECK(pairs.size() == 40u);
  for (const auto& p : pairs) {
    CHECK(p.i != p.j);
    if ((p.i == 0 && p.j == 1) || (p.i == 1 && p.j == 0)) {
      CHECK(p.distance == 0.0);
      CHECK(p.abs_ds == 0.0);
    } else {
      CHECK(p.distance == doctest::Approx(5.0));
      CHECK(p.abs_ds == doctest::Approx(1.5));
    }
  }
  const auto bins = bin_distances(pairs, 4);
  std::size_t total = 0;
  for (const auto& b : bins) total += b.count;
  CHECK(total == pairs.size());
}

TEST_CASE("functional groups follow the device kind") {
  using optics::DeviceOp;
  using optics::Path;
  CHECK(functional_group(DeviceOp::beam_splitter(Path::a, Path::b)) == "BS");
  CHECK(functional_group(DeviceOp::hologram(Path::c, 1)) == "OAMHolo");
  CHECK(functional_group(DeviceOp::down_conv(Path::a, Path::e), true) == "DownConv-empty");
  CHECK(functional_group(DeviceOp::mirror(Path::f)) == "Ref");
}

TEST_CASE("latent map rows describe each setup") {
  const repr::Vocabulary v;
  const vae::QovaeModel m(vae::QovaeConfig{}, v);
  std::vector<datagen::LabeledSetup> recs;
  for (const char* t : {"BS(a,b) Ref(c) OAMHolo(a,1)", "DP(d)", ""}) recs.push_back(datagen::label(repr::parse(t, v)));
  const auto rows = latent_map(m, recs, {1, 4});
  REQUIRE(rows.size() == 3u);
  CHECK(rows[0].length == 3);
  CHECK(rows[0].last_device == "OAMHolo(a,1)");
  CHECK(rows[0].second_last_device == "Ref(c)");
  CHECK(rows[0].functional_group == "OAMHolo");
  CHECK(rows[1].second_last_device.empty());
  CHECK(rows[2].length == 0);
  CHECK(rows[0].x == doctest::Approx(m.encode(recs[0].setup).mean[1]));
  CHECK(rows[0].y == doctest::Approx(m.encode(recs[0].setup).mean[4]));
  CHECK_THROWS(latent_map(m, recs, {0, 6}));
}

TEST_CASE("interpolating a setup with itself is constant") {
  const repr::Vocabulary v;
  const vae::QovaeModel m(vae::QovaeConfig{}, v);
  const repr::Setup s = repr::parse("BS(a,b) BS(c,d) Ref(a)", v);
  const auto path = interpolation_path(m, s, s, 5);
  REQUIRE(path.size() == 5u);
  for (const auto& p : path) {
    CHECK(p.setup == path.front().setup);
    CHECK(p.entanglement == path.front().entanglement);
  }
  CHECK(path.back().t == 1.0);
}

TEST_CASE("identical sets give identical profiles") {
  const repr::Vocabulary v;
  std::mt19937_64 rng(4);
  std::vector<repr::Setup> setups;
  for (int i = 0; i < 60; ++i) setups.push_back(datagen::sample_setup(rng, v));
  const auto recs = datagen::label_all(setups, {}, 1);
  const auto rep = compare_distributions(recs, recs);
  CHECK(rep.generated.stats.mean == rep.training.stats.mean);
  CHECK(rep.generated.stats.mode == rep.training.stats.mode);
  CHECK(rep.generated.ket_frequency == rep.training.ket_frequency);
  CHECK(rep.generated.rank_hist == rep.training.rank_hist);
  CHECK(rep.unique_novel.novel == 0.0);
  for (const auto& [kind, hist] : rep.generated.device_count_hist) {
    std::size_t total = 0;
    for (const auto& [n, c] : hist) total += c;
    CHECK(total == 60u);
  }
  CHECK(rep.generated.ket_frequency.size() == 16u);
  CHECK(rep.generated.ket_frequency.at("0,0,0,0") > 0.0);
}
