#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "gradcheck.hpp"
#include "qovae/nn/adam.hpp"
#include "qovae/nn/checkpoint.hpp"
#include "qovae/nn/layers.hpp"

using namespace qovae;
using nn::Matrix;
using testing::gradcheck;
using testing::random_matrix;

namespace {
constexpr int kShapes = 20;
constexpr double kTol = 1e-4;
}  // namespace

TEST_CASE("dense layer gradients") {
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<int> dim(1, 9);
  for (int s = 0; s < kShapes; ++s) {
    const int in = dim(rng), out = dim(rng), batch = dim(rng);
    nn::ParamStore store;
    nn::Dense layer(store, "d", in, out);
    store.init_uniform(rng);
    Matrix x = random_matrix(in, batch, rng);
    const double err = gradcheck(
        store, x, [&] { return layer.forward(store, x); },
        [&](const Matrix& r) { return layer.backward(store, x, r); }, rng);
    CHECK(err < kTol);
  }
}

TEST_CASE("mlp gradients") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(1, 7), depth(1, 3);
  for (int s = 0; s < kShapes; ++s) {
    std::vector<int> widths{dim(rng)};
    for (int d = depth(rng); d >= 0; --d) widths.push_back(dim(rng));
    const int batch = dim(rng);
    nn::ParamStore store;
    nn::Mlp mlp(store, "m", widths, s % 2 == 0);
    store.init_uniform(rng);
    Matrix x = random_matrix(widths.front(), batch, rng);
    const double err = gradcheck(
        store, x, [&] { return mlp.forward(store, x); },
        [&](const Matrix& r) {
          nn::Mlp::Cache c;
          mlp.forward(store, x, &c);
          return mlp.backward(store, c, r);
        },
        rng);
    CHECK(err < kTol);
  }
}

TEST_CASE("conv1d gradients") {
  std::mt19937_64 rng(102);
  std::uniform_int_distribution<int> dim(1, 5), kern(1, 4);
  for (int s = 0; s < kShapes; ++s) {
    const int channels = dim(rng), filters = dim(rng), kernel = kern(rng), batch = dim(rng);
    const int steps = kernel + dim(rng) - 1;
    nn::ParamStore store;
    nn::Conv1d conv(store, "c", channels, filters, kernel);
    store.init_uniform(rng);
    Matrix x = random_matrix(channels, batch * steps, rng);
    const double err = gradcheck(
        store, x, [&] { return conv.forward(store, x, batch, steps); },
        [&](const Matrix& r) {
          nn::Conv1d::Cache c;
          conv.forward(store, x, batch, steps, &c);
          return conv.backward(store, c, r);
        },
        rng);
    CHECK(err < kTol);
  }
}

TEST_CASE("conv1d matches the direct sum") {
  std::mt19937_64 rng(7);
  nn::ParamStore store;
  const int C = 3, F = 2, K = 3, B = 2, T = 5;
  nn::Conv1d conv(store, "c", C, F, K);
  store.init_uniform(rng);
  const Matrix x = random_matrix(C, B * T, rng);
  const Matrix y = conv.forward(store, x, B, T);
  const auto w = store.value(0);  // F x (K*C), index l*C + j
  const auto b = store.value(1);
  for (int bi = 0; bi < B; ++bi)
    for (int f = 0; f < F; ++f)
      for (int t = 0; t + K <= T; ++t) {
        double acc = b(f, 0);
        for (int l = 0; l < K; ++l)
          for (int j = 0; j < C; ++j) acc += w(f, l * C + j) * x(j, bi * T + t + l);
        CHECK(y(f, bi * (T - K + 1) + t) == doctest::Approx(std::max(acc, 0.0)));
      }
}

TEST_CASE("gru gradients") {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> dim(1, 5), len(1, 5);
  for (int s = 0; s < kShapes; ++s) {
    const int in = dim(rng), hidden = dim(rng), batch = dim(rng), steps = len(rng);
    nn::ParamStore store;
    nn::Gru gru(store, "g", in, hidden);
    store.init_uniform(rng);
    Matrix x = random_matrix(in, batch * steps, rng);
    const double err = gradcheck(
        store, x, [&] { return gru.forward(store, x, batch, steps); },
        [&](const Matrix& r) {
          nn::Gru::Cache c;
          gru.forward(store, x, batch, steps, &c);
          return gru.backward(store, c, r);
        },
        rng);
    CHECK(err < kTol);
  }
}

TEST_CASE("gru single step matches the gate equations") {
  nn::ParamStore store;
  nn::Gru gru(store, "g", 1, 1);
  // W = [wz; wr; wh], U = [uz; ur; uh], b = [bz; br; bh]
  auto v = store.values();
  const double W[3] = {0.5, -0.3, 0.8}, U[3] = {0.1, 0.2, -0.4}, B[3] = {0.05, -0.1, 0.2};
  for (int k = 0; k < 3; ++k) {
    v[static_cast<std::size_t>(k)] = W[k];
    v[static_cast<std::size_t>(3 + k)] = U[k];
    v[static_cast<std::size_t>(6 + k)] = B[k];
  }
  Matrix x(1, 2);
  x << 1.5, -0.7;
  const Matrix h = gru.forward(store, x, 1, 2);
  auto sig = [](double a) { return 1 / (1 + std::exp(-a)); };
  double hp = 0;
  for (int t = 0; t < 2; ++t) {
    const double z = sig(W[0] * x(0, t) + U[0] * hp + B[0]);
    const double r = sig(W[1] * x(0, t) + U[1] * hp + B[1]);
    const double c = std::tanh(W[2] * x(0, t) + U[2] * (r * hp) + B[2]);
    hp = (1 - z) * hp + z * c;
    CHECK(h(0, t) == doctest::Approx(hp).epsilon(1e-14));
  }
}

TEST_CASE("softmax cross-entropy gradients") {
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<int> dim(2, 9);
  for (int s = 0; s < kShapes; ++s) {
    const int classes = dim(rng), cols = dim(rng);
    std::uniform_int_distribution<int> cls(0, classes - 1);
    std::vector<int> targets;
    for (int c = 0; c < cols; ++c) targets.push_back(cls(rng));
    Matrix logits = random_matrix(classes, cols, rng);
    Matrix grad;
    nn::softmax_cross_entropy(logits, targets, 1.0, &grad);
    double worst = 0;
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
      const double keep = logits.data()[i];
      logits.data()[i] = keep + 1e-5;
      const double lp = nn::softmax_cross_entropy(logits, targets, 1.0, nullptr);
      logits.data()[i] = keep - 1e-5;
      const double lm = nn::softmax_cross_entropy(logits, targets, 1.0, nullptr);
      logits.data()[i] = keep;
      const double n = (lp - lm) / 2e-5, a = grad.data()[i];
      worst = std::max(worst, std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-4}));
    }
    CHECK(worst < kTol);
  }
}

TEST_CASE("flatten and unflatten are inverse and order f*T+t") {
  std::mt19937_64 rng(105);
  const Matrix x = random_matrix(3, 2 * 4, rng);
  const Matrix flat = nn::flatten_sequence(x, 2, 4);
  CHECK(flat.rows() == 12);
  CHECK(flat(2 * 4 + 3, 1) == x(2, 1 * 4 + 3));
  CHECK(nn::unflatten_sequence(flat, 3, 2, 4) == x);
}

TEST_CASE("softmax columns sum to one and survive large logits") {
  Matrix l(3, 2);
  l << 1000, -5, 1001, 0, 999, 5;
  const Matrix p = nn::softmax(l);
  for (int c = 0; c < 2; ++c) CHECK(p.col(c).sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.allFinite());
  CHECK(nn::softmax_cross_entropy(l, std::vector<int>{1, 2}, 1.0, nullptr) > 0);
}

TEST_CASE("adam: first two steps match the bias-corrected update") {
  std::vector<double> p{1.0, -2.0};
  const std::vector<double> g1{0.5, -0.1}, g2{-0.2, 0.3};
  nn::AdamConfig cfg;
  cfg.lr = 0.01;
  nn::AdamState st;
  nn::adam_step(p, g1, st, cfg);
  for (int i = 0; i < 2; ++i) {
    const double expect = (i == 0 ? 1.0 : -2.0) - cfg.lr * g1[i] / (std::abs(g1[i]) + cfg.eps);
    CHECK(p[i] == doctest::Approx(expect).epsilon(1e-12));
  }
  const std::vector<double> p1 = p;
  nn::adam_step(p, g2, st, cfg);
  for (int i = 0; i < 2; ++i) {
    const double m = 0.9 * 0.1 * g1[i] + 0.1 * g2[i];
    const double v = 0.999 * 0.001 * g1[i] * g1[i] + 0.001 * g2[i] * g2[i];
    const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
    CHECK(p[i] == doctest::Approx(p1[i] - cfg.lr * mh / (std::sqrt(vh) + cfg.eps)).epsilon(1e-12));
  }
  CHECK(st.step == 2);
}

TEST_CASE("adam minimizes a quadratic") {
  std::vector<double> p{3.0, -4.0};
  nn::AdamConfig cfg;
  cfg.lr = 0.05;
  nn::AdamState st;
  for (int k = 0; k < 2000; ++k) {
    const std::vector<double> g{2 * (p[0] - 1), 2 * (p[1] + 0.5)};
    nn::adam_step(p, g, st, cfg);
  }
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(p[1] == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("parameter init stays within fan-in bounds") {
  nn::ParamStore store;
  store.add("w", {4, 25}, 25);
  std::mt19937_64 rng(1);
  store.init_uniform(rng);
  for (double v : store.values()) CHECK(std::abs(v) <= 0.2);
  CHECK(store.value(0).rows() == 4);
  CHECK(store.value(0).cols() == 25);
}

TEST_CASE("checkpoint round trip and layout checks") {
  const auto dir = std::filesystem::temp_directory_path() / "qovae_ckpt_test";
  std::filesystem::create_directories(dir);
  const auto prefix = dir / "m";
  nn::ParamStore a;
  a.add("w", {3, 4}, 4);
  a.add("b", {3}, 4);
  std::mt19937_64 rng(2);
  a.init_uniform(rng);
  nn::write_checkpoint(prefix, a, {{"k", "value with spaces"}});
  const nn::Checkpoint ck = nn::read_checkpoint(prefix);
  CHECK(ck.meta.at("k") == "value with spaces");
  nn::ParamStore b;
  b.add("w", {3, 4}, 4);
  b.add("b", {3}, 4);
  nn::load_into(ck, b);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));

  nn::ParamStore c;
  c.add("w", {4, 3}, 3);
  c.add("b", {3}, 4);
  CHECK_THROWS_AS(nn::load_into(ck, c), nn::CheckpointError);

  std::filesystem::resize_file(nn::params_path(prefix), 8);
  CHECK_THROWS_AS(nn::read_checkpoint(prefix), nn::CheckpointError);
  std::ofstream(nn::manifest_path(prefix)) << "something else\n";
  CHECK_THROWS_AS(nn::read_checkpoint(prefix), nn::CheckpointError);
  std::filesystem::remove_all(dir);
}
