#include <doctest.h>

#include <cmath>

#include "rbfn/eval.hpp"
#include "rbfn/kmeans.hpp"
#include "rbfn/model_io.hpp"
#include "rbfn/rbfnet.hpp"
#include "support.hpp"

using namespace rbfn;

namespace {

Scaler identity_scaler(std::size_t d) {
  Scaler s;
  s.medians.assign(d, 0.0);
  s.iqrs.assign(d, 1.0);
  return s;
}

// small hand-built model: J hidden units in d dims
RbfModel make_model(Mat centers, Mat spreads, Mat weights, std::size_t n_classes,
                    SpreadMode mode = SpreadMode::scalar) {
  RbfModel m;
  m.centers = std::move(centers);
  m.spreads = std::move(spreads);
  m.weights = std::move(weights);
  m.spread_mode = mode;
  for (std::size_t c = 0; c < n_classes; ++c) m.class_names.push_back("c" + std::to_string(c));
  m.scaler = identity_scaler(m.centers[0].size());
  for (std::size_t j = 0; j < m.centers[0].size(); ++j)
    m.feature_names.push_back("f" + std::to_string(j));
  return m;
}

double fixture_accuracy(const RbfModel& model, const FeatureMatrix& m, const LabelVector& y) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (predict(model, m.values[i]) == y.indices[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(m.rows());
}

}  // namespace

TEST_CASE("gaussian_kernel closed form") {
  CHECK(gaussian_kernel(0.0, 2.5) == 1.0);
  CHECK(gaussian_kernel(1.0, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(gaussian_kernel(0.6065306597126334, 0.6065306597126334) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(gaussian_kernel(10.0, 1.0) < 1e-12);  // tail decay at r = 10 sigma
  CHECK_THROWS_AS(gaussian_kernel(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(gaussian_kernel(1.0, -1.0), ValidationError);
}

TEST_CASE("gaussian_kernel is positive, peaked at zero and decreasing") {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    double sigma = rng.uniform(0.1, 5.0);
    double prev = gaussian_kernel(0.0, sigma);
    CHECK(prev == 1.0);
    for (double r = 0.25; r < 8.0; r += 0.25) {
      double v = gaussian_kernel(r * sigma, sigma);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("hidden_activations closed forms") {
  SUBCASE("scalar mode uses the Euclidean distance") {
    RbfModel m = make_model({{0.0, 0.0}}, {{1.0}}, {{0.0, 0.0}, {0.0, 0.0}}, 2);
    std::vector<double> z = hidden_activations(m, {3.0, 4.0});
    CHECK(z[0] == doctest::Approx(std::exp(-12.5)).epsilon(1e-12));  // distance 5
    CHECK(hidden_activations(m, {0.0, 0.0})[0] == 1.0);
  }
  SUBCASE("per-dimension spreads") {
    RbfModel m = make_model({{0.0, 0.0}}, {{1.0, 2.0}}, {{0.0, 0.0}, {0.0, 0.0}}, 2,
                            SpreadMode::per_dimension);
    std::vector<double> z = hidden_activations(m, {1.0, 2.0});
    CHECK(z[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch") {
    RbfModel m = make_model({{0.0, 0.0}}, {{1.0}}, {{0.0}, {0.0}}, 2);
    CHECK_THROWS_AS(hidden_activations(m, {1.0}), ValidationError);
  }
}

TEST_CASE("forward") {
  SUBCASE("zero weights give a zero score vector") {
    RbfModel m = make_model({{0.0}}, {{1.0}}, {{0.0, 0.0}, {0.0, 0.0}}, 2);
    CHECK(forward(m, {0.3}) == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("single unit at its center sums bias and weight") {
    RbfModel m = make_model({{0.0}}, {{1.0}}, {{0.2, 0.0}, {0.5, 0.0}}, 2);
    std::vector<double> y = forward(m, {0.0});
    CHECK(y[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(y[1] == 0.0);
  }
  SUBCASE("matches an independent dot-product recomputation") {
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
      std::size_t J = 1 + rng.below(4);
      std::size_t d = 1 + rng.below(3);
      std::size_t L = 2 + rng.below(2);
      Mat centers = testsupport::random_matrix(J, d, rng);
      Mat spreads(J, std::vector<double>(1, 0.0));
      for (auto& s : spreads) s[0] = rng.uniform(0.3, 2.0);
      Mat weights = testsupport::random_matrix(J + 1, L, rng);
      RbfModel m = make_model(centers, spreads, weights, L);

      std::vector<double> x(d);
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      std::vector<double> got = forward(m, x);
      for (std::size_t l = 0; l < L; ++l) {
        double expect = weights[0][l];
        for (std::size_t j = 0; j < J; ++j) {
          double r2 = squared_distance(x, centers[j]);
          expect += weights[j + 1][l] * std::exp(-r2 / (2.0 * spreads[j][0] * spreads[j][0]));
        }
        CHECK(got[l] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
  SUBCASE("linear in the weights") {
    Rng rng(6);
    Mat centers = testsupport::random_matrix(3, 2, rng);
    Mat spreads = {{1.0}, {0.5}, {2.0}};
    Mat w1 = testsupport::random_matrix(4, 2, rng);
    Mat w2 = testsupport::random_matrix(4, 2, rng);
    Mat sum(4, std::vector<double>(2));
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 2; ++c) sum[r][c] = w1[r][c] + w2[r][c];
    RbfModel a = make_model(centers, spreads, w1, 2);
    RbfModel b = make_model(centers, spreads, w2, 2);
    RbfModel s = make_model(centers, spreads, sum, 2);
    std::vector<double> x = {0.3, -0.8};
    std::vector<double> ya = forward(a, x), yb = forward(b, x), ys = forward(s, x);
    for (std::size_t l = 0; l < 2; ++l)
      CHECK(std::fabs(ys[l] - (ya[l] + yb[l])) <= 1e-12);
  }
}

TEST_CASE("predict_proba clip-and-normalize") {
  SUBCASE("already normalized scores pass through") {
    RbfModel m = make_model({{0.0}}, {{1.0}}, {{0.8, 0.2}, {0.0, 0.0}}, 2);
    std::vector<double> p = predict_proba(m, {0.0});
    CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("all-negative scores fall back to uniform") {
    RbfModel m = make_model({{0.0}}, {{1.0}}, {{-1.0, -2.0}, {0.0, 0.0}}, 2);
    CHECK(predict_proba(m, {0.0}) == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("three-way normalization") {
    RbfModel m = make_model({{0.0}}, {{1.0}}, {{2.0, 1.0, 1.0}, {0.0, 0.0, 0.0}}, 3);
    std::vector<double> p = predict_proba(m, {0.0});
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("sums to one and stays in [0,1] on random models") {
    Rng rng(8);
    for (int rep = 0; rep < 20; ++rep) {
      Mat centers = testsupport::random_matrix(3, 2, rng);
      Mat spreads = {{0.7}, {1.3}, {0.9}};
      Mat weights = testsupport::random_matrix(4, 3, rng);
      RbfModel m = make_model(centers, spreads, weights, 3);
      std::vector<double> x = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
      std::vector<double> p = predict_proba(m, x);
      double total = 0.0;
      for (double v : p) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        total += v;
      }
      CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("predict breaks ties toward the lowest class index") {
  RbfModel m = make_model({{0.0}}, {{1.0}}, {{0.5, 0.5}, {0.0, 0.0}}, 2);
  CHECK(predict(m, {0.0}) == 0);
  RbfModel m2 = make_model({{0.0}}, {{1.0}}, {{0.1, 0.9}, {0.0, 0.0}}, 2);
  CHECK(predict(m2, {0.0}) == 1);
}

TEST_CASE("predict is invariant to positive scaling of the weights") {
  Rng rng(9);
  Mat centers = testsupport::random_matrix(4, 2, rng);
  Mat spreads = {{1.0}, {1.0}, {0.5}, {2.0}};
  Mat weights = testsupport::random_matrix(5, 3, rng);
  RbfModel m = make_model(centers, spreads, weights, 3);
  for (double c : {0.01, 0.5, 3.0, 250.0}) {
    Mat scaled = weights;
    for (auto& row : scaled)
      for (double& v : row) v *= c;
    RbfModel ms = make_model(centers, spreads, scaled, 3);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> x = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
      CHECK(predict(m, x) == predict(ms, x));
    }
  }
}

TEST_CASE("compute_spreads") {
  SUBCASE("scalar RMS distance") {
    Mat centers = {{1.0}, {5.0}};
    Mat points = {{0.0}, {2.0}, {5.0}, {5.0}};
    std::vector<std::size_t> assignments = {0, 0, 1, 1};
    Mat spreads = compute_spreads(centers, assignments, points, SpreadMode::scalar);
    CHECK(spreads[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    // cluster 1 collapses to sigma 0 -> fallback d_max / sqrt(2J) = 4 / 2
    CHECK(spreads[1][0] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("singleton cluster uses the fallback") {
    Mat centers = {{0.0}, {4.0}};
    Mat points = {{0.0}, {4.0}};
    std::vector<std::size_t> assignments = {0, 1};
    Mat spreads = compute_spreads(centers, assignments, points, SpreadMode::scalar);
    CHECK(spreads[0][0] == doctest::Approx(4.0 / 2.0).epsilon(1e-12));
    CHECK(spreads[1][0] == doctest::Approx(4.0 / 2.0).epsilon(1e-12));
  }
  SUBCASE("coincident centers fall back to one") {
    Mat centers = {{2.0}, {2.0}};
    Mat points = {{2.0}, {2.0}};
    std::vector<std::size_t> assignments = {0, 1};
    Mat spreads = compute_spreads(centers, assignments, points, SpreadMode::scalar);
    CHECK(spreads[0][0] == 1.0);
    CHECK(spreads[1][0] == 1.0);
  }
  SUBCASE("per-dimension standard deviations") {
    Mat centers = {{1.0, 10.0}};
    Mat points = {{0.0, 10.0}, {2.0, 10.0}};
    std::vector<std::size_t> assignments = {0, 0};
    Mat spreads = compute_spreads(centers, assignments, points, SpreadMode::per_dimension);
    CHECK(spreads[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spreads[0][1] == 1.0);  // zero variance dimension -> fallback (d_max = 0 -> 1)
  }
}

TEST_CASE("fit_output_weights") {
  SUBCASE("identity design returns the targets") {
    Mat phi = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    Mat t = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};
    Mat w = fit_output_weights(phi, t, 0.0);
    CHECK(testsupport::max_abs_diff(w, t) <= 1e-12);
  }
  SUBCASE("zero targets give zero weights") {
    Rng rng(12);
    Mat phi = testsupport::random_matrix(6, 3, rng);
    Mat t(6, std::vector<double>(2, 0.0));
    Mat w = fit_output_weights(phi, t, 0.5);
    CHECK(testsupport::max_abs_diff(w, Mat(3, std::vector<double>(2, 0.0))) <= 1e-12);
  }
  SUBCASE("matches the pseudo-inverse oracle") {
    Rng rng(14);
    Mat phi = testsupport::random_matrix(6, 3, rng);
    for (auto& row : phi) row[0] = 1.0;
    Mat t = testsupport::random_matrix(6, 2, rng, 0.0, 1.0);
    Mat w = fit_output_weights(phi, t, 1e-3);
    Mat oracle = testsupport::pseudo_inverse_weights(phi, t, 1e-3);
    CHECK(testsupport::max_abs_diff(w, oracle) <= 1e-8);
  }
  SUBCASE("singular system with lambda zero asks for ridge") {
    Mat phi = {{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};  // duplicated columns
    Mat t = {{1.0}, {0.0}, {1.0}};
    CHECK_THROWS_WITH_AS(fit_output_weights(phi, t, 0.0), doctest::Contains("ridge"),
                         ValidationError);
    CHECK_NOTHROW(fit_output_weights(phi, t, 1e-8));
  }
  SUBCASE("negative lambda rejected") {
    Mat phi = {{1.0}};
    Mat t = {{1.0}};
    CHECK_THROWS_AS(fit_output_weights(phi, t, -1.0), ValidationError);
  }
}

TEST_CASE("train reaches accuracy 1.0 on the fixture with J = N") {
  ParseResult parsed = parse_csv_file(testsupport::fixture_path());
  Encoded enc = encode(parsed.records, Target::prolong);
  TrainConfig cfg;
  cfg.hidden = 10;
  RbfModel model = train(enc.features, enc.labels, cfg);
  CHECK(fixture_accuracy(model, enc.features, enc.labels) == 1.0);

  // fixture patient A classifies as ">75%"
  CHECK(model.class_names[static_cast<std::size_t>(predict(model, enc.features.values[0]))] ==
        ">75%");
}

TEST_CASE("train separates a two-point dataset") {
  FeatureMatrix m;
  m.feature_names = {"x"};
  m.values = {{-1.0}, {1.0}};
  LabelVector y;
  y.class_names = {"a", "b"};
  y.indices = {0, 1};
  TrainConfig cfg;
  cfg.hidden = 2;
  RbfModel model = train(m, y, cfg);
  CHECK(predict(model, {-1.0}) == 0);
  CHECK(predict(model, {1.0}) == 1);
}

TEST_CASE("train is deterministic for a fixed seed") {
  ParseResult parsed = parse_csv_file(testsupport::fixture_path());
  Encoded enc = encode(parsed.records, Target::prolong);
  TrainConfig cfg;
  cfg.hidden = 4;
  cfg.seed = 99;
  RbfModel a = train(enc.features, enc.labels, cfg);
  RbfModel b = train(enc.features, enc.labels, cfg);
  CHECK(to_json(a) == to_json(b));  // bit-identical serialized form

  cfg.centers = CenterStrategy::random_subset;
  RbfModel c = train(enc.features, enc.labels, cfg);
  RbfModel d = train(enc.features, enc.labels, cfg);
  CHECK(to_json(c) == to_json(d));
}

TEST_CASE("exact interpolation with one center per distinct point") {
  for (std::uint64_t seed : {101, 102, 103}) {
    testsupport::RandomDataset ds =
        testsupport::make_separated_dataset(12 + seed % 8, 3, 2 + seed % 2, seed);
    TrainConfig cfg;
    cfg.hidden = ds.features.rows();
    cfg.lambda = 1e-8;
    cfg.seed = seed;
    RbfModel model = train(ds.features, ds.labels, cfg);
    for (std::size_t i = 0; i < ds.features.rows(); ++i)
      CHECK(predict(model, ds.features.values[i]) == ds.labels.indices[i]);
  }
}

TEST_CASE("train validates its configuration") {
  ParseResult parsed = parse_csv_file(testsupport::fixture_path());
  Encoded enc = encode(parsed.records, Target::prolong);
  TrainConfig cfg;
  cfg.hidden = 11;  // > N
  CHECK_THROWS_AS(train(enc.features, enc.labels, cfg), ValidationError);
  cfg.hidden = 0;
  CHECK_THROWS_AS(train(enc.features, enc.labels, cfg), ValidationError);
}

TEST_CASE("select_hidden_size") {
  SUBCASE("singleton grid returns its only candidate") {
    testsupport::RandomDataset ds = testsupport::make_blobs(20, 21);
    HiddenSizeChoice choice = select_hidden_size(ds.features, ds.labels, {3}, 4, 1);
    CHECK(choice.chosen == 3);
    CHECK(choice.table.size() == 1);
  }
  SUBCASE("identical accuracies pick the smaller size") {
    testsupport::RandomDataset ds = testsupport::make_blobs(24, 22);
    HiddenSizeChoice choice = select_hidden_size(ds.features, ds.labels, {2, 4}, 4, 1);
    REQUIRE(choice.table.size() == 2);
    if (choice.table[0].mean_accuracy == choice.table[1].mean_accuracy)
      CHECK(choice.chosen == 2);
  }
  SUBCASE("fixture grid returns a member and a full table") {
    ParseResult parsed = parse_csv_file(testsupport::fixture_path());
    Encoded enc = encode(parsed.records, Target::prolong);
    HiddenSizeChoice choice = select_hidden_size(enc.features, enc.labels, {2, 4, 8}, 5, 3);
    CHECK(choice.table.size() == 3);
    CHECK((choice.chosen == 2 || choice.chosen == 4 || choice.chosen == 8));
    for (const auto& row : choice.table) {
      CHECK(row.mean_accuracy >= 0.0);
      CHECK(row.mean_accuracy <= 1.0);
    }
  }
  SUBCASE("empty grid is an error") {
    testsupport::RandomDataset ds = testsupport::make_blobs(20, 23);
    CHECK_THROWS_AS(select_hidden_size(ds.features, ds.labels, {}, 4, 1), ValidationError);
  }
  SUBCASE("grid value exceeding the training fold size is an error") {
    testsupport::RandomDataset ds = testsupport::make_blobs(10, 24);
    CHECK_THROWS_AS(select_hidden_size(ds.features, ds.labels, {9}, 2, 1), ValidationError);
  }
}
