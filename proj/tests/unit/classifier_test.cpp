#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "seqpip/classifier.hpp"
#include "seqpip/error.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace seqpip;

namespace {

FeatureMatrix rows_of(std::initializer_list<double> first_col) {
  FeatureMatrix m;
  for (double v : first_col) {
    FeatureRow r;
    r.x[0] = v;
    m.push_back(r);
  }
  return m;
}

LinearModel trained(std::uint64_t seed, const FeatureMatrix& m) {
  SvmParams p;
  p.seed = seed;
  p.epochs = 50;
  return train_svm(m, p);
}

std::string saved(const LinearModel& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

LinearModel loaded(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

std::string replace_line(const std::string& text, const std::string& key, const std::string& line) {
  std::istringstream in(text);
  std::string out, l;
  while (std::getline(in, l)) {
    out += (l.rfind(key + " =", 0) == 0 ? line : l) + "\n";
  }
  return out;
}

TEST(Standardizer, SingleRow) {
  const auto s = fit_standardizer(rows_of({3.0}));
  for (double sd : s.stds) EXPECT_EQ(sd, 1.0);
  FeatureVector x{};
  x[0] = 3.0;
  for (double z : s.apply(x)) EXPECT_EQ(z, 0.0);
}

TEST(Standardizer, TwoPoints) {
  const auto m = rows_of({0.0, 2.0});
  const auto s = fit_standardizer(m);
  EXPECT_EQ(s.means[0], 1.0);
  EXPECT_EQ(s.stds[0], 1.0);
  EXPECT_EQ(s.apply(m[0].x)[0], -1.0);
  EXPECT_EQ(s.apply(m[1].x)[0], 1.0);
}

TEST(Standardizer, RandomColumnsCentred) {
  const auto m = testkit::gaussian_pair_features(200, 1.0, 3);
  const auto s = fit_standardizer(m);
  FeatureVector mean{}, sq{};
  for (const auto& r : m) {
    const auto z = s.apply(r.x);
    for (std::size_t k = 0; k < kNumScales; ++k) {
      mean[k] += z[k];
      sq[k] += z[k] * z[k];
    }
  }
  for (std::size_t k = 0; k < kNumScales; ++k) {
    EXPECT_LT(std::abs(mean[k] / 400), 1e-9);
    EXPECT_NEAR(sq[k] / 400, 1.0, 1e-9);
  }
}

TEST(Standardizer, EmptyThrows) { EXPECT_THROW(fit_standardizer(FeatureMatrix{}), Error); }

TEST(Train, SingleClassAndTooFewRows) {
  auto m = rows_of({1.0, 2.0});
  m[0].record.label = m[1].record.label = 1;
  EXPECT_THROW(train_svm(m, {}), Error);
  EXPECT_THROW(train_svm(rows_of({1.0}), {}), Error);
}

TEST(Train, NonFiniteNamesRow) {
  auto m = rows_of({1.0, 2.0, 3.0});
  m[0].record.label = 1;
  m[2].x[5] = std::numeric_limits<double>::infinity();
  try {
    train_svm(m, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
}

TEST(Train, LearnsSeparatedClasses) {
  const auto m = testkit::gaussian_pair_features(100, 3.0, 4);
  const auto model = trained(1, m);
  std::size_t correct = 0;
  for (const auto& r : m) correct += predict(model, r.x) == r.record.label;
  EXPECT_GE(correct, 195u);
}

TEST(Train, NoStandardizeUsesIdentity) {
  const auto m = testkit::gaussian_pair_features(50, 3.0, 4);
  SvmParams p;
  p.standardize = false;
  p.epochs = 20;
  const auto model = train_svm(m, p);
  EXPECT_EQ(model.standardizer, Standardizer::identity());
}

TEST(Decision, ConstantBiasPredictsPositive) {
  LinearModel m;
  m.bias = 0.5;
  FeatureVector x;
  x.fill(123.0);
  EXPECT_EQ(predict(m, x), 1);
  m.bias = 0.0;
  EXPECT_EQ(decision(m, x), 0.0);
  EXPECT_EQ(predict(m, x), 1);
  m.bias = -1e-300;
  EXPECT_EQ(predict(m, x), 0);
}

TEST(Decision, NonFiniteInputThrows) {
  LinearModel m;
  FeatureVector x{};
  x[3] = std::nan("");
  EXPECT_THROW(decision(m, x), Error);
}

TEST(Decision, MatchesReferenceRecomputation) {
  const auto data = testkit::gaussian_pair_features(100, 1.5, 6);
  const auto model = trained(2, data);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    FeatureVector x;
    for (auto& v : x) v = testkit::normal(rng) * 20;
    const double d = decision(model, x);
    EXPECT_NEAR(d, testkit::reference_decision(model, x), 1e-12 * std::max(1.0, std::abs(d)));
  }
}

TEST(Decision, ScalingInvariance) {
  const auto data = testkit::gaussian_pair_features(60, 1.5, 7);
  const auto model = trained(3, data);
  for (double c : {0.5, 2.0, 1024.0}) {
    LinearModel scaled = model;
    for (std::size_t k = 0; k < kNumScales; ++k) {
      scaled.weights[k] = model.weights[k] / c;
      scaled.standardizer.stds[k] = model.standardizer.stds[k] / c;
    }
    for (const auto& r : data) {
      EXPECT_NEAR(decision(scaled, r.x), decision(model, r.x), 1e-9);
      EXPECT_EQ(predict(scaled, r.x), predict(model, r.x));
    }
  }
}

TEST(Decision, BatchMatchesSerialBits) {
  const auto data = testkit::gaussian_pair_features(500, 1.0, 8);
  const auto model = trained(4, data);
  std::vector<FeatureVector> xs;
  for (const auto& r : data) xs.push_back(r.x);
  const auto a = decision_batch(model, xs);
  const auto b = decision_batch_serial(model, xs);
  ASSERT_EQ(a.size(), xs.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
  for (std::size_t i = 0; i < xs.size(); i += 37) EXPECT_EQ(a[i], decision(model, xs[i]));
}

TEST(Decision, BatchRejectsNonFiniteRow) {
  LinearModel m;
  std::vector<FeatureVector> xs(10, FeatureVector{});
  xs[7][2] = std::nan("");
  xs[9][0] = std::numeric_limits<double>::infinity();
  for (const auto& f : {decision_batch, decision_batch_serial}) {
    EXPECT_THROW(f(m, xs), Error);
  }
  try {
    decision_batch(m, xs);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row 7"), std::string::npos) << e.what();
  }
}

TEST(Model, RoundTripBitExact) {
  const auto data = testkit::gaussian_pair_features(80, 1.0, 9);
  SvmParams p;
  p.C = 0.37;
  p.seed = 1234567890123ULL;
  p.epochs = 30;
  const auto model = train_svm(data, p, ScaleVariant::CorrectedY);
  const auto text = saved(model);
  const auto back = loaded(text);
  EXPECT_EQ(back, model);
  EXPECT_EQ(saved(back), text);
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    FeatureVector x;
    for (auto& v : x) v = testkit::normal(rng) * 50;
    EXPECT_EQ(decision(back, x), decision(model, x));
  }
}

TEST(Model, FileFields) {
  const auto text = saved(LinearModel{});
  for (const char* key : {"format_version", "scale_variant", "standardize", "means", "stds",
                          "weights", "bias", "C", "epochs", "tol", "seed"}) {
    EXPECT_NE(text.find(std::string("\n") + key + " ="), std::string::npos) << key;
  }
}

TEST(Model, LoadErrors) {
  const auto good = saved(trained(5, testkit::gaussian_pair_features(30, 1.0, 10)));
  EXPECT_NO_THROW(loaded(good));
  EXPECT_THROW(loaded(replace_line(good, "format_version", "format_version = 2")), Error);
  EXPECT_THROW(loaded(good.substr(0, good.size() / 2)), Error);
  EXPECT_THROW(loaded(replace_line(good, "bias", "bias = nan")), Error);
  EXPECT_THROW(loaded(replace_line(good, "bias", "bias = inf")), Error);
  EXPECT_THROW(loaded(replace_line(good, "stds", "stds = 0 1 1 1 1 1 1 1 1 1 1 1 1 1")), Error);
  EXPECT_THROW(loaded(replace_line(good, "weights", "weights = 1 2 3")), Error);
  EXPECT_THROW(loaded(replace_line(good, "C", "C = -1")), Error);
  EXPECT_THROW(loaded(good + "bias = 1\n"), Error);
  EXPECT_THROW(loaded(good + "mystery = 1\n"), Error);
  EXPECT_THROW(loaded(""), Error);
}

}  // namespace
