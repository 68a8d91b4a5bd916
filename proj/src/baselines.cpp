#include "rbfn/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace rbfn {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot_with_bias(const std::vector<double>& w, const std::vector<double>& x) {
  double z = w[0];
  for (std::size_t i = 0; i < x.size(); ++i) z += w[i + 1] * x[i];
  return z;
}

// stable softplus; log(1 + e^z) without overflow for finite z
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// cross-entropy of sigmoid(z) against t in {0,1}: softplus(z) - t z.
// Stays finite for finite z and goes inf/NaN exactly when training diverges.
double sigmoid_cross_entropy(double z, double t) { return softplus(z) - t * z; }

void check_finite(double loss, std::size_t epoch) {
  if (!std::isfinite(loss))
    throw ValidationError("non-finite training loss at epoch " + std::to_string(epoch));
}

int argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return static_cast<int>(best);
}

std::vector<double> normalize_or_uniform(std::vector<double> v) {
  double total = 0.0;
  for (double x : v) total += x;
  if (total <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
    return v;
  }
  for (double& x : v) x /= total;
  return v;
}

}  // namespace

double logistic_loss(const std::vector<double>& w, const Mat& x, const std::vector<int>& t) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    loss += sigmoid_cross_entropy(dot_with_bias(w, x[i]), static_cast<double>(t[i]));
  return loss / static_cast<double>(x.size());
}

std::vector<double> logistic_gradient(const std::vector<double>& w, const Mat& x,
                                      const std::vector<int>& t) {
  std::vector<double> grad(w.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double err = sigmoid(dot_with_bias(w, x[i])) - static_cast<double>(t[i]);
    grad[0] += err;
    for (std::size_t j = 0; j < x[i].size(); ++j) grad[j + 1] += err * x[i][j];
  }
  for (double& g : grad) g /= static_cast<double>(x.size());
  return grad;
}

LogisticModel logistic_train(const FeatureMatrix& m, const LabelVector& y,
                             const LogisticConfig& cfg, std::vector<double>* loss_out) {
  if (cfg.epochs < 1) throw ValidationError("epochs must be at least 1");
  if (m.rows() == 0 || m.rows() != y.indices.size())
    throw ValidationError("feature and label counts differ");
  const std::size_t L = y.class_names.size();
  if (L < 2) throw ValidationError("training requires at least 2 classes");

  // binary: one task for class 1; multiclass: one-vs-rest task per class
  const std::size_t tasks = L == 2 ? 1 : L;
  LogisticModel model;
  model.class_names = y.class_names;
  model.weights.assign(tasks, std::vector<double>(m.cols() + 1, 0.0));

  std::vector<std::vector<int>> targets(tasks, std::vector<int>(m.rows()));
  for (std::size_t task = 0; task < tasks; ++task) {
    const int positive = L == 2 ? 1 : static_cast<int>(task);
    for (std::size_t i = 0; i < m.rows(); ++i)
      targets[task][i] = y.indices[i] == positive ? 1 : 0;
  }

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double total_loss = 0.0;
    for (std::size_t task = 0; task < tasks; ++task) {
      std::vector<double> grad = logistic_gradient(model.weights[task], m.values, targets[task]);
      for (std::size_t j = 0; j < grad.size(); ++j) model.weights[task][j] -= cfg.lr * grad[j];
      total_loss += logistic_loss(model.weights[task], m.values, targets[task]);
    }
    check_finite(total_loss, epoch);
    if (loss_out) loss_out->push_back(total_loss);
  }
  return model;
}

namespace {

struct MlpForward {
  Mat hidden;   // N x H activations
  Mat outputs;  // N x L sigmoid outputs
};

MlpForward mlp_forward(const MlpModel& model, const Mat& x) {
  const std::size_t h = model.hidden_units();
  const std::size_t l = model.output_weights.size();
  MlpForward f;
  f.hidden.assign(x.size(), std::vector<double>(h));
  f.outputs.assign(x.size(), std::vector<double>(l));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < h; ++k)
      f.hidden[i][k] = sigmoid(dot_with_bias(model.hidden_weights[k], x[i]));
    for (std::size_t o = 0; o < l; ++o)
      f.outputs[i][o] = sigmoid(dot_with_bias(model.output_weights[o], f.hidden[i]));
  }
  return f;
}

}  // namespace

double mlp_loss(const MlpModel& model, const Mat& x, const Mat& targets) {
  const std::size_t h = model.hidden_units();
  const std::size_t l = model.output_weights.size();
  double loss = 0.0;
  std::vector<double> hidden(h);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < h; ++k)
      hidden[k] = sigmoid(dot_with_bias(model.hidden_weights[k], x[i]));
    for (std::size_t o = 0; o < l; ++o)
      loss += sigmoid_cross_entropy(dot_with_bias(model.output_weights[o], hidden),
                                    targets[i][o]);
  }
  return loss / static_cast<double>(x.size());
}

MlpGradients mlp_gradients(const MlpModel& model, const Mat& x, const Mat& targets) {
  const std::size_t h = model.hidden_units();
  const std::size_t l = model.output_weights.size();
  const std::size_t d = model.hidden_weights[0].size() - 1;
  const double n = static_cast<double>(x.size());

  MlpGradients g;
  g.hidden.assign(h, std::vector<double>(d + 1, 0.0));
  g.output.assign(l, std::vector<double>(h + 1, 0.0));

  MlpForward f = mlp_forward(model, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    // sigmoid + cross-entropy: output delta reduces to (p - t) / N
    std::vector<double> delta_out(l);
    for (std::size_t o = 0; o < l; ++o) delta_out[o] = (f.outputs[i][o] - targets[i][o]) / n;

    for (std::size_t o = 0; o < l; ++o) {
      g.output[o][0] += delta_out[o];
      for (std::size_t k = 0; k < h; ++k) g.output[o][k + 1] += delta_out[o] * f.hidden[i][k];
    }
    for (std::size_t k = 0; k < h; ++k) {
      double back = 0.0;
      for (std::size_t o = 0; o < l; ++o) back += delta_out[o] * model.output_weights[o][k + 1];
      double dh = back * f.hidden[i][k] * (1.0 - f.hidden[i][k]);
      g.hidden[k][0] += dh;
      for (std::size_t j = 0; j < d; ++j) g.hidden[k][j + 1] += dh * x[i][j];
    }
  }
  return g;
}

MlpModel mlp_train(const FeatureMatrix& m, const LabelVector& y, const MlpConfig& cfg,
                   std::vector<double>* loss_out) {
  if (cfg.hidden < 1) throw ValidationError("hidden unit count must be at least 1");
  if (cfg.epochs < 1) throw ValidationError("epochs must be at least 1");
  if (m.rows() == 0 || m.rows() != y.indices.size())
    throw ValidationError("feature and label counts differ");
  const std::size_t L = y.class_names.size();
  if (L < 2) throw ValidationError("training requires at least 2 classes");
  const std::size_t d = m.cols();

  MlpModel model;
  model.class_names = y.class_names;
  // symmetric (all-equal) init keeps hidden units identical forever, so break
  // the tie with a seeded uniform draw
  Rng rng(cfg.seed);
  model.hidden_weights.assign(cfg.hidden, std::vector<double>(d + 1));
  for (auto& row : model.hidden_weights)
    for (double& w : row) w = rng.uniform(-0.5, 0.5);
  model.output_weights.assign(L, std::vector<double>(cfg.hidden + 1));
  for (auto& row : model.output_weights)
    for (double& w : row) w = rng.uniform(-0.5, 0.5);

  Mat targets(m.rows(), std::vector<double>(L, 0.0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    targets[i][static_cast<std::size_t>(y.indices[i])] = 1.0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    MlpGradients g = mlp_gradients(model, m.values, targets);
    for (std::size_t k = 0; k < cfg.hidden; ++k)
      for (std::size_t j = 0; j <= d; ++j) model.hidden_weights[k][j] -= cfg.lr * g.hidden[k][j];
    for (std::size_t o = 0; o < L; ++o)
      for (std::size_t k = 0; k <= cfg.hidden; ++k)
        model.output_weights[o][k] -= cfg.lr * g.output[o][k];
    double loss = mlp_loss(model, m.values, targets);
    check_finite(loss, epoch);
    if (loss_out) loss_out->push_back(loss);
  }
  return model;
}

BaselinePrediction baseline_predict(const LogisticModel& model, const std::vector<double>& x_raw,
                                    const Scaler& scaler) {
  std::vector<double> x = transform_row(scaler, x_raw);
  if (x.size() + 1 != model.weights[0].size())
    throw ValidationError("input dimension does not match the logistic model");

  BaselinePrediction out;
  if (model.n_classes() == 2) {
    double p = sigmoid(dot_with_bias(model.weights[0], x));
    out.probabilities = {1.0 - p, p};
  } else {
    std::vector<double> scores(model.weights.size());
    for (std::size_t task = 0; task < model.weights.size(); ++task)
      scores[task] = sigmoid(dot_with_bias(model.weights[task], x));
    out.probabilities = normalize_or_uniform(std::move(scores));
  }
  out.label = argmax_lowest(out.probabilities);
  return out;
}

BaselinePrediction baseline_predict(const MlpModel& model, const std::vector<double>& x_raw,
                                    const Scaler& scaler) {
  std::vector<double> x = transform_row(scaler, x_raw);
  if (x.size() + 1 != model.hidden_weights[0].size())
    throw ValidationError("input dimension does not match the MLP model");

  std::vector<double> hidden(model.hidden_units());
  for (std::size_t k = 0; k < hidden.size(); ++k)
    hidden[k] = sigmoid(dot_with_bias(model.hidden_weights[k], x));
  std::vector<double> scores(model.output_weights.size());
  for (std::size_t o = 0; o < scores.size(); ++o)
    scores[o] = sigmoid(dot_with_bias(model.output_weights[o], hidden));

  BaselinePrediction out;
  out.probabilities = normalize_or_uniform(std::move(scores));
  out.label = argmax_lowest(out.probabilities);
  return out;
}

}  // namespace rbfn
