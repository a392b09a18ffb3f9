#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "herdgraph/core.hpp"
#include "herdgraph/features.hpp"

namespace herdgraph {

struct LabeledClip {
  FeatureVector features{};
  Label label = Label::LickGroom;
  std::string group_key;  // unordered identity pair, e.g. "A|B"
  std::string clip_id;
};

/// Canonical group key for an unordered identity pair.
std::string group_key(const std::string& a, const std::string& b);

// ---------------------------------------------------------------------------
// Binary soft-margin solver

struct SmoOptions {
  double tol = 1e-3;
  std::size_t max_iterations = 0;  // 0 = 10'000'000 + 1000 n
};

struct SmoSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  double objective = 0.0;  // dual objective, maximized
  std::size_t iterations = 0;
  bool converged = false;
};

/// Solves max sum(a) - 1/2 a'Qa, Q_ij = y_i y_j K_ij, s.t. 0 <= a_i <= c_i and
/// sum(a_i y_i) = 0. Each step updates the pair (i, j) where i is the worst KKT
/// violator and j maximizes |E_i - E_j|; stops when the largest violation gap
/// drops below tol. The decision function is f(x) = sum(a_j y_j K(x_j, x)) + bias.
SmoSolution smo_solve(const Eigen::MatrixXd& kernel, std::span<const double> y,
                      std::span<const double> upper, const SmoOptions& opts = {});

double dual_objective(const Eigen::MatrixXd& kernel, std::span<const double> y,
                      std::span<const double> alpha);

/// Gram matrix exp(-gamma ||x_i - x_j||^2) over row-major samples.
Eigen::MatrixXd rbf_gram(std::span<const double> rows, std::size_t dim, double gamma);

// ---------------------------------------------------------------------------
// Multiclass model

enum class GammaMode { Scale, Auto, Fixed };

struct SvmParams {
  double C = 10.0;
  GammaMode gamma_mode = GammaMode::Scale;
  double gamma = 0.0;  // used when gamma_mode == Fixed
  bool balanced = true;
  double tol = 1e-3;
  double reject_threshold = 0.5;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct Scaler {
  std::vector<double> mean;    // per input dimension
  std::vector<double> scale;   // per input dimension (population std)
  std::vector<std::size_t> active;  // input dimensions kept (non-constant)

  std::vector<double> transform(std::span<const double> x) const;
};

struct BinaryMachine {
  Label positive = Label::LickGroom;  // class with the lower index
  Label negative = Label::Headbutt;
  std::vector<double> support_vectors;  // row-major, standardized active dims
  std::vector<double> coef;             // alpha_i * y_i
  double bias = 0.0;

  std::size_t support_count() const { return coef.size(); }
  double decision(std::span<const double> z, double gamma) const;
};

struct Prediction {
  Label label = Label::NoInteraction;
  double confidence = 0.0;
  std::vector<int> votes;             // per model class
  std::vector<double> mean_margins;   // per model class
};

struct SvmModel {
  std::size_t input_dim = 0;
  Scaler scaler;
  double gamma = 1.0;
  double C = 10.0;
  std::vector<Label> classes;        // ascending label index
  std::vector<double> class_weights;  // per class
  double reject_threshold = 0.5;
  std::vector<BinaryMachine> machines;  // (classes[p], classes[q]) for p < q, lexicographic

  /// Throws Error(Data, "DimensionMismatch").
  Prediction predict(std::span<const double> features) const;
};

/// Throws Error(Data, "DegenerateData") if fewer than two classes are present,
/// a present class has fewer than two samples, or every feature is constant.
/// Constant features are dropped and reported through `dropped`.
SvmModel train(const std::vector<std::vector<double>>& x, const std::vector<Label>& y,
               const SvmParams& params, std::vector<std::size_t>* dropped = nullptr);

/// Trains on the given feature columns of labeled clips.
SvmModel train(const std::vector<LabeledClip>& clips, const SvmParams& params,
               const std::vector<std::size_t>& columns);

std::vector<double> project(const FeatureVector& f, const std::vector<std::size_t>& columns);

/// Proximity-only baseline.
enum class BaselineVariant { Occurrence, Majority };

Prediction baseline_predict(bool gated, BaselineVariant variant, Label majority_class);
/// Most frequent label; ties go to the lowest class index.
Label majority_label(const std::vector<Label>& labels);

}  // namespace herdgraph
