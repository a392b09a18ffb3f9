#include "herdgraph/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "herdgraph/error.hpp"
#include "herdgraph/kernels.hpp"
#include "herdgraph/parallel.hpp"

namespace herdgraph {

std::string group_key(const std::string& a, const std::string& b) {
  return a < b ? a + "|" + b : b + "|" + a;
}

// ---------------------------------------------------------------------------
// SMO

namespace {

constexpr double kTau = 1e-12;

bool in_up(double y, double a, double c) { return (y > 0 && a < c) || (y < 0 && a > 0); }
bool in_low(double y, double a, double c) { return (y > 0 && a > 0) || (y < 0 && a < c); }

}  // namespace

double dual_objective(const Eigen::MatrixXd& kernel, std::span<const double> y,
                      std::span<const double> alpha) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  double lin = 0.0, quad = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    lin += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel(i, j);
    }
  }
  return lin - 0.5 * quad;
}

SmoSolution smo_solve(const Eigen::MatrixXd& kernel, std::span<const double> y,
                      std::span<const double> upper, const SmoOptions& opts) {
  const std::size_t n = y.size();
  SmoSolution sol;
  sol.alpha.assign(n, 0.0);
  if (n == 0) return sol;
  std::vector<double>& a = sol.alpha;
  // grad_i = (Q a)_i - 1
  std::vector<double> grad(n, -1.0);
  const std::size_t max_iter = opts.max_iterations ? opts.max_iterations : 10'000'000 + 1000 * n;

  auto K = [&](std::size_t i, std::size_t j) {
    return kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  while (sol.iterations < max_iter) {
    // i: worst violator from the "up" set; j: partner maximizing the error gap.
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(y[t], a[t], upper[t]) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(y[t], a[t], upper[t]) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < opts.tol) {
      sol.converged = true;
      break;
    }
    ++sol.iterations;

    const double ci = upper[i], cj = upper[j];
    const double old_ai = a[i], old_aj = a[j];
    const double kij = K(i, j);
    double quad = K(i, i) + K(j, j) - 2.0 * kij;
    if (quad <= 0.0) quad = kTau;
    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0) {
        if (a[j] < 0) {
          a[j] = 0;
          a[i] = diff;
        }
      } else if (a[i] < 0) {
        a[i] = 0;
        a[j] = -diff;
      }
      if (diff > ci - cj) {
        if (a[i] > ci) {
          a[i] = ci;
          a[j] = ci - diff;
        }
      } else if (a[j] > cj) {
        a[j] = cj;
        a[i] = cj + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > ci) {
        if (a[i] > ci) {
          a[i] = ci;
          a[j] = sum - ci;
        }
      } else if (a[j] < 0) {
        a[j] = 0;
        a[i] = sum;
      }
      if (sum > cj) {
        if (a[j] > cj) {
          a[j] = cj;
          a[i] = sum - cj;
        }
      } else if (a[i] < 0) {
        a[i] = 0;
        a[j] = sum;
      }
    }
    const double dai = a[i] - old_ai;
    const double daj = a[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * K(t, i) * dai + y[j] * K(t, j) * daj);
    }
  }

  // Bias: average over free vectors, else the midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_n = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (a[t] >= upper[t]) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (a[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_n;
    }
  }
  double rho = 0.0;
  if (free_n > 0) {
    rho = free_sum / static_cast<double>(free_n);
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    rho = 0.5 * (ub + lb);
  } else if (std::isfinite(ub)) {
    rho = ub;
  } else if (std::isfinite(lb)) {
    rho = lb;
  }
  sol.bias = -rho;

  double lin = 0.0, quad = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    lin += a[t];
    quad += a[t] * (grad[t] + 1.0);
  }
  sol.objective = lin - 0.5 * quad;
  return sol;
}

Eigen::MatrixXd rbf_gram(std::span<const double> rows, std::size_t dim, double gamma) {
  const std::size_t n = dim == 0 ? 0 : rows.size() / dim;
  Eigen::MatrixXd g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::squared_distances(rows.subspan(i * dim, dim), rows, dim, sq);
    for (std::size_t j = 0; j < n; ++j) {
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::exp(-gamma * sq[j]);
    }
  }
  // Symmetric by construction up to kernel rounding; enforce it exactly.
  g = (0.5 * (g + g.transpose())).eval();
  return g;
}

// ---------------------------------------------------------------------------
// Multiclass model

std::vector<double> Scaler::transform(std::span<const double> x) const {
  std::vector<double> z(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    const std::size_t d = active[k];
    z[k] = (x[d] - mean[d]) / scale[d];
  }
  return z;
}

double BinaryMachine::decision(std::span<const double> z, double gamma) const {
  const std::size_t dim = z.size();
  std::vector<double> sq(coef.size());
  kernels::squared_distances(z, support_vectors, dim, sq);
  double f = bias;
  for (std::size_t i = 0; i < coef.size(); ++i) f += coef[i] * std::exp(-gamma * sq[i]);
  return f;
}

namespace {

double logistic(double m) { return 1.0 / (1.0 + std::exp(-m)); }

std::size_t class_slot(const std::vector<Label>& classes, Label l) {
  return static_cast<std::size_t>(std::find(classes.begin(), classes.end(), l) - classes.begin());
}

}  // namespace

Prediction SvmModel::predict(std::span<const double> features) const {
  if (features.size() != input_dim) {
    throw data_error("DimensionMismatch", "model expects " + std::to_string(input_dim) +
                                              " features, got " + std::to_string(features.size()));
  }
  const std::size_t k = classes.size();
  Prediction p;
  p.votes.assign(k, 0);
  p.mean_margins.assign(k, 0.0);
  const std::vector<double> z = scaler.transform(features);
  for (const BinaryMachine& m : machines) {
    const double f = m.decision(z, gamma);
    const std::size_t sp = class_slot(classes, m.positive);
    const std::size_t sn = class_slot(classes, m.negative);
    // A zero decision value goes to the lower-index class.
    ++p.votes[f >= 0.0 ? sp : sn];
    p.mean_margins[sp] += f;
    p.mean_margins[sn] -= f;
  }
  for (double& m : p.mean_margins) m /= static_cast<double>(k - 1);
  std::size_t best = 0;
  for (std::size_t c = 1; c < k; ++c) {
    if (p.votes[c] > p.votes[best]) best = c;
  }
  // Share of all pairwise votes; a unanimous K-class winner holds (K-1) of K(K-1)/2.
  const double share = static_cast<double>(p.votes[best]) / static_cast<double>(machines.size());
  p.confidence = share * logistic(p.mean_margins[best]);
  p.label = p.confidence < reject_threshold ? Label::NoInteraction : classes[best];
  return p;
}

SvmModel train(const std::vector<std::vector<double>>& x, const std::vector<Label>& y,
               const SvmParams& params, std::vector<std::size_t>* dropped) {
  if (x.size() != y.size()) throw data_error("DegenerateData", "feature/label count mismatch");
  if (x.empty()) throw data_error("DegenerateData", "no training samples");
  const std::size_t dim = x.front().size();
  for (const auto& row : x) {
    if (row.size() != dim) throw data_error("DegenerateData", "ragged feature rows");
  }

  SvmModel model;
  model.input_dim = dim;
  model.C = params.C;
  model.reject_threshold = params.reject_threshold;

  std::map<Label, std::size_t> counts;
  for (Label l : y) {
    if (l == Label::NoInteraction || l == Label::InteractionPresent) {
      throw data_error("DegenerateData", "training labels must be interaction classes");
    }
    ++counts[l];
  }
  if (counts.size() < 2) throw data_error("DegenerateData", "need at least two classes");
  for (const auto& [label, n] : counts) {
    if (n < 2) {
      throw data_error("DegenerateData",
                       "class " + std::string(label_name(label)) + " has fewer than 2 samples");
    }
    model.classes.push_back(label);
  }

  const std::size_t n = x.size();
  const std::size_t kc = model.classes.size();
  for (Label l : model.classes) {
    model.class_weights.push_back(
        params.balanced ? static_cast<double>(n) / (static_cast<double>(kc) * static_cast<double>(counts[l]))
                        : 1.0);
  }

  // Standardize, dropping constant columns.
  Scaler& sc = model.scaler;
  sc.mean.assign(dim, 0.0);
  sc.scale.assign(dim, 1.0);
  for (std::size_t d = 0; d < dim; ++d) {
    double m = 0.0;
    for (const auto& row : x) m += row[d];
    m /= static_cast<double>(n);
    double v = 0.0;
    for (const auto& row : x) v += (row[d] - m) * (row[d] - m);
    v /= static_cast<double>(n);
    sc.mean[d] = m;
    const double sd = std::sqrt(v);
    if (sd > 1e-12 * std::max(1.0, std::abs(m))) {
      sc.scale[d] = sd;
      sc.active.push_back(d);
    } else if (dropped) {
      dropped->push_back(d);
    }
  }
  if (sc.active.empty()) throw data_error("DegenerateData", "every feature has zero variance");
  const std::size_t f = sc.active.size();

  std::vector<double> z(n * f);
  for (std::size_t i = 0; i < n; ++i) {
    const auto zi = sc.transform(x[i]);
    std::copy(zi.begin(), zi.end(), z.begin() + static_cast<std::ptrdiff_t>(i * f));
  }

  switch (params.gamma_mode) {
    case GammaMode::Scale: {
      double m = 0.0;
      for (double v : z) m += v;
      m /= static_cast<double>(z.size());
      double var = 0.0;
      for (double v : z) var += (v - m) * (v - m);
      var /= static_cast<double>(z.size());
      model.gamma = var > 0.0 ? 1.0 / (static_cast<double>(f) * var) : 1.0;
      break;
    }
    case GammaMode::Auto:
      model.gamma = 1.0 / static_cast<double>(f);
      break;
    case GammaMode::Fixed:
      if (!(params.gamma > 0.0)) throw Error(ErrorKind::Config, "ConfigError", "svm.gamma must be > 0");
      model.gamma = params.gamma;
      break;
  }

  struct Job {
    std::size_t p, q;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < kc; ++p) {
    for (std::size_t q = p + 1; q < kc; ++q) jobs.push_back({p, q});
  }
  model.machines.resize(jobs.size());

  parallel_for(jobs.size(), params.workers, [&](std::size_t ji) {
    const Label lp = model.classes[jobs[ji].p];
    const Label lq = model.classes[jobs[ji].q];
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] == lp || y[i] == lq) idx.push_back(i);
    }
    std::vector<double> sub(idx.size() * f), yy(idx.size()), cc(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(idx[r] * f), f,
                  sub.begin() + static_cast<std::ptrdiff_t>(r * f));
      const bool pos = y[idx[r]] == lp;
      yy[r] = pos ? 1.0 : -1.0;
      cc[r] = params.C * model.class_weights[pos ? jobs[ji].p : jobs[ji].q];
    }
    const Eigen::MatrixXd gram = rbf_gram(sub, f, model.gamma);
    const SmoSolution sol = smo_solve(gram, yy, cc, {params.tol, 0});

    BinaryMachine& m = model.machines[ji];
    m.positive = lp;
    m.negative = lq;
    m.bias = sol.bias;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (sol.alpha[r] <= 0.0) continue;
      m.coef.push_back(sol.alpha[r] * yy[r]);
      m.support_vectors.insert(m.support_vectors.end(), sub.begin() + static_cast<std::ptrdiff_t>(r * f),
                               sub.begin() + static_cast<std::ptrdiff_t>((r + 1) * f));
    }
  });
  return model;
}

std::vector<double> project(const FeatureVector& f, const std::vector<std::size_t>& columns) {
  std::vector<double> out;
  out.reserve(columns.size());
  for (std::size_t c : columns) out.push_back(f[c]);
  return out;
}

SvmModel train(const std::vector<LabeledClip>& clips, const SvmParams& params,
               const std::vector<std::size_t>& columns) {
  std::vector<std::vector<double>> x;
  std::vector<Label> y;
  x.reserve(clips.size());
  for (const LabeledClip& c : clips) {
    x.push_back(project(c.features, columns));
    y.push_back(c.label);
  }
  return train(x, y, params);
}

Label majority_label(const std::vector<Label>& labels) {
  std::array<std::size_t, kNumClasses> counts{};
  for (Label l : labels) {
    const auto i = static_cast<std::size_t>(l);
    if (i < kNumClasses) ++counts[i];
  }
  const auto it = std::max_element(counts.begin(), counts.end());
  return kInteractionClasses[static_cast<std::size_t>(it - counts.begin())];
}

Prediction baseline_predict(bool gated, BaselineVariant variant, Label majority_class) {
  Prediction p;
  if (!gated) {
    p.label = Label::NoInteraction;
    p.confidence = 0.0;
    return p;
  }
  p.label = variant == BaselineVariant::Occurrence ? Label::InteractionPresent : majority_class;
  p.confidence = 1.0;
  return p;
}

}  // namespace herdgraph
