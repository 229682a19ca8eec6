#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cgen/dataset.hpp"
#include "cgen/dist_table.hpp"
#include "cgen/rng.hpp"

namespace cgen {

/// A sampler for one variable given an ordered context. This is the only
/// surface the engine uses, so other backends can be plugged in behind it.
class ConditionalModel {
 public:
  ConditionalModel(Variable target, std::vector<Variable> context);
  virtual ~ConditionalModel() = default;

  const Variable& target() const { return target_; }
  const std::vector<Variable>& context() const { return context_; }
  std::vector<std::string> context_names() const;

  /// "cpt", "exact" or "uniform".
  virtual std::string kind() const = 0;

  /// Distribution over target states for the context configuration `ctx`
  /// (values in context order).
  virtual std::span<const double> distribution(std::span<const int> ctx) const = 0;

  virtual int sample(std::span<const int> ctx, Rng& rng) const;
  /// Looks up the context values by name; throws when one is missing.
  int sample(const Assignment& ctx, Rng& rng) const;

  std::size_t context_configurations() const;
  std::size_t context_index(std::span<const int> ctx) const;

 protected:
  Variable target_;
  std::vector<Variable> context_;
};

using ModelPtr = std::shared_ptr<const ConditionalModel>;

/// Dense conditional probability table, one row per context configuration
/// (row-major over the context, last variable fastest).
class CptModel final : public ConditionalModel {
 public:
  CptModel(Variable target, std::vector<Variable> context, std::vector<double> table, std::string kind = "cpt");

  std::string kind() const override { return kind_; }
  std::span<const double> distribution(std::span<const int> ctx) const override;
  using ConditionalModel::sample;
  int sample(std::span<const int> ctx, Rng& rng) const override;
  std::span<const double> row(std::size_t index) const;
  std::span<const double> table() const { return table_; }

 private:
  std::vector<double> table_;
  std::vector<double> cumulative_;
  std::string kind_;
};

class UniformModel final : public ConditionalModel {
 public:
  explicit UniformModel(Variable target);

  std::string kind() const override { return "uniform"; }
  std::span<const double> distribution(std::span<const int> ctx) const override;
  using ConditionalModel::sample;
  int sample(std::span<const int> ctx, Rng& rng) const override;

 private:
  std::vector<double> probs_;
};

/// Laplace-smoothed maximum likelihood: P(t | c) = (n(t, c) + α) / (n(c) + α K).
/// Unseen context configurations get the uniform row.
std::shared_ptr<const CptModel> fit_conditional(const Dataset& d, const std::string& target,
                                                const std::vector<std::string>& context, double alpha = 1.0,
                                                int workers = 0);

ModelPtr uniform_model(const Variable& v);

/// The exact conditional of `joint`. Throws when a context configuration has
/// zero mass.
std::shared_ptr<const CptModel> exact_conditional(const DistTable& joint, const std::string& target,
                                                  const std::vector<std::string>& context);

/// The model's conditional as a factor over (context..., target).
DistTable model_factor(const ConditionalModel& m);

namespace kernels {

/// Joint counts of the listed columns, row-major over their states.
/// OpenMP over row blocks; `workers` <= 0 uses the runtime default.
std::vector<std::uint64_t> count_configurations(const Dataset& d, std::span<const int> columns, int workers = 0);
/// Single-threaded reference for the kernel above.
std::vector<std::uint64_t> count_configurations_serial(const Dataset& d, std::span<const int> columns);

}  // namespace kernels

}  // namespace cgen
