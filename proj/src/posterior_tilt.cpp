#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "boolbias/complexity.hpp"
#include "boolbias/error.hpp"
#include "boolbias/training.hpp"
#include "row_tables.hpp"

namespace boolbias {

namespace {

// Prior mass of each function with every state weighted by
// exp(-lambda * ||theta||); w2 is active exactly on nonzero rows.
std::vector<double> tilted_mass(int n, int width, double lambda) {
  const detail::RowTables rows(n);
  const std::size_t functions = std::size_t{1} << (std::size_t{1} << n);
  std::vector<double> weight(rows.rows());
  for (std::size_t id = 0; id < rows.rows(); ++id) {
    const int nz = rows.nonzeros(id);
    weight[id] = std::exp(-lambda * (nz + (nz > 0 ? 1 : 0)));
  }
  std::vector<double> mass(functions, 0.0), next(functions);
  mass[0] = 1.0;
  for (int r = 0; r < width; ++r) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t g = 0; g < functions; ++g) {
      if (mass[g] == 0.0) continue;
      for (std::size_t id = 0; id < rows.rows(); ++id) {
        next[g | static_cast<std::size_t>(*rows.table(id))] += mass[g] * weight[id];
      }
    }
    mass.swap(next);
  }
  // beta = -1 contributes the same mass to the complement.
  const std::uint64_t mask = low_table_mask(n);
  std::vector<double> total(functions, 0.0);
  for (std::size_t g = 0; g < functions; ++g) {
    total[g] += mass[g];
    total[static_cast<std::size_t>(~static_cast<std::uint64_t>(g) & mask)] += mass[g];
  }
  return total;
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("spearman needs equal-length inputs");
  const std::size_t size = a.size();
  if (size < 2) return std::numeric_limits<double>::quiet_NaN();
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double mean = (static_cast<double>(size) + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return cov / std::sqrt(va * vb);
}

TiltReport posterior_tilt_check(const Dataset& d, int alpha_w, double lambda) {
  const int n = d.target.n();
  if (n < 1 || n > 4) throw BudgetExceeded("posterior tilt enumeration supports n <= 4");
  if (alpha_w < 1) throw InvalidArgument("alpha_w must be at least 1");
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  const int width = default_width(n, alpha_w);
  const std::vector<double> prior = tilted_mass(n, width, 0.0);
  const std::vector<double> tilted = tilted_mass(n, width, lambda);

  std::uint64_t train_mask = 0;
  for (std::size_t i : d.train_idx) train_mask |= 1ull << i;
  const std::uint64_t target = d.target.words()[0];

  TiltReport report;
  double z_prior = 0.0, z_tilted = 0.0;
  for (std::size_t g = 0; g < prior.size(); ++g) {
    if (((g ^ target) & train_mask) != 0 || prior[g] == 0.0) continue;
    const std::uint64_t word = g;
    TiltRow row;
    row.f = BooleanFunction::from_words(n, {&word, 1});
    row.p_prior = prior[g];
    row.p_tilted = tilted[g];
    z_prior += prior[g];
    z_tilted += tilted[g];
    report.rows.push_back(std::move(row));
  }
  std::vector<double> log_ratio, neg_complexity;
  for (TiltRow& row : report.rows) {
    row.p_prior /= z_prior;
    row.p_tilted /= z_tilted;
    row.log_ratio = std::log(row.p_tilted) - std::log(row.p_prior);
    row.k_dnf = k_dnf(row.f);
    log_ratio.push_back(row.log_ratio);
    neg_complexity.push_back(-lambda * row.k_dnf);
  }
  report.spearman = spearman(log_ratio, neg_complexity);
  return report;
}

}  // namespace boolbias
