#include "types.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace expool {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

Instance Instance::discrete(int experts, std::vector<std::uint8_t> predictions,
                            std::vector<std::uint8_t> outcomes) {
  require(experts >= 1, "instance: expert count must be positive");
  require(!outcomes.empty(), "instance: day count must be positive");
  const std::size_t days = outcomes.size();
  require(predictions.size() == days * static_cast<std::size_t>(experts),
          "instance: predictions length must be days*experts");
  for (std::uint8_t y : outcomes) require(y <= 1, "instance: outcome must be 0 or 1");
  for (std::uint8_t x : predictions) require(x <= 1, "instance: prediction must be 0 or 1");

  Instance inst;
  inst.model_ = {CostKind::discrete, 1.0};
  inst.n_ = experts;
  inst.days_ = static_cast<int>(days);
  inst.predictions_ = std::move(predictions);
  inst.outcomes_ = std::move(outcomes);
  return inst;
}

Instance Instance::continuous(int experts, double width, std::vector<double> raw_costs) {
  require(experts >= 1, "instance: expert count must be positive");
  require(width > 0.0, "instance: width must be positive");
  require(!raw_costs.empty() && raw_costs.size() % static_cast<std::size_t>(experts) == 0,
          "instance: cost length must be a positive multiple of the expert count");
  for (double& c : raw_costs) {
    require(c >= 0.0 && c <= width, "instance: cost outside [0, width]");
    c /= width;
  }

  Instance inst;
  inst.model_ = {CostKind::continuous, width};
  inst.n_ = experts;
  inst.days_ = static_cast<int>(raw_costs.size() / static_cast<std::size_t>(experts));
  inst.costs_ = std::move(raw_costs);
  return inst;
}

void Instance::fill_costs(int day, std::span<double> out) const {
  check_day(day);
  if (out.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("Instance::fill_costs: span length must be n");
  const std::size_t base = static_cast<std::size_t>(day) * n_;
  if (model_.kind == CostKind::discrete) {
    const std::uint8_t y = outcomes_[static_cast<std::size_t>(day)];
    for (int i = 0; i < n_; ++i)
      out[static_cast<std::size_t>(i)] = predictions_[base + static_cast<std::size_t>(i)] == y ? 0.0 : 1.0;
  } else {
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = costs_[base + static_cast<std::size_t>(i)];
  }
}

void Instance::write(std::ostream& os) const {
  os << n_ << ' ' << days_ << ' ';
  if (model_.kind == CostKind::discrete) {
    os << "discrete\n";
    for (int t = 0; t < days_; ++t) {
      os << static_cast<int>(outcomes_[static_cast<std::size_t>(t)]);
      const std::size_t base = static_cast<std::size_t>(t) * n_;
      for (int i = 0; i < n_; ++i)
        os << ' ' << static_cast<int>(predictions_[base + static_cast<std::size_t>(i)]);
      os << '\n';
    }
  } else {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", model_.width);
    os << "continuous:" << buf << '\n';
    for (int t = 0; t < days_; ++t) {
      const std::size_t base = static_cast<std::size_t>(t) * n_;
      for (int i = 0; i < n_; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", costs_[base + static_cast<std::size_t>(i)] * model_.width);
        os << (i ? " " : "") << buf;
      }
      os << '\n';
    }
  }
}

Instance Instance::read(std::istream& is) {
  int n = 0;
  int days = 0;
  std::string mode;
  if (!(is >> n >> days >> mode)) throw std::invalid_argument("instance: malformed header");
  require(n >= 1 && days >= 1, "instance: header must have positive n and T");

  if (mode == "discrete") {
    std::vector<std::uint8_t> outcomes(static_cast<std::size_t>(days));
    std::vector<std::uint8_t> preds(static_cast<std::size_t>(days) * static_cast<std::size_t>(n));
    for (int t = 0; t < days; ++t) {
      int y = 0;
      if (!(is >> y)) throw std::invalid_argument("instance: truncated day line");
      require(y == 0 || y == 1, "instance: outcome must be 0 or 1");
      outcomes[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(y);
      for (int i = 0; i < n; ++i) {
        int x = 0;
        if (!(is >> x)) throw std::invalid_argument("instance: truncated day line");
        require(x == 0 || x == 1, "instance: prediction must be 0 or 1");
        preds[static_cast<std::size_t>(t) * n + static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(x);
      }
    }
    return discrete(n, std::move(preds), std::move(outcomes));
  }

  const std::string prefix = "continuous:";
  require(mode.rfind(prefix, 0) == 0, "instance: mode must be discrete or continuous:RHO");
  double width = 0.0;
  try {
    width = std::stod(mode.substr(prefix.size()));
  } catch (const std::exception&) {
    throw std::invalid_argument("instance: malformed width in mode token");
  }
  std::vector<double> costs(static_cast<std::size_t>(days) * static_cast<std::size_t>(n));
  for (double& c : costs)
    if (!(is >> c)) throw std::invalid_argument("instance: truncated cost line");
  return continuous(n, width, std::move(costs));
}

void Instance::write_file(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("instance: cannot open for writing: " + path);
  write(os);
  if (!os) throw std::runtime_error("instance: write failed: " + path);
}

Instance Instance::read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("instance: cannot open: " + path);
  return read(is);
}

BestExpert best_expert_cost(const Instance& instance) {
  const int n = instance.experts();
  std::vector<double> totals(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < instance.days(); ++t)
    for (int i = 0; i < n; ++i) totals[static_cast<std::size_t>(i)] += instance.cost(t, i);
  BestExpert best{0, totals[0]};
  for (int i = 1; i < n; ++i) {
    if (totals[static_cast<std::size_t>(i)] < best.total_cost) {
      best.index = i;
      best.total_cost = totals[static_cast<std::size_t>(i)];
    }
  }
  return best;
}

double regret_of(double alg_cost, double best_cost, int days) {
  if (days < 1) throw std::invalid_argument("regret_of: day count must be positive");
  return (alg_cost - best_cost) / static_cast<double>(days);
}

}  // namespace expool
