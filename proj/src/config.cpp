#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "generators.hpp"
#include "rng.hpp"

namespace expool {

namespace {

constexpr std::uint64_t kPermModifierTag = 0x7368756666ull;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> parse_kv_pairs(const std::string& body,
                                                  const char* context) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(std::string(context) + ": expected key=value, got '" + item + "'");
    kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return kv;
}

double to_double(const std::string& v, const char* key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("config: malformed number for ") + key + ": '" + v + "'");
  }
}

long long to_int(const std::string& v, const char* key) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("config: malformed integer for ") + key + ": '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& v, const char* key) {
  try {
    std::size_t used = 0;
    const std::uint64_t x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("config: malformed seed for ") + key + ": '" + v + "'");
  }
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::mw: return "mw";
    case Algorithm::fpl: return "fpl";
    case Algorithm::alg3: return "alg3";
    case Algorithm::alg4: return "alg4";
    case Algorithm::alg5: return "alg5";
    case Algorithm::alg5_estimated: return "alg5-estimated";
    case Algorithm::naive_quarter: return "naive-quarter";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "mw") return Algorithm::mw;
  if (name == "fpl") return Algorithm::fpl;
  if (name == "alg3") return Algorithm::alg3;
  if (name == "alg4") return Algorithm::alg4;
  if (name == "alg5") return Algorithm::alg5;
  if (name == "alg5-estimated") return Algorithm::alg5_estimated;
  if (name == "naive-quarter") return Algorithm::naive_quarter;
  throw std::invalid_argument("config: unknown algorithm '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "algorithm") {
      cfg.algorithm = algorithm_from_name(value);
    } else if (key == "stream") {
      cfg.stream = value;
    } else if (key == "delta") {
      cfg.delta = to_double(value, "delta");
    } else if (key == "epsilon") {
      cfg.epsilon = to_double(value, "epsilon");
    } else if (key == "M") {
      cfg.m_estimate = to_double(value, "M");
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(to_int(value, "trials"));
    } else if (key == "seed") {
      cfg.seed = to_u64(value, "seed");
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(to_int(value, "threads"));
    } else if (key == "inner") {
      if (value == "mw-exact") cfg.inner = InnerKind::mw_exact;
      else if (value == "mw-sampled") cfg.inner = InnerKind::mw_sampled;
      else if (value == "fpl") cfg.inner = InnerKind::fpl;
      else throw std::invalid_argument("config: unknown inner predictor '" + value + "'");
    } else if (key == "mw_mode") {
      if (value == "exact") cfg.mw_mode = MwMode::exact;
      else if (value == "sampled") cfg.mw_mode = MwMode::sampled;
      else throw std::invalid_argument("config: unknown mw_mode '" + value + "'");
    } else if (key == "resample_threshold") {
      cfg.resample_threshold = to_double(value, "resample_threshold");
    } else if (key == "k") {
      cfg.k_override = static_cast<int>(to_int(value, "k"));
    } else if (key == "alg5_k_const") {
      cfg.alg5_k_const = to_double(value, "alg5_k_const");
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (cfg.stream.empty()) throw std::invalid_argument("config: stream is required");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open: " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return from_text(buf.str());
}

Instance materialize_stream(const std::string& spec, std::uint64_t gen_seed) {
  const auto colon = spec.find(':');
  const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (kind == "file") {
    if (body.empty()) throw std::invalid_argument("stream: file spec needs a path");
    return Instance::read_file(body);
  }

  auto kv = parse_kv_pairs(body, "stream");
  auto take = [&kv](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto need = [&take, &kind](const char* key) {
    auto v = take(key);
    if (!v) throw std::invalid_argument("stream: " + kind + " spec needs " + key);
    return *v;
  };

  const bool permute = [&take] {
    auto v = take("perm");
    return v && *v != "0";
  }();

  Instance inst = [&]() -> Instance {
    if (kind == "iid") {
      IidSpec s;
      s.experts = static_cast<int>(to_int(need("n"), "n"));
      s.days = static_cast<int>(to_int(need("T"), "T"));
      if (auto accs = take("accs")) {
        std::stringstream as(*accs);
        std::string tok;
        while (std::getline(as, tok, ';'))
          s.accuracies.push_back(to_double(trim(tok), "accs"));
      } else {
        const double best = to_double(need("best"), "best");
        const double rest = to_double(need("rest"), "rest");
        s.accuracies.assign(static_cast<std::size_t>(std::max(0, s.experts)), rest);
        if (!s.accuracies.empty()) s.accuracies[0] = best;
      }
      return gen_iid(s, gen_seed);
    }
    if (kind == "planted") {
      const int n = static_cast<int>(to_int(need("n"), "n"));
      const int days = static_cast<int>(to_int(need("T"), "T"));
      const int mistakes = static_cast<int>(to_int(need("M"), "M"));
      const int burst = static_cast<int>(to_int(need("burst"), "burst"));
      return gen_planted_bursts(n, days, mistakes, burst, gen_seed);
    }
    if (kind == "buildup") {
      const int k0 = static_cast<int>(to_int(need("k0"), "k0"));
      const int days = static_cast<int>(to_int(need("T"), "T"));
      return gen_buildup(k0, days);
    }
    if (kind == "diffdist") {
      DiffDistSpec s;
      s.experts = static_cast<int>(to_int(need("n"), "n"));
      s.days = static_cast<int>(to_int(need("T"), "T"));
      s.epsilon = to_double(need("eps"), "eps");
      const std::string c = need("case");
      if (c == "yes") s.yes_case = true;
      else if (c == "no") s.yes_case = false;
      else throw std::invalid_argument("stream: diffdist case must be yes or no");
      if (s.yes_case) s.planted_index = static_cast<int>(to_int(need("L"), "L"));
      const BitMatrix m = gen_diffdist(s, gen_seed);
      // Instance form of the detection input: outcome 1 every day, so an
      // expert is correct exactly when its bit is 1.
      std::vector<std::uint8_t> outcomes(static_cast<std::size_t>(s.days), 1);
      return Instance::discrete(s.experts, m.bits, std::move(outcomes));
    }
    throw std::invalid_argument("stream: unknown generator kind '" + kind + "'");
  }();

  if (!kv.empty())
    throw std::invalid_argument("stream: unknown key '" + kv.begin()->first + "' for " + kind);
  if (permute) inst = permute_days(inst, derive_seed(gen_seed, kPermModifierTag));
  return inst;
}

}  // namespace expool
