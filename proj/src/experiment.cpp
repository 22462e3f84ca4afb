// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairlet/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fairlet/clustering.hpp"

namespace fairlet::experiment {

using Json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        if (any || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
        break;
      default:
        field += c;
        any = true;
    }
  }
  if (quoted) throw Error("unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::size_t thread_count(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("FAIRCLUSTER_THREADS")) {
    std::size_t value = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Objective> objectives_of(ObjectiveSet set) {
  switch (set) {
    case ObjectiveSet::kCenter:
      return {Objective::kCenter};
    case ObjectiveSet::kMedian:
      return {Objective::kMedian};
    case ObjectiveSet::kBoth:
      break;
  }
  return {Objective::kCenter, Objective::kMedian};
}

std::uint64_t run_seed(std::uint64_t seed, Objective objective, std::size_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(objective),
                    static_cast<std::uint32_t>(k)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

void check_record(const SweepRecord& rec, std::int64_t t_prime) {
  if (rec.fair_balance < Rational(1, t_prime)) {
    throw Error("fair clustering balance " + to_string(rec.fair_balance) +
                " below 1/" + std::to_string(t_prime) + " at k = " +
                std::to_string(rec.k));
  }
  if (rec.objective == Objective::kCenter &&
      rec.fair_cost < rec.fairlet_cost - kDistanceTolerance) {
    throw Error("fair k-center cost fell below the fairlet cost at k = " +
                std::to_string(rec.k));
  }
}

Objective parse_objective(const std::string& s) {
  if (s == "center") return Objective::kCenter;
  if (s == "median") return Objective::kMedian;
  throw Error("unknown objective '" + s + "'");
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  std::int64_t num = 0;
  std::int64_t den = 1;
  auto parse = [](const std::string& part, std::int64_t& out) {
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw Error("malformed rational '" + part + "'");
    }
  };
  if (slash == std::string::npos) {
    parse(s, num);
  } else {
    parse(s.substr(0, slash), num);
    parse(s.substr(slash + 1), den);
  }
  if (den <= 0) throw Error("malformed rational '" + s + "'");
  return Rational(num, den);
}

std::string format_cost(double v) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return out.str();
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.k_min < 1 || cfg.k_min > cfg.k_max) throw Error("empty or invalid k range");
  if (cfg.t_prime < 1) throw Error("t' must be at least 1");
  if (cfg.color_column.empty()) throw Error("no color column given");
  if (cfg.feature_columns.empty()) throw Error("no feature columns given");
  if (cfg.subsample && *cfg.subsample == 0) throw Error("subsample must be positive");
}

LoadedDataset load_csv(const ExperimentConfig& cfg) {
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) throw Error("cannot open " + cfg.input_path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto rows = parse_csv(buffer.str());
  if (rows.empty()) throw Error("input has no header row");

  const auto& header = rows.front();
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw Error("missing column '" + name + "'");
  };
  const std::size_t color_col = column(cfg.color_column);
  std::vector<std::size_t> feature_cols;
  for (const auto& name : cfg.feature_columns) feature_cols.push_back(column(name));

  std::vector<Color> colors;
  std::vector<std::vector<double>> coords;
  std::size_t skipped = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::vector<double> point;
    bool ok = row.size() == header.size();
    for (std::size_t c = 0; ok && c < feature_cols.size(); ++c) {
      const auto value = parse_number(row[feature_cols[c]]);
      if (value) {
        point.push_back(*value);
      } else {
        ok = false;
      }
    }
    if (!ok) {
      ++skipped;
      continue;
    }
    colors.push_back(trim(row[color_col]) == cfg.positive_color_value ? Color::kBlue
                                                                      : Color::kRed);
    coords.push_back(std::move(point));
  }
  if (colors.empty()) throw Error("no usable rows in " + cfg.input_path.string());

  if (cfg.subsample && *cfg.subsample < colors.size()) {
    std::vector<std::size_t> all(colors.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> keep;
    std::mt19937_64 rng(cfg.seed);
    std::sample(all.begin(), all.end(), std::back_inserter(keep),
                static_cast<std::ptrdiff_t>(*cfg.subsample), rng);
    std::vector<Color> sub_colors;
    std::vector<std::vector<double>> sub_coords;
    for (std::size_t i : keep) {
      sub_colors.push_back(colors[i]);
      sub_coords.push_back(std::move(coords[i]));
    }
    colors = std::move(sub_colors);
    coords = std::move(sub_coords);
  }

  if (cfg.normalize) {
    for (std::size_t d = 0; d < feature_cols.size(); ++d) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& p : coords) {
        lo = std::min(lo, p[d]);
        hi = std::max(hi, p[d]);
      }
      const double span = hi - lo;
      for (auto& p : coords) p[d] = span > 0.0 ? (p[d] - lo) / span : 0.0;
    }
  }

  const auto blue = static_cast<std::size_t>(
      std::count(colors.begin(), colors.end(), Color::kBlue));
  if (blue == 0 || blue == colors.size()) {
    throw InfeasibleError("all usable rows have the same color");
  }
  return {ColoredDataset::euclidean(std::move(colors), coords), rows.size() - 1,
          skipped};
}

ExperimentReport run_sweep(const ColoredDataset& ds, const ExperimentConfig& cfg) {
  if (cfg.k_min < 1 || cfg.k_min > cfg.k_max) throw Error("empty or invalid k range");
  const auto sweep_start = Clock::now();

  ExperimentReport report;
  auto& meta = report.metadata;
  meta.n = ds.size();
  meta.red = ds.count(Color::kRed);
  meta.blue = ds.count(Color::kBlue);
  meta.dataset_balance = balance_of_dataset(ds);
  meta.t_prime = cfg.t_prime;
  meta.seed = cfg.seed;
  meta.normalize = cfg.normalize;

  struct Task {
    Objective objective;
    std::size_t k;
    const FairletDecomposition* decomposition;
    double fairlet_cost;
  };
  const std::vector<Objective> objectives = objectives_of(cfg.objectives);
  std::vector<FairletDecomposition> decompositions;
  decompositions.reserve(objectives.size());
  std::vector<Task> tasks;
  for (Objective objective : objectives) {
    const auto start = Clock::now();
    decompositions.push_back(decompose(ds, cfg.t_prime, objective));
    meta.wall_times[std::string("decompose_") + to_string(objective)] =
        seconds_since(start);
    const FairletDecomposition& dec = decompositions.back();
    const double fairlet_cost = decomposition_cost(ds, dec, objective);
    for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
      if (k > dec.size()) {
        meta.skipped.push_back({objective, k,
                                "k exceeds the " + std::to_string(dec.size()) +
                                    " fairlets"});
        continue;
      }
      tasks.push_back({objective, k, &dec, fairlet_cost});
    }
  }

  std::vector<SweepRecord> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& task = tasks[i];
        const std::uint64_t seed = run_seed(cfg.seed, task.objective, task.k);
        const std::vector<PointId> all = ds.all_ids();
        const Clustering classical =
            task.objective == Objective::kCenter
                ? gonzalez_kcenter(ds, all, task.k)
                : local_search_kmedian(ds, WeightedPointSet::uniform(ds, all),
                                       task.k, seed);
        const FairClustering fair = cluster_fairlets(
            ds, *task.decomposition, task.k, task.objective, seed);
        SweepRecord rec{task.objective,
                        task.k,
                        clustering_cost(ds, classical, task.objective),
                        balance_of_clustering(ds, classical),
                        clustering_cost(ds, fair.clustering, task.objective),
                        balance_of_clustering(ds, fair.clustering),
                        task.fairlet_cost};
        check_record(rec, cfg.t_prime);
        results[i] = rec;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(thread_count(cfg), std::max<std::size_t>(1, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  report.records = std::move(results);
  meta.wall_times["sweep"] = seconds_since(sweep_start);
  return report;
}

ExperimentReport run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  LoadedDataset loaded = load_csv(cfg);
  const double load_time = seconds_since(start);
  ExperimentReport report = run_sweep(loaded.dataset, cfg);
  report.metadata.rows_skipped = loaded.rows_skipped;
  report.metadata.wall_times["load"] = load_time;
  return report;
}

std::string to_json(const ExperimentReport& report) {
  const auto& meta = report.metadata;
  Json skipped = Json::array();
  for (const auto& s : meta.skipped) {
    skipped.push_back({{"objective", to_string(s.objective)}, {"k", s.k},
                       {"reason", s.reason}});
  }
  Json wall_times = Json::object();
  for (const auto& [name, secs] : meta.wall_times) wall_times[name] = secs;
  Json doc;
  doc["metadata"] = {{"n", meta.n},
                     {"red", meta.red},
                     {"blue", meta.blue},
                     {"dataset_balance", to_string(meta.dataset_balance)},
                     {"t_prime", meta.t_prime},
                     {"seed", meta.seed},
                     {"normalize", meta.normalize},
                     {"rows_skipped", meta.rows_skipped},
                     {"skipped", std::move(skipped)},
                     {"wall_times", std::move(wall_times)}};
  Json records = Json::array();
  for (const auto& r : report.records) {
    records.push_back({{"objective", to_string(r.objective)},
                       {"k", r.k},
                       {"classical_cost", r.classical_cost},
                       {"classical_balance", to_string(r.classical_balance)},
                       {"fair_cost", r.fair_cost},
                       {"fair_balance", to_string(r.fair_balance)},
                       {"fairlet_cost", r.fairlet_cost}});
  }
  doc["records"] = std::move(records);
  return doc.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  ExperimentReport report;
  try {
    const Json doc = Json::parse(text);
    const Json& meta = doc.at("metadata");
    auto& m = report.metadata;
    m.n = meta.at("n").get<std::size_t>();
    m.red = meta.at("red").get<std::size_t>();
    m.blue = meta.at("blue").get<std::size_t>();
    m.dataset_balance = parse_rational(meta.at("dataset_balance").get<std::string>());
    m.t_prime = meta.at("t_prime").get<std::int64_t>();
    m.seed = meta.at("seed").get<std::uint64_t>();
    m.normalize = meta.at("normalize").get<bool>();
    m.rows_skipped = meta.at("rows_skipped").get<std::size_t>();
    for (const Json& s : meta.at("skipped")) {
      m.skipped.push_back({parse_objective(s.at("objective").get<std::string>()),
                           s.at("k").get<std::size_t>(),
                           s.at("reason").get<std::string>()});
    }
    for (const auto& [name, secs] : meta.at("wall_times").items()) {
      m.wall_times[name] = secs.get<double>();
    }
    for (const Json& r : doc.at("records")) {
      report.records.push_back(
          {parse_objective(r.at("objective").get<std::string>()),
           r.at("k").get<std::size_t>(),
           r.at("classical_cost").get<double>(),
           parse_rational(r.at("classical_balance").get<std::string>()),
           r.at("fair_cost").get<double>(),
           parse_rational(r.at("fair_balance").get<std::string>()),
           r.at("fairlet_cost").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "objective,k,classical_cost,classical_balance,fair_cost,fair_balance,"
         "fairlet_cost\n";
  auto balance = [](const Rational& r) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << to_double(r);
    return s.str();
  };
  for (const auto& r : report.records) {
    out << to_string(r.objective) << ',' << r.k << ',' << format_cost(r.classical_cost)
        << ',' << balance(r.classical_balance) << ',' << format_cost(r.fair_cost) << ','
        << balance(r.fair_balance) << ',' << format_cost(r.fairlet_cost) << '\n';
  }
  return out.str();
}

void emit(const ExperimentReport& report, Format format,
          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << (format == Format::kJson ? to_json(report) : to_csv(report));
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

std::string decomposition_to_json(const ColoredDataset& ds,
                                  const FairletDecomposition& dec,
                                  Objective objective) {
  Json fairlets = Json::array();
  for (const Fairlet& f : dec.fairlets()) {
    fairlets.push_back({{"center", f.center}, {"members", f.members}});
  }
  Json doc = {{"objective", to_string(objective)},
              {"n", ds.size()},
              {"b", dec.b()},
              {"r", dec.r()},
              {"cost", decomposition_cost(ds, dec, objective)},
              {"fairlets", std::move(fairlets)}};
  return doc.dump(2) + "\n";
}

std::pair<std::size_t, std::size_t> parse_k_range(const std::string& text) {
  auto parse = [&](const std::string& part) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw Error("malformed k range '" + text + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::size_t k = parse(text);
    if (k < 1) throw Error("k must be at least 1");
    return {k, k};
  }
  const std::size_t lo = parse(text.substr(0, dots));
  const std::size_t hi = parse(text.substr(dots + 2));
  if (lo < 1 || lo > hi) throw Error("empty or invalid k range '" + text + "'");
  return {lo, hi};
}

}  // namespace fairlet::experiment
