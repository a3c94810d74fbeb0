// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "plt/cachesim.hpp"
#include "plt/error.hpp"

namespace plt::cache {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw FormatError("campaign: " + key + " expects a number", line);
}

std::uint64_t to_count(const std::string& key, const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      auto x = std::stoull(v, &used);
      if (used == v.size()) return x;
    }
  } catch (const std::exception&) {
  }
  throw FormatError("campaign: " + key + " expects a nonnegative integer", line);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

Campaign parse_campaign(const std::string& text) {
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    auto eq = raw.find('=');
    if (eq == std::string::npos) throw FormatError("campaign: expected key = value", line);
    std::string key = trim(raw.substr(0, eq));
    if (kv.count(key)) throw FormatError("campaign: duplicate key " + key, line);
    kv[key] = {trim(raw.substr(eq + 1)), line};
  }
  auto get = [&](const std::string& key) -> const std::pair<std::string, std::size_t>* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto need = [&](const std::string& key) {
    auto v = get(key);
    if (!v) throw FormatError("campaign: missing key " + key, line);
    return *v;
  };
  static const char* known[] = {"workload", "items", "alpha", "probabilities", "capacity", "compute_cost",
                                "lookup_cost", "storage_cost", "horizon", "replications", "policies", "seed",
                                "delta", "beta", "bayesian_start", "extra_steps", "direct_limit", "threads"};
  for (const auto& [key, v] : kv) {
    bool ok = false;
    for (auto name : known) ok = ok || key == name;
    if (!ok) throw FormatError("campaign: unknown key " + key, v.second);
  }

  Campaign c;
  auto [workload, wl] = need("workload");
  try {
    if (workload == "zipf") {
      auto [items, il] = need("items");
      auto [alpha, al] = need("alpha");
      c.spec.workload = Workload::zipf(to_count("items", items, il), to_double("alpha", alpha, al));
    } else if (workload == "explicit") {
      auto [list, ll] = need("probabilities");
      std::vector<double> p;
      for (const auto& x : split_list(list)) p.push_back(to_double("probabilities", x, ll));
      c.spec.workload = Workload::from_probabilities(std::move(p));
    } else {
      throw FormatError("campaign: workload must be zipf or explicit", wl);
    }
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("campaign: ") + e.what(), wl);
  }
  auto [cap, cl] = need("capacity");
  c.capacity = to_count("capacity", cap, cl);
  auto [horizon, hl] = need("horizon");
  c.spec.horizon = to_count("horizon", horizon, hl);
  if (auto v = get("seed")) c.spec.seed = to_count("seed", v->first, v->second);
  auto [compute, ccl] = need("compute_cost");
  c.cost.compute = to_double("compute_cost", compute, ccl);
  if (auto v = get("lookup_cost")) c.cost.lookup = to_double("lookup_cost", v->first, v->second);
  if (auto v = get("storage_cost")) c.cost.storage = to_double("storage_cost", v->first, v->second);
  if (auto v = get("replications")) c.options.replications = to_count("replications", v->first, v->second);
  if (auto v = get("delta")) c.options.delta = to_double("delta", v->first, v->second);
  if (auto v = get("beta")) c.options.bayes.beta = to_double("beta", v->first, v->second);
  if (auto v = get("direct_limit")) c.options.direct_limit = to_count("direct_limit", v->first, v->second);
  if (auto v = get("threads")) c.options.threads = static_cast<unsigned>(to_count("threads", v->first, v->second));
  if (auto v = get("bayesian_start")) {
    if (v->first != "warm" && v->first != "cold") throw FormatError("campaign: bayesian_start must be warm or cold", v->second);
    c.options.bayes.warm_start = v->first == "warm";
  }
  if (auto v = get("extra_steps")) {
    for (const auto& x : split_list(v->first)) c.options.extra_steps.push_back(to_count("extra_steps", x, v->second));
  }
  if (auto v = get("policies")) {
    c.options.policies.clear();
    for (const auto& x : split_list(v->first)) {
      try {
        c.options.policies.push_back(parse_policy(x));
      } catch (const InvalidArgument& e) {
        throw FormatError(std::string("campaign: ") + e.what(), v->second);
      }
    }
  }
  return c;
}

void write_report(std::ostream& out, const CacheSimReport& report, ReportFormat format) {
  static const char* columns[] = {"policy",  "t",           "cost",       "cost_se",
                                  "realized_cost", "realized_cost_se", "hit_probability", "realized_hit_rate",
                                  "mismatch", "swap_pending", "gap_vs_prior", "gap_se"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : report.policies) {
    for (std::size_t s = 0; s < p.steps.size(); ++s) {
      const auto& st = p.steps[s];
      rows.push_back({to_string(p.kind), std::to_string(st.t), format_double(st.cost_mean), format_double(st.cost_se),
                      format_double(st.realized_cost_mean), format_double(st.realized_cost_se),
                      format_double(st.hit_probability), format_double(st.realized_hit_rate),
                      format_double(st.mismatch), format_double(report.swap_pending[s]),
                      format_double(st.gap_mean), format_double(st.gap_se)});
    }
  }
  if (format == ReportFormat::csv) {
    for (std::size_t i = 0; i < std::size(columns); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return;
  }
  out << "items " << report.items << ", capacity " << report.capacity << ", replications " << report.replications
      << '\n';
  out << "p* " << format_double(report.p_star) << ", boundary gap " << format_double(report.gap) << '\n';
  out << "T_rank " << format_double(report.t_rank) << ", T_0 " << format_double(report.t_zero.value) << " ("
      << (report.t_zero.branch == ZeroTime::Branch::ranking ? "ranking" : "swap") << " branch)\n";
  out << "sum 1/p_j " << format_double(report.swap_time_formula) << ", prior analytic cost "
      << format_double(report.prior_analytic_cost) << "\n\n";
  std::vector<std::size_t> width(std::size(columns));
  for (std::size_t i = 0; i < width.size(); ++i) {
    width[i] = std::string(columns[i]).size();
    for (const auto& row : rows) width[i] = std::max(width[i], row[i].size());
  }
  auto emit = [&](auto get) {
    for (std::size_t i = 0; i < width.size(); ++i) {
      std::string cell = get(i);
      out << (i ? "  " : "") << cell << std::string(width[i] - cell.size(), ' ');
    }
    out << '\n';
  };
  emit([&](std::size_t i) { return std::string(columns[i]); });
  for (const auto& row : rows) emit([&](std::size_t i) { return row[i]; });
}

}  // namespace plt::cache
