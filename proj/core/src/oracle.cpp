#include "bessbid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bessbid/error.hpp"
#include "bessbid/milp/linear_program.hpp"

namespace bessbid::sched {

namespace {

struct HourOption {
  int pair = -1;
  double price = 0.0;
  std::vector<int> accepted;  // per scenario
  double revenue = 0.0;       // expected availability + spot, price dependent part included
};

struct FlowResult {
  double value = 0.0;
  std::vector<int> w_ok;  // per hour
  std::vector<double> z_dch, z_ch;
};

class Oracle {
 public:
  Oracle(const MilpInstance& in, const OracleLimits& limits) : in_(in), limits_(limits) {
    sph_ = static_cast<std::size_t>(in.params.steps_per_hour());
    bid_min_ = in.structure.bid_min;
    bid_max_ = *in.structure.bid_max;
    eps_ = in.structure.epsilon;
  }

  OracleResult run() {
    options_.resize(in_.H);
    std::size_t total = 1;
    for (std::size_t h = 0; h < in_.H; ++h) {
      options_[h] = hour_options(h);
      total *= options_[h].size();
      if (total > limits_.max_assignments) {
        throw SolverError("oracle enumeration exceeds the cap of " + std::to_string(limits_.max_assignments));
      }
    }
    choice_.assign(in_.H, 0);
    best_choice_.assign(in_.H, 0);
    recurse(0, 0.0);
    OracleResult r;
    r.objective = best_;
    r.assignments = assignments_;
    r.flow_solves = flow_solves_;
    r.solution = build_solution();
    return r;
  }

 private:
  std::vector<HourOption> hour_options(std::size_t h) {
    std::vector<HourOption> out;
    HourOption none;
    none.price = bid_min_;
    none.accepted.assign(in_.S, 0);
    out.push_back(none);
    const auto& pairs = in_.structure.pairs;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& mp = pairs[k];
      const bool below = market_side(mp.market) == Side::Below;
      std::vector<double> candidates{bid_min_, bid_max_};
      for (const auto& sc : in_.scenarios) {
        const double P = sc.price(mp.market, h);
        for (double c : {P - eps_, P, P + eps_}) candidates.push_back(std::clamp(c, bid_min_, bid_max_));
      }
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      // Best (highest) price for every reachable acceptance pattern.
      std::map<std::vector<int>, double> patterns;
      for (double c : candidates) {
        std::vector<std::vector<int>> allowed(in_.S);
        for (std::size_t s = 0; s < in_.S; ++s) {
          const double P = in_.scenarios[s].price(mp.market, h);
          const bool can_accept = below ? c <= P : c >= P;
          const bool can_reject = below ? c >= P - eps_ : c <= P + eps_;
          if (can_reject) allowed[s].push_back(0);
          if (can_accept) allowed[s].push_back(1);
        }
        std::vector<int> pattern(in_.S, 0);
        enumerate_patterns(allowed, 0, pattern, [&](const std::vector<int>& p) {
          auto [it, inserted] = patterns.emplace(p, c);
          if (!inserted) it->second = std::max(it->second, c);
        });
      }
      for (const auto& [pattern, price] : patterns) {
        HourOption o;
        o.pair = static_cast<int>(k);
        o.price = price;
        o.accepted = pattern;
        for (std::size_t s = 0; s < in_.S; ++s) {
          if (!pattern[s]) continue;
          const double ps = in_.scenarios[s].probability;
          const double P = in_.scenarios[s].price(mp.market, h);
          switch (mp.market) {
            case MarketId::N:
            case MarketId::D: o.revenue += ps * mp.power * price; break;
            case MarketId::SDch: o.revenue += ps * mp.power * P; break;
            case MarketId::SCh: o.revenue -= ps * mp.power * P; break;
          }
        }
        out.push_back(std::move(o));
      }
    }
    return out;
  }

  template <class F>
  void enumerate_patterns(const std::vector<std::vector<int>>& allowed, std::size_t s, std::vector<int>& pattern,
                          F&& f) {
    if (s == allowed.size()) {
      f(pattern);
      return;
    }
    for (int v : allowed[s]) {
      pattern[s] = v;
      enumerate_patterns(allowed, s + 1, pattern, f);
    }
  }

  void recurse(std::size_t h, double revenue) {
    if (h == in_.H) {
      ++assignments_;
      double total = revenue;
      for (std::size_t s = 0; s < in_.S; ++s) total += in_.scenarios[s].probability * flow(s, accepted_pairs(s)).value;
      if (!have_best_ || total > best_) {
        best_ = total;
        have_best_ = true;
        best_choice_ = choice_;
      }
      return;
    }
    for (std::size_t i = 0; i < options_[h].size(); ++i) {
      choice_[h] = i;
      recurse(h + 1, revenue + options_[h][i].revenue);
    }
  }

  std::vector<int> accepted_pairs(std::size_t s, const std::vector<std::size_t>* choice = nullptr) const {
    const auto& ch = choice ? *choice : choice_;
    std::vector<int> a(in_.H, -1);
    for (std::size_t h = 0; h < in_.H; ++h) {
      const auto& o = options_[h][ch[h]];
      if (o.pair >= 0 && o.accepted[s]) a[h] = o.pair;
    }
    return a;
  }

  const FlowResult& flow(std::size_t s, const std::vector<int>& acc) {
    auto key = std::make_pair(s, acc);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(std::move(key), solve_flows(s, acc)).first->second;
  }

  double e_dch(std::size_t s, std::size_t t, int k) const { return k < 0 ? 0.0 : in_.meb.dch(s, t, static_cast<std::size_t>(k)); }
  double e_ch(std::size_t s, std::size_t t, int k) const { return k < 0 ? 0.0 : in_.meb.ch(s, t, static_cast<std::size_t>(k)); }

  FlowResult solve_flows(std::size_t s, const std::vector<int>& acc) {
    const auto& sc = in_.scenarios[s];
    const auto& par = in_.params;
    std::vector<std::size_t> gated;
    std::vector<double> hour_energy(in_.H, 0.0);
    double total_e = 0.0;
    for (std::size_t h = 0; h < in_.H; ++h) {
      for (std::size_t t = h * sph_; t < (h + 1) * sph_; ++t) {
        total_e += e_dch(s, t, acc[h]) + e_ch(s, t, acc[h]);
        hour_energy[h] += sc.c_up[h] * e_dch(s, t, acc[h]) + sc.c_down[h] * e_ch(s, t, acc[h]);
      }
      if (acc[h] >= 0 && in_.structure.pairs[static_cast<std::size_t>(acc[h])].market == MarketId::N &&
          hour_energy[h] > 0.0) {
        gated.push_back(h);
      }
    }
    FlowResult best;
    bool found = false;
    for (std::size_t mask = 0; mask < (std::size_t{1} << gated.size()); ++mask) {
      std::vector<int> w_ok(in_.H, 0);
      for (std::size_t g = 0; g < gated.size(); ++g) {
        if (mask & (std::size_t{1} << g)) w_ok[gated[g]] = 1;
      }
      milp::LinearProgram lp;
      lp.sense = milp::ObjectiveSense::Maximize;
      const std::size_t T = in_.T;
      std::vector<int> zd(T), zc(T);
      for (std::size_t t = 0; t < T; ++t) {
        const std::size_t h = t / sph_;
        const double ed = e_dch(s, t, acc[h]), ec = e_ch(s, t, acc[h]);
        const bool fix = w_ok[h] == 1;
        zd[t] = lp.add_column("zd" + std::to_string(t), fix ? ed : 0.0, ed, par.slack_penalty);
        zc[t] = lp.add_column("zc" + std::to_string(t), fix ? ec : 0.0, ec, par.slack_penalty);
      }
      // Level after step t: soc_start minus the cumulative net energy.
      std::vector<milp::Term> cum;
      const double out_factor = 1.0 / (1.0 - par.ilf), in_factor = 1.0 - par.ilf;
      for (std::size_t t = 0; t < T; ++t) {
        cum.push_back({zd[t], out_factor});
        cum.push_back({zc[t], -in_factor});
        const bool last = t + 1 == T;
        if (last && par.soc_mode == SocMode::Fixed) {
          lp.add_row("end", cum, milp::RowSense::Equal, par.soc_start - par.soc_end);
        } else {
          lp.add_row("lo" + std::to_string(t), cum, milp::RowSense::LessEqual, par.soc_start - par.e_min);
          lp.add_row("hi" + std::to_string(t), cum, milp::RowSense::GreaterEqual, par.soc_start - par.e_max);
        }
      }
      ++flow_solves_;
      const auto res = milp::solve_lp(lp, limits_.lp);
      if (res.status == milp::LpStatus::Infeasible) continue;
      if (res.status != milp::LpStatus::Optimal) {
        throw SolverError(std::string("oracle flow LP failed: ") + milp::to_string(res.status));
      }
      double value = res.objective - par.slack_penalty * total_e;
      for (std::size_t h = 0; h < in_.H; ++h) {
        if (w_ok[h]) value += hour_energy[h];
      }
      if (!found || value > best.value) {
        found = true;
        best.value = value;
        best.w_ok = w_ok;
        best.z_dch.assign(T, 0.0);
        best.z_ch.assign(T, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
          best.z_dch[t] = res.x[static_cast<std::size_t>(zd[t])];
          best.z_ch[t] = res.x[static_cast<std::size_t>(zc[t])];
        }
      }
    }
    if (!found) throw SolverError("oracle found no feasible flow for scenario " + std::to_string(s));
    return best;
  }

  Solution build_solution() {
    const auto& par = in_.params;
    Solution sol;
    sol.S = in_.S;
    sol.H = in_.H;
    sol.T = in_.T;
    sol.K = in_.K;
    sol.x_bid.assign(in_.H * in_.K, 0);
    sol.x_price.assign(in_.H, bid_min_);
    sol.x_acc.assign(in_.S * in_.H * in_.K, 0);
    sol.w_avail.assign(in_.S * in_.H * in_.K, 0.0);
    sol.w_ok.assign(in_.S * in_.H, 0);
    sol.w_spot_dch.assign(in_.S * in_.H, 0.0);
    sol.w_spot_ch.assign(in_.S * in_.H, 0.0);
    sol.w_energy.assign(in_.S * in_.H, 0.0);
    const std::size_t ST = in_.S * in_.T;
    for (auto* v : {&sol.z_dch, &sol.z_ch, &sol.z_net, &sol.z_soc, &sol.s_dch, &sol.s_ch}) v->assign(ST, 0.0);
    const auto& pairs = in_.structure.pairs;
    for (std::size_t h = 0; h < in_.H; ++h) {
      const auto& o = options_[h][best_choice_[h]];
      sol.x_price[h] = o.price;
      if (o.pair < 0) continue;
      const auto k = static_cast<std::size_t>(o.pair);
      sol.x_bid[in_.hk(h, k)] = 1;
      for (std::size_t s = 0; s < in_.S; ++s) {
        if (!o.accepted[s]) continue;
        sol.x_acc[in_.shk(s, h, k)] = 1;
        const double P = in_.scenarios[s].price(pairs[k].market, h);
        switch (pairs[k].market) {
          case MarketId::N:
          case MarketId::D: sol.w_avail[in_.shk(s, h, k)] = pairs[k].power * o.price; break;
          case MarketId::SDch: sol.w_spot_dch[in_.sh(s, h)] = pairs[k].power * P; break;
          case MarketId::SCh: sol.w_spot_ch[in_.sh(s, h)] = pairs[k].power * P; break;
        }
      }
    }
    double objective = 0.0;
    for (std::size_t h = 0; h < in_.H; ++h) objective += options_[h][best_choice_[h]].revenue;
    for (std::size_t s = 0; s < in_.S; ++s) {
      const auto acc = accepted_pairs(s, &best_choice_);
      const FlowResult& f = flow(s, acc);
      objective += in_.scenarios[s].probability * f.value;
      double soc = par.soc_start;
      for (std::size_t t = 0; t < in_.T; ++t) {
        const std::size_t h = t / sph_;
        const auto i = in_.st(s, t);
        sol.z_dch[i] = f.z_dch[t];
        sol.z_ch[i] = f.z_ch[t];
        sol.s_dch[i] = e_dch(s, t, acc[h]) - f.z_dch[t];
        sol.s_ch[i] = e_ch(s, t, acc[h]) - f.z_ch[t];
        sol.z_net[i] = f.z_dch[t] / (1.0 - par.ilf) - (1.0 - par.ilf) * f.z_ch[t];
        sol.z_soc[i] = soc;
        soc -= sol.z_net[i];
      }
      for (std::size_t h = 0; h < in_.H; ++h) {
        sol.w_ok[in_.sh(s, h)] = f.w_ok[h];
        if (f.w_ok[h]) {
          double e = 0.0;
          for (std::size_t t = h * sph_; t < (h + 1) * sph_; ++t) {
            e += in_.scenarios[s].c_up[h] * f.z_dch[t] + in_.scenarios[s].c_down[h] * f.z_ch[t];
          }
          sol.w_energy[in_.sh(s, h)] = e;
        }
      }
    }
    sol.objective = objective;
    return sol;
  }

  const MilpInstance& in_;
  OracleLimits limits_;
  std::size_t sph_ = 1;
  double bid_min_ = 0.0, bid_max_ = 0.0, eps_ = 0.0;
  std::vector<std::vector<HourOption>> options_;
  std::vector<std::size_t> choice_, best_choice_;
  std::map<std::pair<std::size_t, std::vector<int>>, FlowResult> memo_;
  double best_ = 0.0;
  bool have_best_ = false;
  std::size_t assignments_ = 0;
  std::size_t flow_solves_ = 0;
};

}  // namespace

OracleResult brute_force_oracle(const MilpInstance& instance, const OracleLimits& limits) {
  return Oracle(instance, limits).run();
}

}  // namespace bessbid::sched
