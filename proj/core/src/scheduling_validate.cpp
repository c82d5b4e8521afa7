#include <algorithm>
#include <cmath>

#include "bessbid/error.hpp"
#include "bessbid/scheduling_model.hpp"

namespace bessbid::sched {

namespace {

std::string at(const char* family, std::initializer_list<std::pair<const char*, std::size_t>> idx) {
  std::string s(family);
  s += '[';
  bool first = true;
  for (const auto& [k, v] : idx) {
    if (!first) s += ',';
    s += k;
    s += '=';
    s += std::to_string(v);
    first = false;
  }
  s += ']';
  return s;
}

double hourly_energy_value(const Solution& sol, const MilpInstance& in, std::size_t s, std::size_t h) {
  const auto sph = static_cast<std::size_t>(in.params.steps_per_hour());
  const auto& sc = in.scenarios[s];
  double v = 0.0;
  for (std::size_t t = h * sph; t < (h + 1) * sph; ++t) {
    v += sc.c_up[h] * sol.z_dch[in.st(s, t)] + sc.c_down[h] * sol.z_ch[in.st(s, t)];
  }
  return v;
}

bool fcrn_accepted(const Solution& sol, const MilpInstance& in, std::size_t s, std::size_t h) {
  for (std::size_t k = 0; k < in.K; ++k) {
    if (in.structure.pairs[k].market == MarketId::N && sol.x_acc[in.shk(s, h, k)] == 1) return true;
  }
  return false;
}

}  // namespace

double objective_from_payments(const Solution& sol, const MilpInstance& in) {
  double total = 0.0;
  for (std::size_t s = 0; s < in.S; ++s) {
    const double p = in.scenarios[s].probability;
    double v = 0.0;
    for (std::size_t h = 0; h < in.H; ++h) {
      for (std::size_t k = 0; k < in.K; ++k) v += sol.w_avail[in.shk(s, h, k)];
      v += sol.w_spot_dch[in.sh(s, h)] - sol.w_spot_ch[in.sh(s, h)] + sol.w_energy[in.sh(s, h)];
    }
    double slack = 0.0;
    for (std::size_t t = 0; t < in.T; ++t) slack += sol.s_dch[in.st(s, t)] + sol.s_ch[in.st(s, t)];
    total += p * (v - in.params.slack_penalty * slack);
  }
  return total;
}

ValidationReport validate_solution(const Solution& sol, const MilpInstance& in, double tol) {
  if (sol.S != in.S || sol.H != in.H || sol.T != in.T || sol.K != in.K) {
    throw SolverError("solution dimensions do not match the instance");
  }
  ValidationReport rep;
  auto flag = [&](std::string id, double residual) {
    if (residual > tol) rep.violations.push_back({std::move(id), residual});
  };
  const auto& par = in.params;
  const auto& pairs = in.structure.pairs;
  const double bid_min = in.structure.bid_min;
  const double bid_max = *in.structure.bid_max;
  const double eps = in.structure.epsilon;
  const auto sph = static_cast<std::size_t>(par.steps_per_hour());

  auto binary = [&](const char* family, int v, std::initializer_list<std::pair<const char*, std::size_t>> idx) {
    if (v != 0 && v != 1) flag(at(family, idx), 1.0);
  };

  for (std::size_t h = 0; h < in.H; ++h) {
    int bids = 0;
    for (std::size_t k = 0; k < in.K; ++k) {
      binary("domain.x_bid", sol.x_bid[in.hk(h, k)], {{"h", h}, {"k", k}});
      bids += sol.x_bid[in.hk(h, k)];
    }
    flag(at("one_bid", {{"h", h}}), bids - 1.0);
    const double price = sol.x_price[h];
    flag(at("price_bounds", {{"h", h}}), std::max(bid_min - price, price - bid_max));
  }

  for (std::size_t s = 0; s < in.S; ++s) {
    const auto& sc = in.scenarios[s];
    for (std::size_t h = 0; h < in.H; ++h) {
      const double price = sol.x_price[h];
      double spot_dch = 0.0, spot_ch = 0.0;
      for (std::size_t k = 0; k < in.K; ++k) {
        const int acc = sol.x_acc[in.shk(s, h, k)];
        const int bid = sol.x_bid[in.hk(h, k)];
        binary("domain.x_acc", acc, {{"s", s}, {"h", h}, {"k", k}});
        flag(at("accept_requires_bid", {{"s", s}, {"h", h}, {"k", k}}), acc - bid);
        const double P = sc.price(pairs[k].market, h);
        const bool below = market_side(pairs[k].market) == Side::Below;
        if (acc == 1) {
          flag(at("acceptance_rule", {{"s", s}, {"h", h}, {"k", k}}), below ? price - P : P - price);
        } else if (bid == 1) {
          flag(at("rejection_rule", {{"s", s}, {"h", h}, {"k", k}}),
               below ? (P - eps) - price : price - (P + eps));
        }
        const double w = sol.w_avail[in.shk(s, h, k)];
        if (market_class(pairs[k].market) == MarketClass::Freq) {
          const double expected = acc == 1 ? pairs[k].power * price : 0.0;
          flag(at("pay_as_bid", {{"s", s}, {"h", h}, {"k", k}}), std::abs(w - expected));
        } else {
          flag(at("domain.w_avail", {{"s", s}, {"h", h}, {"k", k}}), std::abs(w));
          if (pairs[k].market == MarketId::SDch) spot_dch += acc * pairs[k].power * P;
          if (pairs[k].market == MarketId::SCh) spot_ch += acc * pairs[k].power * P;
        }
      }
      flag(at("spot_discharge_payment", {{"s", s}, {"h", h}}), std::abs(sol.w_spot_dch[in.sh(s, h)] - spot_dch));
      flag(at("spot_charge_payment", {{"s", s}, {"h", h}}), std::abs(sol.w_spot_ch[in.sh(s, h)] - spot_ch));

      const int ok = sol.w_ok[in.sh(s, h)];
      binary("domain.w_ok", ok, {{"s", s}, {"h", h}});
      double slack = 0.0;
      for (std::size_t t = h * sph; t < (h + 1) * sph; ++t) slack += sol.s_dch[in.st(s, t)] + sol.s_ch[in.st(s, t)];
      if (ok == 1) flag(at("slack_gating", {{"s", s}, {"h", h}}), slack);

      const double energy = hourly_energy_value(sol, in, s, h);
      const bool n_acc = fcrn_accepted(sol, in, s, h);
      const double we = sol.w_energy[in.sh(s, h)];
      const double expected = (ok == 1 && n_acc) ? energy : 0.0;
      flag(at("energy_payment", {{"s", s}, {"h", h}}), std::abs(we - expected));
      if (ok == 1 && !n_acc) flag(at("energy_gating", {{"s", s}, {"h", h}}), energy);
    }

    for (std::size_t t = 0; t < in.T; ++t) {
      const auto i = in.st(s, t);
      const std::size_t h = t / sph;
      double e_dch = 0.0, e_ch = 0.0;
      for (std::size_t k = 0; k < in.K; ++k) {
        const int acc = sol.x_acc[in.shk(s, h, k)];
        e_dch += acc * in.meb.dch(s, t, k);
        e_ch += acc * in.meb.ch(s, t, k);
      }
      for (auto [name, v] : {std::pair{"domain.z_dch", sol.z_dch[i]}, std::pair{"domain.z_ch", sol.z_ch[i]},
                             std::pair{"domain.s_dch", sol.s_dch[i]}, std::pair{"domain.s_ch", sol.s_ch[i]}}) {
        flag(at(name, {{"s", s}, {"t", t}}), -v);
      }
      flag(at("discharge_flow", {{"s", s}, {"t", t}}), std::abs(sol.z_dch[i] + sol.s_dch[i] - e_dch));
      flag(at("charge_flow", {{"s", s}, {"t", t}}), std::abs(sol.z_ch[i] + sol.s_ch[i] - e_ch));
      const double net = sol.z_dch[i] / (1.0 - par.ilf) - (1.0 - par.ilf) * sol.z_ch[i];
      flag(at("net_energy", {{"s", s}, {"t", t}}), std::abs(sol.z_net[i] - net));
      const double after = sol.z_soc[i] - sol.z_net[i];
      flag(at("soc_limits", {{"s", s}, {"t", t}}), std::max(par.e_min - after, after - par.e_max));
      if (t == 0) {
        flag(at("soc_start", {{"s", s}}), std::abs(sol.z_soc[i] - par.soc_start));
      } else {
        const auto prev = in.st(s, t - 1);
        flag(at("soc_recursion", {{"s", s}, {"t", t}}),
             std::abs(sol.z_soc[i] - (sol.z_soc[prev] - sol.z_net[prev])));
      }
      if (t + 1 == in.T && par.soc_mode == SocMode::Fixed) {
        flag(at("soc_end", {{"s", s}}), std::abs(after - par.soc_end));
      }
    }
    for (std::size_t t = 0; t < in.T; ++t) {
      rep.total_slack += sol.s_dch[in.st(s, t)] + sol.s_ch[in.st(s, t)];
    }
  }

  rep.recomputed_objective = objective_from_payments(sol, in);
  const double diff = std::abs(rep.recomputed_objective - sol.objective);
  if (diff > 1e-6 * std::max(1.0, std::abs(rep.recomputed_objective))) rep.violations.push_back({"objective", diff});
  return rep;
}

Settlement settle(const Solution& sol, const MilpInstance& in) {
  Settlement out;
  out.scenario_totals.assign(in.S, 0.0);
  for (std::size_t s = 0; s < in.S; ++s) {
    const auto& sc = in.scenarios[s];
    for (std::size_t h = 0; h < in.H; ++h) {
      SettlementRow row;
      row.scenario = s;
      row.hour = h;
      for (std::size_t k = 0; k < in.K; ++k) {
        if (sol.x_acc[in.shk(s, h, k)] != 1) continue;
        row.pair = static_cast<int>(k);
        const auto& mp = in.structure.pairs[k];
        switch (mp.market) {
          case MarketId::N:
          case MarketId::D: row.availability += mp.power * sol.x_price[h]; break;
          case MarketId::SDch: row.spot_revenue += mp.power * sc.price(mp.market, h); break;
          case MarketId::SCh: row.spot_cost += mp.power * sc.price(mp.market, h); break;
        }
      }
      if (sol.w_ok[in.sh(s, h)] == 1 && fcrn_accepted(sol, in, s, h)) row.energy = hourly_energy_value(sol, in, s, h);
      out.scenario_totals[s] += row.total();
      out.rows.push_back(row);
    }
    out.expected_total += sc.probability * out.scenario_totals[s];
  }
  return out;
}

}  // namespace bessbid::sched
