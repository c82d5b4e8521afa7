#include "bessbid/scheduling_model.hpp"

#include <algorithm>
#include <cmath>

#include "bessbid/error.hpp"
#include "text_util.hpp"

namespace bessbid::sched {

using milp::kInf;
using milp::RowSense;
using milp::Term;

const char* to_string(SocMode m) { return m == SocMode::Fixed ? "fixed" : "flexible"; }

SocMode soc_mode_from_string(const std::string& s) {
  if (s == "fixed") return SocMode::Fixed;
  if (s == "flexible") return SocMode::Flexible;
  throw ConfigError("unknown SOC mode '" + s + "' (expected fixed or flexible)");
}

void BessParams::validate() const {
  if (!(e_min >= 0.0 && e_min < e_max)) throw ConfigError("need 0 <= e_min < e_max");
  if (!(soc_start > e_min && soc_start < e_max)) throw ConfigError("soc_start must lie strictly inside (e_min, e_max)");
  if (!(soc_end >= e_min && soc_end <= e_max)) throw ConfigError("soc_end must lie inside [e_min, e_max]");
  if (!(ilf >= 0.0 && ilf < 1.0)) throw ConfigError("ilf must lie in [0, 1)");
  if (step_minutes <= 0 || 60 % step_minutes != 0) {
    throw ConfigError("step_minutes must divide 60, got " + std::to_string(step_minutes));
  }
  if (hours == 0) throw ConfigError("horizon must be at least one hour");
  if (!(slack_penalty >= 0.0) || !std::isfinite(slack_penalty)) throw ConfigError("slack_penalty must be finite and >= 0");
}

void validate_scenarios(const std::vector<Scenario>& scenarios, std::size_t hours) {
  if (scenarios.empty()) throw DataError("no scenarios");
  double total = 0.0;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto& sc = scenarios[s];
    const std::string where = "scenario " + std::to_string(s);
    if (!(sc.probability >= 0.0) || !std::isfinite(sc.probability)) throw DataError(where + ": invalid probability");
    total += sc.probability;
    auto check = [&](const std::vector<double>& v, const std::string& what) {
      if (v.size() < hours) {
        throw DataError(where + ": " + what + " has " + std::to_string(v.size()) + " hours, need " +
                        std::to_string(hours));
      }
      for (std::size_t h = 0; h < hours; ++h) {
        if (!std::isfinite(v[h]) || v[h] < 0.0) {
          throw DataError(where + ": " + what + "[" + std::to_string(h) + "] must be finite and >= 0");
        }
      }
    };
    for (MarketId m : kAllMarkets) check(sc.prices(m), std::string("clearing ") + to_string(m));
    check(sc.c_up, "c_up");
    check(sc.c_down, "c_down");
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DataError("scenario probabilities sum to " + detail::format_double(total) + ", not 1");
  }
}

BidStructure BidStructure::from_levels(const std::vector<double>& freq, const std::vector<double>& spot) {
  BidStructure b;
  b.pairs = market_power_pairs(freq, spot);
  return b;
}

BidStructure BidStructure::single() { return from_levels(kSingleFreqLevels, kSingleSpotLevels); }
BidStructure BidStructure::multi() { return from_levels(kMultiFreqLevels, kMultiSpotLevels); }

double BidStructure::resolved_bid_max(const std::vector<Scenario>& scenarios) const {
  if (bid_max) return *bid_max;
  double mx = 0.0;
  for (const auto& sc : scenarios) {
    for (MarketId m : kAllMarkets) {
      for (double p : sc.prices(m)) mx = std::max(mx, p);
    }
  }
  const double v = 1.5 * mx;
  // All-zero prices would collapse the price range; keep it non-empty.
  return v > bid_min ? v : bid_min + 1.0;
}

void BidStructure::validate() const {
  if (pairs.empty()) throw ConfigError("market-power pair set is empty");
  for (const auto& p : pairs) {
    if (!(p.power > 0.0) || !std::isfinite(p.power)) throw ConfigError("pair " + label(p) + " needs positive power");
  }
  if (!std::isfinite(bid_min) || bid_min < 0.0) throw ConfigError("bid_min must be finite and >= 0");
  if (bid_max && !(*bid_max > bid_min && std::isfinite(*bid_max))) throw ConfigError("need bid_min < bid_max");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
}

namespace {

void check_meb(const droop::MebTable& meb, const BidStructure& structure, const BessParams& params,
               std::size_t scenarios) {
  if (meb.pairs() != structure.pairs) throw ConfigError("MEB table pairs differ from the bid structure");
  if (meb.scenarios() != scenarios) {
    throw DataError("MEB table has " + std::to_string(meb.scenarios()) + " scenarios, expected " +
                    std::to_string(scenarios));
  }
  if (meb.step_minutes() != params.step_minutes) throw ConfigError("MEB step length differs from the model step");
  if (meb.steps() < params.steps()) {
    throw DataError("MEB table covers " + std::to_string(meb.steps()) + " steps, need " +
                    std::to_string(params.steps()));
  }
}

double max_clearing(const std::vector<Scenario>& scenarios, std::size_t hours) {
  double mx = 0.0;
  for (const auto& sc : scenarios) {
    for (MarketId m : kAllMarkets) {
      for (std::size_t h = 0; h < hours; ++h) mx = std::max(mx, sc.price(m, h));
    }
  }
  return mx;
}

std::string tag(const char* prefix, std::initializer_list<std::pair<char, std::size_t>> idx) {
  std::string s(prefix);
  for (const auto& [c, v] : idx) {
    s += '_';
    s += c;
    s += std::to_string(v);
  }
  return s;
}

}  // namespace

BigM compute_big_m(const BidStructure& structure, const std::vector<Scenario>& scenarios,
                   const BessParams& params, const droop::MebTable& meb) {
  const std::size_t H = params.hours;
  const double bid_max = structure.resolved_bid_max(scenarios);
  if (!std::isfinite(bid_max) || !std::isfinite(structure.bid_min)) throw ConfigError("unbounded bid price range");
  BigM m;
  m.acceptance = max_clearing(scenarios, H) + bid_max + structure.epsilon;
  // An accepted frequency bid is priced at or below its clearing price, so the
  // payment never exceeds p * min(bid_max, clearing).
  for (const auto& p : structure.pairs) {
    if (market_class(p.market) != MarketClass::Freq) continue;
    double clearing = 0.0;
    for (const auto& sc : scenarios) {
      for (std::size_t h = 0; h < H; ++h) clearing = std::max(clearing, sc.price(p.market, h));
    }
    m.availability = std::max(m.availability, p.power * std::min(bid_max, clearing));
  }
  const auto sph = static_cast<std::size_t>(params.steps_per_hour());
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    for (std::size_t h = 0; h < H; ++h) {
      double hourly = 0.0;
      for (std::size_t t = h * sph; t < (h + 1) * sph; ++t) {
        double best = 0.0;
        for (std::size_t k = 0; k < meb.pair_count(); ++k) best = std::max(best, meb.dch(s, t, k) + meb.ch(s, t, k));
        if (!std::isfinite(best)) throw DataError("non-finite MEB value");
        hourly += best;
      }
      m.slack = std::max(m.slack, hourly);
      const double c = std::max(scenarios[s].c_up[h], scenarios[s].c_down[h]);
      m.energy = std::max(m.energy, c * hourly);
    }
  }
  return m;
}

MilpInstance build_instance(const BessParams& params, const BidStructure& structure,
                            const std::vector<Scenario>& scenarios, const droop::MebTable& meb,
                            const ModelOptions& options) {
  params.validate();
  structure.validate();
  validate_scenarios(scenarios, params.hours);
  check_meb(meb, structure, params, scenarios.size());

  MilpInstance in;
  in.params = params;
  in.structure = structure;
  in.structure.bid_max = structure.resolved_bid_max(scenarios);
  in.scenarios = scenarios;
  in.meb = meb;
  in.big_m = compute_big_m(in.structure, scenarios, params, meb);
  in.S = scenarios.size();
  in.H = params.hours;
  in.T = params.steps();
  in.K = structure.pairs.size();
  const std::size_t S = in.S, H = in.H, T = in.T, K = in.K;
  const auto sph = static_cast<std::size_t>(params.steps_per_hour());
  const double bid_min = in.structure.bid_min;
  const double bid_max = *in.structure.bid_max;
  const double eps = in.structure.epsilon;
  const auto& pairs = in.structure.pairs;
  auto& lp = in.lp;
  lp.sense = milp::ObjectiveSense::Maximize;

  auto is_freq = [&](std::size_t k) { return market_class(pairs[k].market) == MarketClass::Freq; };
  auto side = [&](std::size_t k) { return market_side(pairs[k].market); };

  in.x_bid.resize(H * K);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t k = 0; k < K; ++k) in.x_bid[in.hk(h, k)] = lp.add_column(tag("xbid", {{'h', h}, {'k', k}}), 0, 1, 0, true);
  }
  in.x_price.resize(H);
  for (std::size_t h = 0; h < H; ++h) in.x_price[h] = lp.add_column(tag("xprice", {{'h', h}}), bid_min, bid_max, 0);

  // Acceptance feasibility under the price bounds.
  enum class Fix { None, Zero, EqualsBid };
  auto acceptance_fix = [&](std::size_t s, std::size_t h, std::size_t k) {
    if (!options.preprocess) return Fix::None;
    const double P = scenarios[s].price(pairs[k].market, h);
    if (side(k) == Side::Below) {
      if (P < bid_min) return Fix::Zero;
      if (bid_max < P - eps) return Fix::EqualsBid;
    } else {
      if (P > bid_max) return Fix::Zero;
      if (bid_min > P + eps) return Fix::EqualsBid;
    }
    return Fix::None;
  };

  in.x_acc.resize(S * H * K);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t h = 0; h < H; ++h) {
      for (std::size_t k = 0; k < K; ++k) {
        const double hi = acceptance_fix(s, h, k) == Fix::Zero ? 0.0 : 1.0;
        in.x_acc[in.shk(s, h, k)] = lp.add_column(tag("xacc", {{'s', s}, {'h', h}, {'k', k}}), 0, hi, 0, true);
      }
    }
  }

  std::vector<double> max_dch(S * T, 0.0), max_ch(S * T, 0.0);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t k = 0; k < K; ++k) {
        max_dch[in.st(s, t)] = std::max(max_dch[in.st(s, t)], meb.dch(s, t, k));
        max_ch[in.st(s, t)] = std::max(max_ch[in.st(s, t)], meb.ch(s, t, k));
      }
    }
  }

  const std::size_t ST = S * T;
  in.z_dch.resize(ST);
  in.z_ch.resize(ST);
  in.z_net.resize(ST);
  in.z_soc.resize(ST);
  in.s_dch.resize(ST);
  in.s_ch.resize(ST);
  in.z_soc_end.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    const double pen = -params.slack_penalty * scenarios[s].probability;
    for (std::size_t t = 0; t < T; ++t) {
      const auto i = in.st(s, t);
      in.z_dch[i] = lp.add_column(tag("zdch", {{'s', s}, {'t', t}}), 0, max_dch[i], 0);
      in.z_ch[i] = lp.add_column(tag("zch", {{'s', s}, {'t', t}}), 0, max_ch[i], 0);
      in.z_net[i] = lp.add_column(tag("znet", {{'s', s}, {'t', t}}), -kInf, kInf, 0);
      const double lo = t == 0 ? params.soc_start : params.e_min;
      const double hi = t == 0 ? params.soc_start : params.e_max;
      in.z_soc[i] = lp.add_column(tag("zsoc", {{'s', s}, {'t', t}}), lo, hi, 0);
      in.s_dch[i] = lp.add_column(tag("sdch", {{'s', s}, {'t', t}}), 0, max_dch[i], pen);
      in.s_ch[i] = lp.add_column(tag("sch", {{'s', s}, {'t', t}}), 0, max_ch[i], pen);
    }
    const bool fixed = params.soc_mode == SocMode::Fixed;
    in.z_soc_end[s] = lp.add_column(tag("zsocend", {{'s', s}}), fixed ? params.soc_end : params.e_min,
                                    fixed ? params.soc_end : params.e_max, 0);
  }

  in.w_ok.resize(S * H);
  in.w_avail.assign(S * H * K, -1);
  in.w_spot_dch.resize(S * H);
  in.w_spot_ch.resize(S * H);
  in.w_energy.resize(S * H);
  for (std::size_t s = 0; s < S; ++s) {
    const double p_s = scenarios[s].probability;
    for (std::size_t h = 0; h < H; ++h) {
      in.w_ok[in.sh(s, h)] = lp.add_column(tag("wok", {{'s', s}, {'h', h}}), 0, 1, 0, true);
      for (std::size_t k = 0; k < K; ++k) {
        if (!is_freq(k)) continue;
        in.w_avail[in.shk(s, h, k)] = lp.add_column(tag("wav", {{'s', s}, {'h', h}, {'k', k}}), 0, kInf, p_s);
      }
      in.w_spot_dch[in.sh(s, h)] = lp.add_column(tag("wsd", {{'s', s}, {'h', h}}), 0, kInf, p_s);
      in.w_spot_ch[in.sh(s, h)] = lp.add_column(tag("wsc", {{'s', s}, {'h', h}}), 0, kInf, -p_s);
      in.w_energy[in.sh(s, h)] = lp.add_column(tag("wen", {{'s', s}, {'h', h}}), 0, kInf, p_s);
    }
  }

  // At most one bid per hour.
  for (std::size_t h = 0; h < H; ++h) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < K; ++k) terms.push_back({in.x_bid[in.hk(h, k)], 1.0});
    lp.add_row(tag("onebid", {{'h', h}}), terms, RowSense::LessEqual, 1.0);
  }

  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t h = 0; h < H; ++h) {
      const int xp = in.x_price[h];
      for (std::size_t k = 0; k < K; ++k) {
        const int xb = in.x_bid[in.hk(h, k)];
        const int xa = in.x_acc[in.shk(s, h, k)];
        const double P = scenarios[s].price(pairs[k].market, h);
        const auto id = [&](const char* p) { return tag(p, {{'s', s}, {'h', h}, {'k', k}}); };
        const Fix fix = acceptance_fix(s, h, k);
        lp.add_row(id("accbid"), {{xa, 1.0}, {xb, -1.0}},
                   fix == Fix::EqualsBid ? RowSense::Equal : RowSense::LessEqual, 0.0);
        if (side(k) == Side::Below) {
          // Placed but rejected: bid price above clearing (within eps).
          const double m17 = std::max(0.0, P - bid_min - eps);
          lp.add_row(id("acclink"), {{xb, P}, {xp, -1.0}, {xa, -m17}}, RowSense::LessEqual, eps);
          // Accepted: bid price at most clearing.
          const double mc = std::max(0.0, bid_max - P);
          lp.add_row(id("accconv"), {{xp, 1.0}, {xa, mc}}, RowSense::LessEqual, P + mc);
        } else {
          const double m18 = std::max(0.0, bid_max - P - eps);
          lp.add_row(id("acclink"), {{xp, 1.0}, {xa, -m18}, {xb, m18}}, RowSense::LessEqual, P + eps + m18);
          const double mc = std::max(0.0, P - bid_min);
          lp.add_row(id("accconv"), {{xp, 1.0}, {xa, -mc}}, RowSense::GreaterEqual, P - mc);
        }
        if (is_freq(k)) {
          const int w = in.w_avail[in.shk(s, h, k)];
          const double p = pairs[k].power;
          lp.add_row(id("avprice"), {{w, 1.0}, {xp, -p}}, RowSense::LessEqual, 0.0);
          lp.add_row(id("avacc"), {{w, 1.0}, {xa, -p * std::min(P, bid_max)}}, RowSense::LessEqual, 0.0);
          const double mav = p * bid_max;
          lp.add_row(id("avlink"), {{w, 1.0}, {xp, -p}, {xa, -mav}}, RowSense::GreaterEqual, -mav);
        }
      }
      std::vector<Term> sd{{in.w_spot_dch[in.sh(s, h)], 1.0}}, sc{{in.w_spot_ch[in.sh(s, h)], 1.0}};
      for (std::size_t k = 0; k < K; ++k) {
        const auto m = pairs[k].market;
        const double P = scenarios[s].price(m, h);
        if (m == MarketId::SDch) sd.push_back({in.x_acc[in.shk(s, h, k)], -pairs[k].power * P});
        if (m == MarketId::SCh) sc.push_back({in.x_acc[in.shk(s, h, k)], -pairs[k].power * P});
      }
      lp.add_row(tag("spotdch", {{'s', s}, {'h', h}}), sd, RowSense::Equal, 0.0);
      lp.add_row(tag("spotch", {{'s', s}, {'h', h}}), sc, RowSense::Equal, 0.0);
    }
  }

  const double inv_loss = 1.0 / (1.0 - params.ilf);
  const double keep = 1.0 - params.ilf;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      const auto i = in.st(s, t);
      const std::size_t h = t / sph;
      std::vector<Term> fd{{in.z_dch[i], 1.0}, {in.s_dch[i], 1.0}};
      std::vector<Term> fc{{in.z_ch[i], 1.0}, {in.s_ch[i], 1.0}};
      for (std::size_t k = 0; k < K; ++k) {
        fd.push_back({in.x_acc[in.shk(s, h, k)], -meb.dch(s, t, k)});
        fc.push_back({in.x_acc[in.shk(s, h, k)], -meb.ch(s, t, k)});
      }
      lp.add_row(tag("flowdch", {{'s', s}, {'t', t}}), fd, RowSense::Equal, 0.0);
      lp.add_row(tag("flowch", {{'s', s}, {'t', t}}), fc, RowSense::Equal, 0.0);
      lp.add_row(tag("netlaw", {{'s', s}, {'t', t}}),
                 {{in.z_net[i], 1.0}, {in.z_dch[i], -inv_loss}, {in.z_ch[i], keep}}, RowSense::Equal, 0.0);
      const int next = t + 1 < T ? in.z_soc[in.st(s, t + 1)] : in.z_soc_end[s];
      lp.add_row(tag("socrec", {{'s', s}, {'t', t + 1}}), {{next, 1.0}, {in.z_soc[i], -1.0}, {in.z_net[i], 1.0}},
                 RowSense::Equal, 0.0);
    }
  }

  for (std::size_t s = 0; s < S; ++s) {
    const auto& sc = scenarios[s];
    for (std::size_t h = 0; h < H; ++h) {
      double m_slack = 0.0, m_energy = 0.0;
      std::vector<double> pair_energy(K, 0.0), pair_value(K, 0.0);
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t t = h * sph; t < (h + 1) * sph; ++t) {
          pair_energy[k] += meb.dch(s, t, k) + meb.ch(s, t, k);
          pair_value[k] += sc.c_up[h] * meb.dch(s, t, k) + sc.c_down[h] * meb.ch(s, t, k);
        }
        m_slack = std::max(m_slack, pair_energy[k]);
        m_energy = std::max(m_energy, pair_value[k]);
      }
      const int wok = in.w_ok[in.sh(s, h)];
      const int we = in.w_energy[in.sh(s, h)];
      std::vector<Term> gate{{wok, m_slack}};
      std::vector<Term> pay{{we, 1.0}};
      for (std::size_t t = h * sph; t < (h + 1) * sph; ++t) {
        const auto i = in.st(s, t);
        gate.push_back({in.s_dch[i], 1.0});
        gate.push_back({in.s_ch[i], 1.0});
        pay.push_back({in.z_dch[i], -sc.c_up[h]});
        pay.push_back({in.z_ch[i], -sc.c_down[h]});
      }
      const auto id = [&](const char* p) { return tag(p, {{'s', s}, {'h', h}}); };
      lp.add_row(id("slackgate"), gate, RowSense::LessEqual, m_slack);
      lp.add_row(id("enflow"), pay, RowSense::LessEqual, 0.0);
      lp.add_row(id("enok"), {{we, 1.0}, {wok, -m_energy}}, RowSense::LessEqual, 0.0);
      std::vector<Term> link;
      for (const auto& t : pay) link.push_back(t);
      link.push_back({wok, -m_energy});
      lp.add_row(id("enlink"), link, RowSense::GreaterEqual, -m_energy);
      std::vector<Term> fcrn{{we, 1.0}};
      for (std::size_t k = 0; k < K; ++k) {
        if (pairs[k].market == MarketId::N) fcrn.push_back({in.x_acc[in.shk(s, h, k)], -m_energy});
      }
      lp.add_row(id("engate"), fcrn, RowSense::LessEqual, 0.0);
      if (options.strengthen) {
        double n_energy = 0.0, n_value = 0.0;
        std::vector<Term> okn{{wok, 1.0}}, val{{we, 1.0}};
        for (std::size_t k = 0; k < K; ++k) {
          if (pairs[k].market != MarketId::N) continue;
          n_energy = std::max(n_energy, pair_energy[k]);
          n_value = std::max(n_value, pair_value[k]);
          okn.push_back({in.x_acc[in.shk(s, h, k)], -1.0});
          val.push_back({in.x_acc[in.shk(s, h, k)], -pair_value[k]});
        }
        lp.add_row(id("okfcrn"), okn, RowSense::LessEqual, 0.0);
        lp.add_row(id("envalue"), val, RowSense::LessEqual, 0.0);
        lp.add_row(id("enokn"), {{we, 1.0}, {wok, -n_value}}, RowSense::LessEqual, 0.0);
        std::vector<Term> cut{{wok, n_energy}};
        for (std::size_t t = h * sph; t < (h + 1) * sph; ++t) {
          cut.push_back({in.s_dch[in.st(s, t)], 1.0});
          cut.push_back({in.s_ch[in.st(s, t)], 1.0});
        }
        for (std::size_t k = 0; k < K; ++k) {
          const double e = pairs[k].market == MarketId::N ? n_energy : pair_energy[k];
          cut.push_back({in.x_acc[in.shk(s, h, k)], -e});
        }
        lp.add_row(id("slackcut"), cut, RowSense::LessEqual, 0.0);
      }
    }
  }
  return in;
}

int Solution::bid_pair(std::size_t h) const {
  for (std::size_t k = 0; k < K; ++k) {
    if (x_bid[h * K + k] != 0) return static_cast<int>(k);
  }
  return -1;
}

Solution extract_solution(const MilpInstance& in, const std::vector<double>& x) {
  if (x.size() != static_cast<std::size_t>(in.lp.num_cols())) throw SolverError("solution vector has the wrong length");
  Solution sol;
  sol.S = in.S;
  sol.H = in.H;
  sol.T = in.T;
  sol.K = in.K;
  // Round-off residue around zero is snapped so reports print clean zeros.
  auto val = [&](int j) {
    const double v = x[static_cast<std::size_t>(j)];
    return std::abs(v) < 1e-12 ? 0.0 : v;
  };
  auto bin = [&](int j) { return static_cast<int>(std::lround(val(j))); };
  for (int j : in.x_bid) sol.x_bid.push_back(bin(j));
  for (int j : in.x_price) sol.x_price.push_back(val(j));
  for (int j : in.x_acc) sol.x_acc.push_back(bin(j));
  for (std::size_t i = 0; i < in.S * in.T; ++i) {
    sol.z_dch.push_back(val(in.z_dch[i]));
    sol.z_ch.push_back(val(in.z_ch[i]));
    sol.z_net.push_back(val(in.z_net[i]));
    sol.z_soc.push_back(val(in.z_soc[i]));
    sol.s_dch.push_back(val(in.s_dch[i]));
    sol.s_ch.push_back(val(in.s_ch[i]));
  }
  for (int j : in.w_ok) sol.w_ok.push_back(bin(j));
  for (int j : in.w_avail) sol.w_avail.push_back(j < 0 ? 0.0 : val(j));
  for (std::size_t i = 0; i < in.S * in.H; ++i) {
    sol.w_spot_dch.push_back(val(in.w_spot_dch[i]));
    sol.w_spot_ch.push_back(val(in.w_spot_ch[i]));
    sol.w_energy.push_back(val(in.w_energy[i]));
  }
  sol.objective = in.lp.evaluate_objective(x);
  return sol;
}

std::vector<double> to_column_vector(const MilpInstance& in, const Solution& sol) {
  std::vector<double> x(static_cast<std::size_t>(in.lp.num_cols()), 0.0);
  auto put = [&](int j, double v) {
    if (j >= 0) x[static_cast<std::size_t>(j)] = v;
  };
  for (std::size_t i = 0; i < in.x_bid.size(); ++i) put(in.x_bid[i], sol.x_bid[i]);
  for (std::size_t i = 0; i < in.x_price.size(); ++i) put(in.x_price[i], sol.x_price[i]);
  for (std::size_t i = 0; i < in.x_acc.size(); ++i) put(in.x_acc[i], sol.x_acc[i]);
  for (std::size_t i = 0; i < in.S * in.T; ++i) {
    put(in.z_dch[i], sol.z_dch[i]);
    put(in.z_ch[i], sol.z_ch[i]);
    put(in.z_net[i], sol.z_net[i]);
    put(in.z_soc[i], sol.z_soc[i]);
    put(in.s_dch[i], sol.s_dch[i]);
    put(in.s_ch[i], sol.s_ch[i]);
  }
  for (std::size_t s = 0; s < in.S; ++s) {
    const auto last = in.st(s, in.T - 1);
    put(in.z_soc_end[s], sol.z_soc[last] - sol.z_net[last]);
  }
  for (std::size_t i = 0; i < in.w_ok.size(); ++i) put(in.w_ok[i], sol.w_ok[i]);
  for (std::size_t i = 0; i < in.w_avail.size(); ++i) put(in.w_avail[i], sol.w_avail[i]);
  for (std::size_t i = 0; i < in.S * in.H; ++i) {
    put(in.w_spot_dch[i], sol.w_spot_dch[i]);
    put(in.w_spot_ch[i], sol.w_spot_ch[i]);
    put(in.w_energy[i], sol.w_energy[i]);
  }
  return x;
}

}  // namespace bessbid::sched
