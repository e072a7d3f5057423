#include "isac/dynamic.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "isac/allocators.hpp"
#include "isac/metrics.hpp"
#include "isac/model.hpp"

namespace isac {

PowerAllocation blend(const PowerAllocation& base, const PowerAllocation& target,
                      double alpha) {
  if (!(alpha >= 0.0) || !(alpha <= 1.0))
    throw std::invalid_argument("blend: alpha must lie in [0, 1]");
  if (base.p.size() != target.p.size())
    throw std::invalid_argument("blend: allocation lengths differ");
  return {(1.0 - alpha) * base.p + alpha * target.p};
}

namespace {

struct BlendEval {
  double psl = 0.0;
  double closs = 0.0;
  double proxy = 0.0;
  double mlw = 0.0;
  bool psl_ok = false;
  bool acc_ok = false;
  bool closs_ok = false;

  bool feasible() const { return psl_ok && acc_ok && closs_ok; }
};

// Cached metric evaluations over the epsilon grid of blend weights.
class BlendScan {
 public:
  BlendScan(const PowerAllocation& base, const PowerAllocation& target,
            const ChannelRealization& chan, const OfdmConfig& cfg, const Thresholds& th)
      : base_(base), target_(target), chan_(chan), cfg_(cfg), th_(th), engine_(cfg) {
    last_ = static_cast<int>(std::ceil(1.0 / th.epsilon - 1e-12));
    cache_.resize(last_ + 1);
    c_base_ = capacity(base, chan, cfg);
  }

  int last() const { return last_; }
  double alpha_at(int i) const { return i >= last_ ? 1.0 : i * th_.epsilon; }

  const BlendEval& at(int i) {
    if (!cache_[i]) cache_[i] = evaluate(alpha_at(i));
    return *cache_[i];
  }

 private:
  BlendEval evaluate(double alpha) {
    const PowerAllocation p = blend(base_, target_, alpha);
    BlendEval e;
    e.closs = capacity_loss(capacity(p, chan_, cfg_), c_base_);
    e.closs_ok = e.closs <= th_.gamma_c;
    try {
      const RangeProfile profile = engine_.profile(p);
      e.psl = psl_db(profile);
      e.psl_ok = e.psl <= th_.gamma_psl_db;
      if (th_.mlw_bound_bins) {
        e.mlw = mlw_3db(profile);
        e.acc_ok = e.mlw <= *th_.mlw_bound_bins;
      }
    } catch (const std::domain_error&) {
      // no usable lobe structure: treat both sensing constraints as violated
      e.psl_ok = false;
      e.acc_ok = false;
      return e;
    }
    if (!th_.mlw_bound_bins) {
      e.proxy = accuracy_proxy(p);
      e.acc_ok = e.proxy >= th_.gamma_acc;
    }
    return e;
  }

  const PowerAllocation& base_;
  const PowerAllocation& target_;
  const ChannelRealization& chan_;
  const OfdmConfig& cfg_;
  const Thresholds& th_;
  ProfileEngine engine_;
  int last_ = 0;
  double c_base_ = 0.0;
  std::vector<std::optional<BlendEval>> cache_;
};

// smallest grid index >= `from` at which all constraints hold; the capacity
// loss only grows with alpha, so the scan stops once that bound breaks
std::optional<int> scan_up(BlendScan& scan, int from) {
  for (int i = from; i <= scan.last(); ++i) {
    const BlendEval& e = scan.at(i);
    if (!e.closs_ok) break;
    if (e.feasible()) return i;
  }
  return std::nullopt;
}

bool probe_monotone_nonincreasing(BlendScan& scan, const std::function<double(const BlendEval&)>& f) {
  const int points = 32;
  double prev = f(scan.at(0));
  for (int j = 1; j < points; ++j) {
    const int idx = static_cast<int>(std::lround(static_cast<double>(j) * scan.last() / (points - 1)));
    const double v = f(scan.at(idx));
    if (v > prev + 1e-9) return false;
    prev = v;
  }
  return true;
}

// bisect for the smallest index whose predicate holds, given pred(lo) false,
// pred(hi) true and an upward-closed predicate set
int bisect_smallest(BlendScan& scan, int lo, int hi,
                    const std::function<bool(const BlendEval&)>& pred) {
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (pred(scan.at(mid)) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

BlendSearch binary_search_crb(const PowerAllocation& p_wf, const PowerAllocation& p_edges,
                              const ChannelRealization& chan, const OfdmConfig& cfg,
                              const Thresholds& th) {
  th.validate();
  BlendScan scan(p_wf, p_edges, chan, cfg, th);
  const int last = scan.last();
  auto acc = [](const BlendEval& e) { return e.acc_ok; };

  if (th.improve_accuracy_when_satisfied) {
    // buy accuracy with the allowed capacity loss: largest feasible alpha
    int c = last;
    if (!scan.at(last).closs_ok)
      c = bisect_smallest(scan, 0, last, [](const BlendEval& e) { return !e.closs_ok; }) - 1;
    for (int i = c; i >= 0; --i)
      if (scan.at(i).feasible()) return {scan.alpha_at(i), true};
    return {0.0, false};
  }

  int start = 0;
  if (!scan.at(0).acc_ok) {
    bool bisectable;
    if (th.mlw_bound_bins) {
      bisectable = probe_monotone_nonincreasing(scan, [](const BlendEval& e) { return e.mlw; });
    } else {
      bisectable = true;  // the proxy is linear in alpha
    }
    if (bisectable) {
      if (!scan.at(last).acc_ok) return {0.0, false};
      start = bisect_smallest(scan, 0, last, acc);
    }
  }
  if (auto i = scan_up(scan, start))
    return {scan.alpha_at(*i), true};
  return {0.0, false};
}

BlendSearch binary_search_psl(const PowerAllocation& p_wf, const PowerAllocation& p_psl_opt,
                              const ChannelRealization& chan, const OfdmConfig& cfg,
                              const Thresholds& th) {
  th.validate();
  BlendScan scan(p_wf, p_psl_opt, chan, cfg, th);
  const int last = scan.last();

  if (scan.at(0).feasible()) return {0.0, true};

  const bool monotone =
      probe_monotone_nonincreasing(scan, [](const BlendEval& e) { return e.psl; });
  int start = 0;
  if (monotone) {
    if (!scan.at(last).psl_ok) return {0.0, false};
    if (!scan.at(0).psl_ok)
      start = bisect_smallest(scan, 0, last, [](const BlendEval& e) { return e.psl_ok; });
  }
  if (auto i = scan_up(scan, start))
    return {scan.alpha_at(*i), true};
  return {0.0, false};
}

namespace {

DecisionOutcome decide(const ChannelRealization& chan, const OfdmConfig& cfg,
                       const Thresholds& th,
                       const PowerAllocation& wf, const PowerAllocation& edges,
                       const std::function<const PowerAllocation&()>& psl_opt) {
  cfg.validate();
  th.validate();

  ProfileEngine engine(cfg);
  const RangeProfile wf_profile = engine.profile(wf);
  const double psl_wf = psl_db(wf_profile);
  const double mlw_wf = mlw_3db(wf_profile);
  const double c_wf = capacity(wf, chan, cfg);

  const bool psl_sat = psl_wf <= th.gamma_psl_db;
  const bool acc_sat = th.mlw_bound_bins ? mlw_wf <= *th.mlw_bound_bins
                                         : accuracy_proxy(wf) >= th.gamma_acc;

  DecisionOutcome out;
  out.allocation = wf;
  out.alpha = 0.0;

  if (!psl_sat && !acc_sat) {
    out.mode = Mode::CommOnly;
    out.branch = Branch::BothViolated;
  } else if (psl_sat && (!acc_sat || th.improve_accuracy_when_satisfied)) {
    out.branch = Branch::BlendTowardEdges;
    const BlendSearch s = binary_search_crb(wf, edges, chan, cfg, th);
    if (s.found) {
      out.mode = Mode::Isac;
      out.alpha = s.alpha_sol;
      out.allocation = blend(wf, edges, s.alpha_sol);
    } else {
      out.mode = Mode::CommOnly;
    }
  } else if (!psl_sat) {
    out.branch = Branch::BlendTowardPslOpt;
    const BlendSearch s = binary_search_psl(wf, psl_opt(), chan, cfg, th);
    if (s.found) {
      out.mode = Mode::Isac;
      out.alpha = s.alpha_sol;
      out.allocation = blend(wf, psl_opt(), s.alpha_sol);
    } else {
      out.mode = Mode::CommOnly;
    }
  } else {
    out.mode = Mode::Isac;
    out.branch = Branch::WfAlreadyFeasible;
  }

  out.report = sensing_report(cfg, out.allocation, chan, c_wf, mlw_wf);
  const bool acc_final = th.mlw_bound_bins ? out.report.mlw_bins <= *th.mlw_bound_bins
                                           : out.report.accuracy_proxy >= th.gamma_acc;
  out.feasible = acc_final && out.report.psl_db <= th.gamma_psl_db &&
                 out.report.capacity_loss <= th.gamma_c;
  return out;
}

}  // namespace

DecisionOutcome dynamic_allocate(const ChannelRealization& chan, const OfdmConfig& cfg,
                                 const Thresholds& th, const SolverSettings& solver) {
  const PowerAllocation wf = water_filling(chan, cfg);
  const PowerAllocation edges = edges_allocation(cfg);
  std::optional<PowerAllocation> psl_opt;  // solved only if that branch is taken
  auto provider = [&]() -> const PowerAllocation& {
    if (!psl_opt) psl_opt = psl_min_allocation(cfg, solver).allocation;
    return *psl_opt;
  };
  return decide(chan, cfg, th, wf, edges, provider);
}

DecisionOutcome dynamic_allocate(const ChannelRealization& chan, const OfdmConfig& cfg,
                                 const Thresholds& th, const DynamicEndpoints& endpoints) {
  auto provider = [&]() -> const PowerAllocation& { return endpoints.psl_opt; };
  return decide(chan, cfg, th, endpoints.wf, endpoints.edges, provider);
}

}  // namespace isac
