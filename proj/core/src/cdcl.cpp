// Compact CDCL solver: two watched literals, first-UIP learning with
// recursive minimization, VSIDS, phase saving, Luby restarts and LBD-based
// clause database reduction.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "hats/error.hpp"
#include "hats/sat.hpp"

namespace hats {

namespace {

using Lit = std::uint32_t;  // 2*var + negated, var is 0-based

constexpr Lit lit_of(int dimacs) {
  return dimacs > 0 ? 2U * static_cast<Lit>(dimacs - 1) : 2U * static_cast<Lit>(-dimacs - 1) + 1U;
}
constexpr Lit neg(Lit l) { return l ^ 1U; }
constexpr std::uint32_t var_of(Lit l) { return l >> 1; }

enum : std::int8_t { kFalse = -1, kUndef = 0, kTrue = 1 };

struct Clause {
  std::vector<Lit> lits;
  bool learnt = false;
  std::uint32_t lbd = 0;
  double activity = 0;
  bool deleted = false;
};

constexpr std::uint32_t kNoReason = UINT32_MAX;

double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

class Solver {
 public:
  explicit Solver(std::uint32_t n)
      : n_(n), value_(n, kUndef), level_(n, 0), reason_(n, kNoReason), phase_(n, 0),
        activity_(n, 0.0), seen_(n, 0), watches_(2 * static_cast<std::size_t>(n)), heap_pos_(n, -1) {
    for (std::uint32_t v = 0; v < n; ++v) heap_insert(v);
  }

  bool add_clause(std::vector<Lit> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i) {
      if (lits[i + 1] == neg(lits[i])) return true;  // tautology
    }
    std::vector<Lit> kept;
    for (Lit l : lits) {
      int8_t v = lit_value(l);
      if (v == kTrue) return true;
      if (v == kUndef) kept.push_back(l);
    }
    if (kept.empty()) return false;
    if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      return propagate() == kNoReason;
    }
    attach(std::move(kept), false, 0);
    return true;
  }

  bool solve(std::optional<std::chrono::steady_clock::time_point> deadline) {
    if (propagate() != kNoReason) return false;
    int restart = 0;
    std::uint64_t conflicts_until_reduce = 2000;
    std::uint64_t conflicts = 0;
    while (true) {
      auto budget = static_cast<std::uint64_t>(luby(2, restart++) * 100);
      std::uint64_t local = 0;
      while (true) {
        std::uint32_t confl = propagate();
        if (confl != kNoReason) {
          ++conflicts;
          ++local;
          if (deadline && (conflicts & 255U) == 0 && std::chrono::steady_clock::now() > *deadline) {
            throw SolverError("internal solver exceeded its time limit");
          }
          if (decision_level() == 0) return false;
          std::vector<Lit> learnt;
          std::uint32_t back = analyze(confl, learnt);
          backtrack(back);
          if (learnt.size() == 1) {
            enqueue(learnt[0], kNoReason);
          } else {
            std::uint32_t lbd = compute_lbd(learnt);
            Lit first = learnt[0];
            std::uint32_t ci = attach(std::move(learnt), true, lbd);
            bump_clause(ci);
            enqueue(first, ci);
          }
          var_inc_ /= 0.95;
          cla_inc_ /= 0.999;
          if (conflicts >= conflicts_until_reduce) {
            reduce_db();
            conflicts_until_reduce = conflicts + 2000 + 300 * reductions_;
          }
        } else {
          if (local >= budget) {
            backtrack(0);
            break;
          }
          std::uint32_t v = pick_branch();
          if (v == UINT32_MAX) return true;
          trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
          enqueue(2 * v + (phase_[v] ? 0U : 1U), kNoReason);
        }
      }
    }
  }

  bool model_value(std::uint32_t v) const { return value_[v] == kTrue; }

 private:
  int8_t lit_value(Lit l) const {
    int8_t v = value_[var_of(l)];
    return (l & 1U) ? static_cast<int8_t>(-v) : v;
  }

  std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  std::uint32_t attach(std::vector<Lit> lits, bool learnt, std::uint32_t lbd) {
    auto ci = static_cast<std::uint32_t>(clauses_.size());
    watches_[neg(lits[0])].push_back(ci);
    watches_[neg(lits[1])].push_back(ci);
    clauses_.push_back(Clause{std::move(lits), learnt, lbd, 0, false});
    if (learnt) learnts_.push_back(ci);
    return ci;
  }

  void enqueue(Lit l, std::uint32_t reason) {
    std::uint32_t v = var_of(l);
    value_[v] = (l & 1U) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Watch lists are keyed by the negation of a watched literal: when literal
  // p becomes true, clauses watching ~p are visited.
  std::uint32_t propagate() {
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      auto& ws = watches_[p];
      std::size_t i = 0;
      std::size_t j = 0;
      Lit false_lit = neg(p);
      while (i < ws.size()) {
        std::uint32_t ci = ws[i++];
        Clause& c = clauses_[ci];
        if (c.deleted) continue;
        auto& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        if (lit_value(lits[0]) == kTrue) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (lit_value(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[neg(lits[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (lit_value(lits[0]) == kFalse) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(lits[0], ci);
      }
      ws.resize(j);
    }
    return kNoReason;
  }

  std::uint32_t analyze(std::uint32_t confl, std::vector<Lit>& learnt) {
    learnt.assign(1, 0);
    int pending = 0;
    Lit p = UINT32_MAX;
    std::size_t index = trail_.size();
    std::vector<std::uint32_t> touched;
    do {
      Clause& c = clauses_[confl];
      if (c.learnt) bump_clause(confl);
      for (std::size_t k = (p == UINT32_MAX ? 0 : 1); k < c.lits.size(); ++k) {
        Lit q = c.lits[k];
        std::uint32_t v = var_of(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          touched.push_back(v);
          bump_var(v);
          if (level_[v] >= decision_level()) {
            ++pending;
          } else {
            learnt.push_back(q);
          }
        }
      }
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      confl = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --pending;
      if (pending > 0 && confl != kNoReason) {
        // Keep the implied literal first in its reason clause.
        auto& lits = clauses_[confl].lits;
        if (lits[0] != p) {
          auto it = std::find(lits.begin(), lits.end(), p);
          std::swap(*it, lits[0]);
        }
      }
    } while (pending > 0);
    learnt[0] = neg(p);

    // Drop literals implied by the rest of the clause.
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      if (reason_[var_of(learnt[i])] == kNoReason || !redundant(learnt[i], touched)) learnt[j++] = learnt[i];
    }
    learnt.resize(j);
    for (std::uint32_t v : touched) seen_[v] = 0;

    std::uint32_t back = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i) {
        if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
      }
      std::swap(learnt[1], learnt[max_i]);
      back = level_[var_of(learnt[1])];
    }
    return back;
  }

  bool redundant(Lit l, std::vector<std::uint32_t>& touched) {
    std::vector<Lit> stack{l};
    std::size_t top = touched.size();
    while (!stack.empty()) {
      Lit q = stack.back();
      stack.pop_back();
      const Clause& c = clauses_[reason_[var_of(q)]];
      for (Lit r : c.lits) {
        std::uint32_t v = var_of(r);
        if (v == var_of(q) || seen_[v] || level_[v] == 0) continue;
        if (reason_[v] == kNoReason) {
          for (std::size_t k = top; k < touched.size(); ++k) seen_[touched[k]] = 0;
          touched.resize(top);
          return false;
        }
        seen_[v] = 1;
        touched.push_back(v);
        stack.push_back(r);
      }
    }
    return true;
  }

  std::uint32_t compute_lbd(const std::vector<Lit>& lits) {
    std::vector<std::uint32_t> levels;
    for (Lit l : lits) levels.push_back(level_[var_of(l)]);
    std::sort(levels.begin(), levels.end());
    return static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
  }

  void backtrack(std::uint32_t level) {
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
      std::uint32_t v = var_of(trail_[i]);
      phase_[v] = value_[v] == kTrue ? 1 : 0;
      value_[v] = kUndef;
      reason_[v] = kNoReason;
      if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  std::uint32_t pick_branch() {
    while (!heap_.empty()) {
      std::uint32_t v = heap_pop();
      if (value_[v] == kUndef) return v;
    }
    return UINT32_MAX;
  }

  void reduce_db() {
    ++reductions_;
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t ci : learnts_) {
      if (clauses_[ci].deleted) continue;
      candidates.push_back(ci);
    }
    std::sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
      const Clause& x = clauses_[a];
      const Clause& y = clauses_[b];
      if (x.lbd != y.lbd) return x.lbd > y.lbd;
      return x.activity < y.activity;
    });
    std::size_t limit = candidates.size() / 2;
    std::vector<std::uint32_t> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::uint32_t ci = candidates[i];
      Clause& c = clauses_[ci];
      if (i < limit && c.lbd > 2 && !locked(ci)) {
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
      } else {
        kept.push_back(ci);
      }
    }
    learnts_ = std::move(kept);
    for (auto& ws : watches_) {
      ws.erase(std::remove_if(ws.begin(), ws.end(), [&](std::uint32_t ci) { return clauses_[ci].deleted; }),
               ws.end());
    }
  }

  bool locked(std::uint32_t ci) const {
    const Clause& c = clauses_[ci];
    std::uint32_t v = var_of(c.lits[0]);
    return reason_[v] == ci && value_[v] != kUndef;
  }

  void bump_var(std::uint32_t v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) sift_up(static_cast<std::size_t>(heap_pos_[v]));
  }

  void bump_clause(std::uint32_t ci) {
    clauses_[ci].activity += cla_inc_;
    if (clauses_[ci].activity > 1e20) {
      for (std::uint32_t k : learnts_) clauses_[k].activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  // Max-heap on activity, ties to the smaller variable for determinism.
  bool before(std::uint32_t a, std::uint32_t b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_insert(std::uint32_t v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(heap_.size() - 1);
  }
  std::uint32_t heap_pop() {
    std::uint32_t top = heap_[0];
    heap_pos_[top] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_pos_[heap_[0]] = 0;
      sift_down(0);
    }
    return top;
  }
  void sift_up(std::size_t i) {
    std::uint32_t v = heap_[i];
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
  }
  void sift_down(std::size_t i) {
    std::uint32_t v = heap_[i];
    while (true) {
      std::size_t c = 2 * i + 1;
      if (c >= heap_.size()) break;
      if (c + 1 < heap_.size() && before(heap_[c + 1], heap_[c])) ++c;
      if (!before(heap_[c], v)) break;
      heap_[i] = heap_[c];
      heap_pos_[heap_[i]] = static_cast<int>(i);
      i = c;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
  }

  std::uint32_t n_;
  std::vector<int8_t> value_;
  std::vector<std::uint32_t> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<std::uint8_t> phase_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<int> heap_pos_;
  std::vector<std::uint32_t> heap_;
  std::vector<Clause> clauses_;
  std::vector<std::uint32_t> learnts_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::uint64_t reductions_ = 0;
};

}  // namespace

SolveResult internal_solve(const Cnf& cnf, std::uint32_t var_bound, std::chrono::milliseconds time_limit) {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (time_limit.count() > 0) deadline = std::chrono::steady_clock::now() + time_limit;
  if (cnf.var_count > var_bound) {
    throw BoundError("internal solver limited to " + std::to_string(var_bound) + " variables, instance has " +
                     std::to_string(cnf.var_count));
  }
  Solver solver(cnf.var_count);
  bool ok = true;
  for (const auto& clause : cnf.clauses) {
    if (clause.empty()) {
      ok = false;
      break;
    }
    std::vector<Lit> lits;
    for (int l : clause) {
      if (l == 0 || static_cast<std::uint32_t>(std::abs(l)) > cnf.var_count) throw Error("literal out of range");
      lits.push_back(lit_of(l));
    }
    if (!solver.add_clause(std::move(lits))) {
      ok = false;
      break;
    }
  }
  SolveResult result;
  if (!ok || !solver.solve(deadline)) {
    result.status = SatStatus::Unsat;
    return result;
  }
  result.status = SatStatus::Sat;
  result.assignment.assign(cnf.var_count + 1, false);
  for (std::uint32_t v = 0; v < cnf.var_count; ++v) result.assignment[v + 1] = solver.model_value(v);
  return result;
}

}  // namespace hats
