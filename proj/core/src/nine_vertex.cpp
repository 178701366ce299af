#include "hats/nine_vertex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hats/error.hpp"

namespace hats {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("count exceeds 64 bits");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("count exceeds 64 bits");
  return r;
}

std::size_t pow9(std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= 9;
  return r;
}

}  // namespace

std::string ColorPair::label() const {
  return {static_cast<char>('0' + alpha), static_cast<char>('0' + beta)};
}

AdjacencyTensor::AdjacencyTensor(Vertex owner, std::vector<Vertex> edges, std::vector<std::uint8_t> entries)
    : owner_(owner), edges_(std::move(edges)), entries_(std::move(entries)) {
  if (entries_.size() != pow9(edges_.size())) throw Error("tensor needs 9^k entries");
}

std::uint8_t AdjacencyTensor::at(std::span<const ColorPair> index) const {
  if (index.size() != edges_.size()) throw Error("tensor index has the wrong rank");
  std::size_t i = 0;
  for (ColorPair p : index) i = i * 9 + p.index();
  return entries_[i];
}

std::size_t AdjacencyTensor::ones() const {
  return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), std::uint8_t{1}));
}

AdjacencyTensor adjacency_tensor(const Strategy& s, Vertex u) {
  const Graph& g = s.graph();
  if (u >= g.vertex_count()) throw Error("unknown vertex");
  if (s.two_guess_vertex() == u) throw Error("adjacency tensors are undefined for a two-guess sage");
  const std::size_t k = g.degree(u);
  if (k > 7) throw BoundError("adjacency tensor limited to degree 7");
  std::vector<std::uint8_t> entries(pow9(k), 0);
  auto table = s.table(u);
  // Only entries with a common alpha can be 1; walk those directly.
  const std::uint64_t cells = pow3(k);
  for (Color alpha = 0; alpha < kColors; ++alpha) {
    for (std::uint64_t beta = 0; beta < cells; ++beta) {
      if (table[beta].contains(alpha)) continue;
      std::size_t idx = 0;
      for (std::size_t j = 0; j < k; ++j) {
        auto b = static_cast<Color>((beta / pow3(k - 1 - j)) % 3);
        idx = idx * 9 + ColorPair{alpha, b}.index();
      }
      entries[idx] = 1;
    }
  }
  auto nb = g.neighbors(u);
  return AdjacencyTensor(u, std::vector<Vertex>(nb.begin(), nb.end()), std::move(entries));
}

TransferMatrix TransferMatrix::identity() {
  TransferMatrix m;
  for (std::size_t i = 0; i < 9; ++i) m(i, i) = 1;
  return m;
}

std::uint64_t TransferMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < 9; ++i) t = checked_add(t, (*this)(i, i));
  return t;
}

std::uint64_t TransferMatrix::sum() const {
  std::uint64_t t = 0;
  for (auto c : cells_) t = checked_add(t, c);
  return t;
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  TransferMatrix r;
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t l = 0; l < 9; ++l) acc = checked_add(acc, checked_mul(a(i, l), b(l, j)));
      r(i, j) = acc;
    }
  }
  return r;
}

TransferMatrix transfer_matrix(const std::array<std::array<Color, 3>, 3>& table) {
  TransferMatrix m;
  for (Color in = 0; in < kColors; ++in) {
    for (Color self = 0; self < kColors; ++self) {
      for (Color out = 0; out < kColors; ++out) {
        if (table[in][out] >= kColors) throw Error("table entries must be colors");
        m(ColorPair{in, self}.index(), ColorPair{self, out}.index()) = table[in][out] != self ? 1 : 0;
      }
    }
  }
  return m;
}

TransferMatrix transfer_matrix(const Strategy& s, Vertex u, Vertex in) {
  const Graph& g = s.graph();
  if (g.degree(u) != 2) throw Error("transfer matrices need a degree-2 vertex");
  if (s.two_guess_vertex() == u) throw Error("transfer matrices are undefined for a two-guess sage");
  auto nb = g.neighbors(u);
  if (nb[0] != in && nb[1] != in) throw Error("incoming vertex is not a neighbor");
  const bool in_first = nb[0] == in;
  std::array<std::array<Color, 3>, 3> table{};
  for (Color a = 0; a < kColors; ++a) {
    for (Color b = 0; b < kColors; ++b) {
      std::size_t cell = in_first ? 3U * a + b : 3U * b + a;
      table[a][b] = s.table(u)[cell].first();
    }
  }
  return transfer_matrix(table);
}

TransferMatrix transfer_matrix(const Strategy& s, Vertex u) {
  if (s.graph().degree(u) != 2) throw Error("transfer matrices need a degree-2 vertex");
  return transfer_matrix(s, u, s.graph().neighbors(u)[0]);
}

TransferMatrix matrix_power_chain(std::span<const TransferMatrix> chain) {
  if (chain.empty()) throw Error("empty matrix chain");
  TransferMatrix r = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) r = r * chain[i];
  return r;
}

TransferMatrix matrix_power(const TransferMatrix& m, unsigned k) {
  TransferMatrix r = TransferMatrix::identity();
  for (unsigned i = 0; i < k; ++i) r = r * m;
  return r;
}

std::uint64_t cycle_chain_count(std::span<const TransferMatrix> chain) { return matrix_power_chain(chain).trace(); }

std::string format_matrix(const TransferMatrix& m) {
  std::size_t width = 1;
  for (std::size_t i = 0; i < 81; ++i) width = std::max(width, std::to_string(m(i / 9, i % 9)).size());
  width = std::max<std::size_t>(width, 2);
  std::ostringstream out;
  out << "  ";
  for (std::size_t j = 0; j < 9; ++j) out << ' ' << std::string(width - 2, ' ') << ColorPair::from_index(j).label();
  out << '\n';
  for (std::size_t i = 0; i < 9; ++i) {
    out << ColorPair::from_index(i).label();
    for (std::size_t j = 0; j < 9; ++j) {
      auto v = std::to_string(m(i, j));
      out << ' ' << std::string(width - v.size(), ' ') << v;
    }
    out << '\n';
  }
  return out.str();
}

std::string format_tensor(const AdjacencyTensor& t, const Graph& g) {
  std::ostringstream out;
  out << "tensor " << g.name(t.owner()) << " |";
  for (Vertex e : t.edges()) out << ' ' << g.name(e);
  out << '\n';
  if (t.rank() == 2) {
    TransferMatrix m;
    for (std::size_t i = 0; i < 81; ++i) m(i / 9, i % 9) = t.entries()[i];
    out << format_matrix(m);
    return out.str();
  }
  const std::size_t k = t.rank();
  for (std::size_t i = 0; i < t.entries().size(); ++i) {
    if (!t.entries()[i]) continue;
    std::string labels;
    for (std::size_t j = 0; j < k; ++j) {
      if (j) labels += ' ';
      labels += ColorPair::from_index((i / pow9(k - 1 - j)) % 9).label();
    }
    out << labels << '\n';
  }
  return out.str();
}

namespace {

struct Factor {
  std::vector<Vertex> vars;  // sorted
  std::vector<std::uint64_t> values;
};

// Interaction graph: u ~ w when some factor mentions both.
std::vector<std::set<Vertex>> interaction(const std::vector<Factor>& factors, std::size_t n) {
  std::vector<std::set<Vertex>> adj(n);
  for (const auto& f : factors) {
    for (Vertex a : f.vars) {
      for (Vertex b : f.vars) {
        if (a != b) adj[a].insert(b);
      }
    }
  }
  return adj;
}

std::vector<Vertex> greedy_order(std::vector<std::set<Vertex>> adj) {
  const std::size_t n = adj.size();
  std::vector<bool> done(n, false);
  std::vector<Vertex> order;
  for (std::size_t step = 0; step < n; ++step) {
    Vertex best = 0;
    std::size_t best_deg = SIZE_MAX;
    for (Vertex v = 0; v < n; ++v) {
      if (!done[v] && adj[v].size() < best_deg) {
        best = v;
        best_deg = adj[v].size();
      }
    }
    done[best] = true;
    order.push_back(best);
    for (Vertex a : adj[best]) {
      adj[a].erase(best);
      for (Vertex b : adj[best]) {
        if (a != b) adj[a].insert(b);
      }
    }
    adj[best].clear();
  }
  return order;
}

std::vector<Factor> vertex_factors(const Strategy& s) {
  const Graph& g = s.graph();
  std::vector<Factor> factors;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    Factor f;
    f.vars.push_back(u);
    for (Vertex w : g.neighbors(u)) f.vars.push_back(w);
    std::sort(f.vars.begin(), f.vars.end());
    const std::size_t k = f.vars.size();
    f.values.assign(pow3(k), 0);
    std::vector<Color> colors(g.vertex_count(), 0);
    for (std::uint64_t idx = 0; idx < f.values.size(); ++idx) {
      std::uint64_t x = idx;
      for (std::size_t j = k; j-- > 0;) {
        colors[f.vars[j]] = static_cast<Color>(x % 3);
        x /= 3;
      }
      f.values[idx] = s.guess(u, colors).contains(colors[u]) ? 0 : 1;
    }
    factors.push_back(std::move(f));
  }
  return factors;
}

std::optional<Factor> hint_factor(const Hint& h) {
  Factor f;
  switch (h.kind()) {
    case Hint::Kind::Minus:
      f.vars = {h.first()};
      f.values = {1, 1, 1};
      f.values[h.color()] = 0;
      return f;
    case Hint::Kind::Equal:
    case Hint::Kind::NotEqual: {
      f.vars = {std::min(h.first(), h.second()), std::max(h.first(), h.second())};
      f.values.assign(9, 0);
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
          bool same = a == b;
          f.values[3 * a + b] = (h.kind() == Hint::Kind::Equal) == same ? 1 : 0;
        }
      }
      return f;
    }
    default:
      return std::nullopt;
  }
}

std::uint64_t eliminate_all(std::vector<Factor> factors, std::size_t n, std::size_t max_vars) {
  std::vector<Vertex> order = greedy_order(interaction(factors, n));
  std::uint64_t scalar = 1;
  for (Vertex v : order) {
    std::vector<Factor> touching;
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (std::binary_search(f.vars.begin(), f.vars.end(), v)) {
        touching.push_back(std::move(f));
      } else {
        rest.push_back(std::move(f));
      }
    }
    factors = std::move(rest);
    if (touching.empty()) {
      scalar = checked_mul(scalar, 3);
      continue;
    }
    std::vector<Vertex> scope;
    for (const auto& f : touching) scope.insert(scope.end(), f.vars.begin(), f.vars.end());
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    if (scope.size() > max_vars + 1) {
      throw BoundError("elimination needs a factor over " + std::to_string(scope.size()) + " vertices");
    }
    // Position of each factor variable inside `scope`.
    std::vector<std::vector<std::size_t>> pos(touching.size());
    for (std::size_t t = 0; t < touching.size(); ++t) {
      for (Vertex x : touching[t].vars) {
        pos[t].push_back(static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), x) - scope.begin()));
      }
    }
    const auto vpos = static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), v) - scope.begin());
    Factor out;
    for (std::size_t i = 0; i < scope.size(); ++i) {
      if (i != vpos) out.vars.push_back(scope[i]);
    }
    out.values.assign(pow3(out.vars.size()), 0);
    std::vector<Color> digits(scope.size(), 0);
    const std::uint64_t total = pow3(scope.size());
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t prod = 1;
      for (std::size_t t = 0; t < touching.size() && prod; ++t) {
        std::size_t fi = 0;
        for (std::size_t p : pos[t]) fi = fi * 3 + digits[p];
        prod = checked_mul(prod, touching[t].values[fi]);
      }
      if (prod) {
        std::size_t oi = 0;
        for (std::size_t i = 0; i < scope.size(); ++i) {
          if (i != vpos) oi = oi * 3 + digits[i];
        }
        out.values[oi] = checked_add(out.values[oi], prod);
      }
      for (std::size_t i = scope.size(); i-- > 0;) {
        if (++digits[i] < 3) break;
        digits[i] = 0;
      }
    }
    if (out.vars.empty()) {
      scalar = checked_mul(scalar, out.values[0]);
    } else {
      factors.push_back(std::move(out));
    }
  }
  for (const auto& f : factors) scalar = checked_mul(scalar, f.values.at(0));
  return scalar;
}

std::uint64_t direct_sum(const Strategy& s, std::size_t max_vertices) {
  const Graph& g = s.graph();
  const std::size_t n = g.vertex_count();
  if (n > max_vertices) throw BoundError("direct contraction limited to " + std::to_string(max_vertices) + " vertices");
  std::vector<AdjacencyTensor> tensors;
  for (Vertex u = 0; u < n; ++u) tensors.push_back(adjacency_tensor(s, u));
  std::vector<Color> c(n, 0);
  std::vector<ColorPair> index;
  std::uint64_t total = 0;
  const std::uint64_t placements = pow3(n);
  for (std::uint64_t p = 0; p < placements; ++p) {
    std::uint64_t prod = 1;
    for (Vertex u = 0; u < n && prod; ++u) {
      if (tensors[u].rank() == 0) {
        if (s.table(u)[0].contains(c[u])) prod = 0;
        continue;
      }
      index.clear();
      for (Vertex w : tensors[u].edges()) index.push_back({c[u], c[w]});
      prod *= tensors[u].at(index);
    }
    total = checked_add(total, prod);
    for (std::size_t i = n; i-- > 0;) {
      if (++c[i] < 3) break;
      c[i] = 0;
    }
  }
  return total;
}

}  // namespace

std::vector<Vertex> elimination_order(const Graph& g) {
  std::vector<std::set<Vertex>> adj(g.vertex_count());
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    std::vector<Vertex> closed{u};
    for (Vertex w : g.neighbors(u)) closed.push_back(w);
    for (Vertex a : closed) {
      for (Vertex b : closed) {
        if (a != b) adj[a].insert(b);
      }
    }
  }
  return greedy_order(std::move(adj));
}

std::uint64_t count_by_elimination(const Strategy& s, const Hint& h, std::size_t max_factor_vars) {
  check_strategy_hint(s, h);
  std::vector<Factor> factors = vertex_factors(s);
  if (auto f = hint_factor(h)) factors.push_back(std::move(*f));
  return eliminate_all(std::move(factors), s.graph().vertex_count(), max_factor_vars);
}

std::uint64_t contract_full(const Strategy& s, const ContractionOptions& options) {
  if (s.two_guess_vertex()) throw Error("contraction is undefined for a two-guess sage");
  switch (options.method) {
    case ContractionMethod::Direct:
      return direct_sum(s, options.max_direct_vertices);
    case ContractionMethod::Elimination:
      return count_by_elimination(s, Hint::none(), options.max_factor_vars);
    case ContractionMethod::Auto:
      try {
        return count_by_elimination(s, Hint::none(), options.max_factor_vars);
      } catch (const BoundError&) {
        if (s.graph().vertex_count() > options.max_direct_vertices) throw;
        return direct_sum(s, options.max_direct_vertices);
      }
  }
  return 0;
}

std::vector<Step> motzkin_encode(std::span<const Color> colors) {
  std::vector<Step> steps;
  for (std::size_t i = 0; i + 1 < colors.size(); ++i) {
    int d = (colors[i + 1] - colors[i] + 3) % 3;
    steps.push_back(d == 0 ? Step::Flat : d == 1 ? Step::Up : Step::Down);
  }
  return steps;
}

std::vector<Color> motzkin_decode(Color start, std::span<const Step> steps) {
  if (start >= kColors) throw Error("start color must be 0, 1 or 2");
  std::vector<Color> colors{start};
  for (Step s : steps) {
    int d = s == Step::Up ? 1 : s == Step::Down ? 2 : 0;
    colors.push_back(static_cast<Color>((colors.back() + d) % 3));
  }
  return colors;
}

std::string format_steps(std::span<const Step> steps) {
  std::string out;
  for (Step s : steps) {
    if (!out.empty()) out += ' ';
    out += s == Step::Up ? "up" : s == Step::Flat ? "flat" : "down";
  }
  return out;
}

std::string render_motzkin(std::span<const Step> steps) {
  if (steps.empty()) return "\n";
  // Row of each step: up and flat draw at the current height, down one below.
  std::vector<int> row;
  int h = 0;
  int lo = 0;
  int hi = 0;
  for (Step s : steps) {
    int r = s == Step::Down ? h - 1 : h;
    row.push_back(r);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    h += s == Step::Up ? 1 : s == Step::Down ? -1 : 0;
  }
  std::ostringstream out;
  for (int r = hi; r >= lo; --r) {
    std::string line(steps.size(), ' ');
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (row[i] != r) continue;
      line[i] = steps[i] == Step::Up ? '/' : steps[i] == Step::Down ? '\\' : '_';
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

}  // namespace hats
