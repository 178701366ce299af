#include "hats/strategy.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "hats/error.hpp"

namespace hats {

std::uint64_t pow3(std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(r, std::uint64_t{3}, &r)) throw OverflowError("3^k exceeds 64 bits");
  }
  return r;
}

Color GuessSet::first() const {
  for (Color c = 0; c < kColors; ++c) {
    if (contains(c)) return c;
  }
  throw Error("empty guess set");
}

std::string GuessSet::to_string() const {
  std::string s;
  for (Color c = 0; c < kColors; ++c) {
    if (contains(c)) s += static_cast<char>('0' + c);
  }
  return s;
}

std::uint64_t placement_index(const Placement& p) {
  std::uint64_t idx = 0;
  for (Color c : p.colors) idx = idx * 3 + c;
  return idx;
}

Placement placement_from_index(std::uint64_t index, std::size_t vertex_count) {
  Placement p;
  p.colors.assign(vertex_count, 0);
  for (std::size_t i = vertex_count; i-- > 0;) {
    p.colors[i] = static_cast<Color>(index % 3);
    index /= 3;
  }
  return p;
}

std::string format_placement(const Placement& p) {
  std::string s;
  for (Color c : p.colors) s += static_cast<char>('0' + c);
  return s;
}

Placement parse_placement(std::string_view text, const Graph& g) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  constexpr std::string_view kPrefix = "placement";
  if (text.substr(0, kPrefix.size()) == kPrefix) {
    text.remove_prefix(kPrefix.size());
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  }
  if (text.size() != g.vertex_count()) {
    throw Error("placement has " + std::to_string(text.size()) + " digits, graph has " +
                std::to_string(g.vertex_count()) + " vertices");
  }
  Placement p;
  for (char ch : text) {
    if (ch < '0' || ch > '2') throw Error("placement digit must be 0, 1 or 2");
    p.colors.push_back(static_cast<Color>(ch - '0'));
  }
  return p;
}

Hint Hint::minus(Vertex v, Color forbidden) {
  if (forbidden >= kColors) throw Error("hint color must be 0, 1 or 2");
  Hint h;
  h.kind_ = Kind::Minus;
  h.first_ = v;
  h.color_ = forbidden;
  return h;
}

Hint Hint::equal(Vertex u, Vertex v) {
  if (u == v) throw Error("Equal hint needs two distinct vertices");
  Hint h;
  h.kind_ = Kind::Equal;
  h.first_ = u;
  h.second_ = v;
  return h;
}

Hint Hint::not_equal(Vertex u, Vertex v) {
  if (u == v) throw Error("NotEqual hint needs two distinct vertices");
  Hint h;
  h.kind_ = Kind::NotEqual;
  h.first_ = u;
  h.second_ = v;
  return h;
}

Hint Hint::two_guesses(Vertex v) {
  Hint h;
  h.kind_ = Kind::TwoGuesses;
  h.first_ = v;
  return h;
}

bool Hint::admits(std::span<const Color> colors) const {
  switch (kind_) {
    case Kind::Minus:
      return colors[first_] != color_;
    case Kind::Equal:
      return colors[first_] == colors[second_];
    case Kind::NotEqual:
      return colors[first_] != colors[second_];
    case Kind::None:
    case Kind::TwoGuesses:
      return true;
  }
  return true;
}

Hint parse_hint(std::string_view text, const Graph& g) {
  if (text.empty() || text == "none") return Hint::none();
  if (text.size() > 2 && text.substr(0, 2) == "2:") return Hint::two_guesses(g.at(text.substr(2)));
  if (auto p = text.find("!="); p != std::string_view::npos) {
    return Hint::not_equal(g.at(text.substr(0, p)), g.at(text.substr(p + 2)));
  }
  if (auto p = text.find('='); p != std::string_view::npos) {
    return Hint::equal(g.at(text.substr(0, p)), g.at(text.substr(p + 1)));
  }
  if (text.size() >= 3 && text[text.size() - 2] == '-') {
    char c = text.back();
    if (c < '0' || c > '2') throw Error("hint color must be 0, 1 or 2");
    return Hint::minus(g.at(text.substr(0, text.size() - 2)), static_cast<Color>(c - '0'));
  }
  throw Error("unrecognized hint '" + std::string(text) + "'");
}

std::string format_hint(const Hint& h, const Graph& g) {
  switch (h.kind()) {
    case Hint::Kind::None:
      return "none";
    case Hint::Kind::Minus:
      return g.name(h.first()) + "-" + std::to_string(h.color());
    case Hint::Kind::Equal:
      return g.name(h.first()) + "=" + g.name(h.second());
    case Hint::Kind::NotEqual:
      return g.name(h.first()) + "!=" + g.name(h.second());
    case Hint::Kind::TwoGuesses:
      return "2:" + g.name(h.first());
  }
  return "none";
}

void check_hint(const Hint& h, const Graph& g) {
  if (h.is_none()) return;
  if (h.first() >= g.vertex_count()) throw Error("hint references an unknown vertex");
  if ((h.kind() == Hint::Kind::Equal || h.kind() == Hint::Kind::NotEqual) && h.second() >= g.vertex_count()) {
    throw Error("hint references an unknown vertex");
  }
}

bool admissible(const Hint& h, const Placement& p) { return h.admits(p.colors); }

Strategy::Strategy(Graph g, std::vector<std::vector<GuessSet>> tables)
    : graph_(std::move(g)), tables_(std::move(tables)) {
  if (tables_.size() != graph_.vertex_count()) throw Error("strategy needs one table per vertex");
  for (Vertex v = 0; v < graph_.vertex_count(); ++v) {
    const auto& t = tables_[v];
    if (t.size() != pow3(graph_.degree(v))) {
      throw Error("table of '" + graph_.name(v) + "' must have 3^deg cells");
    }
    int size = t.front().size();
    if (size < 1 || size > 2) throw Error("guess sets must hold one or two colors");
    for (const auto& cell : t) {
      if (cell.size() != size) {
        throw Error("cells of '" + graph_.name(v) + "' must all have the same size");
      }
    }
    if (size == 2) {
      if (two_guess_) throw Error("at most one sage may make two guesses");
      two_guess_ = v;
    }
  }
}

Strategy Strategy::tabulate(Graph g, const std::function<GuessSet(Vertex, std::span<const Color>)>& f) {
  std::vector<std::vector<GuessSet>> tables(g.vertex_count());
  std::vector<Color> colors;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const std::size_t d = g.degree(v);
    const std::uint64_t cells = pow3(d);
    tables[v].resize(cells);
    colors.assign(d, 0);
    for (std::uint64_t idx = 0; idx < cells; ++idx) {
      std::uint64_t x = idx;
      for (std::size_t j = d; j-- > 0;) {
        colors[j] = static_cast<Color>(x % 3);
        x /= 3;
      }
      tables[v][idx] = f(v, colors);
    }
  }
  return Strategy(std::move(g), std::move(tables));
}

std::size_t Strategy::cell_index(Vertex v, std::span<const Color> colors) const {
  std::size_t idx = 0;
  for (Vertex u : graph_.neighbors(v)) idx = idx * 3 + colors[u];
  return idx;
}

GuessSet Strategy::guess_by_name(std::string_view id,
                                 const std::function<Color(std::string_view)>& color_of) const {
  Vertex v = graph_.at(id);
  std::size_t idx = 0;
  for (Vertex u : graph_.neighbors(v)) idx = idx * 3 + color_of(graph_.name(u));
  return tables_[v][idx];
}

std::string format_strategy(const Strategy& s) {
  std::ostringstream out;
  const Graph& g = s.graph();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    out << "strategy " << g.name(v) << " |";
    for (Vertex u : g.neighbors(v)) out << ' ' << g.name(u);
    out << " |";
    for (const auto& cell : s.table(v)) out << ' ' << cell.to_string();
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Strategy parse_strategy(std::string_view text, const Graph& g) {
  std::vector<std::optional<std::vector<GuessSet>>> tables(g.vertex_count());
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto bar1 = view.find('|');
    if (words(view).empty()) continue;
    if (bar1 == std::string_view::npos) throw ParseError(line_no, "expected 'strategy <id> | <neighbors> | <cells>'");
    auto bar2 = view.find('|', bar1 + 1);
    if (bar2 == std::string_view::npos) throw ParseError(line_no, "missing second '|'");
    auto head = words(view.substr(0, bar1));
    if (head.size() != 2 || head[0] != "strategy") throw ParseError(line_no, "expected 'strategy <id>'");
    auto v = g.find(head[1]);
    if (!v) throw ParseError(line_no, "unknown vertex '" + std::string(head[1]) + "'");
    if (tables[*v]) throw ParseError(line_no, "duplicate strategy for '" + std::string(head[1]) + "'");
    auto nbrs = words(view.substr(bar1 + 1, bar2 - bar1 - 1));
    auto expected = canonical_neighbors(g, head[1]);
    if (nbrs.size() != expected.size() || !std::equal(nbrs.begin(), nbrs.end(), expected.begin())) {
      throw ParseError(line_no, "neighbor list of '" + std::string(head[1]) + "' is not canonical");
    }
    auto cells = words(view.substr(bar2 + 1));
    if (cells.size() != pow3(expected.size())) {
      throw ParseError(line_no, "expected " + std::to_string(pow3(expected.size())) + " cells");
    }
    std::vector<GuessSet> table;
    for (auto tok : cells) {
      std::uint8_t mask = 0;
      if (tok.size() > 2) throw ParseError(line_no, "cell must hold one or two colors");
      for (char ch : tok) {
        if (ch < '0' || ch > '2') throw ParseError(line_no, "cell digits must be 0, 1 or 2");
        auto bit = static_cast<std::uint8_t>(1U << (ch - '0'));
        if (mask & bit) throw ParseError(line_no, "repeated color in cell");
        mask |= bit;
      }
      table.push_back(GuessSet::from_mask(mask));
    }
    tables[*v] = std::move(table);
  }
  std::vector<std::vector<GuessSet>> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!tables[v]) throw ParseError(0, "missing strategy for '" + g.name(v) + "'");
    out.push_back(std::move(*tables[v]));
  }
  try {
    return Strategy(g, std::move(out));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

namespace {

void check_placement(const Strategy& s, const Placement& p) {
  if (p.colors.size() != s.graph().vertex_count()) throw Error("placement does not match the strategy's graph");
  for (Color c : p.colors) {
    if (c >= kColors) throw Error("placement color out of range");
  }
}

}  // namespace

GuessSet evaluate_guess(const Strategy& s, std::string_view v, const Placement& p) {
  check_placement(s, p);
  return s.guess(s.graph().at(v), p.colors);
}

bool is_disproving(const Strategy& s, const Placement& p) {
  check_placement(s, p);
  for (Vertex v = 0; v < s.graph().vertex_count(); ++v) {
    if (s.guess(v, p.colors).contains(p.colors[v])) return false;
  }
  return true;
}

void check_strategy_hint(const Strategy& s, const Hint& h) {
  check_hint(h, s.graph());
  auto two = s.two_guess_vertex();
  if (h.kind() == Hint::Kind::TwoGuesses) {
    if (two != h.first()) throw Error("TwoGuesses hint needs two-color cells at exactly the hinted sage");
  } else if (two) {
    throw Error("two-color cells are only allowed under a TwoGuesses hint");
  }
}

namespace {

// Flat per-vertex lookup data for the enumeration inner loop.
struct FlatStrategy {
  std::vector<std::uint32_t> offsets;     // table start per vertex
  std::vector<std::uint8_t> masks;        // concatenated cell masks
  std::vector<std::uint32_t> nbr_begin;   // into nbrs
  std::vector<Vertex> nbrs;

  explicit FlatStrategy(const Strategy& s) {
    const Graph& g = s.graph();
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      offsets.push_back(static_cast<std::uint32_t>(masks.size()));
      for (const auto& cell : s.table(v)) masks.push_back(cell.mask());
      nbr_begin.push_back(static_cast<std::uint32_t>(nbrs.size()));
      for (Vertex u : g.neighbors(v)) nbrs.push_back(u);
    }
    nbr_begin.push_back(static_cast<std::uint32_t>(nbrs.size()));
  }

  bool disproving(const Color* colors, std::size_t n) const {
    for (std::size_t v = 0; v < n; ++v) {
      std::uint32_t idx = 0;
      for (std::uint32_t k = nbr_begin[v]; k < nbr_begin[v + 1]; ++k) idx = idx * 3 + colors[nbrs[k]];
      if ((masks[offsets[v] + idx] >> colors[v]) & 1U) return false;
    }
    return true;
  }
};

struct RangeResult {
  std::uint64_t count = 0;
  std::vector<Placement> samples;
};

void scan_range(const FlatStrategy& flat, const Hint& h, std::size_t n, std::uint64_t begin, std::uint64_t end,
                std::size_t sample_limit, bool early_exit, std::atomic<bool>& stop, RangeResult& out) {
  Placement p = placement_from_index(begin, n);
  std::vector<Color>& c = p.colors;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    if (early_exit && (idx & 1023U) == 0 && stop.load(std::memory_order_relaxed)) return;
    if (h.admits(c) && flat.disproving(c.data(), n)) {
      ++out.count;
      if (out.samples.size() < sample_limit) out.samples.push_back(p);
      if (early_exit) {
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++c[i] < 3) break;
      c[i] = 0;
    }
  }
}

DisproofReport run_enumeration(const Strategy& s, const Hint& h, const EnumerationOptions& options,
                               bool early_exit) {
  check_strategy_hint(s, h);
  const std::size_t n = s.graph().vertex_count();
  if (n > options.max_vertices) {
    throw BoundError("brute force limited to " + std::to_string(options.max_vertices) + " vertices, graph has " +
                     std::to_string(n));
  }
  const std::uint64_t total = pow3(n);
  FlatStrategy flat(s);
  unsigned threads = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  if (total < (1U << 16)) threads = 1;
  std::vector<RangeResult> parts(threads);
  std::atomic<bool> stop{false};
  const std::size_t limit = early_exit ? std::max<std::size_t>(1, options.sample_limit) : options.sample_limit;
  if (threads == 1) {
    scan_range(flat, h, n, 0, total, limit, early_exit, stop, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      std::uint64_t b = total * t / threads;
      std::uint64_t e = total * (t + 1) / threads;
      pool.emplace_back([&, b, e, t] { scan_range(flat, h, n, b, e, limit, early_exit, stop, parts[t]); });
    }
    for (auto& th : pool) th.join();
  }
  DisproofReport report;
  for (auto& part : parts) {
    report.count += part.count;
    for (auto& sample : part.samples) {
      if (report.samples.size() < limit) report.samples.push_back(std::move(sample));
    }
    if (early_exit && report.count > 0) break;
  }
  if (early_exit && report.count > 1) report.count = 1;
  return report;
}

}  // namespace

DisproofReport enumerate_disproving(const Strategy& s, const Hint& h, const EnumerationOptions& options) {
  return run_enumeration(s, h, options, false);
}

Verification verify_winning(const Strategy& s, const Hint& h, const EnumerationOptions& options, bool early_exit) {
  Verification v;
  v.report = run_enumeration(s, h, options, early_exit);
  v.winning = v.report.count == 0;
  return v;
}

Strategy permute_colors(const Strategy& s, const ColorPermutation& pi) {
  ColorPermutation inv{};
  std::array<bool, 3> hit{false, false, false};
  for (Color c = 0; c < kColors; ++c) {
    if (pi[c] >= kColors || hit[pi[c]]) throw Error("not a permutation of {0,1,2}");
    hit[pi[c]] = true;
    inv[pi[c]] = c;
  }
  return Strategy::tabulate(s.graph(), [&](Vertex v, std::span<const Color> seen) {
    std::size_t idx = 0;
    for (Color c : seen) idx = idx * 3 + inv[c];
    GuessSet old = s.table(v)[idx];
    std::uint8_t mask = 0;
    for (Color c = 0; c < kColors; ++c) {
      if (old.contains(c)) mask |= static_cast<std::uint8_t>(1U << pi[c]);
    }
    return GuessSet::from_mask(mask);
  });
}

ColorPermutation swap_colors(Color a, Color b) {
  ColorPermutation pi{0, 1, 2};
  std::swap(pi.at(a), pi.at(b));
  return pi;
}

std::vector<GuessSet> reorder_axes(std::span<const GuessSet> table, std::span<const std::string> old_order,
                                   std::span<const std::string> new_order) {
  const std::size_t d = old_order.size();
  if (new_order.size() != d || table.size() != pow3(d)) throw Error("reorder_axes: order mismatch");
  std::vector<std::size_t> where(d);  // position in old_order of new_order[j]
  for (std::size_t j = 0; j < d; ++j) {
    auto it = std::find(old_order.begin(), old_order.end(), new_order[j]);
    if (it == old_order.end()) throw Error("reorder_axes: order mismatch");
    where[j] = static_cast<std::size_t>(it - old_order.begin());
  }
  std::vector<std::size_t> sorted = where;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("reorder_axes: order mismatch");

  std::vector<std::uint64_t> old_weight(d);
  for (std::size_t i = 0; i < d; ++i) old_weight[i] = pow3(d - 1 - i);
  std::vector<GuessSet> out(table.size());
  std::vector<Color> digits(d, 0);
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    std::uint64_t x = idx;
    for (std::size_t j = d; j-- > 0;) {
      digits[j] = static_cast<Color>(x % 3);
      x /= 3;
    }
    std::uint64_t old_idx = 0;
    for (std::size_t j = 0; j < d; ++j) old_idx += digits[j] * old_weight[where[j]];
    out[idx] = table[old_idx];
  }
  return out;
}

std::optional<Strategy> search_all_strategies(const Graph& g, const Hint& h, std::uint64_t max_space) {
  check_hint(h, g);
  const std::size_t n = g.vertex_count();
  std::optional<Vertex> two;
  if (h.kind() == Hint::Kind::TwoGuesses) two = h.first();
  // Each cell has three choices either way: a color, or the pair avoiding it.
  std::size_t total_cells = 0;
  for (Vertex v = 0; v < n; ++v) total_cells += pow3(g.degree(v));
  double log_space = static_cast<double>(total_cells) * std::log10(3.0);
  if (log_space > std::log10(static_cast<double>(max_space)) + 1e-12) {
    throw BoundError("strategy space 3^" + std::to_string(total_cells) + " exceeds the search bound");
  }
  if (n > 13) throw BoundError("brute force limited to 13 vertices");

  std::vector<Color> digits(total_cells, 0);
  std::vector<std::size_t> base(n);
  for (Vertex v = 0, off = 0; v < n; ++v) {
    base[v] = off;
    off += pow3(g.degree(v));
  }
  auto cell = [&](Vertex v, std::size_t idx) {
    Color d = digits[base[v] + idx];
    return (two && *two == v) ? GuessSet::all_but(d) : GuessSet::of(d);
  };
  const std::uint64_t placements = pow3(n);
  std::vector<Color> colors(n);
  while (true) {
    bool winning = true;
    std::fill(colors.begin(), colors.end(), 0);
    for (std::uint64_t p = 0; p < placements && winning; ++p) {
      if (h.admits(colors)) {
        bool someone = false;
        for (Vertex v = 0; v < n && !someone; ++v) {
          std::size_t idx = 0;
          for (Vertex u : g.neighbors(v)) idx = idx * 3 + colors[u];
          someone = cell(v, idx).contains(colors[v]);
        }
        if (!someone) winning = false;
      }
      for (std::size_t i = n; i-- > 0;) {
        if (++colors[i] < 3) break;
        colors[i] = 0;
      }
    }
    if (winning) {
      return Strategy::tabulate(g, [&](Vertex v, std::span<const Color> seen) {
        std::size_t idx = 0;
        for (Color c : seen) idx = idx * 3 + c;
        return cell(v, idx);
      });
    }
    std::size_t i = total_cells;
    while (i-- > 0) {
      if (++digits[i] < 3) break;
      digits[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return std::nullopt;
  }
}

Strategy transplant(const Strategy& sub, const Graph& target, Color fallback) {
  const Graph& sg = sub.graph();
  return Strategy::tabulate(target, [&](Vertex v, std::span<const Color> seen) {
    const auto& id = target.name(v);
    if (!sg.find(id)) return GuessSet::of(fallback);
    auto nbrs = target.neighbors(v);
    return sub.guess_by_name(id, [&](std::string_view other) {
      Vertex u = target.at(other);
      auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
      if (it == nbrs.end() || *it != u) throw Error("transplant: '" + std::string(other) + "' is not a neighbor in the target");
      return seen[static_cast<std::size_t>(it - nbrs.begin())];
    });
  });
}

Strategy relabel(const Strategy& s, const std::map<std::string, std::string>& rename) {
  const Graph& g = s.graph();
  auto map_name = [&](const std::string& id) {
    auto it = rename.find(id);
    return it == rename.end() ? id : it->second;
  };
  std::vector<std::string> names;
  for (const auto& id : g.names()) names.push_back(map_name(id));
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : g.edges()) edges.emplace_back(map_name(g.name(e.u)), map_name(g.name(e.v)));
  Graph target = Graph::from_edges(names, edges);
  if (target.vertex_count() != g.vertex_count()) throw Error("relabel: names must stay distinct");
  std::map<std::string, std::string> back;
  for (const auto& id : g.names()) back[map_name(id)] = id;
  return Strategy::tabulate(target, [&](Vertex v, std::span<const Color> seen) {
    auto nbrs = target.neighbors(v);
    return s.guess_by_name(back.at(target.name(v)), [&](std::string_view other) {
      Vertex u = target.at(map_name(std::string(other)));
      auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
      return seen[static_cast<std::size_t>(it - nbrs.begin())];
    });
  });
}

}  // namespace hats
