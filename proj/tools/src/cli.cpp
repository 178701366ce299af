#include "hats_cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "hats/construct.hpp"
#include "hats/error.hpp"
#include "hats/graph.hpp"
#include "hats/nine_vertex.hpp"
#include "hats/sat.hpp"
#include "hats/strategy.hpp"

namespace hats::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read '" + path + "'");
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Config {
  std::string graph_path;
  std::string strategy_path;
  std::string model_path;
  std::string dimacs_path;
  std::string hint;
  std::string method = "both";
  std::string solver;
  std::vector<std::string> solver_args;
  std::uint32_t internal_bound = 400;
  double time_limit = 0;
  bool no_symmetry = false;
  std::size_t max_vertices = 13;
  std::size_t synthesis_bound = 9;
  std::size_t samples = 8;
  bool no_certificate = false;
  std::string output;
  std::string family;
  std::string graph_out;
  std::string dump_vertex;
  std::string digits;
};

SolverConfig solver_config(const Config& c) {
  SolverConfig s;
  if (c.solver.empty()) {
    s = default_solver_config();
  } else if (c.solver == "internal") {
    s = internal_solver();
  } else {
    s = external_solver(c.solver, c.solver_args.empty() ? std::vector<std::string>{"{file}"} : c.solver_args);
  }
  s.internal_var_bound = c.internal_bound;
  s.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(c.time_limit * 1000));
  s.symmetry_breaking = !c.no_symmetry;
  return s;
}

void emit(const Config& c, std::ostream& out, const std::string& text) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  f << text;
  if (!f) throw Error("cannot write '" + c.output + "'");
}

std::vector<std::size_t> family_numbers(const std::string& spec, std::string& name) {
  std::vector<std::size_t> nums;
  std::stringstream s(spec);
  std::string part;
  std::getline(s, name, ':');
  while (std::getline(s, part, ':')) {
    try {
      std::size_t used = 0;
      nums.push_back(std::stoul(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("bad family parameter '" + part + "'");
    }
  }
  return nums;
}

std::vector<std::string> numbered(const std::string& first, const std::string& prefix, std::size_t count,
                                  const std::string& last = "") {
  std::vector<std::string> out;
  if (!first.empty()) out.push_back(first);
  for (std::size_t i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  if (!last.empty()) out.push_back(last);
  return out;
}

HintedStrategy build_family(const std::string& spec, const SolverConfig& solver) {
  std::string name;
  auto n = family_numbers(spec, name);
  auto need = [&](std::size_t k) {
    if (n.size() != k) throw UsageError("family '" + name + "' takes " + std::to_string(k) + " parameters");
  };
  if (name == "cycle") {
    need(1);
    if (n[0] < 3) throw UsageError("cycle length must be at least 3");
    return {cycle_pivot_strategy(numbered("A", "S", n[0] - 1)), Hint::none()};
  }
  if (name == "cycle-hint") {
    need(2);
    if (n[0] < 3 || n[1] > 2) throw UsageError("cycle-hint:N:I needs N >= 3 and I in 0..2");
    return cycle_hint_strategy(numbered("A", "S", n[0] - 1), static_cast<Color>(n[1]));
  }
  if (name == "path-neq" || name == "path-eq") {
    need(1);
    if (n[0] < 2) throw UsageError("path length must be at least 2");
    auto path = numbered("A", "P", n[0] - 2, "B");
    return name == "path-neq" ? path_neq_strategy(path) : path_eq_strategy(path);
  }
  if (name == "push") {
    need(3);
    if (n[0] < 3 || n[2] > 2) throw UsageError("push:N:T:I needs N >= 3 and I in 0..2");
    auto tail = numbered("A", "T", n[1]);
    return push_hint_along(cycle_hint_strategy(numbered("A", "S", n[0] - 1), static_cast<Color>(n[2])), tail);
  }
  if (name == "shared") {
    need(2);
    return {shared_vertex_strategy(n[0], n[1]), Hint::none()};
  }
  if (name == "theta") {
    need(3);
    return {theta_strategy(n[0], n[1], n[2], solver), Hint::none()};
  }
  if (name == "sum") {
    need(3);
    std::array<std::optional<HintedStrategy>, 3> parts;
    const char* prefix[3] = {"X", "Y", "Z"};
    for (Color j = 0; j < kColors; ++j) {
      if (n[j] < 3) throw UsageError("sum cycles need length at least 3");
      parts[j] = cycle_hint_strategy(numbered("A", prefix[j], n[j] - 1), j);
    }
    return {sum_three(*parts[0], *parts[1], *parts[2], "B"), Hint::none()};
  }
  if (name == "dumbbell") {
    need(3);
    if (n[0] < 3 || n[1] < 3 || n[2] < 1) throw UsageError("dumbbell:N1:N2:L needs N1, N2 >= 3 and L >= 1");
    std::vector<std::pair<std::string, std::string>> edges;
    auto c1 = numbered("", "X", n[0]);
    auto c2 = numbered("", "Y", n[1]);
    for (std::size_t i = 0; i < c1.size(); ++i) edges.emplace_back(c1[i], c1[(i + 1) % c1.size()]);
    for (std::size_t i = 0; i < c2.size(); ++i) edges.emplace_back(c2[i], c2[(i + 1) % c2.size()]);
    auto bridge = numbered(c1[0], "P", n[2] - 1, c2[0]);
    for (std::size_t i = 0; i + 1 < bridge.size(); ++i) edges.emplace_back(bridge[i], bridge[i + 1]);
    Graph g = Graph::from_edges({}, edges);
    auto report = structural_class(g);
    const auto& w = std::get<DisjointCyclesWitness>(*report.witness);
    return {two_disjoint_cycles_strategy(g, w), Hint::none()};
  }
  throw UsageError("unknown family '" + name + "'");
}

std::string format_report(const DisproofReport& r, std::size_t samples) {
  std::string out;
  out += "disproving " + std::to_string(r.count) + '\n';
  for (std::size_t i = 0; i < r.samples.size() && i < samples; ++i) {
    out += "placement " + format_placement(r.samples[i]) + '\n';
  }
  return out;
}

int cmd_classify(const Config& c, std::ostream& out) {
  Graph g = parse_graph(read_file(c.graph_path));
  Hint h = parse_hint(c.hint, g);
  ClassifyOptions opt;
  opt.solver = solver_config(c);
  opt.cycle_synthesis_bound = c.synthesis_bound;
  opt.certificates = !c.no_certificate;
  Verdict v = classify_hinted(g, h, opt);
  emit(c, out, format_verdict(v));
  return v.outcome == Outcome::Win ? 0 : 1;
}

int cmd_verify(const Config& c, std::ostream& out) {
  Graph g = parse_graph(read_file(c.graph_path));
  Strategy s = parse_strategy(read_file(c.strategy_path), g);
  Hint h = parse_hint(c.hint, g);
  EnumerationOptions opt;
  opt.max_vertices = c.max_vertices;
  opt.sample_limit = c.samples;
  Verification v = verify_winning(s, h, opt, false);
  emit(c, out, (v.winning ? std::string("OK\n") : std::string("REFUTED\n")) + format_report(v.report, c.samples));
  return v.winning ? 0 : 1;
}

int cmd_count(const Config& c, std::ostream& out) {
  Graph g = parse_graph(read_file(c.graph_path));
  Strategy s = parse_strategy(read_file(c.strategy_path), g);
  Hint h = parse_hint(c.hint, g);
  if (c.method != "brute" && c.method != "tensor" && c.method != "both") {
    throw UsageError("--method must be brute, tensor or both");
  }
  std::string text;
  if (!c.dump_vertex.empty()) {
    Vertex v = g.at(c.dump_vertex);
    text += format_tensor(adjacency_tensor(s, v), g);
  }
  std::optional<std::uint64_t> brute;
  std::optional<std::uint64_t> tensor;
  if (c.method != "tensor") {
    EnumerationOptions opt;
    opt.max_vertices = c.max_vertices;
    opt.sample_limit = 0;
    brute = enumerate_disproving(s, h, opt).count;
  }
  if (c.method != "brute") {
    tensor = h.is_none() && !s.two_guess_vertex() ? contract_full(s) : count_by_elimination(s, h);
  }
  if (brute && tensor) {
    text += "brute=" + std::to_string(*brute) + " tensor=" + std::to_string(*tensor) + '\n';
  } else if (brute) {
    text += "brute=" + std::to_string(*brute) + '\n';
  } else {
    text += "tensor=" + std::to_string(*tensor) + '\n';
  }
  emit(c, out, text);
  if (brute && tensor && *brute != *tensor) throw InternalError("brute force and tensor counts differ");
  return 0;
}

int cmd_encode(const Config& c, std::ostream& out) {
  Graph g = parse_graph(read_file(c.graph_path));
  Hint h = parse_hint(c.hint, g);
  Encoding enc = encode_cnf(g, h, c.max_vertices);
  emit(c, out, write_dimacs(enc.cnf, enc.map));
  return 0;
}

int cmd_decode(const Config& c, std::ostream& out) {
  Graph g = parse_graph(read_file(c.graph_path));
  Hint h = parse_hint(c.hint, g);
  std::optional<Vertex> two;
  if (h.kind() == Hint::Kind::TwoGuesses) two = h.first();
  VarMap map(g, two);
  if (!c.dimacs_path.empty()) check_var_comments(parse_var_comments(read_file(c.dimacs_path)), map);
  SolveResult r = parse_solver_output(read_file(c.model_path), map.var_count(), 0);
  if (r.status != SatStatus::Sat) throw Error("model file reports UNSATISFIABLE");
  emit(c, out, format_strategy(decode_model(map, r.assignment)));
  return 0;
}

int cmd_synthesize(const Config& c, std::ostream& out) {
  Graph g = parse_graph(read_file(c.graph_path));
  Hint h = parse_hint(c.hint, g);
  Synthesis r = synthesize(g, h, solver_config(c));
  Verdict v;
  v.outcome = r.win ? Outcome::Win : Outcome::Lose;
  v.reason = r.win ? "satisfiable" : "unsatisfiable";
  v.provenance = r.win ? "sat" : "";
  v.certificate = r.strategy;
  emit(c, out, format_verdict(v));
  return r.win ? 0 : 1;
}

int cmd_construct(const Config& c, std::ostream& out, std::ostream& err) {
  if (!c.family.empty()) {
    if (!c.graph_path.empty()) throw UsageError("give either a graph or --family, not both");
    HintedStrategy hs = build_family(c.family, solver_config(c));
    std::string text;
    if (!hs.hint.is_none()) text += "# hint " + format_hint(hs.hint, hs.strategy.graph()) + '\n';
    text += format_strategy(hs.strategy);
    if (!c.graph_out.empty()) {
      std::ofstream f(c.graph_out, std::ios::binary);
      f << format_graph(hs.strategy.graph());
      if (!f) throw Error("cannot write '" + c.graph_out + "'");
    }
    emit(c, out, text);
    return 0;
  }
  if (c.graph_path.empty()) throw UsageError("construct needs a graph file or --family");
  Graph g = parse_graph(read_file(c.graph_path));
  Hint h = parse_hint(c.hint, g);
  ClassifyOptions opt;
  opt.solver = solver_config(c);
  opt.cycle_synthesis_bound = c.synthesis_bound;
  Verdict v = classify_hinted(g, h, opt);
  if (v.outcome == Outcome::Lose) {
    err << "LOSE: " << v.reason << '\n';
    return 1;
  }
  if (!v.certificate) throw Error("no certificate available: " + v.provenance);
  emit(c, out, "# " + v.provenance + '\n' + format_strategy(*v.certificate));
  return 0;
}

int cmd_motzkin(const Config& c, std::ostream& out) {
  std::vector<Color> colors;
  for (char ch : c.digits) {
    if (ch < '0' || ch > '2') throw UsageError("motzkin takes a string of digits 0, 1, 2");
    colors.push_back(static_cast<Color>(ch - '0'));
  }
  if (colors.empty()) throw UsageError("motzkin takes a nonempty color string");
  auto steps = motzkin_encode(colors);
  emit(c, out, format_steps(steps) + '\n' + render_motzkin(steps));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"3-color hat guessing toolkit", "hats"};
  app.require_subcommand(1, 1);
  Config c;

  auto add_hint = [&](CLI::App* sub) { sub->add_option("--hint", c.hint, "A-2, A=B, A!=B or 2:A"); };
  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", c.output, "Write to a file"); };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--solver", c.solver, "'internal' or a solver executable");
    sub->add_option("--solver-arg", c.solver_args, "Argument template, {file} is the DIMACS path");
    sub->add_option("--internal-bound", c.internal_bound, "Variable bound of the internal solver")
        ->check(CLI::PositiveNumber);
    sub->add_option("--time-limit", c.time_limit, "Seconds per solver call, 0 for none")->check(CLI::NonNegativeNumber);
    sub->add_flag("--no-symmetry", c.no_symmetry, "Solve the plain encoding without color-relabeling units");
  };

  auto* classify_cmd = app.add_subcommand("classify", "WIN/LOSE verdict with certificate");
  classify_cmd->add_option("graph", c.graph_path)->required();
  add_hint(classify_cmd);
  add_solver(classify_cmd);
  add_output(classify_cmd);
  classify_cmd->add_option("--synthesis-bound", c.synthesis_bound)->check(CLI::PositiveNumber);
  classify_cmd->add_flag("--no-certificate", c.no_certificate);

  auto* verify_cmd = app.add_subcommand("verify", "Check a strategy by brute force");
  verify_cmd->add_option("graph", c.graph_path)->required();
  verify_cmd->add_option("strategy", c.strategy_path)->required();
  add_hint(verify_cmd);
  add_output(verify_cmd);
  verify_cmd->add_option("--samples", c.samples);
  verify_cmd->add_option("--max-vertices", c.max_vertices)->check(CLI::PositiveNumber);

  auto* count_cmd = app.add_subcommand("count", "Count disproving placements");
  count_cmd->add_option("graph", c.graph_path)->required();
  count_cmd->add_option("strategy", c.strategy_path)->required();
  count_cmd->add_option("--method", c.method, "brute, tensor or both");
  count_cmd->add_option("--dump", c.dump_vertex, "Print the adjacency tensor of a vertex");
  count_cmd->add_option("--max-vertices", c.max_vertices)->check(CLI::PositiveNumber);
  add_hint(count_cmd);
  add_output(count_cmd);

  auto* encode_cmd = app.add_subcommand("encode", "Write the DIMACS encoding");
  encode_cmd->add_option("graph", c.graph_path)->required();
  encode_cmd->add_option("--max-vertices", c.max_vertices)->check(CLI::PositiveNumber);
  add_hint(encode_cmd);
  add_output(encode_cmd);

  auto* decode_cmd = app.add_subcommand("decode", "Turn a solver model into a strategy");
  decode_cmd->add_option("graph", c.graph_path)->required();
  decode_cmd->add_option("model", c.model_path)->required();
  decode_cmd->add_option("--dimacs", c.dimacs_path, "Check the variable map comments of this file");
  add_hint(decode_cmd);
  add_output(decode_cmd);

  auto* synth_cmd = app.add_subcommand("synthesize", "Search a winning strategy by SAT");
  synth_cmd->add_option("graph", c.graph_path)->required();
  add_hint(synth_cmd);
  add_solver(synth_cmd);
  add_output(synth_cmd);

  auto* construct_cmd = app.add_subcommand("construct", "Build a strategy from the constructions");
  construct_cmd->add_option("graph", c.graph_path);
  construct_cmd->add_option("--family", c.family,
                            "cycle:N, cycle-hint:N:I, path-neq:N, path-eq:N, push:N:T:I, shared:K:M, "
                            "theta:U:M:L, sum:N0:N1:N2, dumbbell:N1:N2:L");
  construct_cmd->add_option("--graph-out", c.graph_out, "Write the family graph");
  construct_cmd->add_option("--synthesis-bound", c.synthesis_bound)->check(CLI::PositiveNumber);
  add_hint(construct_cmd);
  add_solver(construct_cmd);
  add_output(construct_cmd);

  auto* motzkin_cmd = app.add_subcommand("motzkin", "Steps and lattice path of a color string");
  motzkin_cmd->add_option("colors", c.digits)->required();
  add_output(motzkin_cmd);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(c, out);
    if (verify_cmd->parsed()) return cmd_verify(c, out);
    if (count_cmd->parsed()) return cmd_count(c, out);
    if (encode_cmd->parsed()) return cmd_encode(c, out);
    if (decode_cmd->parsed()) return cmd_decode(c, out);
    if (synth_cmd->parsed()) return cmd_synthesize(c, out);
    if (construct_cmd->parsed()) return cmd_construct(c, out, err);
    if (motzkin_cmd->parsed()) return cmd_motzkin(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace hats::cli
