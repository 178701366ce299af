#include "hats/sat.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "hats/error.hpp"

extern char** environ;

namespace hats {

VarMap::VarMap(const Graph& g, std::optional<Vertex> two_guess) : graph_(g), two_guess_(two_guess) {
  std::uint64_t total = 0;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    bases_.push_back(static_cast<std::uint32_t>(total));
    total += pow3(g.degree(u) + 1);
    if (total > INT32_MAX) throw BoundError("too many variables for DIMACS");
  }
  var_count_ = static_cast<std::uint32_t>(total);
}

std::uint32_t VarMap::id(Vertex u, Color alpha, std::uint64_t beta) const {
  const std::uint64_t cells = pow3(graph_.degree(u));
  if (alpha >= kColors || beta >= cells) throw Error("variable index out of range");
  return bases_.at(u) + static_cast<std::uint32_t>(alpha * cells + beta) + 1;
}

VarKey VarMap::key(std::uint32_t id) const {
  if (id == 0 || id > var_count_) throw Error("variable id out of range");
  auto it = std::upper_bound(bases_.begin(), bases_.end(), id - 1);
  auto u = static_cast<Vertex>(it - bases_.begin() - 1);
  const std::uint64_t off = id - 1 - bases_[u];
  const std::uint64_t cells = pow3(graph_.degree(u));
  return {u, static_cast<Color>(off / cells), off % cells};
}

Encoding encode_cnf(const Graph& g, const Hint& h, std::size_t max_vertices) {
  check_hint(h, g);
  const std::size_t n = g.vertex_count();
  if (n > max_vertices) {
    throw BoundError("encoding limited to " + std::to_string(max_vertices) + " vertices, graph has " +
                     std::to_string(n));
  }
  std::optional<Vertex> two;
  if (h.kind() == Hint::Kind::TwoGuesses) two = h.first();
  Encoding enc{Cnf{}, VarMap(g, two)};
  const VarMap& map = enc.map;
  auto& clauses = enc.cnf.clauses;
  enc.cnf.var_count = map.var_count();
  for (Vertex u = 0; u < n; ++u) {
    const std::uint64_t cells = pow3(g.degree(u));
    for (std::uint64_t beta = 0; beta < cells; ++beta) {
      const int m0 = static_cast<int>(map.id(u, 0, beta));
      const int m1 = static_cast<int>(map.id(u, 1, beta));
      const int m2 = static_cast<int>(map.id(u, 2, beta));
      if (two == u) {
        clauses.push_back({m0, m1, m2});
        clauses.push_back({-m0, -m1});
        clauses.push_back({-m0, -m2});
        clauses.push_back({-m1, -m2});
      } else {
        clauses.push_back({-m0, -m1, -m2});
        clauses.push_back({m0, m1});
        clauses.push_back({m0, m2});
        clauses.push_back({m1, m2});
      }
    }
  }
  const std::uint64_t placements = pow3(n);
  std::vector<Color> c(n, 0);
  for (std::uint64_t p = 0; p < placements; ++p) {
    if (h.admits(c)) {
      std::vector<int> clause;
      clause.reserve(n);
      for (Vertex u = 0; u < n; ++u) {
        std::uint64_t beta = 0;
        for (Vertex w : g.neighbors(u)) beta = beta * 3 + c[w];
        clause.push_back(-static_cast<int>(map.id(u, c[u], beta)));
      }
      clauses.push_back(std::move(clause));
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++c[i] < 3) break;
      c[i] = 0;
    }
  }
  return enc;
}

namespace {

std::string beta_digits(std::uint64_t beta, std::size_t degree) {
  std::string s(degree, '0');
  for (std::size_t j = degree; j-- > 0;) {
    s[j] = static_cast<char>('0' + beta % 3);
    beta /= 3;
  }
  return s;
}

}  // namespace

std::string write_dimacs(const Cnf& cnf, const VarMap& map) {
  std::string out;
  out.reserve(cnf.clauses.size() * 24 + map.var_count() * 24);
  const Graph& g = map.graph();
  for (std::uint32_t id = 1; id <= map.var_count(); ++id) {
    VarKey k = map.key(id);
    std::string digits = beta_digits(k.beta, g.degree(k.vertex));
    out += "c var " + std::to_string(id) + ' ' + g.name(k.vertex) + ' ' + std::to_string(k.alpha) + ' ' +
           (digits.empty() ? "-" : digits) + '\n';
  }
  out += "p cnf " + std::to_string(cnf.var_count) + ' ' + std::to_string(cnf.clauses.size()) + '\n';
  for (const auto& clause : cnf.clauses) {
    for (int l : clause) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

std::vector<VarComment> parse_var_comments(std::string_view dimacs) {
  std::vector<VarComment> out;
  std::istringstream in{std::string(dimacs)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("c var ", 0) != 0) continue;
    std::istringstream fields(line.substr(6));
    VarComment c;
    int alpha = -1;
    std::string beta;
    std::string extra;
    if (!(fields >> c.id >> c.vertex >> alpha >> beta) || (fields >> extra) || alpha < 0 || alpha > 2) {
      throw ParseError(line_no, "malformed variable comment");
    }
    c.alpha = static_cast<Color>(alpha);
    c.beta = beta == "-" ? "" : beta;
    for (char ch : c.beta) {
      if (ch < '0' || ch > '2') throw ParseError(line_no, "malformed variable comment");
    }
    out.push_back(std::move(c));
  }
  return out;
}

void check_var_comments(std::span<const VarComment> comments, const VarMap& map) {
  if (comments.size() != map.var_count()) throw Error("variable comments do not cover the map");
  const Graph& g = map.graph();
  for (const auto& c : comments) {
    VarKey k = map.key(c.id);
    if (g.name(k.vertex) != c.vertex || k.alpha != c.alpha || beta_digits(k.beta, g.degree(k.vertex)) != c.beta) {
      throw Error("variable comment for id " + std::to_string(c.id) + " does not match the graph");
    }
  }
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t declared = 0;
  std::vector<int> current;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream fields(line);
    if (line[0] == 'p') {
      std::string p;
      std::string fmt;
      if (header || !(fields >> p >> fmt >> cnf.var_count >> declared) || fmt != "cnf") {
        throw ParseError(line_no, "malformed problem line");
      }
      header = true;
      continue;
    }
    if (!header) throw ParseError(line_no, "clause before problem line");
    long long lit;
    while (fields >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (static_cast<unsigned long long>(std::llabs(lit)) > cnf.var_count) {
          throw ParseError(line_no, "literal exceeds variable count");
        }
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!fields.eof()) throw ParseError(line_no, "malformed clause");
  }
  if (!header) throw ParseError(line_no, "missing problem line");
  if (!current.empty()) throw ParseError(line_no, "unterminated clause");
  if (cnf.clauses.size() != declared) throw ParseError(line_no, "clause count differs from header");
  return cnf;
}

SolverConfig internal_solver(std::uint32_t var_bound) {
  SolverConfig c;
  c.kind = SolverConfig::Kind::Internal;
  c.internal_var_bound = var_bound;
  return c;
}

SolverConfig external_solver(std::string executable, std::vector<std::string> arguments) {
  SolverConfig c;
  c.kind = SolverConfig::Kind::External;
  c.executable = std::move(executable);
  c.arguments = std::move(arguments);
  return c;
}

SolverConfig default_solver_config() {
  const char* env = std::getenv("HATS_SAT_SOLVER");
  if (env && *env) return external_solver(env);
  return internal_solver();
}

SolveResult parse_solver_output(std::string_view output, std::uint32_t var_count, int exit_code) {
  std::optional<SatStatus> status;
  std::vector<bool> assignment(var_count + 1, false);
  std::vector<bool> assigned(var_count + 1, false);
  std::istringstream in{std::string(output)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("s ", 0) == 0) {
      std::string word = line.substr(2);
      if (word == "SATISFIABLE") {
        status = SatStatus::Sat;
      } else if (word == "UNSATISFIABLE") {
        status = SatStatus::Unsat;
      } else {
        throw SolverError("solver reported '" + word + "'");
      }
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream fields(line.substr(1));
      long long lit;
      while (fields >> lit) {
        if (lit == 0) continue;
        auto v = static_cast<std::uint64_t>(std::llabs(lit));
        if (v > var_count) throw SolverError("solver assignment mentions an unknown variable");
        assignment[v] = lit > 0;
        assigned[v] = true;
      }
      if (!fields.eof()) throw SolverError("malformed 'v' line");
    }
  }
  if (exit_code != 0 && exit_code != 10 && exit_code != 20) {
    throw SolverError("solver exited with status " + std::to_string(exit_code));
  }
  if (!status) {
    if (exit_code == 10) throw SolverError("solver exited SAT without an 's' line");
    if (exit_code == 20) {
      status = SatStatus::Unsat;
    } else {
      throw SolverError("solver output has no 's' line");
    }
  }
  if ((exit_code == 10 && *status != SatStatus::Sat) || (exit_code == 20 && *status != SatStatus::Unsat)) {
    throw SolverError("solver exit status contradicts its 's' line");
  }
  SolveResult result;
  result.status = *status;
  if (*status == SatStatus::Sat) {
    for (std::uint32_t v = 1; v <= var_count; ++v) {
      if (!assigned[v]) throw SolverError("solver assignment is incomplete");
    }
    result.assignment = std::move(assignment);
  }
  return result;
}

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* stem) {
    std::string tmpl = (std::filesystem::temp_directory_path() / (std::string(stem) + "-XXXXXX")).string();
    int fd = mkstemp(tmpl.data());
    if (fd < 0) throw SolverError("cannot create a temporary file");
    close(fd);
    path = tmpl;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
};

}  // namespace

SolveResult run_solver(const Cnf& cnf, const std::string& dimacs, const SolverConfig& config) {
  if (config.kind == SolverConfig::Kind::Internal) return internal_solve(cnf, config.internal_var_bound, config.time_limit);
  if (config.executable.empty()) throw SolverError("no solver executable configured");

  TempFile input("hats-cnf");
  TempFile output("hats-out");
  {
    std::ofstream f(input.path, std::ios::binary);
    f << dimacs;
    if (!f) throw SolverError("cannot write the DIMACS file");
  }
  std::vector<std::string> args{config.executable};
  bool used_file = false;
  for (const auto& a : config.arguments) {
    std::string arg = a;
    if (auto pos = arg.find("{file}"); pos != std::string::npos) {
      arg.replace(pos, 6, input.path.string());
      used_file = true;
    }
    args.push_back(arg);
  }
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  const std::string out_path = output.path.string();
  const std::string in_path = used_file ? std::string("/dev/null") : input.path.string();
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, in_path.c_str(), O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, out_path.c_str(), O_WRONLY | O_TRUNC, 0);
  pid_t pid;
  int rc = posix_spawnp(&pid, config.executable.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw SolverError("cannot start solver '" + config.executable + "'");
  int status = 0;
  if (config.time_limit.count() > 0) {
    auto deadline = std::chrono::steady_clock::now() + config.time_limit;
    while (true) {
      pid_t done = waitpid(pid, &status, WNOHANG);
      if (done < 0) throw SolverError("lost track of the solver process");
      if (done == pid) break;
      if (std::chrono::steady_clock::now() > deadline) {
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
        throw SolverError("solver '" + config.executable + "' exceeded its time limit");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  } else if (waitpid(pid, &status, 0) < 0) {
    throw SolverError("lost track of the solver process");
  }
  if (!WIFEXITED(status)) throw SolverError("solver terminated abnormally");
  std::ifstream f(output.path, std::ios::binary);
  std::stringstream text;
  text << f.rdbuf();
  if (WEXITSTATUS(status) == 127 && text.str().empty()) {
    throw SolverError("solver '" + config.executable + "' could not be executed");
  }
  return parse_solver_output(text.str(), cnf.var_count, WEXITSTATUS(status));
}

Strategy decode_model(const VarMap& map, const std::vector<bool>& assignment) {
  if (assignment.size() != map.var_count() + 1) throw Error("assignment does not match the variable map");
  const Graph& g = map.graph();
  std::vector<std::vector<GuessSet>> tables(g.vertex_count());
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    const bool two = map.two_guess_vertex() == u;
    const std::uint64_t cells = pow3(g.degree(u));
    for (std::uint64_t beta = 0; beta < cells; ++beta) {
      std::uint8_t mask = 0;
      int falses = 0;
      for (Color a = 0; a < kColors; ++a) {
        if (!assignment[map.id(u, a, beta)]) {
          mask |= static_cast<std::uint8_t>(1U << a);
          ++falses;
        }
      }
      if (falses != (two ? 2 : 1)) {
        throw Error("assignment violates the restriction clauses at sage '" + g.name(u) + "'");
      }
      tables[u].push_back(GuessSet::from_mask(mask));
    }
  }
  return Strategy(g, std::move(tables));
}

std::vector<std::vector<int>> symmetry_units(const VarMap& map, const Hint& h) {
  const Graph& g = map.graph();
  std::vector<char> fixed(g.vertex_count(), 0);
  switch (h.kind()) {
    case Hint::Kind::None:
      break;
    case Hint::Kind::Equal:
    case Hint::Kind::NotEqual:
      fixed.at(h.second()) = 1;
      [[fallthrough]];
    case Hint::Kind::Minus:
    case Hint::Kind::TwoGuesses:
      fixed.at(h.first()) = 1;
      break;
  }
  if (auto v = map.two_guess_vertex()) fixed.at(*v) = 1;

  std::vector<char> chosen(g.vertex_count(), 0);
  std::vector<char> blocked(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (fixed[v] || blocked[v]) continue;
    chosen[v] = 1;
    for (Vertex w : g.neighbors(v)) blocked[w] = 1;
  }
  std::vector<std::vector<int>> units;
  auto lit = [&](Vertex v, Color alpha, std::uint64_t beta, bool guessed) {
    const int id = static_cast<int>(map.id(v, alpha, beta));
    units.push_back({guessed ? -id : id});
  };
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (fixed[v]) continue;
    if (chosen[v]) {
      lit(v, 0, 0, true);
      if (g.degree(v) > 0) lit(v, 2, 1, false);
    } else {
      lit(v, 2, 0, false);
    }
  }
  return units;
}

Synthesis synthesize(const Graph& g, const Hint& h, const SolverConfig& config) {
  Encoding enc = encode_cnf(g, h);
  if (config.symmetry_breaking) {
    for (auto& unit : symmetry_units(enc.map, h)) enc.cnf.clauses.push_back(std::move(unit));
  }
  std::string dimacs = config.kind == SolverConfig::Kind::External ? write_dimacs(enc.cnf, enc.map) : std::string();
  SolveResult r = run_solver(enc.cnf, dimacs, config);
  Synthesis out;
  if (r.status == SatStatus::Unsat) return out;
  Strategy s = decode_model(enc.map, r.assignment);
  if (!verify_winning(s, h, {}, true).winning) {
    throw InternalError("decoded strategy fails brute-force verification");
  }
  out.win = true;
  out.strategy = std::move(s);
  return out;
}

}  // namespace hats
