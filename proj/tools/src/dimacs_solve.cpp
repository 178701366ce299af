// Stand-alone DIMACS front end for the internal solver, speaking the usual
// solver protocol: `s`/`v` lines, exit 10 for SAT and 20 for UNSAT.

#include <fstream>
#include <iostream>
#include <sstream>

#include "hats/error.hpp"
#include "hats/sat.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: hats-dimacs-solve <file.cnf>\n";
    return 1;
  }
  try {
    std::ifstream f(argv[1], std::ios::binary);
    if (!f) throw hats::Error(std::string("cannot read '") + argv[1] + "'");
    std::stringstream text;
    text << f.rdbuf();
    hats::Cnf cnf = hats::parse_dimacs(text.str());
    hats::SolveResult r = hats::internal_solve(cnf, UINT32_MAX);
    if (r.status == hats::SatStatus::Unsat) {
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    }
    std::cout << "s SATISFIABLE\n";
    std::string line = "v";
    for (std::uint32_t v = 1; v <= cnf.var_count; ++v) {
      std::string lit = ' ' + std::string(r.assignment[v] ? "" : "-") + std::to_string(v);
      if (line.size() + lit.size() > 78) {
        std::cout << line << '\n';
        line = "v";
      }
      line += lit;
    }
    std::cout << line << " 0\n";
    return 10;
  } catch (const std::exception& e) {
    std::cerr << "c error: " << e.what() << '\n';
    return 1;
  }
}
