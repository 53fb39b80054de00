#pragma once

#include <string>
#include <vector>

#ifndef SHOFA_TEST_DATA
#error "SHOFA_TEST_DATA must point at tests/data"
#endif

namespace clisuite {

struct Case {
  std::string name;
  std::vector<std::string> args;
  int exit_code;
};

inline std::string data(const std::string& f) { return std::string(SHOFA_TEST_DATA) + "/" + f; }

// Every subcommand at least once; exit codes frozen from the documented branches.
inline std::vector<Case> cases() {
  auto j = [](const std::string& f) { return data(f); };
  return {
      {"normalize", {"normalize", "--json", j("normalize.json")}, 0},
      {"count-default", {"count", "--prime", "5", "--dim", "3"}, 0},
      {"count-roots", {"count", "--json", j("count_roots.json")}, 0},
      {"count-hyperplane", {"count", "--json", j("count_hyperplane.json")}, 0},
      {"expsum", {"expsum", "--json", j("expsum.json")}, 0},
      {"gauss", {"expsum", "--prime", "13", "--json", j("gauss.json")}, 0},
      {"gowers", {"gowers", "--json", j("gowers.json")}, 0},
      {"divide", {"divide", "--json", j("divide.json")}, 1},
      {"divide-pivot", {"divide", "--json", j("divide_pivot.json")}, 0},
      {"nullstellensatz", {"nullstellensatz", "--json", j("nullstellensatz.json")}, 1},
      {"dichotomy", {"dichotomy", "--json", j("dichotomy.json")}, 1},
      {"att1", {"decompose", "--json", j("decompose_att1.json")}, 1},
      {"antiderivative", {"decompose", "--json", j("decompose_antiderivative.json")}, 0},
      {"packforce0", {"decompose", "--json", j("decompose_packforce0.json")}, 0},
      {"lift", {"decompose", "--json", j("decompose_lift.json")}, 0},
      {"basicpp1", {"decompose", "--json", j("decompose_basicpp1.json")}, 0},
      {"basicpp2", {"decompose", "--json", j("decompose_basicpp2.json")}, 0},
      {"mset-box2", {"mset-repr", "--prime", "7", "--json", j("mset_box2.json")}, 0},
      {"mset-custom", {"mset-repr", "--json", j("mset_custom.json")}, 0},
      {"fubini", {"fubini-check", "--seed", "5", "--json", j("fubini.json")}, 0},
      {"probe", {"irreducibility-probe", "--seed", "3", "--json", j("probe.json")}, 0},
      {"equidist", {"equidist", "--freq-budget", "4", "--json", j("equidist.json")}, 0},
      {"weyl-constant", {"weyl", "--json", j("weyl_sphere.json")}, 1},
      {"weyl-small", {"weyl", "--prime", "7", "--json", j("weyl_small.json")}, 0},
      {"leibman", {"leibman-probe", "--seed", "9", "--json", j("leibman.json")}, 0},
  };
}

}  // namespace clisuite
