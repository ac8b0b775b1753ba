#include "demo.hpp"

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "mts.hpp"
#include "parking.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "scenario.hpp"

namespace opp::harness {

namespace {

std::string demo_arg(const std::string& args, const std::string& key, const std::string& fb) {
  std::istringstream in(args);
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw config_error("demo: expected key=value, got '" + tok + "'");
    if (tok.substr(0, eq) == key) return tok.substr(eq + 1);
  }
  return fb;
}

// The three-state walkthrough instance: the fractional traversal processes
// three tasks along the period (0 1 0 2), leaving one unit of residual work.
std::string demo_appendix_a1() {
  using R = Rational;
  const std::vector<std::vector<std::int64_t>> d = {{0, 2, 3}, {2, 0, 4}, {3, 4, 0}};
  const std::vector<int> period = {0, 1, 0, 2};
  const std::vector<std::vector<std::int64_t>> tasks = {{3, 6, 3}, {1, 3, 4}, {10, 10, 10}};

  mts::TraversalCursor<R> cursor(period, [&](int a, int b) {
    return R(d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
  });

  std::ostringstream out;
  out << "fractional traversal walkthrough\n";
  out << "states 0 1 2, start 0, period 0 1 0 2\n";
  out << "d(0,1) = 2, d(0,2) = 3, d(1,2) = 4\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::vector<R> w;
    out << "\ntask " << (i + 1) << ": w = (";
    for (std::size_t s = 0; s < tasks[i].size(); ++s) {
      if (s) out << ", ";
      out << tasks[i][s];
      w.push_back(R(tasks[i][s]));
    }
    out << ")\n";
    auto fractions = cursor.step(w);
    for (std::size_t f = 0; f < fractions.size(); ++f) {
      const auto& fr = fractions[f];
      std::int64_t wv = tasks[i][static_cast<std::size_t>(cursor.state_at(fr.index))];
      // a partial fraction fills the gap to the next position; show it over
      // the task value so the arithmetic can be followed by eye
      std::string shown =
          f + 1 < fractions.size() ? fr.work.str() + "/" + std::to_string(wv) : fr.lambda.str();
      out << "  position " << fr.index << " (state " << cursor.state_at(fr.index)
          << "): fraction " << shown << ", work " << fr.work.str() << "\n";
    }
    out << "  after task " << (i + 1) << ": position " << cursor.position() << ", residual "
        << cursor.residual().str() << "\n";
  }
  out << "\ntotal work = " << cursor.total_work().str();
  out << ", transitions = " << cursor.delta(1, cursor.position()).str();
  out << ", residual = " << cursor.residual().str() << "\n";
  return out.str();
}

// Greedy versus harmonic on the cascade family: greedy chains every car one
// power-of-two slot past its goal, harmonic escapes with expected cost ~n.
std::string demo_parking_gap(const std::string& args) {
  int n = static_cast<int>(std::stoll(demo_arg(args, "n", "10")));
  double eps = std::stod(demo_arg(args, "eps", "1e-6"));
  parking::ParkingInstance inst = parking::adversarial_instance(n, eps);
  double opt = parking::matching_offline_opt(inst.slots, inst.occupied, inst.goals);

  std::vector<char> occ = inst.occupied;
  double greedy = 0;
  for (double g : inst.goals) greedy += parking::greedy_step(inst.slots, occ, g).cost;

  const int runs = 100;
  Rng rng(1);
  double total = 0;
  for (int t = 0; t < runs; ++t) {
    std::vector<char> hocc = inst.occupied;
    for (double g : inst.goals) total += parking::harmonic_step(inst.slots, hocc, g, rng).cost;
  }
  double harmonic = total / runs;

  std::ostringstream out;
  out << "cascade family, n = " << n << ", eps = " << format_double(eps) << "\n";
  out << "slots = " << join_doubles(inst.slots) << "\n";
  out << "optimum                  = " << format_double(opt) << "\n";
  out << "greedy (free parking)    = " << format_double(greedy) << "\n";
  out << "greedy / optimum         = " << format_double(poa_ratio(greedy, opt)) << "\n";
  out << "harmonic, mean of " << runs << " runs = " << format_double(harmonic) << "\n";
  out << "harmonic / optimum       = " << format_double(poa_ratio(harmonic, opt)) << "\n";
  return out.str();
}

}  // namespace

std::string run_demo(const std::string& name, const std::string& args) {
  if (name == "appendix-a1") return demo_appendix_a1();
  if (name == "parking-gap") return demo_parking_gap(args);
  throw config_error("demo: unknown demo '" + name + "' (have appendix-a1, parking-gap)");
}

}  // namespace opp::harness
