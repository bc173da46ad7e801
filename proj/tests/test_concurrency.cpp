#include <doctest.h>

#include <thread>
#include <vector>

#include "semiflow/flow.hpp"
#include "semiflow/grids.hpp"
#include "semiflow/koenigs.hpp"
#include "support/oracles.hpp"

using namespace semiflow;
using oracles::Complex;

// Shared immutable expressions, generators, and models evaluated from many
// threads must give the same answers as a serial sweep.
TEST_CASE("expressions, flows, and models are safe to share across threads") {
  flow::GeneratorSpec g = flow::GeneratorSpec::parse("z*(1+z^2)");
  koenigs::KoenigsModel model = koenigs::schroeder_interior(g);
  const std::vector<Complex> pts = grids::ring_pair(16, 0.3, 0.55);

  std::vector<Complex> serial_jets, serial_flows, serial_models;
  for (Complex z : pts) {
    serial_jets.push_back(expr::eval_jet(g.f, z).c2);
    serial_flows.push_back(flow::evolve(g, z, 1.5, 1).u1);
    serial_models.push_back(model.eval(z));
  }

  const int n_threads = 4;
  std::vector<std::vector<Complex>> jets(n_threads), flows(n_threads), models(n_threads);
  std::vector<std::thread> workers;
  for (int w = 0; w < n_threads; ++w) {
    workers.emplace_back([&, w] {
      for (Complex z : pts) {
        jets[w].push_back(expr::eval_jet(g.f, z).c2);
        flows[w].push_back(flow::evolve(g, z, 1.5, 1).u1);
        models[w].push_back(model.eval(z));
      }
    });
  }
  for (std::thread& t : workers) t.join();

  for (int w = 0; w < n_threads; ++w) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(jets[w][i] == serial_jets[i]);
      CHECK(flows[w][i] == serial_flows[i]);
      CHECK(models[w][i] == serial_models[i]);
    }
  }
}
