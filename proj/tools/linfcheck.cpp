#include "linf/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

int main(int argc, char **argv) {
  using namespace linf::io;
  CLI::App app{"Exact checks for L-infinity algebras, Lie algebroids and Lie pairs"};
  std::string job_path, out_path;
  int arity = 0, weight = 0, poly = 0;
  Caps caps;
  app.add_option("job", job_path, "job file (JSON)")->required();
  app.add_option("--arity-cap", arity, "largest bracket arity checked")->check(CLI::PositiveNumber);
  app.add_option("--weight-cap", weight, "weight truncation of coalgebras and envelopes")
      ->check(CLI::PositiveNumber);
  app.add_option("--poly-degree-cap", poly, "polynomial degree for degreewise cohomology")
      ->check(CLI::PositiveNumber);
  app.add_flag("--exhaustive", caps.exhaustive, "check all basis words and count failures");
  app.add_flag("--emit-certificates", caps.certificates, "include certificates in the report");
  app.add_option("--out", out_path, "write the full JSON report here");
  std::string verb_list;
  for (const auto &v : verbs())
    verb_list += " " + v;
  app.footer("verbs:" + verb_list);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  json cli = json::object();
  if (arity)
    cli["arity"] = arity;
  if (weight)
    cli["weight"] = weight;
  if (poly)
    cli["poly_degree"] = poly;
  if (caps.exhaustive)
    cli["exhaustive"] = true;

  auto t0 = std::chrono::steady_clock::now();
  Outcome o = run_file(job_path, caps, cli);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::cout << o.summary;
  std::cout << "time " << secs << " s\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << o.report.dump(2) << "\n";
  }
  return o.code;
}
