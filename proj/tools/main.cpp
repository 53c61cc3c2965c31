#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "phicurv/jobspec.hpp"

int main(int argc, char** argv) {
  CLI::App app{"phicurv: homological invariants over contracting endomorphisms"};
  std::string jobfile;
  std::string json_path;
  int nmax = -1, e = -1, window = -1;
  double tolerance = -1.0;
  long long seed = -1;
  app.add_option("jobfile", jobfile, "job description file (key = value lines)")
      ->required();
  app.add_option("--nmax", nmax, "truncation degree");
  app.add_option("--e", e, "endomorphism power");
  app.add_option("--window", window, "estimation window");
  app.add_option("--tolerance", tolerance, "rate tolerance");
  app.add_option("--json", json_path, "write the JSON report to this path");
  app.add_option("--seed", seed, "seed recorded in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) ? 1 : 1;
  }

  std::ifstream in(jobfile);
  if (!in) {
    std::cerr << "error [BadInput]: cannot open job file '" << jobfile << "'\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  phicurv::JobSpec job;
  try {
    job = phicurv::parse_job_text(buf.str());
  } catch (const phicurv::EngineError& err) {
    std::cerr << "error [" << phicurv::error_code_name(err.code())
              << "]: " << err.what() << "\n";
    return 1;
  }
  if (nmax >= 0) job.nmax = nmax;
  if (e >= 1) job.e = e;
  if (window >= 1) job.window = window;
  if (tolerance >= 0) job.tolerance = tolerance;
  if (seed >= 0) job.seed = static_cast<uint64_t>(seed);

  phicurv::RunResult res = phicurv::run_job(job);
  std::cout << res.human;
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error [BadInput]: cannot write '" << json_path << "'\n";
      return 1;
    }
    out << res.json;
  }
  return res.exit_code;
}
