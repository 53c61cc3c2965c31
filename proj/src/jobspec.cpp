#include "phicurv/jobspec.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"

namespace phicurv {

const char* kEngineVersion = "1.0.0";
const char* kReportSchema = "phicurv-report-v1";

using json = nlohmann::ordered_json;

bool JobSpec::operator==(const JobSpec& o) const {
  return p == o.p && vars == o.vars && weights == o.weights &&
         ideal == o.ideal && module == o.module && module2 == o.module2 &&
         endo == o.endo && endo2 == o.endo2 && extra == o.extra &&
         cmd == o.cmd && nmax == o.nmax && e == o.e && window == o.window &&
         tolerance == o.tolerance && nupto == o.nupto && seed == o.seed;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

// splits "[a, b, c]" at top bracket depth
std::vector<std::string> split_list(const std::string& s, int line) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    parse_fail(line, "expected a [...] list");
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    char c = t[i];
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

JobSpec parse_job_text(const std::string& text) {
  JobSpec job;
  bool saw_weights = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    // careful: list values contain no '=' so the first '=' splits key/value
    if (eq == std::string::npos) parse_fail(lineno, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(lineno, "empty key");
    auto as_int = [&](long long lo, long long hi) {
      try {
        size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size() || v < lo || v > hi)
          parse_fail(lineno, "bad integer for " + key);
        return v;
      } catch (const EngineError&) {
        throw;
      } catch (...) {
        parse_fail(lineno, "bad integer for " + key);
      }
    };
    if (key == "p") {
      job.p = static_cast<uint32_t>(as_int(2, 1 << 20));
    } else if (key == "vars") {
      job.vars = split_list(value, lineno);
    } else if (key == "weights") {
      saw_weights = true;
      job.weights.clear();
      for (const auto& w : split_list(value, lineno)) {
        try {
          job.weights.push_back(std::stol(w));
        } catch (...) {
          parse_fail(lineno, "bad weight '" + w + "'");
        }
      }
    } else if (key == "ideal") {
      job.ideal = split_list(value, lineno);
    } else if (key == "module") {
      job.module = value;
    } else if (key == "module2") {
      job.module2 = value;
    } else if (key == "endo") {
      job.endo = value;
    } else if (key == "endo2") {
      job.endo2 = value;
    } else if (key == "extra") {
      job.extra = split_list(value, lineno);
    } else if (key == "cmd") {
      job.cmd = value;
    } else if (key == "nmax") {
      job.nmax = static_cast<int>(as_int(0, 64));
    } else if (key == "e") {
      job.e = static_cast<int>(as_int(1, 16));
    } else if (key == "window") {
      job.window = static_cast<int>(as_int(1, 64));
    } else if (key == "nupto") {
      job.nupto = static_cast<int>(as_int(1, 8));
    } else if (key == "seed") {
      job.seed = static_cast<uint64_t>(as_int(0, (1ll << 62)));
    } else if (key == "tolerance") {
      try {
        size_t used = 0;
        job.tolerance = std::stod(value, &used);
        if (used != value.size() || job.tolerance < 0)
          parse_fail(lineno, "bad tolerance");
      } catch (const EngineError&) {
        throw;
      } catch (...) {
        parse_fail(lineno, "bad tolerance");
      }
    } else {
      parse_fail(lineno, "unknown key '" + key + "'");
    }
  }
  if (job.vars.empty()) fail(ErrorCode::ParseError, "missing vars");
  if (!saw_weights) job.weights.assign(job.vars.size(), 1);
  if (job.weights.size() != job.vars.size())
    fail(ErrorCode::ParseError, "one weight per variable required");
  return job;
}

std::string render_job(const JobSpec& job) {
  std::ostringstream out;
  out << "p = " << job.p << "\n";
  auto list = [&](const std::vector<std::string>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += v[i];
    }
    return s + "]";
  };
  out << "vars = " << list(job.vars) << "\n";
  {
    std::vector<std::string> w;
    for (long x : job.weights) w.push_back(std::to_string(x));
    out << "weights = " << list(w) << "\n";
  }
  out << "ideal = " << list(job.ideal) << "\n";
  out << "module = " << job.module << "\n";
  if (!job.module2.empty()) out << "module2 = " << job.module2 << "\n";
  if (!job.endo.empty()) out << "endo = " << job.endo << "\n";
  if (!job.endo2.empty()) out << "endo2 = " << job.endo2 << "\n";
  if (!job.extra.empty()) out << "extra = " << list(job.extra) << "\n";
  out << "cmd = " << job.cmd << "\n";
  out << "nmax = " << job.nmax << "\n";
  out << "e = " << job.e << "\n";
  out << "window = " << job.window << "\n";
  out << "tolerance = " << format_double(job.tolerance) << "\n";
  out << "nupto = " << job.nupto << "\n";
  out << "seed = " << job.seed << "\n";
  return out.str();
}

RingPtr ring_from_job(const JobSpec& job) {
  return QuotientRing::make_from_strings(job.p, job.vars, job.ideal,
                                         job.weights);
}

FinModule module_from_descriptor(const RingPtr& ring,
                                 const std::string& descriptor) {
  std::string d = trim(descriptor);
  if (d.empty() || d == "R") return FinModule::ring_module(ring);
  if (d == "k") return FinModule::residue_field(ring);
  if (d.front() != '[')
    fail(ErrorCode::ParseError,
         "module descriptor must be R, k, or a [[...]] matrix");
  const PolyRing& R = ring->poly_ring();
  auto rows_text = split_list(d, 0);
  std::vector<std::vector<Poly>> rows;
  size_t ncols = 0;
  for (const auto& row_text : rows_text) {
    std::vector<Poly> row;
    for (const auto& cell : split_list(row_text, 0))
      row.push_back(parse_poly(R, cell));
    if (!rows.empty() && row.size() != ncols)
      fail(ErrorCode::ParseError, "ragged module matrix");
    ncols = row.size();
    rows.push_back(std::move(row));
  }
  Matrix A = matrix_from_entries(R, rows);
  return FinModule::cokernel(ring, A.rows, A.cols, "coker" + d);
}

EndoMap endo_from_descriptor(const RingPtr& ring,
                             const std::string& descriptor) {
  std::string d = trim(descriptor);
  if (d.rfind("frobenius(", 0) == 0 && d.back() == ')') {
    std::string inside = d.substr(10, d.size() - 11);
    int e = 0;
    try {
      e = std::stoi(inside);
    } catch (...) {
      fail(ErrorCode::ParseError, "bad frobenius power '" + inside + "'");
    }
    return frobenius_endo(ring, e);
  }
  if (d == "projection") return projection_endo(ring);
  if (d.rfind("images", 0) == 0) {
    std::string rest = trim(d.substr(6));
    auto items = split_list(rest, 0);
    std::vector<Poly> images;
    for (const auto& s : items)
      images.push_back(parse_poly(ring->poly_ring(), s));
    return make_endomorphism(ring, std::move(images));
  }
  fail(ErrorCode::ParseError,
       "endo descriptor must be frobenius(e), projection, or images [...]");
}

namespace {

json table_to_json(const BettiTable& T) {
  json t;
  t["kind"] = T.kind == TableKind::Betti ? "betti" : "bass";
  t["over"] = T.over;
  t["module"] = T.module_id;
  t["lo"] = T.lo;
  t["nmax"] = T.nmax;
  t["values"] = T.values;
  return t;
}

json estimate_to_json(const GrowthEstimate& g) {
  json e;
  e["fitted_rate"] = g.fitted_rate;
  e["residual"] = g.residual;
  e["root_tail"] = g.root_tail;
  if (g.ratio_defined) e["ratio_tail"] = g.ratio_tail;
  e["window"] = g.window;
  e["poly_degree_fit"] = g.poly_degree_fit;
  if (g.cx_infinite)
    e["cx_estimate"] = "infinite";
  else
    e["cx_estimate"] = g.cx;
  return e;
}

json check_to_json(const CheckReport& rep) {
  json c;
  c["name"] = rep.name;
  c["inputs"] = rep.inputs;
  c["verdict"] = rep.verdict();
  c["tolerance"] = rep.tolerance;
  if (!rep.consistent && rep.witness_degree != std::numeric_limits<int>::min())
    c["witness_degree"] = rep.witness_degree;
  c["columns"] = rep.columns;
  c["rows"] = rep.rows;
  json stats;
  for (const auto& [k, v] : rep.stats) stats[k] = v;
  c["stats"] = stats;
  return c;
}

void print_table(std::ostringstream& out, const BettiTable& T) {
  out << (T.kind == TableKind::Betti ? "betti" : "bass") << " table over "
      << T.over << ", module " << T.module_id << "\n";
  out << "n\tvalue\n";
  for (int n = T.lo; n <= T.nmax; ++n)
    out << n << "\t" << T.at(n) << "\n";
}

void print_estimate(std::ostringstream& out, const GrowthEstimate& g) {
  out << "fitted_rate = " << format_double(g.fitted_rate)
      << "  (residual " << format_double(g.residual) << ", window "
      << g.window << ")\n";
  out << "root_tail = " << format_double(g.root_tail) << "\n";
  if (g.ratio_defined)
    out << "ratio_tail = " << format_double(g.ratio_tail) << "\n";
  out << "poly_degree_fit = " << format_double(g.poly_degree_fit) << "\n";
  out << "cx_estimate = ";
  if (g.cx_infinite)
    out << "infinite";
  else
    out << g.cx;
  out << "\n";
}

void print_check(std::ostringstream& out, const CheckReport& rep) {
  out << "check: " << rep.name << "\n";
  out << "inputs: " << rep.inputs << "\n";
  for (size_t i = 0; i < rep.columns.size(); ++i)
    out << (i ? "\t" : "") << rep.columns[i];
  out << "\n";
  for (const auto& row : rep.rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "\t" : "") << format_double(row[i]);
    out << "\n";
  }
  for (const auto& [k, v] : rep.stats)
    out << k << " = " << format_double(v) << "\n";
  out << "verdict: " << rep.verdict() << "\n";
}

}  // namespace

RunResult run_job(const JobSpec& job) {
  RunResult res;
  std::ostringstream human;
  json report;
  report["schema"] = kReportSchema;
  report["engine_version"] = kEngineVersion;
  {
    json j;
    j["p"] = job.p;
    j["vars"] = job.vars;
    j["weights"] = job.weights;
    j["ideal"] = job.ideal;
    j["module"] = job.module;
    if (!job.module2.empty()) j["module2"] = job.module2;
    if (!job.endo.empty()) j["endo"] = job.endo;
    if (!job.endo2.empty()) j["endo2"] = job.endo2;
    if (!job.extra.empty()) j["extra"] = job.extra;
    j["cmd"] = job.cmd;
    j["nmax"] = job.nmax;
    j["e"] = job.e;
    j["window"] = job.window;
    j["tolerance"] = job.tolerance;
    j["nupto"] = job.nupto;
    j["seed"] = job.seed;
    report["job"] = j;
  }

  try {
    RingPtr ring = ring_from_job(job);
    {
      json rj;
      rj["description"] = ring->description();
      rj["edim"] = ring->edim();
      rj["dim"] = ring->dim();
      rj["regular"] = ring->is_regular();
      rj["artinian"] = ring->is_artinian();
      report["ring"] = rj;
    }
    json result;
    const std::string& cmd = job.cmd;
    auto need_endo = [&]() {
      if (job.endo.empty())
        fail(ErrorCode::BadInput, "command '" + cmd + "' needs endo = ...");
      return endo_from_descriptor(ring, job.endo);
    };
    FinModule M = module_from_descriptor(ring, job.module);

    if (cmd == "betti") {
      BettiTable T = betti_numbers(M, job.nmax);
      GrowthEstimate g = growth_estimate(T, job.window, job.tolerance);
      result["table"] = table_to_json(T);
      result["estimate"] = estimate_to_json(g);
      print_table(human, T);
      print_estimate(human, g);
    } else if (cmd == "betti-phi" || cmd == "bass-phi" || cmd == "curvature") {
      EndoMap phi = need_endo();
      BettiTable T = cmd == "bass-phi" ? bass_over(phi, job.e, M, job.nmax)
                                       : betti_over(phi, job.e, M, job.nmax);
      GrowthEstimate g = growth_estimate(T, job.window, job.tolerance);
      result["table"] = table_to_json(T);
      result["estimate"] = estimate_to_json(g);
      print_table(human, T);
      print_estimate(human, g);
    } else if (cmd == "tor-lengths") {
      EndoMap phi = need_endo();
      auto lens = tor_lengths(phi, job.e, M, job.nmax);
      result["lengths"] = lens;
      human << "tor lengths over " << phi.describe() << "^" << job.e << "\n";
      for (size_t n = 0; n < lens.size(); ++n)
        human << n << "\t" << lens[n] << "\n";
    } else if (cmd == "kunz") {
      CheckReport rep = kunz_regularity_test(ring, M, job.e, job.nmax);
      result["check"] = check_to_json(rep);
      print_check(human, rep);
      res.exit_code = rep.consistent ? 0 : 2;
    } else if (cmd == "ci") {
      CheckReport rep;
      if (!job.endo.empty()) {
        EndoMap phi = endo_from_descriptor(ring, job.endo);
        rep = ci_test(ring, &phi, job.e, &M, job.nmax, job.window,
                      job.tolerance);
      } else {
        rep = ci_test(ring, nullptr, job.e, nullptr, job.nmax, job.window,
                      job.tolerance);
      }
      result["check"] = check_to_json(rep);
      print_check(human, rep);
      res.exit_code = rep.consistent ? 0 : 2;
    } else if (cmd == "check-thm") {
      EndoMap phi = need_endo();
      CheckReport rep = check_main_theorem(phi, job.e, M, job.nmax,
                                           job.window, job.tolerance);
      result["check"] = check_to_json(rep);
      print_check(human, rep);
      res.exit_code = rep.consistent ? 0 : 2;
    } else if (cmd == "check-duality") {
      EndoMap phi = need_endo();
      CheckReport rep = check_duality(phi, job.e, M, job.nmax);
      result["check"] = check_to_json(rep);
      print_check(human, rep);
      res.exit_code = rep.consistent ? 0 : 2;
    } else if (cmd == "check-composition") {
      EndoMap rho = need_endo();
      EndoMap phi = job.endo2.empty() ? rho
                                      : endo_from_descriptor(ring, job.endo2);
      FinModule M2 = job.module2.empty()
                         ? M
                         : module_from_descriptor(ring, job.module2);
      CheckReport rep = check_composition(rho, phi, M, M2, job.nmax,
                                          job.window, job.tolerance);
      result["check"] = check_to_json(rep);
      print_check(human, rep);
      res.exit_code = rep.consistent ? 0 : 2;
    } else if (cmd == "loewy") {
      int b = loewy_bound(ring);
      result["loewy_bound"] = b;
      human << "loewy bound = " << b << "\n";
    } else if (cmd == "flat-length") {
      CheckReport rep = flat_length_check(ring, M, job.e, job.nupto);
      result["check"] = check_to_json(rep);
      print_check(human, rep);
      res.exit_code = rep.consistent ? 0 : 2;
    } else if (cmd == "poincare-id") {
      EndoMap phi = need_endo();
      std::vector<Poly> extra;
      for (const auto& s : job.extra)
        extra.push_back(parse_poly(ring->poly_ring(), s));
      CheckReport rep =
          poincare_identity_check(phi, job.e, M, extra, job.nmax);
      result["check"] = check_to_json(rep);
      print_check(human, rep);
      res.exit_code = rep.consistent ? 0 : 2;
    } else {
      fail(ErrorCode::BadInput, "unknown command '" + cmd + "'");
    }
    report["result"] = result;
  } catch (const EngineError& err) {
    res.exit_code = 1;
    json ej;
    ej["code"] = error_code_name(err.code());
    ej["message"] = err.what();
    report["error"] = ej;
    human << "error [" << error_code_name(err.code()) << "]: " << err.what()
          << "\n";
  }
  report["exit_code"] = res.exit_code;
  res.human = human.str();
  res.json = report.dump(2) + "\n";
  return res;
}

}  // namespace phicurv
