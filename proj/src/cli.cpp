#include "halfline/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "halfline/csv.hpp"

namespace halfline {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorKind::Configuration, "bad value '" + value + "' for " + key);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, value);
  return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, value);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::pair<double, double> parse_range(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != 2) bad_value(key, value);
  const double a = parse_double(key, parts[0]);
  const double b = parse_double(key, parts[1]);
  if (!(a <= b)) bad_value(key, value);
  return {a, b};
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string format_range(const std::pair<double, double>& r) {
  return format_double(r.first) + "," + format_double(r.second);
}

std::string normalized_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

Eigen::ArrayXd fit(const Eigen::ArrayXd& a, Eigen::Index size) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(size);
  const Eigen::Index m = std::min(size, a.size());
  out.head(m) = a.head(m);
  return out;
}

std::filesystem::path out_dir(const RunConfig& config) {
  const std::filesystem::path dir = config.out.empty() ? std::filesystem::path(".") : std::filesystem::path(config.out);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_config_copy(const RunConfig& config) {
  std::ofstream f(out_dir(config) / "config.txt");
  f << to_config_text(config);
}

Json header(const RunConfig& config) {
  Json j;
  j["command"] = config.subcommand;
  j["config"] = config_json(config);
  return j;
}

ReportOptions report_options(const Problem& p) { return ReportOptions{p.lt_mode}; }

bool chain_ok(const CommutationChain& chain) {
  if (!chain.final_spectrum.empty()) return false;
  return std::all_of(chain.stages.begin(), chain.stages.end(),
                     [](const StageSpectrum& s) { return s.removed_exactly_one && s.preserved; });
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = normalized_key(trim(raw_key));
  const std::string value = trim(raw_value);
  if (key == "subcommand") {
    c.subcommand = value;
  } else if (key == "family") {
    c.family = value;
  } else if (key == "input") {
    c.input = value;
  } else if (key == "bc") {
    if (value != "robin" && value != "dirichlet" && value != "neumann") bad_value(key, value);
    c.bc = value;
  } else if (key == "sigma0") {
    c.sigma0 = parse_double(key, value);
  } else if (key == "depth") {
    c.depth = parse_double(key, value);
  } else if (key == "width") {
    c.width = parse_double(key, value);
  } else if (key == "omega") {
    c.omega = parse_double(key, value);
  } else if (key == "gamma") {
    c.gamma = parse_double(key, value);
  } else if (key == "L") {
    if (value.empty()) {
      c.length.reset();
    } else {
      c.length = parse_double(key, value);
      if (!(*c.length > 0)) bad_value(key, value);
    }
  } else if (key == "n") {
    if (value.empty()) {
      c.intervals.reset();
    } else {
      c.intervals = parse_integer(key, value);
      if (*c.intervals < 8) bad_value(key, value);
    }
  } else if (key == "spacing") {
    c.spacing = parse_double(key, value);
    if (!(c.spacing > 0)) bad_value(key, value);
  } else if (key == "tol") {
    c.tol = parse_double(key, value);
  } else if (key == "consistency-tol") {
    c.consistency_tol = parse_double(key, value);
  } else if (key == "order") {
    c.order.clear();
    if (!value.empty()) {
      for (const auto& part : split(value, ',')) c.order.push_back(static_cast<int>(parse_integer(key, part)));
    }
  } else if (key == "out") {
    c.out = value;
  } else if (key == "diagnostics") {
    c.diagnostics = parse_bool(key, value);
  } else if (key == "lt-mode") {
    c.lt_mode = parse_bool(key, value);
  } else if (key == "sweep") {
    const long long n = parse_integer(key, value);
    if (n < 0 || n > 100000) bad_value(key, value);
    c.sweep = static_cast<int>(n);
  } else if (key == "seed") {
    const std::string v = trim(value);
    std::uint64_t s = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
    if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, value);
    c.seed = s;
  } else if (key == "depth-range") {
    c.depth_range = parse_range(key, value);
  } else if (key == "width-range") {
    c.width_range = parse_range(key, value);
  } else if (key == "sigma-range") {
    c.sigma_range = parse_range(key, value);
  } else {
    throw Error(ErrorKind::Configuration, "unknown config key '" + raw_key + "'");
  }
}

RunConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Configuration, "cannot read config " + path.string());
  RunConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Configuration,
                  path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    apply_setting(c, t.substr(0, eq), t.substr(eq + 1));
  }
  return c;
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  std::string order;
  for (std::size_t k = 0; k < c.order.size(); ++k) order += (k ? "," : "") + std::to_string(c.order[k]);
  os << "subcommand = " << c.subcommand << "\n"
     << "family = " << c.family << "\n"
     << "input = " << c.input << "\n"
     << "bc = " << c.bc << "\n"
     << "sigma0 = " << format_double(c.sigma0) << "\n"
     << "depth = " << format_double(c.depth) << "\n"
     << "width = " << format_double(c.width) << "\n"
     << "omega = " << format_double(c.omega) << "\n"
     << "gamma = " << format_double(c.gamma) << "\n"
     << "L = " << (c.length ? format_double(*c.length) : "") << "\n"
     << "n = " << (c.intervals ? std::to_string(*c.intervals) : "") << "\n"
     << "spacing = " << format_double(c.spacing) << "\n"
     << "tol = " << format_double(c.tol) << "\n"
     << "consistency-tol = " << format_double(c.consistency_tol) << "\n"
     << "order = " << order << "\n"
     << "out = " << c.out << "\n"
     << "diagnostics = " << (c.diagnostics ? "true" : "false") << "\n"
     << "lt-mode = " << (c.lt_mode ? "true" : "false") << "\n"
     << "sweep = " << c.sweep << "\n"
     << "seed = " << c.seed << "\n"
     << "depth-range = " << format_range(c.depth_range) << "\n"
     << "width-range = " << format_range(c.width_range) << "\n"
     << "sigma-range = " << format_range(c.sigma_range) << "\n";
  return os.str();
}

Json config_json(const RunConfig& c) {
  Json j;
  for (const auto& line : split(to_config_text(c), '\n')) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    j[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return j;
}

BoundaryCondition boundary_condition(const RunConfig& c) {
  if (c.bc == "dirichlet") return BoundaryCondition::dirichlet();
  if (c.bc == "neumann") return BoundaryCondition::neumann();
  return BoundaryCondition::robin(c.sigma0);
}

GridOptions grid_options(const RunConfig& c) {
  GridOptions g;
  g.length = c.length;
  if (c.intervals) g.intervals = static_cast<Eigen::Index>(*c.intervals);
  g.spacing = c.spacing;
  return g;
}

std::optional<PotentialFamily> make_family(const RunConfig& c) {
  if (!c.input.empty()) return std::nullopt;
  if (c.family == "free") {
    if (c.bc == "dirichlet") throw Error(ErrorKind::Configuration, "the free family uses a Robin condition");
    return free_family(boundary_condition(c).sigma());
  }
  if (c.family == "square-well") return square_well_family(c.depth, c.width, boundary_condition(c));
  if (c.family == "neumann-insertion") return neumann_insertion_family(c.omega, c.gamma);
  if (c.family.empty()) throw Error(ErrorKind::Configuration, "give --family or --input");
  throw Error(ErrorKind::Configuration, "unknown family '" + c.family + "'");
}

Problem build_problem(const RunConfig& c) {
  if (!c.input.empty()) {
    if (!c.family.empty()) throw Error(ErrorKind::Configuration, "--family and --input are exclusive");
    LoadOptions opts;
    opts.grid = grid_options(c);
    opts.lt_mode = c.lt_mode;
    return load_potential(c.input, boundary_condition(c), opts);
  }
  return make_family(c)->problem(grid_options(c));
}

CommandResult cmd_solve(const RunConfig& c) {
  const auto family = make_family(c);
  const Problem p = build_problem(c);
  const NegativeSpectrum s = negative_eigenvalues(p);
  Json j = header(c);
  j["spectrum"] = to_json(s);
  if (family && (!family->known_spectrum.empty() || family->name == "square-well")) {
    j["reference_eigenvalues"] = family->known_spectrum;
  }
  if (!c.out.empty()) {
    const auto dir = out_dir(c);
    write_json(dir / "spectrum.json", j);
    for (std::size_t k = 0; k < s.size(); ++k) {
      write_sampled_csv(dir / ("phi_" + std::to_string(k + 1) + ".csv"), s.pairs[k].phi);
    }
    write_config_copy(c);
  }
  return {j, true};
}

CommandResult cmd_commute(const RunConfig& c) {
  const Problem p = build_problem(c);
  const CommutationChain chain = build_chain(p, c.order);
  Json j = header(c);
  j["chain"] = to_json(chain);
  if (c.diagnostics) {
    Json diag = Json::array();
    for (std::size_t k = 0; k < chain.steps.size(); ++k) {
      const Problem& in = chain.step_inputs[k];
      const EigenPair& pair = chain.removed_pairs[k];
      const CommutationStep& step = chain.steps[k];
      Json d;
      d["step"] = k + 1;
      d["antiderivative"] = to_json(antiderivative_identity_check(in, pair, step));
      const bool ground = pair.lambda <= chain.stages[k].before.front();
      if (ground && in.bc.is_robin()) {
        try {
          d["riccati"] = to_json(riccati_diagnostics(in, pair, step));
        } catch (const Error& e) {
          d["riccati"] = e.what();
        }
      } else {
        d["riccati"] = nullptr;
      }
      diag.push_back(d);
    }
    j["diagnostics"] = diag;
  }
  if (!c.out.empty()) {
    const auto dir = out_dir(c);
    write_json(dir / "chain.json", j);
    write_sampled_csv(dir / "V_0.csv", chain.initial_problem().potential);
    for (std::size_t k = 0; k < chain.steps.size(); ++k) {
      write_sampled_csv(dir / ("V_" + std::to_string(k + 1) + ".csv"), chain.steps[k].output.potential);
    }
    write_config_copy(c);
  }
  return {j, chain_ok(chain)};
}

CommandResult cmd_verify(const RunConfig& c) {
  if (c.sweep > 0) {
    const auto cases = run_sweep(c);
    Json j = header(c);
    j["sweep"] = sweep_summary(c, cases);
    const bool ok = std::all_of(cases.begin(), cases.end(), [](const SweepCase& s) { return s.ok; });
    if (!c.out.empty()) {
      write_json(out_dir(c) / "sweep.json", j);
      write_config_copy(c);
    }
    return {j, ok};
  }

  const auto family = make_family(c);
  const Problem p = build_problem(c);
  const ReportOptions ro = report_options(p);
  const NegativeSpectrum s = negative_eigenvalues(p);
  Json j = header(c);
  j["eigenvalues"] = s.eigenvalues();
  if (family) j["reference_eigenvalues"] = family->known_spectrum;
  bool ok = true;
  Json reports = Json::array();
  auto add = [&](const LTReport& r) {
    ok = ok && r.holds;
    reports.push_back(to_json(r));
  };
  if (p.bc.is_robin()) {
    const LTReport main = report_main_robin(s, ro);
    const LTReport elu = report_elu(s, ro);
    add(main);
    add(elu);
    add(report_schmincke_lower(s, ro));
    const DominanceCertificate dom = dominance_main_vs_elu(main, elu);
    ok = ok && dom.holds;
    j["reports"] = reports;
    j["dominance"] = to_json(dom);
  } else {
    const LTReport dir = report_dirichlet(s, ro);
    add(dir);
    add(report_whole_line(s, ro));
    const bool weak_order = dir.rhs <= *dir.weak_rhs + dir.tolerance;
    ok = ok && weak_order;
    j["reports"] = reports;
    j["weak_order"] = weak_order;
  }
  if (!s.empty()) {
    const CommutationChain chain = build_chain(p, c.order);
    const TelescopeReport tel = verify_telescope(chain, c.tol);
    const bool consistent = tel.consistency_residual <= c.consistency_tol;
    ok = ok && tel.holds && consistent && chain_ok(chain);
    j["telescope"] = to_json(tel);
    j["telescope_consistent"] = consistent;
    j["chain_order"] = chain.order;
    j["final_eigenvalues"] = chain.final_spectrum.eigenvalues();
  } else {
    j["telescope"] = nullptr;
  }
  j["ok"] = ok;
  if (!c.out.empty()) {
    write_json(out_dir(c) / "verify.json", j);
    write_config_copy(c);
  }
  return {j, ok};
}

CommandResult cmd_plotdata(const RunConfig& c) {
  const Problem p = build_problem(c);
  const NegativeSpectrum s = negative_eigenvalues(p);
  const Eigen::Index size = s.problem.grid().intervals() + 1;
  const Eigen::ArrayXd x = s.problem.grid().nodes();
  std::vector<std::pair<std::string, Eigen::ArrayXd>> cols;
  cols.emplace_back("V", s.problem.potential.values());
  bool ok = true;
  if (!s.empty()) {
    const CommutationChain chain = build_chain(p, c.order);
    ok = chain_ok(chain);
    for (std::size_t k = 0; k < chain.steps.size(); ++k) {
      cols.emplace_back("V_" + std::to_string(k + 1), fit(chain.steps[k].output.potential.values(), size));
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
      cols.emplace_back("phi_" + std::to_string(k + 1), fit(s.pairs[k].phi.values(), size));
    }
    const EigenPair& first = chain.removed_pairs.front();
    if (s.problem.bc.is_robin() && first.lambda <= s.pairs.front().lambda) {
      const auto d = riccati_diagnostics(chain.step_inputs.front(), first, chain.steps.front());
      cols.emplace_back("F", fit(d.F.values(), size));
      cols.emplace_back("F_tilde", fit(d.F_tilde.values(), size));
      cols.emplace_back("G", fit(d.G.values(), size));
    }
  }
  const auto dir = out_dir(c);
  const auto path = dir / "plotdata.csv";
  write_columns_csv(path, x, cols);
  Json j = header(c);
  Json names = Json::array({"x"});
  for (const auto& col : cols) names.push_back(col.first);
  j["columns"] = names;
  j["rows"] = size;
  j["path"] = path.string();
  return {j, ok};
}

CommandResult cmd_families(const RunConfig& c) {
  Json j = header(c);
  Json list = Json::array();
  for (const auto& f : family_registry()) {
    Json e;
    e["name"] = f.name;
    e["parameters"] = f.parameters;
    e["description"] = f.description;
    list.push_back(e);
  }
  j["families"] = list;
  return {j, true};
}

namespace {

struct Draw {
  double depth, width, sigma0;
  int redraws;
};

bool near_threshold(const std::vector<double>& eigenvalues) {
  return std::any_of(eigenvalues.begin(), eigenvalues.end(), [](double l) { return l > -0.01; });
}

SweepCase run_case(int index, const Draw& d, double spacing) {
  SweepCase out;
  out.index = index;
  out.depth = d.depth;
  out.width = d.width;
  out.sigma0 = d.sigma0;
  out.redraws = d.redraws;
  try {
    GridOptions g;
    g.spacing = spacing;
    const Problem robin = family_square_well(d.depth, d.width, BoundaryCondition::robin(d.sigma0), g);
    const NegativeSpectrum s = negative_eigenvalues(robin);
    out.robin_eigenvalues = s.eigenvalues();
    const LTReport main = report_main_robin(s);
    const LTReport elu = report_elu(s);
    out.reports.push_back(main);
    out.reports.push_back(elu);
    out.reports.push_back(report_schmincke_lower(s));
    out.dominance = dominance_main_vs_elu(main, elu);

    const Problem dir = family_square_well(d.depth, d.width, BoundaryCondition::dirichlet(), g);
    const NegativeSpectrum sd = negative_eigenvalues(dir);
    out.dirichlet_eigenvalues = sd.eigenvalues();
    const LTReport rd = report_dirichlet(sd);
    out.weak_order = rd.rhs <= *rd.weak_rhs + rd.tolerance;
    out.reports.push_back(rd);

    out.ok = out.dominance->holds && out.weak_order &&
             std::all_of(out.reports.begin(), out.reports.end(), [](const LTReport& r) { return r.holds; });
  } catch (const std::exception& e) {
    out.error = e.what();
    out.ok = false;
  }
  return out;
}

}  // namespace

std::vector<SweepCase> run_sweep(const RunConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> depth(c.depth_range.first, c.depth_range.second);
  std::uniform_real_distribution<double> width(c.width_range.first, c.width_range.second);
  std::uniform_real_distribution<double> sigma(c.sigma_range.first, c.sigma_range.second);

  // all draws happen here, in case order, so the cases do not depend on scheduling
  std::vector<Draw> draws;
  for (int k = 0; k < c.sweep; ++k) {
    Draw d{0, 0, 0, 0};
    for (;; ++d.redraws) {
      if (d.redraws > 1000) throw Error(ErrorKind::Configuration, "sweep ranges only give near-threshold wells");
      d.depth = depth(rng);
      d.width = width(rng);
      d.sigma0 = sigma(rng);
      if (std::sqrt(d.depth) * d.width > 30.0) continue;
      if (near_threshold(square_well_eigenvalues(d.depth, d.width, BoundaryCondition::robin(d.sigma0))) ||
          near_threshold(square_well_eigenvalues(d.depth, d.width, BoundaryCondition::dirichlet()))) {
        continue;
      }
      break;
    }
    draws.push_back(d);
  }

  std::vector<SweepCase> cases(draws.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < draws.size(); start += workers) {
    std::vector<std::future<SweepCase>> batch;
    const std::size_t end = std::min(draws.size(), start + workers);
    for (std::size_t k = start; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, run_case, static_cast<int>(k), draws[k], c.spacing));
    }
    for (std::size_t k = start; k < end; ++k) cases[k] = batch[k - start].get();
  }
  return cases;
}

Json sweep_summary(const RunConfig& c, const std::vector<SweepCase>& cases) {
  Json j;
  j["count"] = c.sweep;
  j["seed"] = c.seed;
  j["prng"] = "mt19937_64";
  j["depth_range"] = {c.depth_range.first, c.depth_range.second};
  j["width_range"] = {c.width_range.first, c.width_range.second};
  j["sigma_range"] = {c.sigma_range.first, c.sigma_range.second};

  struct Tally {
    int passed = 0, total = 0;
    double min_gap = INFINITY, sum_gap = 0;
  };
  std::map<std::string, Tally> tally;
  for (const char* k : {"main_robin", "elu", "schmincke_lower", "dirichlet"}) tally[k];
  int dom_pass = 0, literal = 0, weak = 0, passed = 0;
  Json failures = Json::array();
  Json list = Json::array();
  for (const auto& s : cases) {
    Json e;
    e["index"] = s.index;
    e["depth"] = s.depth;
    e["width"] = s.width;
    e["sigma0"] = s.sigma0;
    e["redraws"] = s.redraws;
    e["robin_eigenvalues"] = s.robin_eigenvalues;
    e["dirichlet_eigenvalues"] = s.dirichlet_eigenvalues;
    Json gaps;
    for (const auto& r : s.reports) {
      auto& t = tally[to_string(r.kind)];
      ++t.total;
      t.passed += r.holds;
      t.min_gap = std::min(t.min_gap, r.gap);
      t.sum_gap += r.gap;
      gaps[to_string(r.kind)] = r.gap;
    }
    e["gaps"] = gaps;
    if (s.dominance) {
      dom_pass += s.dominance->holds;
      literal += s.dominance->literal_order;
      e["dominance_slack"] = s.dominance->slack;
      e["literal_order"] = s.dominance->literal_order;
    }
    weak += s.weak_order;
    passed += s.ok;
    if (!s.error.empty()) e["error"] = s.error;
    e["ok"] = s.ok;
    if (!s.ok) failures.push_back(s.index);
    list.push_back(e);
  }
  Json agg;
  for (const auto& [name, t] : tally) {
    Json a;
    a["passed"] = t.passed;
    a["total"] = t.total;
    a["min_gap"] = t.total ? Json(t.min_gap) : Json(nullptr);
    a["mean_gap"] = t.total ? Json(t.sum_gap / t.total) : Json(nullptr);
    agg[name] = a;
  }
  agg["dominance"] = {{"passed", dom_pass}, {"literal_order", literal}};
  agg["weak_order"] = weak;
  agg["cases_passed"] = passed;
  agg["failures"] = failures;
  j["aggregate"] = agg;
  j["cases"] = list;
  return j;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Lieb-Thirring checks for half-line Schroedinger operators"};
  std::string subcommand;
  app.add_option("subcommand", subcommand, "solve | commute | verify | plotdata | families")
      ->required()
      ->check(CLI::IsMember({"solve", "commute", "verify", "plotdata", "families"}));
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value file; flags override it");

  const std::vector<std::pair<std::string, std::string>> keys = {
      {"family", "free | square-well | neumann-insertion"},
      {"input", "x,value CSV with the potential"},
      {"bc", "robin | dirichlet | neumann"},
      {"sigma0", "Robin parameter"},
      {"depth", "square-well depth V0"},
      {"width", "square-well width a"},
      {"omega", "insertion family omega"},
      {"gamma", "insertion family gamma"},
      {"L", "truncation length"},
      {"n", "grid intervals"},
      {"spacing", "target grid spacing"},
      {"tol", "telescope step tolerance"},
      {"consistency-tol", "telescope vs report tolerance"},
      {"order", "removal order, e.g. 2,1"},
      {"out", "output directory"},
      {"sweep", "number of random square wells"},
      {"seed", "sweep seed"},
      {"depth-range", "sweep depth range lo,hi"},
      {"width-range", "sweep width range lo,hi"},
      {"sigma-range", "sweep sigma0 range lo,hi"},
  };
  std::map<std::string, std::string> given;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const auto& [key, help] : keys) {
    options.emplace_back(key, app.add_option("--" + key, given[key], help));
  }
  bool diagnostics = false, no_lt = false;
  auto* diag_flag = app.add_flag("--diagnostics", diagnostics, "Riccati and antiderivative checks");
  auto* lt_flag = app.add_flag("--no-lt", no_lt, "allow positive samples in --input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : read_config(config_path);
    config.subcommand = subcommand;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) apply_setting(config, key, given[key]);
    }
    if (diag_flag->count() > 0) config.diagnostics = diagnostics;
    if (lt_flag->count() > 0) config.lt_mode = !no_lt;

    CommandResult result;
    if (subcommand == "solve") result = cmd_solve(config);
    else if (subcommand == "commute") result = cmd_commute(config);
    else if (subcommand == "verify") result = cmd_verify(config);
    else if (subcommand == "plotdata") result = cmd_plotdata(config);
    else result = cmd_families(config);
    std::cout << dump(result.output);
    return result.ok ? 0 : 1;
  } catch (const Error& e) {
    Json err;
    err["error"] = std::string(to_string(e.kind()));
    err["message"] = e.what();
    std::cerr << dump(err);
    return 2;
  } catch (const std::exception& e) {
    Json err;
    err["error"] = "InternalError";
    err["message"] = e.what();
    std::cerr << dump(err);
    return 2;
  }
}

}  // namespace halfline
