#include "toric/analysis.hpp"
#include "toric/cli.hpp"
#include "toric/errors.hpp"
#include "toric/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

namespace toric::cli {

namespace {

using nlohmann::json;

// Raw flag text; turned into config lines so flags and files share one parser.
struct Flags {
  std::optional<std::string> config, dims, metric, f, p, objective, top_k, reduce, method, restarts, tie_tol,
      budget, seed, threads, format, out;
  std::optional<std::string> sites, sites_file, dims_list, dft;
  Index n = 8;
  double a = 1.05;
  int power = 1;
  std::string a_grid = "1.01,1.2,2,10";
};

void add_instance_flags(CLI::App* sub, Flags& fl) {
  sub->add_option("--config", fl.config, "key = value file; flags override it");
  sub->add_option("--dims", fl.dims, "grid sizes, e.g. 4,4 or 4x4");
  sub->add_option("--metric", fl.metric, "lee | euclid | euclid-sq | chebyshev");
  sub->add_option("--f", fl.f, "inverse-power:ALPHA | exp:A[:sq] | table:PATH");
  sub->add_option("--tie-tol", fl.tie_tol, "absolute tie tolerance for eigenvalues");
  sub->add_option("--budget", fl.budget, "work budget for exhaustive search");
  sub->add_option("--threads", fl.threads, "worker threads (0 = auto)");
  sub->add_option("--format", fl.format, "json | csv | ascii-grid");
  sub->add_option("--out", fl.out, "output path (eigs: prefix for .csv and .json)");
}

void add_search_flags(CLI::App* sub, Flags& fl) {
  sub->add_option("--p", fl.p, "number of particles");
  sub->add_option("--objective", fl.objective, "total | max");
  sub->add_option("--top-k", fl.top_k, "number of ranked results");
  sub->add_option("--reduce", fl.reduce, "none | translations");
  sub->add_option("--method", fl.method, "brute | local");
  sub->add_option("--restarts", fl.restarts, "local search restarts");
  sub->add_option("--seed", fl.seed, "local search seed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InstanceSpec resolve_spec(const Flags& fl) {
  InstanceSpec base;
  base.budget = default_budget_from_env();
  std::string text;
  if (fl.config) text = read_file(*fl.config) + '\n';
  const std::pair<const char*, const std::optional<std::string>*> keyed[] = {
      {"dims", &fl.dims},         {"metric", &fl.metric},   {"f", &fl.f},
      {"p", &fl.p},               {"objective", &fl.objective}, {"top_k", &fl.top_k},
      {"reduce", &fl.reduce},     {"method", &fl.method},   {"restarts", &fl.restarts},
      {"tie_tol", &fl.tie_tol},   {"budget", &fl.budget},   {"seed", &fl.seed},
      {"threads", &fl.threads},   {"format", &fl.format},   {"out", &fl.out},
  };
  for (const auto& [key, value] : keyed) {
    if (!*value) continue;
    if ((*value)->find('\n') != std::string::npos) throw std::invalid_argument(std::string("newline in --") + key);
    text += std::string(key) + " = " + **value + '\n';
  }
  InstanceSpec spec = parse_config_text(text, base);
  if (spec.top_k < 1) throw std::invalid_argument("top_k must be >= 1");
  if (spec.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (spec.threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (!(spec.budget > 0)) throw std::invalid_argument("budget must be positive");
  return spec;
}

GridDims require_dims(const InstanceSpec& spec) {
  if (spec.dims.empty()) throw std::invalid_argument("--dims is required");
  return GridDims(spec.dims);
}

json to_json(const std::vector<Character>& chars) {
  json arr = json::array();
  for (const Character& c : chars) arr.push_back(c.indices);
  return arr;
}

json sites_json(const Configuration& s) {
  json arr = json::array();
  for (const Site& g : s.member_sites()) arr.push_back(g.coords);
  return arr;
}

std::string joined(const std::vector<Index>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

std::string joined(const std::vector<Character>& chars) {
  std::string s;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (i) s += ';';
    s += joined(chars[i].indices);
  }
  return s;
}

std::string sites_text(const Configuration& s) {
  std::string text;
  for (const Site& g : s.member_sites()) {
    if (!text.empty()) text += ';';
    text += joined(g.coords);
  }
  return text;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  Sink(std::ostream& fallback, const std::optional<std::string>& path) : os_(&fallback) {
    if (path) {
      file_ = std::make_unique<std::ofstream>(*path, std::ios::binary);
      if (!*file_) throw IoError("cannot write '" + *path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }
  void close() {
    os_->flush();
    if (file_ && !*file_) throw IoError("write failed");
  }

 private:
  std::ostream* os_;
  std::unique_ptr<std::ofstream> file_;
};

json header(const InstanceSpec& spec, const GridDims& dims) {
  return json{{"dims", dims.sizes()}, {"metric", metric_name(spec.metric)}, {"f", spec.energy}};
}

json certificate_json(const CertificateReport& r) {
  return json{{"dims", r.dims.sizes()},
              {"metric", metric_name(r.metric)},
              {"f", r.energy},
              {"certified", r.certified},
              {"lambda_min", r.lambda_min},
              {"lambda_trivial", r.lambda_trivial},
              {"lambda_minus_one", r.lambda_minus_one},
              {"argmin", to_json(r.argmin)},
              {"offenders", to_json(r.offenders)},
              {"gap", r.gap},
              {"optimal_value", r.optimal_value},
              {"checkerboard_e_tot", r.checkerboard_e_tot},
              {"checkerboard_e_max", r.checkerboard_e_max},
              {"tie_tol", r.tie_tol},
              {"statement", r.statement}};
}

int cmd_eigs(const InstanceSpec& spec, const std::string& dft, std::ostream& out) {
  const GridDims dims = require_dims(spec);
  DftMethod method;
  if (dft == "naive") method = DftMethod::Naive;
  else if (dft == "fast") method = DftMethod::Fast;
  else throw std::invalid_argument("unknown --dft: '" + dft + "'");

  const EigenTable eigs = eigen_table(build_kernel(dims, spec.metric, parse_energy(spec.energy)), method);
  const MinimumReport m = min_nontrivial(eigs, spec.tie_tol);

  json summary = header(spec, dims);
  summary["order"] = dims.order();
  summary["lambda_trivial"] = eigs.trivial();
  summary["lambda_min"] = m.lambda_min;
  summary["argmin"] = to_json(m.argmin);
  summary["tie_tol"] = m.tie_tol;
  summary["max_imag_residue"] = eigs.max_imag_residue;

  auto write_csv = [&](std::ostream& os) {
    os << "character,lambda\n";
    for (Index i = 0; i < dims.order(); ++i)
      os << csv_field(joined(dims.character_at(i).indices)) << ',' << format_double(eigs.values(i)) << '\n';
  };

  if (spec.out) {
    Sink csv(out, *spec.out + ".csv");
    write_csv(*csv);
    csv.close();
    Sink js(out, *spec.out + ".json");
    *js << summary.dump(2) << '\n';
    js.close();
  } else if (spec.format == OutputFormat::Csv) {
    write_csv(out);
  } else {
    out << summary.dump(2) << '\n';
  }
  return kOk;
}

int cmd_certify(const InstanceSpec& spec, std::ostream& out) {
  const GridDims dims = require_dims(spec);
  const CertificateReport r = checkerboard_certificate(dims, spec.metric, parse_energy(spec.energy), spec.tie_tol);
  Sink sink(out, spec.out);
  *sink << certificate_json(r).dump(2) << '\n';
  sink.close();
  return r.certified ? kOk : kNotCertified;
}

struct SearchRow {
  Configuration s;
  double value;
  Index orbit_size;
  EnergyReport report;
};

int cmd_search(const InstanceSpec& spec, std::ostream& out) {
  const GridDims dims = require_dims(spec);
  if (!spec.p) throw std::invalid_argument("--p is required");
  const KernelTable kernel = build_kernel(dims, spec.metric, parse_energy(spec.energy));

  std::vector<SearchRow> rows;
  json extra;
  if (spec.method == SearchMethod::Brute) {
    BruteForceOptions opts{spec.objective, spec.top_k, spec.reduce, spec.budget, spec.threads};
    for (RankedConfiguration& r : brute_force(kernel, *spec.p, opts)) {
      EnergyReport report = energies(r.representative, kernel);
      rows.push_back({std::move(r.representative), r.value, r.orbit_size, std::move(report)});
    }
  } else {
    LocalSearchOptions opts{spec.objective, spec.restarts, spec.seed, spec.threads};
    LocalSearchResult r = local_search(kernel, *spec.p, opts);
    const Index orbit = translation_orbit_size(r.best);
    extra = json{{"restarts", spec.restarts}, {"seed", spec.seed}, {"best_restart", r.restart}};
    rows.push_back({std::move(r.best), r.value, orbit, std::move(r.report)});
  }

  Sink sink(out, spec.out);
  std::ostream& os = *sink;
  if (spec.format == OutputFormat::Csv) {
    os << "rank,value,e_tot,e_max,equienergetic,orbit_size,sites\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const SearchRow& r = rows[i];
      os << i + 1 << ',' << format_double(r.value) << ',' << format_double(r.report.e_tot) << ','
         << format_double(r.report.e_max) << ',' << (r.report.is_equienergetic ? "true" : "false") << ','
         << r.orbit_size << ',' << csv_field(sites_text(r.s)) << '\n';
    }
  } else if (spec.format == OutputFormat::AsciiGrid) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) os << '\n';
      os << "# rank " << i + 1 << ' ' << objective_name(spec.objective) << ' ' << format_double(rows[i].value) << '\n'
         << render_ascii(rows[i].s);
    }
  } else {
    json doc = header(spec, dims);
    doc["p"] = *spec.p;
    doc["objective"] = objective_name(spec.objective);
    doc["method"] = spec.method == SearchMethod::Brute ? "brute" : "local";
    if (!extra.is_null()) doc.update(extra);
    json results = json::array();
    for (const SearchRow& r : rows)
      results.push_back(json{{"value", r.value},
                             {"e_tot", r.report.e_tot},
                             {"e_max", r.report.e_max},
                             {"equienergetic", r.report.is_equienergetic},
                             {"orbit_size", r.orbit_size},
                             {"sites", sites_json(r.s)}});
    doc["results"] = std::move(results);
    os << doc.dump(2) << '\n';
  }
  sink.close();
  return kOk;
}

int cmd_energy(const InstanceSpec& spec, const Flags& fl, std::ostream& out) {
  const GridDims dims = require_dims(spec);
  if (fl.sites.has_value() == fl.sites_file.has_value())
    throw std::invalid_argument("give exactly one of --sites or --sites-file");
  const std::string text = fl.sites ? *fl.sites : read_file(*fl.sites_file);
  const std::vector<Site> sites = parse_sites(dims, text);
  const Configuration s = Configuration::from_sites(dims, sites);
  const EnergyReport r = energies(s, build_kernel(dims, spec.metric, parse_energy(spec.energy)));

  Sink sink(out, spec.out);
  std::ostream& os = *sink;
  if (spec.format == OutputFormat::Csv) {
    os << "site,energy\n";
    for (std::size_t i = 0; i < r.sites.size(); ++i)
      os << csv_field(joined(dims.site_at(r.sites[i]).coords)) << ',' << format_double(r.per_site(Index(i))) << '\n';
  } else if (spec.format == OutputFormat::AsciiGrid) {
    os << render_ascii(s) << "# e_tot " << format_double(r.e_tot) << "\n# e_max " << format_double(r.e_max) << '\n';
  } else {
    json doc = header(spec, dims);
    doc["p"] = s.p();
    doc["e_tot"] = r.e_tot;
    doc["e_max"] = r.e_max;
    doc["equienergetic"] = r.is_equienergetic;
    json per_site = json::array();
    for (std::size_t i = 0; i < r.sites.size(); ++i)
      per_site.push_back(json{{"site", dims.site_at(r.sites[i]).coords}, {"energy", r.per_site(Index(i))}});
    doc["per_site"] = std::move(per_site);
    os << doc.dump(2) << '\n';
  }
  sink.close();
  return kOk;
}

int cmd_sweep(const InstanceSpec& spec, const Flags& fl, std::ostream& out) {
  if (!fl.dims_list) throw std::invalid_argument("--dims-list is required");
  std::string list = *fl.dims_list;
  for (char& c : list)
    if (c == ';') c = ' ';
  std::istringstream tokens(list);
  std::vector<GridDims> grids;
  for (std::string token; tokens >> token;) grids.push_back(GridDims::parse(token));
  if (grids.empty()) throw std::invalid_argument("--dims-list is empty");
  for (const GridDims& g : grids)
    if (!g.all_even()) throw std::invalid_argument("sweep needs even sizes, got " + g.to_string());

  const EnergyFunction f = parse_energy(spec.energy);
  std::vector<CertificateReport> reports;
  for (const GridDims& g : grids) reports.push_back(checkerboard_certificate(g, spec.metric, f, spec.tie_tol));

  Sink sink(out, spec.out);
  std::ostream& os = *sink;
  if (spec.format == OutputFormat::Json) {
    json rows = json::array();
    for (const CertificateReport& r : reports) rows.push_back(certificate_json(r));
    os << json{{"metric", metric_name(spec.metric)}, {"f", spec.energy}, {"rows", rows}}.dump(2) << '\n';
  } else {
    os << "dims,certified,lambda_min,lambda_minus_one,argmin,optimal_value,checkerboard_e_tot,checkerboard_e_max\n";
    for (const CertificateReport& r : reports)
      os << r.dims.to_string() << ',' << (r.certified ? "true" : "false") << ',' << format_double(r.lambda_min) << ','
         << format_double(r.lambda_minus_one) << ',' << csv_field(joined(r.argmin)) << ','
         << format_double(r.optimal_value) << ',' << format_double(r.checkerboard_e_tot) << ','
         << format_double(r.checkerboard_e_max) << '\n';
  }
  sink.close();
  for (const CertificateReport& r : reports)
    if (!r.certified) return kNotCertified;
  return kOk;
}

int cmd_kernel(const InstanceSpec& spec, std::ostream& out) {
  const GridDims dims = require_dims(spec);
  const KernelTable k = build_kernel(dims, spec.metric, parse_energy(spec.energy));
  Sink sink(out, spec.out);
  std::ostream& os = *sink;
  if (spec.format == OutputFormat::Json) {
    json values = json::array();
    for (Index g = 0; g < dims.order(); ++g)
      values.push_back(json{{"site", dims.site_at(g).coords},
                            {"distance", distance_to_origin(spec.metric, g, dims)},
                            {"u", k.values(g)}});
    json doc = header(spec, dims);
    doc["values"] = std::move(values);
    os << doc.dump(2) << '\n';
  } else {
    os << "site,distance,u\n";
    for (Index g = 0; g < dims.order(); ++g)
      os << csv_field(joined(dims.site_at(g).coords)) << ',' << format_double(distance_to_origin(spec.metric, g, dims))
         << ',' << format_double(k.values(g)) << '\n';
  }
  sink.close();
  return kOk;
}

int cmd_factor(const InstanceSpec& spec, const Flags& fl, std::ostream& out) {
  const FactorCurve c = factor_curve(fl.n, fl.a, fl.power);
  Sink sink(out, spec.out);
  std::ostream& os = *sink;
  if (spec.format == OutputFormat::Json) {
    std::vector<double> values(c.values.data(), c.values.data() + c.values.size());
    os << json{{"n", c.n}, {"a", c.a}, {"power", c.distance_power}, {"values", values}, {"argmin", c.argmin}}.dump(2)
       << '\n';
  } else {
    os << "k,value\n";
    for (Index k = 0; k < c.n; ++k) os << k << ',' << format_double(c.values(k)) << '\n';
  }
  sink.close();
  return kOk;
}

int cmd_bernstein(const InstanceSpec& spec, const Flags& fl, std::ostream& out) {
  std::vector<double> grid;
  std::string list = fl.a_grid;
  for (char& c : list)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream tokens(list);
  for (std::string token; tokens >> token;) {
    std::size_t used = 0;
    double a = 0;
    try {
      a = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw std::invalid_argument("bad --a-grid entry '" + token + "'");
    grid.push_back(a);
  }
  const std::vector<BernsteinRow> rows = bernstein_sweep(fl.n, fl.power, grid);
  Sink sink(out, spec.out);
  std::ostream& os = *sink;
  if (spec.format == OutputFormat::Json) {
    json arr = json::array();
    for (const BernsteinRow& r : rows)
      arr.push_back(json{{"a", r.a}, {"argmin", r.argmin}, {"strict_min_at_minus_one", r.is_minus_one_strict_min}});
    os << json{{"n", fl.n}, {"power", fl.power}, {"rows", arr}}.dump(2) << '\n';
  } else {
    os << "a,argmin,strict_min_at_minus_one\n";
    for (const BernsteinRow& r : rows)
      os << format_double(r.a) << ',' << csv_field(joined(r.argmin)) << ','
         << (r.is_minus_one_strict_min ? "true" : "false") << '\n';
  }
  sink.close();
  bool all_strict = true;
  for (const BernsteinRow& r : rows) all_strict = all_strict && r.is_minus_one_strict_min;
  return all_strict ? kOk : kNotCertified;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy minimisation of repelling particles on toric grids", "toric_lab"};
  app.require_subcommand(1);
  Flags fl;

  auto* eigs = app.add_subcommand("eigs", "eigenvalue table of the energy kernel");
  add_instance_flags(eigs, fl);
  eigs->add_option("--dft", fl.dft, "naive | fast");

  auto* certify = app.add_subcommand("certify", "checkerboard certificate at p = |G|/2");
  add_instance_flags(certify, fl);

  auto* search = app.add_subcommand("search", "brute-force or local search for optimal p-subsets");
  add_instance_flags(search, fl);
  add_search_flags(search, fl);

  auto* energy = app.add_subcommand("energy", "per-site energies of a given configuration");
  add_instance_flags(energy, fl);
  energy->add_option("--sites", fl.sites, "sites as 0,0;0,1;...");
  energy->add_option("--sites-file", fl.sites_file, "file with one site per line");

  auto* sweep = app.add_subcommand("sweep", "certificates over a list of grids");
  add_instance_flags(sweep, fl);
  sweep->add_option("--dims-list", fl.dims_list, "grids such as \"2x2 4x4 8x4\"");

  auto* kernel = app.add_subcommand("kernel", "kernel values u(g, 0)");
  add_instance_flags(kernel, fl);

  auto* factor = app.add_subcommand("factor", "one-axis factor curve of a^(-distance^power)");
  factor->add_option("--n", fl.n, "axis length")->check(CLI::PositiveNumber);
  factor->add_option("--a", fl.a, "base > 1");
  factor->add_option("--power", fl.power, "1 or 2");
  factor->add_option("--format", fl.format, "csv | json");
  factor->add_option("--out", fl.out, "output path");

  auto* bernstein = app.add_subcommand("bernstein", "factor-curve argmin over a grid of bases");
  bernstein->add_option("--n", fl.n, "axis length")->check(CLI::PositiveNumber);
  bernstein->add_option("--power", fl.power, "1 or 2");
  bernstein->add_option("--a-grid", fl.a_grid, "bases, comma separated");
  bernstein->add_option("--format", fl.format, "csv | json");
  bernstein->add_option("--out", fl.out, "output path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidSpec;
  }

  try {
    InstanceSpec spec = resolve_spec(fl);
    if (eigs->parsed()) return cmd_eigs(spec, fl.dft.value_or("naive"), out);
    if (certify->parsed()) return cmd_certify(spec, out);
    if (search->parsed()) return cmd_search(spec, out);
    if (energy->parsed()) return cmd_energy(spec, fl, out);
    if (sweep->parsed()) return cmd_sweep(spec, fl, out);
    if (kernel->parsed()) return cmd_kernel(spec, out);
    if (!fl.format) spec.format = OutputFormat::Csv;
    if (factor->parsed()) return cmd_factor(spec, fl, out);
    if (bernstein->parsed()) return cmd_bernstein(spec, fl, out);
    return kInvalidSpec;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const AllocationRefused& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidSpec;
  }
}

}  // namespace toric::cli
