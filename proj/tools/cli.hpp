#pragma once

// Subcommand front end: spectrum, trace, det, scan, julia, homotopy-check.
// Settings resolve as command-line flags > --config JSON file > defaults, and
// the resolved settings are embedded in every CSV/JSON artifact.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "io.hpp"
#include "ruelle/ruelle.hpp"

namespace ruelle::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kInputError = 1, kNumericalWarning = 2 };

/// Settings for one subcommand: defaults plus string-valued flag slots.
class Settings {
 public:
  Settings(CLI::App* app, json defaults) : app_(app), resolved_(std::move(defaults)) {
    for (auto it = resolved_.begin(); it != resolved_.end(); ++it) {
      auto& slot = flags_[it.key()];
      options_[it.key()] = app_->add_option("--" + it.key(), slot);
    }
    app_->add_option("--config", config_path_, "JSON file with settings for this command");
  }

  /// Applies the config file and then the explicitly given flags.
  void resolve() {
    if (!config_path_.empty()) {
      std::ifstream f(config_path_);
      if (!f) throw InvalidInput("config: cannot open " + config_path_);
      std::stringstream buf;
      buf << f.rdbuf();
      const json file = io::parse_json(buf.str(), "config");
      if (!file.is_object()) throw InvalidInput("config: top level must be an object");
      for (auto it = file.begin(); it != file.end(); ++it) {
        if (!resolved_.contains(it.key())) throw InvalidInput("config: unknown key \"" + it.key() + "\"");
        resolved_[it.key()] = it.value();
      }
    }
    for (const auto& [key, option] : options_) {
      if (option->count() == 0) continue;
      const std::string& text = flags_.at(key);
      json value;
      try {
        value = json::parse(text);
      } catch (const json::parse_error&) {
        value = text;
      }
      resolved_[key] = value;
    }
  }

  const json& resolved() const { return resolved_; }
  bool has(const std::string& key) const { return !resolved_.at(key).is_null(); }

  double number(const std::string& key) const {
    const json& v = resolved_.at(key);
    if (v.is_number()) return v.get<double>();
    throw InvalidInput("setting \"" + key + "\" must be a number");
  }

  int integer(const std::string& key) const {
    const json& v = resolved_.at(key);
    if (v.is_number_integer()) return v.get<int>();
    throw InvalidInput("setting \"" + key + "\" must be an integer");
  }

  std::string text(const std::string& key) const {
    const json& v = resolved_.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return {};
    return v.dump();
  }

  /// Comma-separated string or JSON array of numbers.
  std::vector<double> numbers(const std::string& key) const {
    const json& v = resolved_.at(key);
    std::vector<double> out;
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
      for (const auto& x : v) {
        if (!x.is_number()) throw InvalidInput("setting \"" + key + "\" must hold numbers");
        out.push_back(x.get<double>());
      }
      return out;
    }
    if (v.is_string()) {
      std::stringstream ss(v.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          out.push_back(std::stod(item, &used));
          if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw InvalidInput("setting \"" + key + "\": cannot parse \"" + item + "\" as a number");
        }
      }
      return out;
    }
    throw InvalidInput("setting \"" + key + "\" must be a list of numbers");
  }

  Complex complex(const std::string& key) const {
    const auto v = numbers(key);
    if (v.size() == 1) return {v[0], 0.0};
    if (v.size() == 2) return {v[0], v[1]};
    throw InvalidInput("setting \"" + key + "\" must be re or re,im");
  }

  CircleMap map(const std::string& key) const {
    const json& v = resolved_.at(key);
    if (v.is_null()) throw InvalidInput("missing map descriptor \"" + key + "\"");
    if (v.is_string()) return io::map_from_json(io::parse_json(v.get<std::string>(), key.c_str()));
    return io::map_from_json(v);
  }

  Annulus annulus_for(const CircleMap& map) const {
    if (!has("annulus")) return find_annulus(map).annulus;
    const auto v = numbers("annulus");
    if (v.size() != 2) throw InvalidInput("setting \"annulus\" must be r,R");
    return Annulus(v[0], v[1]);
  }

 private:
  CLI::App* app_;
  json resolved_;
  std::map<std::string, std::string> flags_;
  std::map<std::string, CLI::Option*> options_;
  std::string config_path_;
};

/// Writes to the --out path, or to `fallback` when it is empty.
template <class F>
void emit(const Settings& s, std::ostream& fallback, F&& write) {
  const std::string path = s.text("out");
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file " + path);
  write(f);
  if (!f) throw Error("write failed for " + path);
}

inline std::string fmt(double x) { return io::fmt(x); }
inline std::string fmt(Complex z) { return fmt(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i"; }

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct SpectrumSummary {
  double lambda2 = 0.0;
  double beta = 0.0;
  bool has_beta = false;
  double order = 1.0;
};

inline SpectrumSummary summarize(const Spectrum& s) {
  SpectrumSummary out;
  if (s.eigenvalues.size() > 1) out.lambda2 = std::abs(s.eigenvalues[1]);
  out.order = order_estimate(s);
  if (static_cast<int>(usable_decay_indices(s).size()) >= kMinDecayEntries) {
    out.beta = decay_fit(s).beta;
    out.has_beta = true;
  }
  return out;
}

inline int cmd_spectrum(const Settings& s, std::ostream& out, std::ostream& err) {
  const CircleMap map = s.map("map");
  const Annulus annulus = s.annulus_for(map);
  ConvergenceOptions opt;
  opt.N0 = s.integer("N");
  opt.Nmax = s.integer("Nmax");
  const Spectrum spec = converged_spectrum(map, annulus, s.number("tol"), opt);
  json config = s.resolved();
  config["annulus"] = {annulus.r, annulus.R};
  const std::string format = s.text("format");
  if (format != "csv" && format != "json") throw InvalidInput("spectrum: format must be csv or json");
  if (const std::string dump = s.text("dump-matrix"); !dump.empty()) {
    const TruncatedOperator T = assemble_dual(map, annulus, spec.Nplus, spec.Nminus);
    std::ofstream f(dump);
    if (!f) throw Error("cannot open matrix dump file " + dump);
    io::write_csv_config(f, config);
    f << "row,col,re,im\n";
    for (Eigen::Index j = 0; j < T.matrix.cols(); ++j) {
      for (Eigen::Index i = 0; i < T.matrix.rows(); ++i) {
        f << i << ',' << j << ',' << fmt(T.matrix(i, j).real()) << ',' << fmt(T.matrix(i, j).imag()) << '\n';
      }
    }
  }
  emit(s, out, [&](std::ostream& os) {
    if (format == "csv") {
      io::write_spectrum_csv(os, spec, config);
    } else {
      os << io::spectrum_to_json(spec, config).dump(2) << '\n';
    }
  });
  const auto sum = summarize(spec);
  std::ostream& log = s.text("out").empty() ? err : out;
  log << "lambda1 " << fmt(spec.eigenvalues.at(0)) << '\n'
      << "|lambda2| " << fmt(sum.lambda2) << '\n'
      << "beta " << (sum.has_beta ? fmt(sum.beta) : "n/a (finite spectrum)") << '\n'
      << "order " << fmt(sum.order) << '\n'
      << "convergedCount " << spec.converged_count << '\n';
  const double threshold = s.number("threshold");
  if (threshold >= 10.0 * spec.tolerance) log << "N(" << threshold << ") " << counting_function(spec, threshold) << '\n';
  if (!spec.warning.empty()) {
    log << "warning: " << spec.warning << '\n';
    return kNumericalWarning;
  }
  return kOk;
}

inline int cmd_trace(const Settings& s, std::ostream& out, std::ostream& /*err*/) {
  const CircleMap map = s.map("map");
  const Annulus annulus = s.annulus_for(map);
  const int n = s.integer("n");
  const int N = s.integer("N");
  const Complex contour = trace_power(map, n, annulus);
  const TruncatedOperator T = assemble_dual(map, annulus, N, N);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(T.size(), T.size());
  for (int k = 0; k < n; ++k) P = P * T.matrix;
  std::optional<Complex> closed;
  if (const auto* b = map.as<BlaschkeParams>()) closed = blaschke_trace_closed(spectral_multiplier(map), b->anti, n);
  const TraceReport report = make_trace_report(contour, P.trace(), closed);
  json config = s.resolved();
  config["annulus"] = {annulus.r, annulus.R};
  emit(s, out, [&](std::ostream& os) { os << io::trace_to_json(report, config).dump(2) << '\n'; });
  return kOk;
}

inline int cmd_det(const Settings& s, std::ostream& out, std::ostream& /*err*/) {
  const CircleMap map = s.map("map");
  const Annulus annulus = s.annulus_for(map);
  json config = s.resolved();
  config["annulus"] = {annulus.r, annulus.R};
  const auto* b = map.as<BlaschkeParams>();
  const Spectrum spec = converged_spectrum(map, annulus, s.number("tol"));
  int code = spec.warning.empty() ? kOk : kNumericalWarning;

  if (s.has("zeta-line")) {
    const auto line = s.numbers("zeta-line");
    if (line.size() != 3 || line[2] < 2) throw InvalidInput("det: zeta-line must be xmin,xmax,count");
    const int count = static_cast<int>(line[2]);
    emit(s, out, [&](std::ostream& os) {
      io::write_csv_config(os, config);
      os << "zeta_re,zeta_im,logabsZ\n";
      for (int i = 0; i < count; ++i) {
        const double x = line[0] + (line[1] - line[0]) * i / (count - 1);
        const double v = b ? log_abs_det_product(spectral_multiplier(map), b->anti, std::exp(Complex{x, 0.0}))
                           : std::log(std::abs(det_from_spectrum(spec, Complex{x, 0.0}).value));
        os << fmt(x) << ",0," << fmt(v) << '\n';
      }
    });
    return code;
  }

  const Complex z = s.has("zeta") ? std::exp(s.complex("zeta")) : s.complex("z");
  json result;
  result["config"] = config;
  result["z"] = io::complex_to_json(z);
  const DeterminantValue from_spec =
      z == Complex{} ? DeterminantValue{1.0, 0.0, {}} : det_from_spectrum(spec, std::log(z));
  result["spectrum"] = {{"value", io::complex_to_json(from_spec.value)}, {"tailBound", from_spec.tail_bound}};
  if (!from_spec.warning.empty()) {
    result["spectrum"]["warning"] = from_spec.warning;
    code = kNumericalWarning;
  }
  if (std::abs(z) <= kTraceSeriesRadius) {
    const DeterminantValue v = det_from_traces(map, annulus, z, s.integer("nmax"));
    result["traces"] = {{"value", io::complex_to_json(v.value)}, {"tailBound", v.tail_bound}};
  }
  if (b) {
    const DeterminantValue v = det_product_formula(spectral_multiplier(map), b->anti, z);
    result["product"] = {{"value", io::complex_to_json(v.value)}, {"tailBound", v.tail_bound}};
  }
  emit(s, out, [&](std::ostream& os) { os << result.dump(2) << '\n'; });
  return code;
}

inline int cmd_scan(const Settings& s, std::ostream& out, std::ostream& err) {
  const auto grid = s.numbers("grid");
  if (grid.size() != 3) throw InvalidInput("scan: grid must be start,stop,count");
  const int count = static_cast<int>(grid[2]);
  if (count < 1) throw InvalidInput("scan: empty grid");
  const std::string family = s.text("family");
  std::shared_ptr<const HomotopyFamily> hom;
  if (family == "homotopy") {
    hom = std::make_shared<const HomotopyFamily>(build_homotopy(s.map("map0"), s.map("map1")));
  } else if (family != "mobius") {
    throw InvalidInput("scan: family must be mobius or homotopy");
  }
  const double tol = s.number("tol");
  int code = kOk;
  int in_band = 0;
  std::ostringstream rows;
  rows << "w_re,w_im,lambda1_re,lambda2_abs,beta,order,converged,min_expansion\n";
  for (int i = 0; i < count; ++i) {
    const double w = count == 1 ? grid[0] : grid[0] + (grid[1] - grid[0]) * i / (count - 1);
    const CircleMap map = hom ? homotopy_member(hom, w) : mobius(w);
    const Annulus annulus = find_annulus(map).annulus;
    const Spectrum spec = converged_spectrum(map, annulus, tol);
    if (!spec.warning.empty()) code = kNumericalWarning;
    const auto sum = summarize(spec);
    if (sum.order >= 1.8 && sum.order <= 2.2) ++in_band;
    rows << fmt(w) << ",0," << fmt(spec.eigenvalues.at(0).real()) << ',' << fmt(sum.lambda2) << ','
         << (sum.has_beta ? fmt(sum.beta) : "nan") << ',' << fmt(sum.order) << ',' << spec.converged_count << ','
         << fmt(min_expansion(map)) << '\n';
  }
  json config = s.resolved();
  emit(s, out, [&](std::ostream& os) {
    io::write_csv_config(os, config);
    os << rows.str();
  });
  std::ostream& log = s.text("out").empty() ? err : out;
  log << "fraction of grid with order in [1.8, 2.2]: " << in_band << "/" << count << '\n';
  return code;
}

inline int cmd_julia(const Settings& s, std::ostream& out, std::ostream& /*err*/) {
  const Complex w = s.complex("w");
  const std::string size = s.text("size");
  int width = 0, height = 0;
  char sep = 0;
  std::istringstream ss(size);
  if (!(ss >> width >> sep >> height) || (sep != 'x' && sep != 'X')) {
    throw InvalidInput("julia: size must be WxH, got \"" + size + "\"");
  }
  const auto vp = s.numbers("viewport");
  if (vp.size() != 4) throw InvalidInput("julia: viewport must be xmin,xmax,ymin,ymax");
  const std::string mode = s.text("mode");
  if (mode != "basin" && mode != "steps") throw InvalidInput("julia: mode must be basin or steps");
  const std::string path = s.text("out");
  if (path.empty()) throw InvalidInput("julia: --out is required");
  const Raster r = render(w, Viewport{vp[0], vp[1], vp[2], vp[3]}, width, height, s.integer("max-iter"),
                          s.number("eps"));
  write_pgm(r, path, mode == "basin" ? PgmMode::basin : PgmMode::steps);
  out << "wrote " << path << " (" << width << "x" << height << "), undecided fraction "
      << fmt(basin_fraction(r, Basin::undecided)) << ", zero basin connected "
      << (zero_basin_connected(r) ? "yes" : "no") << '\n';
  return kOk;
}

inline int cmd_homotopy_check(const Settings& s, std::ostream& out, std::ostream& /*err*/) {
  HomotopyOptions opt;
  if (s.has("epsilon")) opt.epsilon = s.number("epsilon");
  if (s.has("eta")) opt.eta = s.number("eta");
  const HomotopyFamily f = build_homotopy(s.map("map0"), s.map("map1"), opt);
  // sup over sampled z in the closed annulus of |T(0,z) - T(eta,z)| against
  // eta * sup |d/dw T| over w in [0, eta].
  double sup_diff = 0.0, sup_dw = 0.0;
  const int rings = 9, nodes = 512, ws = 9;
  for (int i = 0; i < rings; ++i) {
    const double radius = std::exp(-f.epsilon + 2.0 * f.epsilon * i / (rings - 1));
    for (int j = 0; j < nodes; ++j) {
      const Complex z = detail::circle_node(radius, j, nodes);
      sup_diff = std::max(sup_diff, std::abs(homotopy_eval(f, 0.0, z) - homotopy_eval(f, f.eta, z)));
      for (int k = 0; k < ws; ++k) {
        sup_dw = std::max(sup_dw, std::abs(homotopy_param_deriv(f, f.eta * k / (ws - 1), z)));
      }
    }
  }
  json j;
  j["config"] = s.resolved();
  j["degree"] = f.degree();
  j["epsilon"] = f.epsilon;
  j["eta"] = f.eta;
  j["rho"] = f.rho;
  j["annuli"] = {{"r0", f.r0}, {"R0", f.R0}, {"r1", f.r1}, {"R1", f.R1}};
  j["margins"] = {{"inner", f.inner_margin}, {"outer", f.outer_margin}};
  j["supDistance"] = sup_diff;
  j["etaBound"] = f.eta * sup_dw;
  emit(s, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Ruelle spectra of analytic expanding circle maps"};
  app.require_subcommand(1);

  const json null = nullptr;
  auto* spectrum = app.add_subcommand("spectrum", "converged Ruelle spectrum of a map");
  Settings s_spectrum(spectrum, {{"map", null}, {"annulus", null}, {"N", 32}, {"Nmax", 256}, {"tol", 1e-9},
                                 {"threshold", 0.1}, {"format", "csv"}, {"out", ""},
                                 {"dump-matrix", ""}});
  auto* trace = app.add_subcommand("trace", "trace of L^n by contour, matrix and closed form");
  Settings s_trace(trace, {{"map", null}, {"annulus", null}, {"n", 1}, {"N", 48}, {"out", ""}});
  auto* det = app.add_subcommand("det", "spectral determinant det(I - z L) by the available routes");
  Settings s_det(det, {{"map", null}, {"annulus", null}, {"z", "0,0"}, {"zeta", null}, {"zeta-line", null},
                       {"nmax", 40}, {"tol", 1e-10}, {"out", ""}});
  auto* scan = app.add_subcommand("scan", "spectral scan over a one-parameter family");
  Settings s_scan(scan, {{"family", "mobius"}, {"map0", null}, {"map1", null}, {"grid", "0,1,11"},
                         {"tol", 1e-9}, {"out", ""}});
  auto* julia = app.add_subcommand("julia", "basin raster of z(2z - w)/(2 - wz) as binary PGM");
  Settings s_julia(julia, {{"w", "0.5,0.26"}, {"size", "512x512"}, {"viewport", "-1.6,1.6,-1.6,1.6"},
                           {"max-iter", 500}, {"eps", 1e-3}, {"mode", "basin"}, {"out", ""}});
  auto* hcheck = app.add_subcommand("homotopy-check", "certify the complexified homotopy between two maps");
  Settings s_hcheck(hcheck, {{"map0", null}, {"map1", null}, {"epsilon", null}, {"eta", null}, {"out", ""}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  const std::vector<std::pair<CLI::App*, std::pair<Settings*, int (*)(const Settings&, std::ostream&, std::ostream&)>>> table = {
      {spectrum, {&s_spectrum, cmd_spectrum}}, {trace, {&s_trace, cmd_trace}},
      {det, {&s_det, cmd_det}},                {scan, {&s_scan, cmd_scan}},
      {julia, {&s_julia, cmd_julia}},          {hcheck, {&s_hcheck, cmd_homotopy_check}}};
  try {
    for (const auto& [sub, entry] : table) {
      if (sub->parsed()) {
        entry.first->resolve();
        return entry.second(*entry.first, out, err);
      }
    }
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalWarning;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace ruelle::cli
