#pragma once

// JSON map descriptors and CSV/JSON writers for the command-line tool.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ruelle/ruelle.hpp"

namespace ruelle::io {

using nlohmann::json;

inline Complex complex_from_json(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InvalidInput(std::string("descriptor: ") + what + " must be a number or [re, im]");
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

/// {"type":"blaschke","alpha":[re,im],"zeros":[[re,im],...],"anti":bool}
/// | {"type":"triglift","d":int,"cos":[...],"sin":[...]}
/// | {"type":"mobius","w":[re,im]}
inline CircleMap map_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw InvalidInput("descriptor: expected an object with a string \"type\"");
  }
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "blaschke") {
      BlaschkeParams p;
      p.alpha = j.contains("alpha") ? complex_from_json(j["alpha"], "alpha") : Complex{1.0, 0.0};
      if (!j.contains("zeros") || !j["zeros"].is_array()) throw InvalidInput("descriptor: blaschke needs \"zeros\"");
      for (const auto& z : j["zeros"]) p.zeros.push_back(complex_from_json(z, "zero"));
      p.anti = j.value("anti", false);
      return CircleMap(p);
    }
    if (type == "triglift") {
      if (!j.contains("d") || !j["d"].is_number_integer()) throw InvalidInput("descriptor: triglift needs integer \"d\"");
      return trig_lift(j["d"].get<int>(), j.value("cos", std::vector<double>{}), j.value("sin", std::vector<double>{}));
    }
    if (type == "mobius") {
      if (!j.contains("w")) throw InvalidInput("descriptor: mobius needs \"w\"");
      return mobius(complex_from_json(j["w"], "w"));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("descriptor: ") + e.what());
  }
  throw InvalidInput("descriptor: unknown map type \"" + type + "\"");
}

inline json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

/// `#`-prefixed config header, one line.
inline void write_csv_config(std::ostream& os, const json& config) { os << "# config " << config.dump() << '\n'; }

inline void write_spectrum_csv(std::ostream& os, const Spectrum& s, const json& config) {
  write_csv_config(os, config);
  os << "n,re,im,modulus,converged\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const Complex z = s.eigenvalues[i];
    os << i + 1 << ',' << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(std::abs(z)) << ','
       << (static_cast<int>(i) < s.converged_count ? 1 : 0) << '\n';
  }
}

inline json spectrum_to_json(const Spectrum& s, const json& config) {
  json j;
  j["config"] = config;
  j["truncation"] = {{"Nplus", s.Nplus}, {"Nminus", s.Nminus}, {"K", s.K}};
  j["convergedCount"] = s.converged_count;
  j["tolerance"] = s.tolerance;
  if (!s.warning.empty()) j["warning"] = s.warning;
  json ev = json::array();
  for (const auto& z : s.eigenvalues) ev.push_back(complex_to_json(z));
  j["eigenvalues"] = ev;
  return j;
}

inline json trace_to_json(const TraceReport& t, const json& config) {
  json j;
  j["config"] = config;
  j["contour"] = complex_to_json(t.contour);
  j["eigensum"] = complex_to_json(t.eigensum);
  if (t.closed_form) j["closedForm"] = complex_to_json(*t.closed_form);
  j["maxPairwiseDiff"] = t.max_pairwise_diff;
  return j;
}

}  // namespace ruelle::io
