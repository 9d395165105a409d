#include "csflock/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

#include "csflock/errors.hpp"

namespace csflock {

std::string_view to_string(Summation s) {
  switch (s) {
    case Summation::Auto: return "auto";
    case Summation::Direct: return "direct";
    case Summation::Sorted: return "sorted";
  }
  return "auto";
}

std::string_view to_string(Sampling s) {
  switch (s) {
    case Sampling::Stratified: return "stratified";
    case Sampling::Random: return "random";
    case Sampling::Midpoint: return "midpoint";
  }
  return "stratified";
}

void SimConfig::validate() const {
  try {
    kernel.validate();
  } catch (const DomainError& e) {
    throw ConfigError("kernel", e.what());
  }
  if (!(L > 0.0)) throw ConfigError("run.L", "must be > 0");
  if (n < 3) throw ConfigError("run.n", "must be >= 3, got " + std::to_string(n));
  if (N < 1) throw ConfigError("run.N", "must be >= 1, got " + std::to_string(N));
  if (!(dt > 0.0)) throw ConfigError("run.dt", "must be > 0");
  if (!(t_end > 0.0)) throw ConfigError("run.t_end", "must be > 0");
  if (!std::isfinite(c)) throw ConfigError("run.c", "must be finite");
  if (snapshot_every < 1) throw ConfigError("run.snapshot_every", "must be >= 1");
  if (!(rho_floor >= 0.0)) throw ConfigError("run.rho_floor", "must be >= 0");
  if (!(cfl_limit > 0.0)) throw ConfigError("run.cfl_limit", "must be > 0");
  if (x_M && !(*x_M >= 0.0)) throw ConfigError("run.x_M", "must be >= 0");
}

long SimConfig::steps() const { return std::max(1L, std::lround(t_end / dt)); }

namespace {

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

double parse_double(const std::string& field, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  return value;
}

long long parse_integer(const std::string& field, const std::string& text) {
  long long value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

void set_field(SimConfig& cfg, const std::string& field, const std::string& raw) {
  const std::string value = trim(raw);
  const auto as_int = [&] {
    const long long v = parse_integer(field, value);
    if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(field, "integer out of range");
    return static_cast<int>(v);
  };
  if (field == "kernel.variant") {
    try {
      cfg.kernel.variant = parse_kernel_variant(value);
    } catch (const DomainError& e) {
      throw ConfigError(field, e.what());
    }
  } else if (field == "kernel.k") {
    cfg.kernel.k = parse_double(field, value);
  } else if (field == "kernel.lambda") {
    cfg.kernel.lambda = parse_double(field, value);
  } else if (field == "kernel.L") {
    cfg.kernel.L = parse_double(field, value);
  } else if (field == "kernel.r") {
    cfg.kernel.r = parse_double(field, value);
  } else if (field == "kernel.d") {
    cfg.kernel.d = as_int();
  } else if (field == "kernel.K") {
    cfg.kernel.K = parse_double(field, value);
  } else if (field == "kernel.gamma") {
    cfg.kernel.gamma = parse_double(field, value);
  } else if (field == "run.L") {
    cfg.L = parse_double(field, value);
  } else if (field == "run.n") {
    cfg.n = as_int();
  } else if (field == "run.N") {
    cfg.N = as_int();
  } else if (field == "run.dt") {
    cfg.dt = parse_double(field, value);
  } else if (field == "run.t_end") {
    cfg.t_end = parse_double(field, value);
  } else if (field == "run.c") {
    cfg.c = parse_double(field, value);
  } else if (field == "run.snapshot_every") {
    cfg.snapshot_every = as_int();
  } else if (field == "run.rho_floor") {
    cfg.rho_floor = parse_double(field, value);
  } else if (field == "run.cfl_limit") {
    cfg.cfl_limit = parse_double(field, value);
  } else if (field == "run.seed") {
    const long long v = parse_integer(field, value);
    if (v < 0) throw ConfigError(field, "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (field == "run.frame") {
    if (value == "fluctuation") {
      cfg.fluctuation_frame = true;
    } else if (value == "lab") {
      cfg.fluctuation_frame = false;
    } else {
      throw ConfigError(field, "expected 'fluctuation' or 'lab', got '" + value + "'");
    }
  } else if (field == "run.summation") {
    if (value == "auto") cfg.summation = Summation::Auto;
    else if (value == "direct") cfg.summation = Summation::Direct;
    else if (value == "sorted") cfg.summation = Summation::Sorted;
    else throw ConfigError(field, "expected auto, direct or sorted, got '" + value + "'");
  } else if (field == "run.sampling") {
    if (value == "stratified") cfg.sampling = Sampling::Stratified;
    else if (value == "random") cfg.sampling = Sampling::Random;
    else if (value == "midpoint") cfg.sampling = Sampling::Midpoint;
    else throw ConfigError(field, "expected stratified, random or midpoint, got '" + value + "'");
  } else if (field == "run.x_M") {
    if (value == "auto" || value.empty()) cfg.x_M.reset();
    else cfg.x_M = parse_double(field, value);
  } else if (field == "output.dir") {
    cfg.out_dir = value;
  } else {
    throw ConfigError(field, "unknown key");
  }
}

}  // namespace

std::map<std::string, std::string> to_key_values(const SimConfig& c) {
  std::map<std::string, std::string> kv;
  kv["kernel.variant"] = std::string(to_string(c.kernel.variant));
  kv["kernel.k"] = format_double(c.kernel.k);
  kv["kernel.lambda"] = format_double(c.kernel.lambda);
  kv["kernel.L"] = format_double(c.kernel.L);
  kv["kernel.r"] = format_double(c.kernel.r);
  kv["kernel.d"] = std::to_string(c.kernel.d);
  kv["kernel.K"] = format_double(c.kernel.K);
  kv["kernel.gamma"] = format_double(c.kernel.gamma);
  kv["run.L"] = format_double(c.L);
  kv["run.n"] = std::to_string(c.n);
  kv["run.N"] = std::to_string(c.N);
  kv["run.dt"] = format_double(c.dt);
  kv["run.t_end"] = format_double(c.t_end);
  kv["run.c"] = format_double(c.c);
  kv["run.snapshot_every"] = std::to_string(c.snapshot_every);
  kv["run.rho_floor"] = format_double(c.rho_floor);
  kv["run.cfl_limit"] = format_double(c.cfl_limit);
  kv["run.seed"] = std::to_string(c.seed);
  kv["run.frame"] = c.fluctuation_frame ? "fluctuation" : "lab";
  kv["run.summation"] = std::string(to_string(c.summation));
  kv["run.sampling"] = std::string(to_string(c.sampling));
  kv["run.x_M"] = c.x_M ? format_double(*c.x_M) : "auto";
  kv["output.dir"] = c.out_dir;
  return kv;
}

namespace {

// "value ; note" and "value # note" keep only the value.
std::string strip_inline_comment(const std::string& value) {
  for (std::size_t i = 1; i < value.size(); ++i) {
    if ((value[i] == ';' || value[i] == '#') && (value[i - 1] == ' ' || value[i - 1] == '\t')) {
      return trim(value.substr(0, i));
    }
  }
  return value;
}

}  // namespace

SimConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  const std::string text(std::istreambuf_iterator<char>(in), {});
  // read_ini drops sections without keys, so look for the header directly.
  bool has_kernel = false;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (trim(line) == "[kernel]") has_kernel = true;
  }
  pt::ptree tree;
  try {
    std::istringstream body(text);
    pt::read_ini(body, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", e.message(), static_cast<long>(e.line()));
  }
  SimConfig cfg;
  for (const auto& [section, body] : tree) {
    if (section != "kernel" && section != "run" && section != "output") {
      if (body.empty()) throw ConfigError(section, "key outside of any section");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, node] : body) {
      set_field(cfg, section + "." + key, strip_inline_comment(node.data()));
    }
  }
  if (!has_kernel) throw ConfigError("kernel", "missing [kernel] section");
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  return parse_config(in);
}

void apply_override(SimConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(assignment, "override must look like section.key=value");
  }
  set_field(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

}  // namespace csflock
