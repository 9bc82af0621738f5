#include "lagvac/io.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lagvac::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t line_of(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::size_t line_of_key(std::string_view text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  const std::size_t pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : line_of(text, pos);
}

[[noreturn]] void config_error(std::string_view source, std::string_view text, const std::string& key,
                               const std::string& what) {
  std::ostringstream os;
  os << source;
  if (const auto line = line_of_key(text, key); line > 0) os << ":" << line;
  os << ": key '" << key << "': " << what;
  fail(ErrorKind::invalid_input, os.str());
}

template <class T>
T get_as(const json& j, std::string_view source, std::string_view text, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    config_error(source, text, key, std::string("wrong type (") + j.type_name() + ")");
  }
}

void write_bytes(const fs::path& path, const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  } else {
    for (double x : data) {
      auto bits = std::bit_cast<std::uint64_t>(x);
      unsigned char b[8];
      for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
      out.write(reinterpret_cast<const char*>(b), 8);
    }
  }
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

std::vector<double> read_bytes(const fs::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  if (size != count * sizeof(double))
    fail(ErrorKind::io, path.string() + ": expected " + std::to_string(count * sizeof(double)) + " bytes, found " +
                            std::to_string(size));
  in.seekg(0);
  std::vector<double> data(count);
  std::vector<unsigned char> raw(size);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(size));
  if (!in) fail(ErrorKind::io, "read failed for " + path.string());
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(raw[i * 8 + k]) << (8 * k);
    data[i] = std::bit_cast<double>(bits);
  }
  return data;
}

std::vector<double> flatten(const VectorField& f) {
  std::vector<double> out;
  out.reserve(3 * f.nodes());
  for (std::size_t c = 0; c < 3; ++c) out.insert(out.end(), f.raw(c).begin(), f.raw(c).end());
  return out;
}

VectorField unflatten(const GridSpec& grid, const std::vector<double>& data) {
  VectorField f(grid);
  const std::size_t n = grid.size();
  for (std::size_t c = 0; c < 3; ++c)
    std::copy(data.begin() + static_cast<std::ptrdiff_t>(c * n), data.begin() + static_cast<std::ptrdiff_t>((c + 1) * n),
              f.raw(c).begin());
  return f;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

WeightProfile weight_from_spec(std::string_view spec) {
  if (spec == "parabolic") return WeightProfile::parabolic();
  constexpr std::string_view prefix = "parabolic:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const std::string num(spec.substr(prefix.size()));
    char* end = nullptr;
    const double scale = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0') fail(ErrorKind::invalid_input, "bad parabolic scale '" + num + "'");
    return WeightProfile::parabolic(scale);
  }
  return WeightProfile::from_expression(spec);
}

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << line_of(text, e.byte == 0 ? 0 : e.byte - 1) << ": malformed JSON: " << e.what();
    fail(ErrorKind::invalid_input, os.str());
  }
  if (!j.is_object()) fail(ErrorKind::invalid_input, std::string(source) + ": config must be a JSON object");

  RunConfig rc;
  double gamma = 2.0, eps = 0.0;
  const std::set<std::string> known{"gamma",       "eps",       "n3",         "weight",         "eta0",
                                    "eta1",        "exact_solution", "t_end", "cfl",            "output_interval",
                                    "diagnostic_order", "energy_reports", "output_dir", "mms_n3", "limit_eps",
                                    "verify",      "serial",    "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) config_error(source, text, key, "unknown key");
    if (key == "gamma") gamma = get_as<double>(value, source, text, key);
    else if (key == "eps") eps = get_as<double>(value, source, text, key);
    else if (key == "n3") rc.solver.n3 = get_as<std::size_t>(value, source, text, key);
    else if (key == "weight") rc.weight_spec = get_as<std::string>(value, source, text, key);
    else if (key == "eta0") rc.solver.eta0 = get_as<std::string>(value, source, text, key);
    else if (key == "eta1") rc.solver.eta1 = get_as<std::string>(value, source, text, key);
    else if (key == "exact_solution") rc.solver.exact_solution = get_as<std::string>(value, source, text, key);
    else if (key == "t_end") rc.solver.t_end = get_as<double>(value, source, text, key);
    else if (key == "cfl") rc.solver.cfl = get_as<double>(value, source, text, key);
    else if (key == "output_interval") rc.solver.output_interval = get_as<double>(value, source, text, key);
    else if (key == "diagnostic_order") rc.solver.diagnostic_order = get_as<int>(value, source, text, key);
    else if (key == "energy_reports") rc.solver.energy_reports = get_as<bool>(value, source, text, key);
    else if (key == "output_dir") rc.output_dir = get_as<std::string>(value, source, text, key);
    else if (key == "mms_n3") rc.mms_n3 = get_as<std::vector<std::size_t>>(value, source, text, key);
    else if (key == "limit_eps") rc.limit_eps = get_as<std::vector<double>>(value, source, text, key);
    else if (key == "verify") rc.verify = get_as<std::vector<std::string>>(value, source, text, key);
    else if (key == "serial") rc.solver.exec = get_as<bool>(value, source, text, key) ? Exec::serial : Exec::parallel;
    else if (key == "seed") (void)get_as<std::uint64_t>(value, source, text, key);
  }
  try {
    rc.solver.params = ThermoParams::make(gamma, eps);
  } catch (const Error& e) {
    config_error(source, text, j.contains("gamma") && !(gamma > 1.0 && gamma <= 3.0) ? "gamma" : "eps", e.what());
  }
  try {
    rc.solver.weight = weight_from_spec(rc.weight_spec);
    (void)Expression::parse(rc.solver.eta0);
    (void)Expression::parse(rc.solver.eta1);
    if (rc.solver.exact_solution) (void)Expression::parse(*rc.solver.exact_solution);
  } catch (const Error& e) {
    fail(ErrorKind::invalid_input, std::string(source) + ": " + e.what());
  }
  try {
    rc.solver.validate();
  } catch (const Error& e) {
    fail(ErrorKind::invalid_input, std::string(source) + ": " + e.what());
  }
  return rc;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.string());
}

fs::path output_directory(const fs::path& fallback) {
  if (const char* env = std::getenv("LAGVAC_OUTPUT_DIR"); env && *env) return fs::path(env);
  return fallback;
}

void write_checkpoint(const fs::path& stem, const Checkpoint& cp) {
  const GridSpec& grid = cp.state.grid();
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  json header;
  header["format"] = "lagvac-checkpoint";
  header["version"] = 1;
  header["dtype"] = "f64-le";
  header["order"] = "row-major";
  header["layout"] = "component-major, node index (i1*n2 + i2)*n3 + i3";
  header["shape"] = {grid.shape[0], grid.shape[1], grid.shape[2]};
  header["spacing"] = {grid.spacing[0], grid.spacing[1], grid.spacing[2]};
  header["time"] = cp.state.time;
  header["params"] = {{"gamma", cp.params.gamma}, {"eps", cp.params.eps}, {"alpha", cp.params.alpha}};
  header["weight"] = cp.weight_spec;

  std::vector<std::pair<std::string, const VectorField*>> fields{{"eta", &cp.state.eta}, {"eta_t", &cp.state.eta_t}};
  if (cp.state.eta_tt) fields.emplace_back("eta_tt", &*cp.state.eta_tt);
  json list = json::array();
  for (const auto& [name, f] : fields) {
    const fs::path blob = stem.string() + "." + name + ".f64";
    const auto data = flatten(*f);
    write_bytes(blob, data);
    list.push_back({{"name", name}, {"components", 3}, {"bytes", data.size() * sizeof(double)},
                    {"file", blob.filename().string()}});
  }
  header["fields"] = list;
  const fs::path hp = stem.string() + ".json";
  std::ofstream out(hp);
  if (!out) fail(ErrorKind::io, "cannot open " + hp.string() + " for writing");
  out << std::setprecision(17) << header.dump(2) << "\n";
  if (!out) fail(ErrorKind::io, "write failed for " + hp.string());
}

Checkpoint read_checkpoint(const fs::path& header_path) {
  std::ifstream in(header_path);
  if (!in) fail(ErrorKind::io, "cannot open checkpoint " + header_path.string());
  json h;
  try {
    in >> h;
    if (h.at("dtype") != "f64-le") fail(ErrorKind::io, header_path.string() + ": unsupported dtype");
    Checkpoint cp;
    const auto shape = h.at("shape").get<std::array<std::size_t, 3>>();
    GridSpec grid = GridSpec::slab(shape[0], shape[1], shape[2]);
    grid.spacing = h.at("spacing").get<std::array<double, 3>>();
    cp.params = ThermoParams::make(h.at("params").at("gamma").get<double>(), h.at("params").at("eps").get<double>());
    cp.weight_spec = h.value("weight", std::string("parabolic"));
    cp.state.time = h.at("time").get<double>();
    const fs::path dir = header_path.parent_path();
    bool have_eta = false, have_v = false;
    for (const auto& f : h.at("fields")) {
      const std::string name = f.at("name");
      const std::size_t bytes = f.at("bytes");
      if (bytes != 3 * grid.size() * sizeof(double))
        fail(ErrorKind::io, header_path.string() + ": field '" + name + "' byte count does not match the grid");
      const VectorField v = unflatten(grid, read_bytes(dir / f.at("file").get<std::string>(), 3 * grid.size()));
      if (name == "eta") { cp.state.eta = v; have_eta = true; }
      else if (name == "eta_t") { cp.state.eta_t = v; have_v = true; }
      else if (name == "eta_tt") cp.state.eta_tt = v;
    }
    if (!have_eta || !have_v) fail(ErrorKind::io, header_path.string() + ": checkpoint lacks eta or eta_t");
    return cp;
  } catch (const json::exception& e) {
    fail(ErrorKind::io, header_path.string() + ": malformed checkpoint header: " + e.what());
  }
}

void write_energy_csv(const fs::path& path, const std::vector<MonitorRow>& rows) {
  if (rows.empty()) fail(ErrorKind::invalid_input, "energy CSV needs at least one row");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out << kEnergyCsvHeader << "\n";
  for (const auto& r : rows) {
    const double v[] = {r.t, r.E_I, r.E_II, r.E_III, r.E_IV, r.E_total, r.g0_defect, r.energy_drift, r.chi_h_res,
                        r.min_J, r.max_eps_v};
    for (std::size_t k = 0; k < std::size(v); ++k) out << (k ? "," : "") << format_double(v[k]);
    out << "\n";
  }
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

std::vector<MonitorRow> read_energy_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kEnergyCsvHeader) fail(ErrorKind::io, path.string() + ": unexpected header");
  std::vector<MonitorRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[11];
    std::size_t k = 0;
    const char* p = line.c_str();
    while (k < 11) {
      char* end = nullptr;
      v[k++] = std::strtod(p, &end);
      if (end == p) fail(ErrorKind::io, path.string() + ":" + std::to_string(lineno) + ": bad number");
      p = end;
      if (*p == ',') ++p;
      else break;
    }
    if (k != 11 || *p != '\0') fail(ErrorKind::io, path.string() + ":" + std::to_string(lineno) + ": expected 11 columns");
    MonitorRow r;
    r.t = v[0]; r.E_I = v[1]; r.E_II = v[2]; r.E_III = v[3]; r.E_IV = v[4]; r.E_total = v[5];
    r.g0_defect = v[6]; r.energy_drift = v[7]; r.chi_h_res = v[8]; r.min_J = v[9]; r.max_eps_v = v[10];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace lagvac::io
