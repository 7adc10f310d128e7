#include "channelwave/profile_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace channelwave {
namespace {

using ojson = nlohmann::ordered_json;

std::vector<std::vector<double>> parse_csv(const std::string& text, std::size_t columns, const std::string& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InvalidInput, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw Error(ErrorKind::InvalidInput, "expected CSV header '" + header + "', got '" + line + "'");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw Error(ErrorKind::InvalidInput, "bad CSV number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != columns) throw Error(ErrorKind::InvalidInput, "CSV row has the wrong number of columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson read_json(const std::filesystem::path& path) {
  try {
    return ojson::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
}

template <class T>
T field_of(const ojson& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("sidecar lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::InvalidInput, std::string("sidecar field '") + key + "' has the wrong type");
  }
}

ojson number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

bool on_node(double x, double expected, double spacing) { return std::abs(x - expected) <= 1e-9 * spacing; }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Configuration, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Configuration, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  return p;
}

void write_profile(const SampledProfile& g, const std::filesystem::path& csv) {
  std::string text = "s,value\n";
  for (std::size_t n = 0; n < g.size(); ++n) {
    text += format_double(g.position(n)) + "," + format_double(g.samples()[n]) + "\n";
  }
  write_text(csv, text);
  ojson side;
  side["spacing"] = g.spacing();
  side["origin"] = g.origin();
  side["length"] = g.size();
  write_text(sidecar_path(csv), side.dump(2) + "\n");
}

SampledProfile read_profile(const std::filesystem::path& csv) {
  const ojson side = read_json(sidecar_path(csv));
  const auto spacing = field_of<double>(side, "spacing");
  const auto origin = field_of<double>(side, "origin");
  const auto length = field_of<std::size_t>(side, "length");
  const auto rows = parse_csv(read_text(csv), 2, "s,value");
  if (rows.size() != length) throw Error(ErrorKind::InvalidInput, "profile length does not match its sidecar");
  std::vector<double> samples(length);
  for (std::size_t n = 0; n < length; ++n) {
    if (!on_node(rows[n][0], origin + spacing * static_cast<double>(n), spacing)) {
      throw Error(ErrorKind::InvalidInput, "profile abscissa off the sidecar grid at row " + std::to_string(n + 1));
    }
    samples[n] = rows[n][1];
  }
  return SampledProfile(std::move(samples), spacing, origin);
}

std::string field_csv(const std::function<double(double, double)>& u, std::span<const double> r,
                      std::span<const double> t) {
  std::string text = "r,t,value\n";
  for (const double tt : t) {
    for (const double rr : r) text += format_double(rr) + "," + format_double(tt) + "," + format_double(u(rr, tt)) + "\n";
  }
  return text;
}

std::string data_pair_csv(const InitialDataPair& data) {
  std::string text = "r,u0,u1\n";
  for (std::size_t i = 0; i < data.rgrid.length; ++i) {
    text += format_double(data.rgrid.position(i)) + "," + format_double(data.u0[i]) + "," + format_double(data.u1[i]) +
            "\n";
  }
  return text;
}

void write_forcing(const ForcingField& f, const std::filesystem::path& csv) {
  const ForcingGrid& g = f.grid();
  std::string text = "r,t,value\n";
  for (std::size_t j = 0; j < g.nt; ++j) {
    const auto row = f.slice(j);
    for (std::size_t i = 0; i < g.nr; ++i) {
      text += format_double(g.r(i)) + "," + format_double(g.t(j)) + "," + format_double(row[i]) + "\n";
    }
  }
  write_text(csv, text);
  ojson side;
  side["r_origin"] = g.r_origin;
  side["r_spacing"] = g.r_spacing;
  side["nr"] = g.nr;
  side["t_origin"] = g.t_origin;
  side["t_spacing"] = g.t_spacing;
  side["nt"] = g.nt;
  if (f.channel()) side["k"] = *f.channel();
  write_text(sidecar_path(csv), side.dump(2) + "\n");
}

ForcingField read_forcing(const std::filesystem::path& csv, int d) {
  const ojson side = read_json(sidecar_path(csv));
  ForcingGrid g;
  g.r_origin = field_of<double>(side, "r_origin");
  g.r_spacing = field_of<double>(side, "r_spacing");
  g.nr = field_of<std::size_t>(side, "nr");
  g.t_origin = field_of<double>(side, "t_origin");
  g.t_spacing = field_of<double>(side, "t_spacing");
  g.nt = field_of<std::size_t>(side, "nt");
  std::optional<int> k;
  if (side.contains("k")) k = field_of<int>(side, "k");
  const auto rows = parse_csv(read_text(csv), 3, "r,t,value");
  if (rows.size() != g.nr * g.nt) throw Error(ErrorKind::InvalidInput, "forcing sample count does not match its sidecar");
  std::vector<double> samples(rows.size());
  for (std::size_t j = 0; j < g.nt; ++j) {
    for (std::size_t i = 0; i < g.nr; ++i) {
      const auto& row = rows[j * g.nr + i];
      if (!on_node(row[0], g.r(i), g.r_spacing) || !on_node(row[1], g.t(j), g.t_spacing)) {
        throw Error(ErrorKind::InvalidInput, "forcing node off the sidecar grid");
      }
      samples[j * g.nr + i] = row[2];
    }
  }
  return ForcingField(g, std::move(samples), d, k);
}

void write_channel_vector(const ChannelNormVector& v, const std::filesystem::path& csv) {
  std::string text = "j,norm\n";
  for (int j = v.jmin; j <= v.jmax; ++j) text += std::to_string(j) + "," + format_double(v.at(j)) + "\n";
  write_text(csv, text);
  ojson side;
  side["aggregate"] = number(v.aggregate);
  side["jmin"] = v.jmin;
  side["jmax"] = v.jmax;
  side["exponents"] = {{"p", number(v.p)}, {"q", number(v.q)}};
  write_text(sidecar_path(csv), side.dump(2) + "\n");
}

std::string solution_csv(const ExteriorSolution& u) {
  const ForcingGrid& g = u.grid();
  std::string text = "r,t,value\n";
  for (std::size_t j = 0; j < g.nt; ++j) {
    for (std::size_t i = 0; i < g.nr; ++i) {
      text += format_double(g.r(i)) + "," + format_double(g.t(j)) + "," + format_double(u.values()[j * g.nr + i]) +
              "\n";
    }
  }
  return text;
}

std::string picard_trace_json(const PicardTrace& trace) {
  auto list = [](const std::vector<double>& xs) {
    ojson a = ojson::array();
    for (const double x : xs) a.push_back(number(x));
    return a;
  };
  ojson j;
  j["converged"] = trace.converged;
  j["iterations"] = trace.iterations;
  j["free_y_norm"] = number(trace.free_y_norm);
  j["tol"] = number(trace.tol);
  j["y_norms"] = list(trace.y_norms);
  j["diff_norms"] = list(trace.diff_norms);
  j["contraction"] = list(trace.contraction);
  j["nonlinear_bound"] = list(trace.nonlinear_bound);
  return j.dump(2) + "\n";
}

std::string summary_json(const ExperimentReport& report, const std::string& config_json) {
  ojson j;
  j["experiment"] = report.name;
  try {
    j["config"] = ojson::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("resolved config is not JSON: ") + e.what());
  }
  const SummaryStats& s = report.stats;
  j["stats"] = {{"count", s.count},         {"max", number(s.max)}, {"min", number(s.min)}, {"mean", number(s.mean)},
                {"q50", number(s.q50)},     {"q90", number(s.q90)}, {"q99", number(s.q99)}};
  j["fits"] = ojson::array();
  for (const SlopeFit& f : report.fits) {
    j["fits"].push_back({{"name", f.name},
                         {"slope", number(f.slope)},
                         {"half_width", number(f.half_width)},
                         {"predicted", number(f.predicted)},
                         {"points", f.points}});
  }
  j["metrics"] = ojson::object();
  for (const auto& [k, v] : report.metrics) j["metrics"][k] = number(v);
  j["provenance"] = ojson::object();
  for (const auto& [k, v] : report.provenance) j["provenance"][k] = v;
  j["rows"] = report.rows.size();
  return j.dump(2) + "\n";
}

std::string rows_csv(const ExperimentReport& report) {
  std::vector<std::string> keys;
  for (const ReportRow& row : report.rows) {
    for (const auto& [k, v] : row.extra) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::string text = "index,group,input_hash,lhs,rhs,ratio";
  for (const auto& k : keys) text += "," + k;
  text += "\n";
  for (const ReportRow& row : report.rows) {
    text += std::to_string(row.index) + "," + row.group + "," + row.input_hash + "," + format_double(row.lhs) + "," +
            format_double(row.rhs) + "," + format_double(row.ratio);
    for (const auto& k : keys) {
      text += ",";
      for (const auto& [name, v] : row.extra) {
        if (name == k) {
          text += format_double(v);
          break;
        }
      }
    }
    text += "\n";
  }
  return text;
}

std::string figure_dat(const Figure& figure) {
  std::string text = "#";
  for (const auto& c : figure.columns) text += " " + c;
  text += "\n";
  for (const auto& row : figure.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i == 0 ? "" : " ") + format_double(row[i]);
    text += "\n";
  }
  return text;
}

}  // namespace channelwave
