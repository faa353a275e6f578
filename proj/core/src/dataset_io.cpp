#include "costrule/dataset_io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace costrule {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t row, const std::string& col) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\r')) ++b;
  while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\r')) --e;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(b, e, value);
  if (ec != std::errc() || ptr != e)
    throw ParseError("non-numeric cell in column '" + col + "' at row " +
                         std::to_string(row));
  return value;
}

char detect_separator(const std::string& header) {
  const auto commas = std::count(header.begin(), header.end(), ',');
  const auto tabs = std::count(header.begin(), header.end(), '\t');
  return tabs > commas ? '\t' : ',';
}

std::string trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && s[b] == ' ') ++b;
  return s.substr(b);
}

} // namespace

Dataset read_dataset(std::istream& in, const Schema& schema, const std::string& origin) {
  std::string header;
  if (!std::getline(in, header))
    throw ParseError(origin + ": empty input, expected a header line");
  const char sep = detect_separator(header);

  std::unordered_map<std::string, std::size_t> col_of;
  {
    auto names = split(header, sep);
    for (std::size_t j = 0; j < names.size(); ++j) col_of[trimmed(names[j])] = j;
  }
  auto require = [&](const std::string& name) -> std::size_t {
    auto it = col_of.find(name);
    if (it == col_of.end())
      throw ParseError(origin + ": missing column '" + name + "'");
    return it->second;
  };

  const std::size_t t_col = require(schema.treatment);
  const std::size_t c_col = require(schema.cost);
  const std::size_t y_col = require(schema.outcome);
  std::vector<std::size_t> w_cols;
  for (const auto& name : schema.covariates) w_cols.push_back(require(name));

  std::vector<std::size_t> v_index;
  for (const auto& name : schema.decision) {
    auto it = std::find(schema.covariates.begin(), schema.covariates.end(), name);
    if (it == schema.covariates.end())
      throw ParseError(origin + ": decision column '" + name +
                             "' is not listed among covariates");
    v_index.push_back(static_cast<std::size_t>(it - schema.covariates.begin()));
  }

  std::vector<Observation> obs;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trimmed(line).empty()) continue;
    auto fields = split(line, sep);
    auto cell = [&](std::size_t j, const std::string& col) -> const std::string& {
      if (j >= fields.size())
        throw ParseError(origin + ": missing column '" + col + "' at row " +
                                 std::to_string(row));
      return fields[j];
    };
    Observation o;
    const double t_raw = parse_double(cell(t_col, schema.treatment), row, schema.treatment);
    if (t_raw != 0.0 && t_raw != 1.0)
      throw ParseError(origin + ": treatment not in {0,1} at row " + std::to_string(row));
    o.t = static_cast<int>(t_raw);
    o.c = parse_double(cell(c_col, schema.cost), row, schema.cost);
    if (o.c < 0.0)
      throw ParseError(origin + ": negative cost at row " + std::to_string(row));
    o.y = parse_double(cell(y_col, schema.outcome), row, schema.outcome);
    o.w.reserve(w_cols.size());
    for (std::size_t j = 0; j < w_cols.size(); ++j)
      o.w.push_back(parse_double(cell(w_cols[j], schema.covariates[j]), row,
                                       schema.covariates[j]));
    obs.push_back(std::move(o));
    ++row;
  }
  return Dataset(std::move(obs), std::move(v_index));
}

Dataset load_dataset(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file: " + path);
  return read_dataset(in, schema, path);
}

namespace {
void print_double(std::ostream& out, double x) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  out.write(buf, len);
}
} // namespace

void write_dataset(const Dataset& ds, std::ostream& out) {
  const std::size_t p = ds.dim_w();
  for (std::size_t j = 0; j < p; ++j) out << 'w' << (j + 1) << ',';
  out << "t,c,y\n";
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const Observation& o = ds[i];
    for (std::size_t j = 0; j < p; ++j) {
      print_double(out, o.w[j]);
      out << ',';
    }
    out << o.t << ',';
    print_double(out, o.c);
    out << ',';
    print_double(out, o.y);
    out << '\n';
  }
}

void write_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write data file: " + path);
  write_dataset(ds, out);
  if (!out.good()) throw ParseError("I/O failure while writing: " + path);
}

Schema default_schema(std::size_t dim_w, const std::vector<std::size_t>& v_index) {
  Schema s;
  s.treatment = "t";
  s.cost = "c";
  s.outcome = "y";
  for (std::size_t j = 0; j < dim_w; ++j) s.covariates.push_back("w" + std::to_string(j + 1));
  for (std::size_t j : v_index) s.decision.push_back("w" + std::to_string(j + 1));
  return s;
}

} // namespace costrule
