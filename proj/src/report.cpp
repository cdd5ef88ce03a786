#include "weyl/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "weyl/error.hpp"

namespace weyl::report {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump_into(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump_into(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; they are usually long numeric series.
      bool flat = true;
      for (const auto& e : j) flat &= !e.is_structured();
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += inner;
        dump_into(e, out, indent + 1);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "\"" + format_double(v) + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += "\n";
  return out;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) {
    require(r.size() == table.header.size(), ErrorKind::Shape, "CSV row width differs from the header");
    line(r);
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        fields.push_back(std::move(field));
        lines.push_back(std::move(fields));
      }
      fields.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  require(!quoted, ErrorKind::Format, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    fields.push_back(std::move(field));
    lines.push_back(std::move(fields));
  }
  require(!lines.empty(), ErrorKind::Format, "CSV file has no header row");
  CsvTable t;
  t.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    require(lines[i].size() == t.header.size(), ErrorKind::Format,
            "CSV row " + std::to_string(i + 1) + " has the wrong number of fields");
    t.rows.push_back(std::move(lines[i]));
  }
  return t;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Resource, "cannot open " + path.string() + " for writing");
  out << contents;
  out.flush();
  require(static_cast<bool>(out), ErrorKind::Resource, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Format, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json to_json(const Witness& w) {
  Json j;
  j["input"] = w.input;
  j["point"] = w.point;
  j["point2"] = w.point2;
  Json params = Json::object();
  for (const auto& [k, v] : w.params) params[k] = v;
  j["params"] = std::move(params);
  return j;
}

Json to_json(const ConstantEstimate& e) {
  Json j;
  j["ratio_sup"] = e.ratio_sup;
  j["witness"] = to_json(e.witness);
  j["samples"] = e.samples;
  j["J"] = e.level;
  return j;
}

Json to_json(const SearchWitness& w) {
  Json j;
  j["generator"] = w.generator.id;
  j["indices"] = w.generator.indices;
  j["coeffs"] = w.generator.coeffs;
  j["rows"] = w.rows;
  return j;
}

Json to_json(const GrowthFit& f) {
  Json j;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["residual"] = f.residual;
  j["r_squared"] = f.r_squared;
  j["points"] = f.points;
  return j;
}

Json to_json(const PipelineReport& r) {
  Json j;
  j["n"] = r.n;
  j["n_distinct"] = r.n_distinct;
  j["p"] = r.p;
  j["eps_n"] = r.eps_n;
  j["degenerate"] = r.degenerate;
  j["norm_f"] = r.norm_f;
  j["norm_pstar"] = r.norm_pstar;
  j["norm_square_sup"] = r.norm_square_sup;
  j["square_ratio"] = r.square_ratio;
  j["ratio"] = r.ratio;
  j["inclusion_holds"] = r.inclusion_holds;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["lambda"] = row.lambda;
    x["pstar_cells"] = row.pstar_cells;
    x["a_cells"] = row.a_cells;
    x["b_cells"] = row.b_cells;
    x["good_lhs_cells"] = row.good_lhs_cells;
    x["good_rhs_cells"] = row.good_rhs_cells;
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["mean_zero_max"] = r.mean_zero_max;
  j["decay_constant"] = r.decay_constant;
  j["holder_constant"] = r.holder_constant;
  j["local_mass_radius"] = r.local_mass_radius;
  j["index_offset"] = r.index_offset;
  j["decay_constant_coarse"] = r.decay_constant_coarse;
  j["holder_constant_coarse"] = r.holder_constant_coarse;
  j["mean_zero_pass"] = r.mean_zero_pass;
  j["decay_pass"] = r.decay_pass;
  j["holder_pass"] = r.holder_pass;
  j["local_mass_pass"] = r.local_mass_pass;
  j["pass"] = r.mean_zero_pass && r.decay_pass && r.holder_pass && r.local_mass_pass;
  return j;
}

Json to_json(const std::vector<CwwRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json x;
    x["eps"] = r.eps;
    x["lambda"] = r.lambda;
    x["lhs"] = r.lhs;
    x["rhs"] = r.rhs;
    x["ratio"] = r.ratio;
    x["lhs_cells"] = r.lhs_cells;
    x["level_cells"] = r.level_cells;
    x["rhs_cells"] = r.rhs_cells;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace weyl::report
