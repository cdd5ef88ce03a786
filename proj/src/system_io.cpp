#include <bit>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "weyl/systems.hpp"

namespace weyl {
namespace {

constexpr std::size_t kMaxHeader = 1024;

std::uint64_t to_little(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return "none";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

long long parse_int(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  require(errno == 0 && end != text.c_str() && *end == '\0', ErrorKind::Format,
          "header field " + key + " is not an integer");
  return v;
}

std::optional<double> parse_optional(const std::string& key, const std::string& text) {
  if (text == "none") return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  require(end != text.c_str() && *end == '\0' && std::isfinite(v), ErrorKind::Format,
          "header field " + key + " is not a finite number or 'none'");
  return v;
}

}  // namespace

void save_system(const OrthonormalSystem& s, const std::filesystem::path& path) {
  require(valid_name(s.name), ErrorKind::Format, "system name must be an identifier");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Resource, "cannot open " + path.string() + " for writing");
  out << "WTS1 name=" << s.name << " N=" << s.size() << " J=" << s.grid.level()
      << " delta=" << format_optional(s.delta) << " alpha=" << format_optional(s.alpha)
      << " special_first=" << (s.first_index_special ? 1 : 0) << '\n';
  std::vector<std::uint64_t> buf(s.grid.cell_count());
  for (const auto& f : s.functions) {
    require(f.grid() == s.grid, ErrorKind::Shape, "system function on a foreign grid");
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = to_little(std::bit_cast<std::uint64_t>(f[i]));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
  }
  out.flush();
  require(static_cast<bool>(out), ErrorKind::Resource, "write failed for " + path.string());
}

OrthonormalSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Format, "cannot open system file " + path.string());

  std::string header;
  for (char c; header.size() < kMaxHeader && in.get(c);) {
    if (c == '\n') break;
    header.push_back(c);
  }
  require(in && header.size() < kMaxHeader, ErrorKind::Format, "system file header is not terminated");

  std::istringstream tokens(header);
  std::string magic;
  tokens >> magic;
  require(magic == "WTS1", ErrorKind::Format, "not a WTS1 system file");
  std::map<std::string, std::string> fields;
  for (std::string tok; tokens >> tok;) {
    const auto eq = tok.find('=');
    require(eq != std::string::npos && eq > 0, ErrorKind::Format, "malformed header token '" + tok + "'");
    require(fields.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second, ErrorKind::Format,
            "duplicate header field " + tok.substr(0, eq));
  }
  for (const char* key : {"name", "N", "J", "delta", "alpha", "special_first"}) {
    require(fields.count(key) == 1, ErrorKind::Format, std::string("header is missing ") + key);
  }
  require(fields.size() == 6, ErrorKind::Format, "header has unknown fields");

  OrthonormalSystem s;
  s.name = fields["name"];
  require(valid_name(s.name), ErrorKind::Format, "system name must be an identifier");
  const long long n = parse_int("N", fields["N"]);
  const long long level = parse_int("J", fields["J"]);
  require(n >= 1 && level >= 0, ErrorKind::Format, "header N and J must be positive");
  require(n <= static_cast<long long>(kMaxSystemSize) && level <= kMaxGridLevel, ErrorKind::Resource,
          "system file exceeds the N or J cap");
  s.delta = parse_optional("delta", fields["delta"]);
  s.alpha = parse_optional("alpha", fields["alpha"]);
  const std::string& special = fields["special_first"];
  require(special == "0" || special == "1", ErrorKind::Format, "special_first must be 0 or 1");
  s.first_index_special = special == "1";
  s.grid = make_grid(static_cast<int>(level));

  const std::size_t cells = s.grid.cell_count();
  const auto payload_start = in.tellg();
  in.seekg(0, std::ios::end);
  const auto payload_bytes = static_cast<std::uint64_t>(in.tellg() - payload_start);
  in.seekg(payload_start);
  require(payload_bytes == static_cast<std::uint64_t>(n) * cells * sizeof(double), ErrorKind::Format,
          "payload length does not match N*2^J values");

  std::vector<std::uint64_t> buf(cells);
  s.functions.reserve(static_cast<std::size_t>(n));
  for (long long k = 0; k < n; ++k) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(cells * sizeof(std::uint64_t)));
    require(static_cast<bool>(in), ErrorKind::Format, "truncated system payload");
    std::vector<double> values(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      values[i] = std::bit_cast<double>(to_little(buf[i]));
      require(std::isfinite(values[i]), ErrorKind::Format, "non-finite value in system payload");
    }
    s.functions.emplace_back(s.grid, std::move(values));
  }
  return s;
}

}  // namespace weyl
