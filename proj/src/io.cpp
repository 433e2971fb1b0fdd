#include "kkd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kkd/error.hpp"

namespace kkd {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

std::string format_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string snapshot_filename(const std::string& run, double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", t);
  return run + "_t" + buf + ".tsv";
}

std::string format_table(const std::vector<std::string>& comments,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (const auto& c : comments) os << "# " << c << '\n';
  os << '#';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "\t" : " ") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IOError, "cannot write '" + path.string() + "'");
  out << format_table(comments, columns, rows);
}

void write_snapshot(const std::filesystem::path& path, const StateField& f, const PhiModel& phi) {
  std::vector<std::vector<double>> rows;
  rows.reserve(f.size());
  for (int i = 0; i < f.size(); ++i) {
    const State s = f.at(i);
    const double r = s.r();
    const double z = s.v == 0.0 ? std::nan("") : s.u / s.v;
    rows.push_back({f.grid.center(i), s.u, s.v, r, phi.value(r), z});
  }
  write_table(path, {"kkd snapshot", "t = " + format_number(f.t), "phi = " + phi.describe()},
              {"x", "u", "v", "r", "W", "Z"}, rows);
}

std::vector<std::vector<double>> read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      double x = 0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        if (tok == "nan") {
          x = std::nan("");
        } else {
          throw Error(ErrorKind::ParseError, path.string() + ": bad number '" + tok + "'");
        }
      }
      row.push_back(x);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kkd
