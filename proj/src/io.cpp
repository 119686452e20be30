#include "disf/io.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "disf/errors.hpp"
#include "disf/version.hpp"

namespace disf {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& path, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    fail(path, line, "not a number: '" + tok + "'");
  }
  if (pos != tok.size()) fail(path, line, "trailing characters in '" + tok + "'");
  return v;
}

std::string fmt9(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.9g", v);
  return buf.data();
}

OrientedPointCloud load_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::string line;
  int lineno = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++lineno;
    return true;
  };

  if (!next_line() || line != "ply") fail(path, lineno ? lineno : 1, "missing 'ply' magic");

  struct Element {
    std::string name;
    long count = 0;
    std::vector<std::string> properties;
    bool has_list = false;
  };
  std::vector<Element> elements;
  bool format_seen = false;
  bool header_done = false;
  while (next_line()) {
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii")
        fail(path, lineno, "only 'format ascii 1.0' is supported");
      format_seen = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) fail(path, lineno, "malformed element declaration");
      Element e;
      e.name = tok[1];
      try {
        e.count = std::stol(tok[2]);
      } catch (const std::exception&) {
        fail(path, lineno, "bad element count '" + tok[2] + "'");
      }
      elements.push_back(e);
    } else if (tok[0] == "property") {
      if (elements.empty()) fail(path, lineno, "property before any element");
      if (tok.size() >= 2 && tok[1] == "list") {
        elements.back().has_list = true;
        elements.back().properties.push_back(tok.back());
      } else if (tok.size() == 3) {
        elements.back().properties.push_back(tok[2]);
      } else {
        fail(path, lineno, "malformed property declaration");
      }
    } else if (tok[0] == "end_header") {
      header_done = true;
      break;
    } else {
      fail(path, lineno, "unrecognized header line '" + tok[0] + "'");
    }
  }
  if (!header_done) fail(path, lineno, "missing end_header");
  if (!format_seen) fail(path, lineno, "missing format declaration");

  OrientedPointCloud cloud;
  for (const Element& e : elements) {
    if (e.name != "vertex") {
      // Skip foreign elements (faces etc.) line by line.
      for (long i = 0; i < e.count; ++i)
        if (!next_line()) fail(path, lineno, "unexpected end of file in element '" + e.name + "'");
      continue;
    }
    if (e.has_list) fail(path, lineno, "list properties on vertex element are unsupported");
    int ix = -1, iy = -1, iz = -1, inx = -1, iny = -1, inz = -1;
    for (std::size_t c = 0; c < e.properties.size(); ++c) {
      const std::string& n = e.properties[c];
      if (n == "x") ix = static_cast<int>(c);
      else if (n == "y") iy = static_cast<int>(c);
      else if (n == "z") iz = static_cast<int>(c);
      else if (n == "nx") inx = static_cast<int>(c);
      else if (n == "ny") iny = static_cast<int>(c);
      else if (n == "nz") inz = static_cast<int>(c);
    }
    if (ix < 0 || iy < 0 || iz < 0)
      fail(path, lineno, "vertex element lacks x/y/z properties");
    const bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;
    cloud.points.reserve(e.count);
    if (with_normals) cloud.normals.reserve(e.count);
    for (long i = 0; i < e.count; ++i) {
      if (!next_line()) fail(path, lineno, "unexpected end of file in vertex data");
      const auto tok = split_ws(line);
      if (tok.size() != e.properties.size())
        fail(path, lineno, "expected " + std::to_string(e.properties.size()) +
                               " values, got " + std::to_string(tok.size()));
      cloud.points.emplace_back(parse_double(tok[ix], path, lineno),
                                parse_double(tok[iy], path, lineno),
                                parse_double(tok[iz], path, lineno));
      if (with_normals) {
        Vec3 n(parse_double(tok[inx], path, lineno),
               parse_double(tok[iny], path, lineno),
               parse_double(tok[inz], path, lineno));
        const double len = n.norm();
        if (len <= 1e-12)
          fail(path, lineno, "zero-length normal");
        cloud.normals.push_back(n / len);
      }
    }
  }
  if (cloud.points.empty()) throw Error(ErrorCode::parse, path + ": empty cloud");
  return cloud;
}

OrientedPointCloud load_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  OrientedPointCloud cloud;
  std::string line;
  int lineno = 0;
  int columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    const std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    const auto tok = split_ws(body);
    if (tok.empty()) continue;
    if (tok.size() != 3 && tok.size() != 6)
      fail(path, lineno, "expected 3 or 6 columns, got " + std::to_string(tok.size()));
    if (columns == 0) columns = static_cast<int>(tok.size());
    if (static_cast<int>(tok.size()) != columns)
      fail(path, lineno, "inconsistent column count");
    cloud.points.emplace_back(parse_double(tok[0], path, lineno),
                              parse_double(tok[1], path, lineno),
                              parse_double(tok[2], path, lineno));
    if (columns == 6) {
      Vec3 n(parse_double(tok[3], path, lineno), parse_double(tok[4], path, lineno),
             parse_double(tok[5], path, lineno));
      const double len = n.norm();
      if (len <= 1e-12) fail(path, lineno, "zero-length normal");
      cloud.normals.push_back(n / len);
    }
  }
  if (cloud.points.empty()) throw Error(ErrorCode::parse, path + ": empty cloud");
  return cloud;
}

}  // namespace

CloudFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == "ply") return CloudFormat::ply;
  if (ext == "xyz" || ext == "txt") return CloudFormat::xyz;
  throw Error(ErrorCode::invalid_argument,
              "cannot infer cloud format from '" + path + "'");
}

OrientedPointCloud load_cloud(const std::string& path, CloudFormat format) {
  return format == CloudFormat::ply ? load_ply(path) : load_xyz(path);
}

OrientedPointCloud load_cloud(const std::string& path) {
  return load_cloud(path, format_from_path(path));
}

void save_cloud(const OrientedPointCloud& cloud, const std::string& path,
                CloudFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  const bool normals = cloud.has_normals();
  if (format == CloudFormat::ply) {
    out << "ply\nformat ascii 1.0\ncomment generated by disf " << kVersion
        << "\nelement vertex " << cloud.size()
        << "\nproperty double x\nproperty double y\nproperty double z\n";
    if (normals)
      out << "property double nx\nproperty double ny\nproperty double nz\n";
    out << "end_header\n";
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    out << fmt9(p.x()) << ' ' << fmt9(p.y()) << ' ' << fmt9(p.z());
    if (normals) {
      const Vec3& n = cloud.normals[i];
      out << ' ' << fmt9(n.x()) << ' ' << fmt9(n.y()) << ' ' << fmt9(n.z());
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

void save_cloud(const OrientedPointCloud& cloud, const std::string& path) {
  save_cloud(cloud, path, format_from_path(path));
}

}  // namespace disf
