#include "nilmin/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace nilmin {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double want_number(const json& j, const char* where) {
  if (!j.is_number()) throw parse_error(std::string(where) + ": expected a number");
  return j.get<double>();
}

cd want_complex(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2)
    throw parse_error(std::string(where) + ": expected [re, im]");
  return cd(want_number(j[0], where), want_number(j[1], where));
}

json complex_json(cd v) { return json::array({v.real(), v.imag()}); }

Mat2 want_mat(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 4)
    throw parse_error(std::string(where) + ": expected four [re, im] entries");
  Mat2 m;
  m(0, 0) = want_complex(j[0], where);
  m(0, 1) = want_complex(j[1], where);
  m(1, 0) = want_complex(j[2], where);
  m(1, 1) = want_complex(j[3], where);
  return m;
}

json mat_json(const Mat2& m) {
  return json::array({complex_json(m(0, 0)), complex_json(m(0, 1)),
                      complex_json(m(1, 0)), complex_json(m(1, 1))});
}

json rational_json(const Rational& r) {
  json num = json::array(), den = json::array();
  for (cd c : r.num) num.push_back(complex_json(c));
  for (cd c : r.den) den.push_back(complex_json(c));
  return json{{"num", num}, {"den", den}};
}

Rational want_rational(const json& j, const char* where) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw parse_error(std::string(where) + ": expected {num, den}");
  Rational r;
  r.num.clear();
  r.den.clear();
  for (const json& c : j.at("num")) r.num.push_back(want_complex(c, where));
  for (const json& c : j.at("den")) r.den.push_back(want_complex(c, where));
  if (r.num.empty() || r.den.empty())
    throw parse_error(std::string(where) + ": empty coefficient list");
  return r;
}

void grid_header(std::ostream& os, const GridSpec& g) {
  os << "# grid " << fmt(g.center.real()) << ' ' << fmt(g.center.imag())
     << ' ' << fmt(g.half_width_x) << ' ' << fmt(g.half_width_y) << ' '
     << g.nx << ' ' << g.ny << '\n';
}

GridSpec read_grid_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw parse_error("csv: empty input");
  GridSpec g;
  double cx = 0.0, cy = 0.0;
  if (std::sscanf(line.c_str(), "# grid %lg %lg %lg %lg %d %d", &cx, &cy,
                  &g.half_width_x, &g.half_width_y, &g.nx, &g.ny) != 6)
    throw parse_error("csv: first line must be '# grid cx cy hwx hwy nx ny'");
  g.center = cd(cx, cy);
  g.validate();
  return g;
}

// comma separated doubles, nan allowed
std::vector<double> split_row(const std::string& line, size_t want,
                              int lineno) {
  std::vector<double> out;
  const char* p = line.c_str();
  while (true) {
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p)
      throw parse_error("csv: bad number at line " + std::to_string(lineno));
    out.push_back(v);
    p = end;
    while (*p == ' ') ++p;
    if (*p == ',') {
      ++p;
      continue;
    }
    if (*p == '\0' || *p == '\r') break;
    throw parse_error("csv: unexpected character at line " +
                      std::to_string(lineno));
  }
  if (out.size() != want)
    throw parse_error("csv: line " + std::to_string(lineno) + " has " +
                      std::to_string(out.size()) + " fields, expected " +
                      std::to_string(want));
  return out;
}

std::string data_line(std::istream& is, int lineno) {
  std::string line;
  if (!std::getline(is, line))
    throw parse_error("csv: unexpected end of input at line " +
                      std::to_string(lineno));
  return line;
}

}  // namespace

json loop_to_json(const TwistedLoop& a) {
  json coeffs = json::array();
  for (int d = -a.N; d <= a.N; ++d) {
    const Mat2& m = a.coeff(d);
    if (m.cwiseAbs().maxCoeff() == 0.0) continue;
    coeffs.push_back(json{{"deg", d}, {"m", mat_json(m)}});
  }
  return json{{"truncation", a.N}, {"parity", a.parity}, {"coeffs", coeffs}};
}

TwistedLoop loop_from_json(const json& j) {
  if (!j.is_object() || !j.contains("truncation") || !j.contains("coeffs"))
    throw parse_error("loop: expected {truncation, coeffs}");
  if (!j.at("truncation").is_number_integer())
    throw parse_error("loop: truncation must be an integer");
  int n = j.at("truncation").get<int>();
  if (n < 0 || n > 4096) throw parse_error("loop: truncation out of range");
  int parity = 0;
  if (j.contains("parity")) {
    if (!j.at("parity").is_number_integer())
      throw parse_error("loop: parity must be 0 or 1");
    parity = j.at("parity").get<int>();
    if (parity != 0 && parity != 1)
      throw parse_error("loop: parity must be 0 or 1");
  }
  TwistedLoop a(n, parity);
  if (!j.at("coeffs").is_array()) throw parse_error("loop: coeffs must be an array");
  for (const json& c : j.at("coeffs")) {
    if (!c.is_object() || !c.contains("deg") || !c.contains("m"))
      throw parse_error("loop: each coefficient needs {deg, m}");
    if (!c.at("deg").is_number_integer())
      throw parse_error("loop: deg must be an integer");
    int d = c.at("deg").get<int>();
    if (d < -n || d > n) throw parse_error("loop: deg outside truncation");
    a.at(d) = want_mat(c.at("m"), "loop coefficient");
  }
  return a;
}

json potential_to_json(const PotentialSpec& s) {
  json j;
  j["kind"] = s.kind == PotentialSpec::Kind::normalized ? "normalized"
                                                        : "holomorphic";
  if (s.kind == PotentialSpec::Kind::normalized) {
    j["p"] = rational_json(s.p);
    j["b"] = rational_json(s.b);
  } else {
    json eta = json::array();
    for (const EtaTerm& t : s.eta) {
      json poly = json::array();
      for (const Mat2& m : t.poly) poly.push_back(mat_json(m));
      eta.push_back(json{{"deg", t.deg}, {"poly", poly}});
    }
    j["eta"] = eta;
  }
  j["base_point"] = complex_json(s.base_point);
  j["initial"] = loop_to_json(s.initial);
  return j;
}

PotentialSpec potential_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw parse_error("potential: expected an object with a kind");
  if (!j.at("kind").is_string())
    throw parse_error("potential: kind must be a string");
  std::string kind = j.at("kind").get<std::string>();
  PotentialSpec s;
  if (kind == "normalized") {
    s.kind = PotentialSpec::Kind::normalized;
    if (!j.contains("p") || !j.contains("b"))
      throw parse_error("potential: normalized kind needs p and b");
    s.p = want_rational(j.at("p"), "potential p");
    s.b = want_rational(j.at("b"), "potential b");
  } else if (kind == "holomorphic") {
    s.kind = PotentialSpec::Kind::holomorphic;
    if (!j.contains("eta") || !j.at("eta").is_array())
      throw parse_error("potential: holomorphic kind needs an eta array");
    for (const json& t : j.at("eta")) {
      if (!t.is_object() || !t.contains("deg") || !t.contains("poly"))
        throw parse_error("potential: each eta term needs {deg, poly}");
      if (!t.at("deg").is_number_integer())
        throw parse_error("potential: eta deg must be an integer");
      EtaTerm term;
      term.deg = t.at("deg").get<int>();
      term.poly.clear();
      for (const json& m : t.at("poly"))
        term.poly.push_back(want_mat(m, "eta polynomial"));
      if (term.poly.empty())
        throw parse_error("potential: eta term with empty polynomial");
      s.eta.push_back(term);
    }
  } else {
    throw parse_error("potential: unknown kind '" + kind + "'");
  }
  if (j.contains("base_point"))
    s.base_point = want_complex(j.at("base_point"), "potential base_point");
  if (j.contains("initial")) s.initial = loop_from_json(j.at("initial"));
  return s;
}

void write_spinor_csv(std::ostream& os, const SpinorField& sf,
                      const std::vector<uint8_t>& defined) {
  const GridSpec& g = sf.grid;
  if (!defined.empty() && static_cast<int>(defined.size()) != g.size())
    throw grid_error("write_spinor_csv: mask size mismatch");
  grid_header(os, g);
  os << "z_re,z_im,psi1_re,psi1_im,psi2_re,psi2_im,defined\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      cd z = g.z(i, j);
      int ok = defined.empty() ? 1 : (defined[k] ? 1 : 0);
      os << fmt(z.real()) << ',' << fmt(z.imag()) << ','
         << fmt(sf.psi1.v[k].real()) << ',' << fmt(sf.psi1.v[k].imag()) << ','
         << fmt(sf.psi2.v[k].real()) << ',' << fmt(sf.psi2.v[k].imag()) << ','
         << ok << '\n';
    }
}

SpinorInput read_spinor_csv(std::istream& is) {
  GridSpec g = read_grid_header(is);
  data_line(is, 2);
  SpinorInput in{SpinorField(g), std::vector<uint8_t>(g.size(), 1)};
  for (int k = 0; k < g.size(); ++k) {
    int lineno = k + 3;
    std::vector<double> row = split_row(data_line(is, lineno), 7, lineno);
    in.field.psi1.v[k] = cd(row[2], row[3]);
    in.field.psi2.v[k] = cd(row[4], row[5]);
    in.defined[k] = row[6] != 0.0 ? 1 : 0;
  }
  return in;
}

void write_mesh_csv(std::ostream& os, const SurfaceMesh& mesh) {
  const GridSpec& g = mesh.grid;
  grid_header(os, g);
  os << "z_re,z_im,x1,x2,x3,support,conf,defined,vertical,branch\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      cd z = g.z(i, j);
      const Nil3Point& p = mesh.points[k];
      os << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(p.x1) << ','
         << fmt(p.x2) << ',' << fmt(p.x3) << ',' << fmt(mesh.support[k])
         << ',' << fmt(mesh.conf[k]) << ',' << int(mesh.defined[k]) << ','
         << int(mesh.vertical[k]) << ',' << int(mesh.branch[k]) << '\n';
    }
}

SurfaceMesh read_mesh_csv(std::istream& is) {
  GridSpec g = read_grid_header(is);
  data_line(is, 2);
  SurfaceMesh mesh(g);
  for (int k = 0; k < g.size(); ++k) {
    int lineno = k + 3;
    std::vector<double> row = split_row(data_line(is, lineno), 10, lineno);
    mesh.points[k] = Nil3Point{row[2], row[3], row[4]};
    mesh.support[k] = row[5];
    mesh.conf[k] = row[6];
    mesh.defined[k] = row[7] != 0.0 ? 1 : 0;
    mesh.vertical[k] = row[8] != 0.0 ? 1 : 0;
    mesh.branch[k] = row[9] != 0.0 ? 1 : 0;
  }
  return mesh;
}

void write_mesh_obj(std::ostream& os, const SurfaceMesh& mesh) {
  const GridSpec& g = mesh.grid;
  std::vector<int> vid(g.size(), 0);
  int next = 1;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      if (!mesh.defined[k]) continue;
      const Nil3Point& p = mesh.points[k];
      os << "v " << fmt(p.x1) << ' ' << fmt(p.x2) << ' ' << fmt(p.x3) << '\n';
      vid[k] = next++;
    }
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      int a = vid[g.index(i, j)], b = vid[g.index(i + 1, j)];
      int c = vid[g.index(i + 1, j + 1)], d = vid[g.index(i, j + 1)];
      if (a && b && c && d)
        os << "f " << a << ' ' << b << ' ' << c << ' ' << d << '\n';
    }
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw parse_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw parse_error("cannot write " + path);
  os << content;
  if (!os) throw parse_error("short write to " + path);
}

}  // namespace nilmin
