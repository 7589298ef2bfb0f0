#include "slabxrt/io.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace slabxrt {

namespace {

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "/" + key, "missing");
  return *it;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<int>();
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

std::vector<int> int_list(const json& j, const std::string& path) {
  std::vector<int> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) out.push_back(as_int(j[i], path + "/" + std::to_string(i)));
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json poly_to_json(const HomogeneousPoly& p) {
  json out = json::array();
  const auto& basis = monomials(p.dim(), p.degree());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (p[i] == cplx{}) continue;
    out.push_back({{"alpha", basis[i]}, {"re", p[i].real()}, {"im", p[i].imag()}});
  }
  return out;
}

HomogeneousPoly poly_from_json(const json& j, const std::string& path, int dim_hint, int degree_hint) {
  as_array(j, path);
  int dim = dim_hint;
  int degree = degree_hint;
  if (!j.empty()) {
    const std::string p0 = path + "/0/alpha";
    const auto alpha = int_list(member(j[0], "alpha", path + "/0"), p0);
    const int inferred_dim = static_cast<int>(alpha.size());
    const int inferred_degree = std::accumulate(alpha.begin(), alpha.end(), 0);
    if (dim >= 0 && inferred_dim != dim) {
      throw ParseError(p0, "multi-index length " + std::to_string(inferred_dim) + ", expected " + std::to_string(dim));
    }
    if (degree > -2 && inferred_degree != degree) {
      throw ParseError(p0, "total degree " + std::to_string(inferred_degree) + ", expected " + std::to_string(degree));
    }
    dim = inferred_dim;
    degree = inferred_degree;
  }
  if (dim < 1 || degree < -1) throw ParseError(path, "cannot infer polynomial shape from an empty list");
  HomogeneousPoly p(dim, degree);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string pi = path + "/" + std::to_string(i);
    const auto alpha = int_list(member(j[i], "alpha", pi), pi + "/alpha");
    if (static_cast<int>(alpha.size()) != dim || std::accumulate(alpha.begin(), alpha.end(), 0) != degree ||
        std::any_of(alpha.begin(), alpha.end(), [](int e) { return e < 0; })) {
      throw ParseError(pi + "/alpha", "multi-index inconsistent with dim " + std::to_string(dim) +
                                          " and degree " + std::to_string(degree));
    }
    const double re = as_double(member(j[i], "re", pi), pi + "/re");
    const double im = as_double(member(j[i], "im", pi), pi + "/im");
    p.set_coeff(alpha, p.coeff(alpha) + cplx(re, im));
  }
  return p;
}

json field_to_json(const FourierTensorField& f) {
  json modes = json::array();
  for (const auto& [mode, p] : f.modes()) {
    modes.push_back({{"j", mode.j}, {"k", mode.k}, {"poly", poly_to_json(p)}});
  }
  return {{"n", f.n()}, {"m", f.m()}, {"modes", modes}};
}

FourierTensorField field_from_json(const json& j, const std::string& path) {
  const int n = as_int(member(j, "n", path), path + "/n");
  const int m = as_int(member(j, "m", path), path + "/m");
  if (n < 0) throw ParseError(path + "/n", "must be >= 0");
  if (m < -1) throw ParseError(path + "/m", "must be >= -1");
  FourierTensorField f(n, m);
  const json& modes = as_array(member(j, "modes", path), path + "/modes");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string mp = path + "/modes/" + std::to_string(i);
    const int jj = as_int(member(modes[i], "j", mp), mp + "/j");
    auto k = int_list(member(modes[i], "k", mp), mp + "/k");
    if (static_cast<int>(k.size()) != n) throw ParseError(mp + "/k", "expected " + std::to_string(n) + " entries");
    f.add(Mode{jj, std::move(k)}, poly_from_json(member(modes[i], "poly", mp), mp + "/poly", n + 1, m));
  }
  return f;
}

json interval_to_json(const IntervalField& h) {
  json modes = json::array();
  for (const auto& [j, p] : h.modes()) modes.push_back({{"j", j}, {"poly", poly_to_json(p)}});
  return {{"n", h.n()}, {"m", h.m()}, {"modes", modes}};
}

IntervalField interval_from_json(const json& j, const std::string& path) {
  const int n = as_int(member(j, "n", path), path + "/n");
  const int m = as_int(member(j, "m", path), path + "/m");
  IntervalField h(n, m);
  const json& modes = as_array(member(j, "modes", path), path + "/modes");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string mp = path + "/modes/" + std::to_string(i);
    const int jj = as_int(member(modes[i], "j", mp), mp + "/j");
    HomogeneousPoly p = poly_from_json(member(modes[i], "poly", mp), mp + "/poly", n + 1, m);
    if (jj == 0 && !p.is_zero()) throw ParseError(mp + "/j", "interval fields have zero mean; mode 0 must vanish");
    h.set(jj, std::move(p));
  }
  return h;
}

json covering_to_json(const CoveringSpec& spec) {
  json gens = json::array();
  for (const auto& t : spec.generators) gens.push_back({{"flip", t.flip}, {"A", t.A}, {"c", t.c}});
  return {{"n", spec.n}, {"generators", gens}};
}

CoveringSpec covering_from_json(const json& j, const std::string& path) {
  const int n = as_int(member(j, "n", path), path + "/n");
  if (n < 0) throw ParseError(path + "/n", "must be >= 0");
  const json& gens = as_array(member(j, "generators", path), path + "/generators");
  std::vector<DeckTransform> generators;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string gp = path + "/generators/" + std::to_string(i);
    DeckTransform t;
    const json& flip = member(gens[i], "flip", gp);
    if (!flip.is_boolean()) throw ParseError(gp + "/flip", "expected a boolean");
    t.flip = flip.get<bool>();
    const json& A = as_array(member(gens[i], "A", gp), gp + "/A");
    if (static_cast<int>(A.size()) != n) throw ParseError(gp + "/A", "expected " + std::to_string(n) + " rows");
    for (std::size_t r = 0; r < A.size(); ++r) {
      auto row = int_list(A[r], gp + "/A/" + std::to_string(r));
      if (static_cast<int>(row.size()) != n) throw ParseError(gp + "/A/" + std::to_string(r), "expected " + std::to_string(n) + " columns");
      t.A.push_back(std::move(row));
    }
    const json& c = as_array(member(gens[i], "c", gp), gp + "/c");
    if (static_cast<int>(c.size()) != n) throw ParseError(gp + "/c", "expected " + std::to_string(n) + " entries");
    for (std::size_t r = 0; r < c.size(); ++r) t.c.push_back(as_double(c[r], gp + "/c/" + std::to_string(r)));
    generators.push_back(std::move(t));
  }
  CoveringSpec spec;
  try {
    spec = make_covering(n, std::move(generators));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + "/generators", e.what());
  }
  const CoveringReport report = validate_covering(spec);
  if (!report.ok) throw ParseError(path + "/generators", report.violations.front());
  return spec;
}

json decomposition_to_json(const Decomposition& d, double c_g) {
  return {{"h", interval_to_json(d.h)},
          {"g", field_to_json(d.g)},
          {"residual", field_to_json(d.residual)},
          {"residual_norm", d.residual_norm()},
          {"boundary_defect", d.boundary_defect},
          {"constants", {{"C_g", c_g}}}};
}

std::string sinogram_csv(const Sinogram& s) {
  std::ostringstream out;
  for (int d = 0; d < s.n(); ++d) out << "a_" << (d + 1) << ",";
  out << "re,im\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    for (double a : s.point(i)) out << format_double(a) << ",";
    out << format_double(s.values[i].real()) << "," << format_double(s.values[i].imag()) << "\n";
  }
  return out.str();
}

json sinogram_sidecar(const Sinogram& s, int m) {
  return {{"n", s.n()}, {"m", m}, {"b", s.b}, {"a_grid_size", s.a_grid_size}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("", path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace slabxrt
