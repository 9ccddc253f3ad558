#include "prcone/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace prcone {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + ": expected a number");
  return j.get<double>();
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_string(std::ostream& os, const std::string& s) {
  // Reuse the library's escaping for strings.
  os << Json(s).dump();
}

void write(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(indent * (depth + 1), ' ') : "";
  const std::string close = indent > 0 ? std::string(indent * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << colon;
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const Json& e : j) flat = flat && !e.is_structured();
      if (flat || indent == 0) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << (indent > 0 ? ", " : ",");
          write(os, j[i], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[" << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << "," << nl;
        os << pad;
        write(os, j[i], indent, depth + 1);
      }
      os << nl << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) {
    return Complex(number(j[0], "real part"), number(j[1], "imaginary part"));
  }
  throw InputError("complex entry must be a number or [re, im]");
}

Json matrix_to_json(const CMatrix& A) {
  Json data = Json::array();
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index k = 0; k < A.cols(); ++k) data.push_back(complex_to_json(A(i, k)));
  }
  Json out;
  out["rows"] = A.rows();
  out["cols"] = A.cols();
  out["data"] = std::move(data);
  return out;
}

CMatrix matrix_from_json(const Json& j) {
  const Json& jr = field(j, "rows");
  const Json& jc = field(j, "cols");
  const Json& data = field(j, "data");
  if (!jr.is_number_integer() || !jc.is_number_integer() ||
      jr.get<long long>() < 0 || jc.get<long long>() < 0) {
    throw InputError("rows and cols must be nonnegative integers");
  }
  const auto rows = static_cast<Index>(jr.get<long long>());
  const auto cols = static_cast<Index>(jc.get<long long>());
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    throw InputError("data must hold rows*cols = " +
                     std::to_string(rows * cols) + " entries");
  }
  CMatrix A(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k) {
      A(i, k) = complex_from_json(data[static_cast<std::size_t>(i * cols + k)]);
    }
  }
  if (!A.allFinite()) throw InputError("matrix has non-finite entries");
  return A;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

Json to_json(const PrecWitness& w) {
  Json out;
  out["X"] = matrix_to_json(w.X);
  out["Y"] = matrix_to_json(w.Y);
  out["r"] = w.r;  // +inf is written as null
  out["residual"] = w.residual;
  out["algebra_residual"] = w.algebra_residual();
  out["sum_margin"] = w.sum_margin();
  out["basis"] = matrix_to_json(w.basis);
  return out;
}

Json to_json(const EquivWitness& w) {
  Json out;
  out["Xt"] = matrix_to_json(w.Xt);
  out["Yt"] = matrix_to_json(w.Yt);
  out["M"] = matrix_to_json(w.M);
  out["M_inv"] = matrix_to_json(w.M_inv);
  out["basis_A"] = matrix_to_json(w.basis_A);
  out["basis_B"] = matrix_to_json(w.basis_B);
  out["residuals"] = {{"reconstruction", w.recon_residual},
                      {"sum", w.sum_residual},
                      {"factor", w.factor_residual},
                      {"inverse", w.inverse_residual},
                      {"gram", w.gram_residual}};
  out["forward"] = to_json(w.forward);
  out["backward"] = to_json(w.backward);
  return out;
}

Json to_json(const DiscGrid& g) {
  Json out;
  out["radii"] = g.radii;
  out["angles"] = g.angles;
  out["delta_min"] = g.delta_min();
  return out;
}

DiscGrid grid_from_json(const Json& j) {
  const Json& jr = field(j, "radii");
  if (!jr.is_array()) throw InputError("radii must be an array");
  std::vector<double> radii;
  for (const Json& r : jr) radii.push_back(number(r, "radius"));
  const Json& ja = field(j, "angles");
  if (!ja.is_number_integer()) throw InputError("angles must be an integer");
  try {
    return DiscGrid::make(std::move(radii), ja.get<int>());
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

CaraFunction cara_from_json(const Json& j, const DiscGrid& grid, double tol) {
  const Json& jm = field(j, "model");
  if (!jm.is_string()) throw InputError("model must be a string");
  const std::string model = jm.get<std::string>();
  auto matrices = [](const Json& list, const char* what) {
    if (!list.is_array() || list.empty()) {
      throw InputError(std::string(what) + " must be a nonempty array");
    }
    std::vector<CMatrix> out;
    for (const Json& m : list) out.push_back(matrix_from_json(m));
    return out;
  };

  CaraFunction F = [&]() {
    if (model == "constant") {
      return CaraFunction::constant(matrix_from_json(field(j, "value")), tol);
    }
    if (model == "rational") {
      return CaraFunction::rational(matrices(field(j, "num"), "num"),
                                    matrices(field(j, "den"), "den"), grid,
                                    tol);
    }
    if (model == "herglotz") {
      const Json& jd = field(j, "dim");
      if (!jd.is_number_integer() || jd.get<long long>() < 1) {
        throw InputError("dim must be a positive integer");
      }
      const auto n = static_cast<Index>(jd.get<long long>());
      CMatrix H0 = j.contains("H0") ? matrix_from_json(j["H0"])
                                    : CMatrix::Zero(n, n);
      CMatrix P0 = j.contains("P0") ? matrix_from_json(j["P0"])
                                    : CMatrix::Zero(n, n);
      std::vector<HerglotzTerm> terms;
      if (j.contains("terms")) {
        if (!j["terms"].is_array()) throw InputError("terms must be an array");
        for (const Json& t : j["terms"]) {
          terms.push_back({complex_from_json(field(t, "beta")),
                           matrix_from_json(field(t, "P"))});
        }
      }
      if (H0.rows() != n || P0.rows() != n) {
        throw InputError("H0/P0 do not match dim");
      }
      return CaraFunction::herglotz(std::move(H0), std::move(P0),
                                    std::move(terms), tol);
    }
    throw InputError("unknown model \"" + model + "\"");
  }();
  if (j.contains("dim") && j["dim"].is_number_integer() &&
      j["dim"].get<long long>() != F.dim()) {
    throw InputError("dim does not match the coefficients");
  }
  return F;
}

Json cara_to_json(const CaraFunction& F) {
  Json out;
  out["dim"] = F.dim();
  out["model"] = F.kind();
  if (const auto* h = std::get_if<HerglotzModel>(&F.model())) {
    out["H0"] = matrix_to_json(h->H0);
    out["P0"] = matrix_to_json(h->P0);
    Json terms = Json::array();
    for (const HerglotzTerm& t : h->terms) {
      Json jt;
      jt["beta"] = complex_to_json(t.beta);
      jt["P"] = matrix_to_json(t.P);
      terms.push_back(std::move(jt));
    }
    out["terms"] = std::move(terms);
  } else if (const auto* r = std::get_if<RationalModel>(&F.model())) {
    Json num = Json::array(), den = Json::array();
    for (const CMatrix& c : r->num) num.push_back(matrix_to_json(c));
    for (const CMatrix& c : r->den) den.push_back(matrix_to_json(c));
    out["num"] = std::move(num);
    out["den"] = std::move(den);
  } else if (const auto* c = std::get_if<ConstantModel>(&F.model())) {
    out["value"] = matrix_to_json(c->value);
  } else {
    const auto& m = std::get<LftModel>(F.model());
    out["psi"] = m.psi->label();
    out["literal"] = m.literal;
    out["inner"] = cara_to_json(*m.inner);
  }
  return out;
}

PsiBlock psi_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "example-4.1") return PsiBlock::example_4_1();
    throw InputError("unknown Psi \"" + j.get<std::string>() + "\"");
  }
  const Json& jm = field(j, "model");
  if (!jm.is_string()) throw InputError("model must be a string");
  const std::string model = jm.get<std::string>();
  try {
    if (model == "example-4.1") {
      const Index n = j.contains("n") ? j["n"].get<Index>() : 1;
      return PsiBlock::example_4_1(n);
    }
    if (model == "constant") {
      return PsiBlock::constant(matrix_from_json(field(j, "W")));
    }
    if (model == "polynomial") {
      const Json& jc = field(j, "coeffs");
      if (!jc.is_array() || jc.empty()) {
        throw InputError("coeffs must be a nonempty array");
      }
      std::vector<CMatrix> coeffs;
      for (const Json& c : jc) coeffs.push_back(matrix_from_json(c));
      return PsiBlock::polynomial(std::move(coeffs), "polynomial");
    }
  } catch (const DimensionError& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown Psi model \"" + model + "\"");
}

}  // namespace prcone
