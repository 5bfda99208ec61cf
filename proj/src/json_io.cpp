#include "qgamble/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace qgamble {

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ValidationError("complex scalar must be a number or a [re, im] pair");
}

HermitianMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a nonempty array of rows");
  const int n = static_cast<int>(j.size());
  std::vector<Complex> data;
  data.reserve(static_cast<size_t>(n) * n);
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ValidationError("matrix rows must all have the same length as the row count");
    for (const auto& cell : row) data.push_back(complex_from_json(cell));
  }
  return HermitianMatrix(n, std::move(data));
}

std::vector<double> real_vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("expected an array of reals");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ValidationError("expected an array of reals");
    out.push_back(v.get<double>());
  }
  return out;
}

SignedCharge charge_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("charge must be a nonempty record list");
  SignedCharge charge;
  for (const auto& rec : j) {
    if (!rec.contains("weight") || !rec.contains("factors"))
      throw ValidationError("charge record needs 'weight' and 'factors'");
    const double w = rec["weight"].get<double>();
    std::vector<UnitVector> factors;
    for (const auto& f : rec["factors"]) {
      std::vector<Complex> comps;
      for (const auto& c : f) comps.push_back(complex_from_json(c));
      factors.emplace_back(std::move(comps));
    }
    charge.atoms.push_back({ProductState(std::move(factors)), w});
  }
  return charge;
}

SignedCharge load_charge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open charge file: " + path);
  nlohmann::json j;
  in >> j;
  return charge_from_json(j);
}

// ---- ReportWriter ----

void ReportWriter::separator() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!needs_comma_.empty()) {
    if (needs_comma_.back()) out_ += ',';
    needs_comma_.back() = true;
  }
}

ReportWriter& ReportWriter::begin_object() {
  separator();
  out_ += '{';
  needs_comma_.push_back(false);
  return *this;
}

ReportWriter& ReportWriter::end_object() {
  needs_comma_.pop_back();
  out_ += '}';
  return *this;
}

ReportWriter& ReportWriter::begin_array() {
  separator();
  out_ += '[';
  needs_comma_.push_back(false);
  return *this;
}

ReportWriter& ReportWriter::end_array() {
  needs_comma_.pop_back();
  out_ += ']';
  return *this;
}

ReportWriter& ReportWriter::key(const std::string& name) {
  separator();
  out_ += '"';
  out_ += name;
  out_ += "\":";
  after_key_ = true;
  return *this;
}

ReportWriter& ReportWriter::value(double v) {
  separator();
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out_ += buf;
  return *this;
}

ReportWriter& ReportWriter::value(int v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

ReportWriter& ReportWriter::value(long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

ReportWriter& ReportWriter::value(unsigned long long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

ReportWriter& ReportWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

ReportWriter& ReportWriter::value(const char* v) { return value(std::string(v)); }

ReportWriter& ReportWriter::value(const std::string& v) {
  separator();
  out_ += '"';
  for (char c : v) {
    if (c == '"' || c == '\\') out_ += '\\';
    out_ += c;
  }
  out_ += '"';
  return *this;
}

ReportWriter& ReportWriter::complex_value(Complex z) {
  begin_array();
  value(z.real());
  value(z.imag());
  return end_array();
}

ReportWriter& ReportWriter::matrix_value(const HermitianMatrix& m) {
  begin_array();
  for (int i = 0; i < m.dim(); ++i) {
    begin_array();
    for (int j = 0; j < m.dim(); ++j) complex_value(m(i, j));
    end_array();
  }
  return end_array();
}

ReportWriter& ReportWriter::real_matrix_value(const HermitianMatrix& m) {
  begin_array();
  for (int i = 0; i < m.dim(); ++i) {
    begin_array();
    for (int j = 0; j < m.dim(); ++j) value(m(i, j).real());
    end_array();
  }
  return end_array();
}

ReportWriter& ReportWriter::real_array(const std::vector<double>& v) {
  begin_array();
  for (double x : v) value(x);
  return end_array();
}

}  // namespace qgamble
