#ifndef QGAMBLE_JSON_IO_HPP
#define QGAMBLE_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qgamble/hermitian.hpp"
#include "qgamble/quasiprob.hpp"

namespace qgamble {

// Repo-wide exchange format: a complex scalar is a [re, im] 2-array (plain
// numbers are accepted as reals on input); a matrix is row-major nested
// arrays.

Complex complex_from_json(const nlohmann::json& j);
HermitianMatrix matrix_from_json(const nlohmann::json& j);
std::vector<double> real_vector_from_json(const nlohmann::json& j);

SignedCharge charge_from_json(const nlohmann::json& j);
SignedCharge load_charge_file(const std::string& path);

/// Streaming JSON emitter with fixed key order and %.17g reals; reports are
/// byte-identical for identical inputs, which the golden tests rely on.
class ReportWriter {
 public:
  ReportWriter& begin_object();
  ReportWriter& end_object();
  ReportWriter& begin_array();
  ReportWriter& end_array();
  ReportWriter& key(const std::string& name);
  ReportWriter& value(double v);
  ReportWriter& value(int v);
  ReportWriter& value(long v);
  ReportWriter& value(unsigned long long v);
  ReportWriter& value(bool v);
  ReportWriter& value(const char* v);
  ReportWriter& value(const std::string& v);
  ReportWriter& complex_value(Complex z);
  ReportWriter& matrix_value(const HermitianMatrix& m);
  ReportWriter& real_matrix_value(const HermitianMatrix& m);  // imag parts dropped
  ReportWriter& real_array(const std::vector<double>& v);

  std::string str() const { return out_; }

 private:
  void separator();
  std::string out_;
  std::vector<bool> needs_comma_;
  bool after_key_ = false;
};

}  // namespace qgamble

#endif
