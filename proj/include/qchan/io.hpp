#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qchan/channels.hpp"
#include "qchan/errcorr.hpp"
#include "qchan/infotheory.hpp"
#include "qchan/states.hpp"

namespace qchan::io {

/// A state/channel spec string or an input file failed to parse; the message
/// names the offending token.
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An output path could not be written.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Matrix files: {"rows": n, "cols": m, "data": [[re, im], ...]} row-major.

inline nlohmann::json matrix_to_json(const CMat<double>& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMat<double> matrix_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw ParseError(where + ": expected an object with rows, cols, data");
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (rows < 1 || cols < 1) throw ParseError(where + ": rows and cols must be positive");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
    throw ParseError(where + ": data length is not rows*cols");
  CMat<double> m(rows, cols);
  Index i = 0;
  for (const auto& entry : data) {
    if (!entry.is_array() || entry.size() != 2)
      throw ParseError(where + ": each entry must be a [re, im] pair");
    const double re = entry[0].get<double>();
    const double im = entry[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw ParseError(where + ": non-finite entry");
    m(i / cols, i % cols) = {re, im};
    ++i;
  }
  return m;
}

inline nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  return j;
}

inline CMat<double> read_matrix(const std::filesystem::path& path) {
  return matrix_from_json(load_json(path), "'" + path.string() + "'");
}

inline void write_matrix(const CMat<double>& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write '" + path.string() + "'");
  out << matrix_to_json(m).dump(2) << "\n";
  if (!out) throw FileError("write failed on '" + path.string() + "'");
}

/// Kraus files hold a JSON array of matrix objects.
inline std::vector<CMat<double>> read_matrix_list(const std::filesystem::path& path) {
  const nlohmann::json j = load_json(path);
  if (!j.is_array() || j.empty())
    throw ParseError("'" + path.string() + "': expected a non-empty array of matrices");
  std::vector<CMat<double>> out;
  out.reserve(j.size());
  for (const auto& entry : j) out.push_back(matrix_from_json(entry, "'" + path.string() + "'"));
  return out;
}

// ---------------------------------------------------------------------------
// Spec strings.

namespace detail {

inline std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto pos = spec.find(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= spec.size())
    throw ParseError("malformed spec '" + spec + "' (expected <kind>:<value>)");
  return {spec.substr(0, pos), spec.substr(pos + 1)};
}

inline double parse_number(const std::string& token, const std::string& spec) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + token + "' in '" + spec + "'");
  }
  if (used != token.size() || !std::isfinite(v))
    throw ParseError("bad number '" + token + "' in '" + spec + "'");
  return v;
}

inline Index parse_dim(const std::string& token, const std::string& spec) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    throw ParseError("bad dimension '" + token + "' in '" + spec + "'");
  }
  if (used != token.size() || v < 1)
    throw ParseError("bad dimension '" + token + "' in '" + spec + "'");
  return static_cast<Index>(v);
}

inline std::filesystem::path parse_at_file(const std::string& token, const std::string& spec) {
  if (token.empty() || token[0] != '@')
    throw ParseError("expected @<file> after ':' in '" + spec + "'");
  return std::filesystem::path(token.substr(1));
}

}  // namespace detail

/// `maxmixed:<d>` | `pure:@<file>` | `density:@<file>` | `codespace:@<file>`.
inline DensityOperator<double> parse_state_spec(const std::string& spec) {
  const auto [kind, value] = detail::split_spec(spec);
  try {
    if (kind == "maxmixed") {
      const Index d = detail::parse_dim(value, spec);
      return DensityOperator<double>(CMat<double>::Identity(d, d) / double(d));
    }
    if (kind == "pure") {
      const CMat<double> m = read_matrix(detail::parse_at_file(value, spec));
      if (m.cols() != 1) throw ParseError("'" + spec + "': pure state file must have cols = 1");
      return PureState<double>(CVec<double>(m.col(0))).density();
    }
    if (kind == "density") {
      return DensityOperator<double>(read_matrix(detail::parse_at_file(value, spec)));
    }
    if (kind == "codespace") {
      const CMat<double> v = read_matrix(detail::parse_at_file(value, spec));
      const Index k = v.cols();
      if ((v.adjoint() * v - CMat<double>::Identity(k, k)).norm() > 1e-8)
        throw ParseError("'" + spec + "': codespace vectors are not orthonormal");
      return DensityOperator<double>(CMat<double>(v * v.adjoint() / double(k)));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError("invalid state spec '" + spec + "': " + e.what());
  }
  throw ParseError("unknown state kind '" + kind + "' in '" + spec + "'");
}

/// `identity:<d>` | `dephasing:<p>` | `bitflip:<p>` | `depolarizing:<p>` |
/// `amplitude-damping:<gamma>` | `unitary:@<file>` | `kraus:@<file>`.
inline KrausChannel<double> parse_channel_spec(const std::string& spec) {
  const auto [kind, value] = detail::split_spec(spec);
  try {
    if (kind == "identity") return identity_channel<double>(detail::parse_dim(value, spec));
    if (kind == "dephasing") return dephasing(detail::parse_number(value, spec));
    if (kind == "bitflip") return bit_flip(detail::parse_number(value, spec));
    if (kind == "depolarizing") return depolarizing(detail::parse_number(value, spec));
    if (kind == "amplitude-damping")
      return amplitude_damping(detail::parse_number(value, spec));
    if (kind == "unitary")
      return unitary_channel(read_matrix(detail::parse_at_file(value, spec)));
    if (kind == "kraus")
      return KrausChannel<double>(read_matrix_list(detail::parse_at_file(value, spec)));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError("invalid channel spec '" + spec + "': " + e.what());
  }
  throw ParseError("unknown channel kind '" + kind + "' in '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Report rendering. Text output is `name = value` with 6 decimal places.

inline std::string fixed6(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;  // avoid the "-0.000000" rendering
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string to_text(const ChannelReport<double>& r) {
  std::string s;
  s += "input_entropy = " + fixed6(r.input_entropy) + "\n";
  s += "output_entropy = " + fixed6(r.output_entropy) + "\n";
  s += "entanglement_fidelity = " + fixed6(r.entanglement_fidelity) + "\n";
  s += "entropy_exchange = " + fixed6(r.entropy_exchange) + "\n";
  s += "coherent_information = " + fixed6(r.coherent_information) + "\n";
  s += "fano_lhs = " + fixed6(r.fano_lhs) + "\n";
  s += "fano_margin = " + fixed6(r.fano_margin) + "\n";
  return s;
}

inline nlohmann::json to_json(const ChannelReport<double>& r) {
  return {{"input_entropy", r.input_entropy},
          {"output_entropy", r.output_entropy},
          {"entanglement_fidelity", r.entanglement_fidelity},
          {"entropy_exchange", r.entropy_exchange},
          {"coherent_information", r.coherent_information},
          {"fano_lhs", r.fano_lhs},
          {"fano_margin", r.fano_margin}};
}

inline std::string to_text(const DpiReport<double>& r) {
  std::string s;
  s += "input_entropy = " + fixed6(r.input_entropy) + "\n";
  s += "ie_stage1 = " + fixed6(r.ie_stage1) + "\n";
  s += "ie_both = " + fixed6(r.ie_both) + "\n";
  s += "se_stage1 = " + fixed6(r.se_stage1) + "\n";
  s += "se_both = " + fixed6(r.se_both) + "\n";
  return s;
}

inline nlohmann::json to_json(const DpiReport<double>& r) {
  return {{"input_entropy", r.input_entropy},
          {"ie_stage1", r.ie_stage1},
          {"ie_both", r.ie_both},
          {"se_stage1", r.se_stage1},
          {"se_both", r.se_both}};
}

inline nlohmann::json to_json(const CorrectionResult<double>& r,
                              const std::vector<std::string>& corrector_files = {}) {
  nlohmann::json j = {{"deficit", r.deficit},
                      {"correctable", r.correctable},
                      {"product_defect", r.product_defect}};
  if (r.verified_fidelity) j["verified_fidelity"] = *r.verified_fidelity;
  if (!corrector_files.empty()) j["corrector_files"] = corrector_files;
  return j;
}

}  // namespace qchan::io
