#include "disclab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace disclab {

namespace {

std::string format_real(double v) {
  if (v == 0.0) return std::signbit(v) ? "-0.0" : "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_rows(std::ostringstream& out, const char* key, const Eigen::MatrixXd& mat,
                       bool by_column) {
  const Index outer = by_column ? mat.cols() : mat.rows();
  const Index inner = by_column ? mat.rows() : mat.cols();
  out << "  \"" << key << "\": [";
  for (Index a = 0; a < outer; ++a) {
    out << (a ? ",\n    [" : "\n    [");
    for (Index b = 0; b < inner; ++b) {
      if (b) out << ", ";
      out << format_real(by_column ? mat(b, a) : mat(a, b));
    }
    out << "]";
  }
  out << "\n  ]\n";
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("malformed JSON: ") + e.what());
  }
}

const Json& require(const Json& doc, const char* key) {
  if (!doc.is_object()) throw Error(ErrorKind::Schema, "document is not a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorKind::Schema, std::string("missing field \"") + key + "\"");
  return *it;
}

void expect_schema(const Json& doc, const char* schema) {
  const Json& tag = require(doc, "schema");
  if (!tag.is_string() || tag.get<std::string>() != schema) {
    throw Error(ErrorKind::Schema,
                std::string("schema: expected \"") + schema + "\", got " + tag.dump());
  }
}

Index read_count(const Json& doc, const char* key) {
  const Json& v = require(doc, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw Error(ErrorKind::Schema, std::string(key) + ": expected a positive integer");
  }
  return static_cast<Index>(v.get<std::int64_t>());
}

// Reads an outer x inner array of arrays; element [a][b] lands at (a, b),
// or at (b, a) when by_column.
Eigen::MatrixXd read_matrix(const Json& doc, const char* key, Index outer, Index inner,
                            bool by_column) {
  const Json& arr = require(doc, key);
  if (!arr.is_array() || static_cast<Index>(arr.size()) != outer) {
    throw Error(ErrorKind::Schema, std::string(key) + ": expected an array of " +
                                       std::to_string(outer) + " arrays");
  }
  Eigen::MatrixXd mat = by_column ? Eigen::MatrixXd(inner, outer) : Eigen::MatrixXd(outer, inner);
  for (Index a = 0; a < outer; ++a) {
    const Json& line = arr[static_cast<std::size_t>(a)];
    const std::string where = std::string(key) + "[" + std::to_string(a) + "]";
    if (!line.is_array() || static_cast<Index>(line.size()) != inner) {
      throw Error(ErrorKind::Schema,
                  where + ": expected an array of " + std::to_string(inner) + " numbers");
    }
    for (Index b = 0; b < inner; ++b) {
      const Json& cell = line[static_cast<std::size_t>(b)];
      if (!cell.is_number()) {
        throw Error(ErrorKind::Schema, where + "[" + std::to_string(b) + "]: expected a number");
      }
      (by_column ? mat(b, a) : mat(a, b)) = cell.get<double>();
    }
  }
  return mat;
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  std::ostringstream out;
  out << "{\n  \"schema\": \"" << kInstanceSchema << "\",\n  \"model\": \""
      << to_string(instance.model()) << "\",\n  \"n\": " << instance.n()
      << ",\n  \"m\": " << instance.m() << ",\n";
  write_matrix_rows(out, "rows", instance.rows(), false);
  out << "}\n";
  return out.str();
}

std::string komlos_to_json(const KomlosInstance& kom) {
  std::ostringstream out;
  out << "{\n  \"schema\": \"" << kKomlosSchema << "\",\n  \"n\": " << kom.n()
      << ",\n  \"m\": " << kom.m() << ",\n";
  write_matrix_rows(out, "columns", kom.columns(), true);
  out << "}\n";
  return out.str();
}

std::string coloring_to_json(const Coloring& coloring) {
  std::ostringstream out;
  out << "{\"schema\": \"" << kColoringSchema << "\", \"values\": [";
  for (Index j = 0; j < coloring.size(); ++j) out << (j ? ", " : "") << coloring[j];
  out << "]}\n";
  return out.str();
}

Instance instance_from_json(const std::string& text) {
  const Json doc = parse(text);
  expect_schema(doc, kInstanceSchema);
  const Json& model_field = require(doc, "model");
  if (!model_field.is_string()) throw Error(ErrorKind::Schema, "model: expected a string");
  const NormModel model = norm_model_from_string(model_field.get<std::string>());
  const Index n = read_count(doc, "n");
  const Index m = read_count(doc, "m");
  return Instance(read_matrix(doc, "rows", m, n, false), model);
}

KomlosInstance komlos_from_json(const std::string& text) {
  const Json doc = parse(text);
  expect_schema(doc, kKomlosSchema);
  const Index n = read_count(doc, "n");
  const Index m = read_count(doc, "m");
  return KomlosInstance(read_matrix(doc, "columns", n, m, true));
}

Coloring coloring_from_json(const std::string& text) {
  const Json doc = parse(text);
  expect_schema(doc, kColoringSchema);
  const Json& values = require(doc, "values");
  if (!values.is_array()) throw Error(ErrorKind::Schema, "values: expected an array");
  SignVector v(static_cast<Index>(values.size()));
  for (std::size_t j = 0; j < values.size(); ++j) {
    const Json& cell = values[j];
    if (!cell.is_number_integer() || cell.get<std::int64_t>() < -1 || cell.get<std::int64_t>() > 1) {
      throw Error(ErrorKind::Schema, "values[" + std::to_string(j) + "]: expected -1, 0 or 1");
    }
    v[static_cast<Index>(j)] = static_cast<int>(cell.get<std::int64_t>());
  }
  return Coloring(std::move(v));
}

std::variant<Instance, KomlosInstance> any_instance_from_json(const std::string& text) {
  const Json doc = parse(text);
  const Json& tag = require(doc, "schema");
  if (tag == kKomlosSchema) return komlos_from_json(text);
  return instance_from_json(text);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Usage, "cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::Usage, "short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

Instance read_instance(const std::string& path) { return instance_from_json(read_file(path)); }
KomlosInstance read_komlos(const std::string& path) { return komlos_from_json(read_file(path)); }
Coloring read_coloring(const std::string& path) { return coloring_from_json(read_file(path)); }

void write_instance(const std::string& path, const Instance& instance) {
  write_file_atomic(path, instance_to_json(instance));
}
void write_komlos(const std::string& path, const KomlosInstance& kom) {
  write_file_atomic(path, komlos_to_json(kom));
}
void write_coloring(const std::string& path, const Coloring& coloring) {
  write_file_atomic(path, coloring_to_json(coloring));
}

std::string instance_hash(const Instance& instance) { return fnv1a64(instance_to_json(instance)); }
std::string komlos_hash(const KomlosInstance& kom) { return fnv1a64(komlos_to_json(kom)); }

Json values_json(const Coloring& coloring) {
  Json arr = Json::array();
  for (Index j = 0; j < coloring.size(); ++j) arr.push_back(coloring[j]);
  return arr;
}

Json to_json(const DiscrepancyReport& report) {
  Json j;
  j["max_abs"] = report.max_abs;
  j["support_fraction"] = report.support_fraction;
  j["inner_products"] = vector_json(report.inner_products);
  return j;
}

Json to_json(const SolveResult& result) {
  Json j;
  j["method"] = to_string(result.method);
  j["optimal"] = result.optimal;
  j["attempts"] = result.attempts;
  j["support"] = result.coloring.support();
  j["max_abs"] = result.report.max_abs;
  j["coloring"] = values_json(result.coloring);
  j["report"] = to_json(result.report);
  return j;
}

Json to_json(const Certificate& cert) {
  Json j;
  j["n"] = cert.n;
  j["lambda"] = cert.lambda;
  j["delta"] = cert.delta;
  j["det_bound"] = cert.det_bound();
  j["volume_lb"] = cert.volume_lb();
  j["count_lb"] = cert.count_lb();
  j["small_support_count"] = cert.small_support_count();
  j["log_det_bound"] = cert.log_det_bound;
  j["log_volume_lb"] = cert.log_volume_lb;
  j["log_count_lb"] = cert.log_count_lb;
  j["log_small_support_count"] = cert.log_small_support_count;
  j["verdict"] = cert.verdict;
  return j;
}

Json to_json(const VolumeEstimate& estimate) {
  Json j;
  j["samples"] = estimate.samples;
  j["hits"] = estimate.hits;
  j["estimate"] = estimate.estimate;
  j["ci99_lower"] = estimate.lower;
  j["ci99_upper"] = estimate.upper;
  j["vaaler_lower_bound"] = estimate.vaaler_lb;
  j["delta_lower_bound"] = estimate.delta_lb;
  j["violation"] = estimate.violation;
  return j;
}

Json to_json(const RecursionTrace& trace) {
  Json j;
  j["s_planned"] = trace.s_planned;
  j["final_method"] = to_string(trace.final_method);
  Json rounds = Json::array();
  for (const RoundRecord& r : trace.rounds) {
    Json row;
    row["k"] = r.k;
    row["active"] = r.active;
    row["colored"] = r.colored;
    row["method"] = to_string(r.method);
    row["partial"] = r.partial;
    row["retries"] = r.retries;
    row["max_abs"] = r.max_abs;
    row["cumulative_bound"] = r.cumulative;
    rounds.push_back(std::move(row));
  }
  j["rounds"] = std::move(rounds);
  return j;
}

Json to_json(const KomlosResult& result) {
  Json j;
  j["signed_sum_inf_norm"] = result.inf_norm;
  j["certified_k"] = result.certified_k;
  j["support"] = result.reduced.coloring.support();
  j["signed_sum"] = vector_json(result.sum);
  j["reduced"] = to_json(result.reduced);
  return j;
}

}  // namespace disclab
