#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "hhcare/model.hpp"

namespace hhcare {

inline constexpr int document_version = 1;

namespace io_detail {

using Json = nlohmann::ordered_json;

inline Json rational_json(const Rational& r) { return r.to_string(); }

inline const Json& field(const Json& doc, const std::string& name, const std::string& path) {
  if (!doc.is_object()) throw ValidationError(path.empty() ? "<document>" : path, "expected an object");
  const auto it = doc.find(name);
  if (it == doc.end()) throw ValidationError(path.empty() ? name : path + "." + name, "missing field");
  return *it;
}

inline std::int64_t read_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
  return v.get<std::int64_t>();
}

inline std::size_t read_count(const Json& v, const std::string& path) {
  const std::int64_t c = read_int(v, path);
  if (c < 0) throw ValidationError(path, "must be non-negative");
  return static_cast<std::size_t>(c);
}

/// Decimal or fraction string; plain integers are accepted too. Binary
/// floating-point literals are rejected.
inline Rational read_rational(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string()) throw ValidationError(path, "expected a decimal string");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    throw ValidationError(path, e.what());
  }
}

inline const Json& array(const Json& v, std::size_t size, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected an array");
  if (v.size() != size) {
    throw DimensionError(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  }
  return v;
}

template <class T, class Read>
std::vector<T> read_vector(const Json& v, std::size_t size, const std::string& path, Read read) {
  array(v, size, path);
  std::vector<T> out;
  out.reserve(size);
  for (std::size_t a = 0; a < size; ++a) out.push_back(read(v[a], detail::idx(path, a)));
  return out;
}

template <class T, class Read>
Matrix<T> read_matrix(const Json& v, std::size_t rows, std::size_t cols, const std::string& path, Read read) {
  array(v, rows, path);
  Matrix<T> out;
  out.reserve(rows);
  for (std::size_t a = 0; a < rows; ++a) out.push_back(read_vector<T>(v[a], cols, detail::idx(path, a), read));
  return out;
}

inline void check_version(const Json& doc) {
  const std::int64_t version = read_int(field(doc, "version", ""), "version");
  if (version != document_version) throw ValidationError("version", "unsupported version " + std::to_string(version));
}

inline Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("<document>", e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace io_detail

inline std::string dump_instance(const Instance& inst) {
  using io_detail::Json;
  validate(inst);
  Json doc;
  doc["version"] = document_version;
  doc["n"] = inst.n;
  doc["m"] = inst.m;
  doc["s"] = inst.s;
  doc["skills"] = inst.skills;
  doc["demand"] = inst.demand;
  doc["capacity"] = inst.capacity;
  doc["max_caregivers_per_patient"] = inst.max_caregivers_per_patient;
  doc["max_patients_per_caregiver"] = inst.max_patients_per_caregiver;
  Json cost = Json::array();
  for (const auto& per_caregiver : inst.unit_cost) {
    Json rows = Json::array();
    for (const auto& per_patient : per_caregiver) {
      Json row = Json::array();
      for (const Rational& c : per_patient) row.push_back(io_detail::rational_json(c));
      rows.push_back(std::move(row));
    }
    cost.push_back(std::move(rows));
  }
  doc["unit_cost"] = std::move(cost);
  doc["budget"] = io_detail::rational_json(inst.budget);
  Json utility = Json::array();
  for (const Rational& p : inst.utility) utility.push_back(io_detail::rational_json(p));
  doc["utility"] = std::move(utility);
  return doc.dump(2) + "\n";
}

inline Instance parse_instance(std::string_view text) {
  using namespace io_detail;
  const Json doc = io_detail::parse(text);
  check_version(doc);
  Instance inst;
  inst.n = read_count(field(doc, "n", ""), "n");
  inst.m = read_count(field(doc, "m", ""), "m");
  inst.s = read_count(field(doc, "s", ""), "s");
  const auto as_int = [](const Json& v, const std::string& p) { return read_int(v, p); };
  const auto as_flag = [](const Json& v, const std::string& p) { return static_cast<int>(read_int(v, p)); };
  inst.skills = read_matrix<int>(field(doc, "skills", ""), inst.n, inst.s, "skills", as_flag);
  inst.demand = read_matrix<Hours>(field(doc, "demand", ""), inst.m, inst.s, "demand", as_int);
  inst.capacity = read_vector<Hours>(field(doc, "capacity", ""), inst.n, "capacity", as_int);
  inst.max_caregivers_per_patient = read_vector<Hours>(field(doc, "max_caregivers_per_patient", ""), inst.m,
                                                       "max_caregivers_per_patient", as_int);
  inst.max_patients_per_caregiver = read_vector<Hours>(field(doc, "max_patients_per_caregiver", ""), inst.n,
                                                       "max_patients_per_caregiver", as_int);
  const Json& cost = array(field(doc, "unit_cost", ""), inst.n, "unit_cost");
  for (std::size_t i = 0; i < inst.n; ++i) {
    inst.unit_cost.push_back(
        read_matrix<Rational>(cost[i], inst.m, inst.s, detail::idx("unit_cost", i), read_rational));
  }
  inst.budget = read_rational(field(doc, "budget", ""), "budget");
  inst.utility = read_vector<Rational>(field(doc, "utility", ""), inst.m, "utility", read_rational);
  validate(inst);
  return inst;
}

inline void save_instance(const Instance& inst, const std::string& path) {
  io_detail::write_file(path, dump_instance(inst));
}

inline Instance load_instance(const std::string& path) { return parse_instance(io_detail::read_file(path)); }

/// What a solution file records. The metrics block written alongside is
/// derived on save and ignored on load.
struct SolutionDocument {
  Assignment hours;
  PenaltyWeights weights;
  std::string algorithm;
  std::string status;

  friend bool operator==(const SolutionDocument&, const SolutionDocument&) = default;
};

inline std::string dump_solution(const Instance& inst, const SolutionDocument& sol) {
  using io_detail::Json;
  using io_detail::rational_json;
  expect_dimensions(inst, sol.hours);
  const SolutionMetrics metrics = compute_metrics(inst, sol.weights, sol.hours);

  Json doc;
  doc["version"] = document_version;
  doc["n"] = sol.hours.n();
  doc["m"] = sol.hours.m();
  doc["s"] = sol.hours.s();
  doc["algorithm"] = sol.algorithm;
  doc["status"] = sol.status;
  doc["theta"] = rational_json(sol.weights.theta);
  doc["alpha"] = rational_json(sol.weights.alpha);
  Json hours = Json::array();
  for (std::size_t i = 0; i < sol.hours.n(); ++i) {
    Json rows = Json::array();
    for (std::size_t j = 0; j < sol.hours.m(); ++j) {
      Json row = Json::array();
      for (std::size_t k = 0; k < sol.hours.s(); ++k) row.push_back(sol.hours(i, j, k));
      rows.push_back(std::move(row));
    }
    hours.push_back(std::move(rows));
  }
  doc["hours"] = std::move(hours);

  Json m;
  Json fill = Json::array();
  for (const Rational& b : metrics.fill_rate) fill.push_back(rational_json(b));
  Json util = Json::array();
  for (const Rational& u : metrics.utilization) util.push_back(rational_json(u));
  m["fill_rate"] = std::move(fill);
  m["utilization"] = std::move(util);
  m["max_fill"] = rational_json(metrics.max_fill);
  m["max_util"] = rational_json(metrics.max_util);
  m["cost"] = rational_json(metrics.total_cost);
  m["total_utility"] = metrics.total_utility;
  m["objective"] = metrics.objective;
  doc["metrics"] = std::move(m);
  return doc.dump(2) + "\n";
}

inline SolutionDocument parse_solution(std::string_view text) {
  using namespace io_detail;
  const Json doc = io_detail::parse(text);
  check_version(doc);
  const std::size_t n = read_count(field(doc, "n", ""), "n");
  const std::size_t m = read_count(field(doc, "m", ""), "m");
  const std::size_t s = read_count(field(doc, "s", ""), "s");

  SolutionDocument sol;
  sol.hours = Assignment(n, m, s);
  const Json& hours = array(field(doc, "hours", ""), n, "hours");
  for (std::size_t i = 0; i < n; ++i) {
    const Json& rows = array(hours[i], m, detail::idx("hours", i));
    for (std::size_t j = 0; j < m; ++j) {
      const Json& row = array(rows[j], s, detail::idx("hours", i, j));
      for (std::size_t k = 0; k < s; ++k) {
        const std::int64_t h = read_int(row[k], detail::idx("hours", i, j, k));
        if (h < 0) throw ValidationError(detail::idx("hours", i, j, k), "must be non-negative");
        sol.hours.set(i, j, k, h);
      }
    }
  }
  if (doc.contains("theta")) sol.weights.theta = read_rational(doc["theta"], "theta");
  if (doc.contains("alpha")) sol.weights.alpha = read_rational(doc["alpha"], "alpha");
  validate(sol.weights);
  if (doc.contains("algorithm")) {
    if (!doc["algorithm"].is_string()) throw ValidationError("algorithm", "expected a string");
    sol.algorithm = doc["algorithm"].get<std::string>();
  }
  if (doc.contains("status")) {
    if (!doc["status"].is_string()) throw ValidationError("status", "expected a string");
    sol.status = doc["status"].get<std::string>();
  }
  return sol;
}

inline void save_solution(const Instance& inst, const SolutionDocument& sol, const std::string& path) {
  io_detail::write_file(path, dump_solution(inst, sol));
}

inline SolutionDocument load_solution(const std::string& path) { return parse_solution(io_detail::read_file(path)); }

/// Loads a solution and checks that it fits `inst`.
inline SolutionDocument load_solution(const std::string& path, const Instance& inst) {
  SolutionDocument sol = load_solution(path);
  expect_dimensions(inst, sol.hours);
  return sol;
}

}  // namespace hhcare
