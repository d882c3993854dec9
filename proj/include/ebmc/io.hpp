#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebmc/errors.hpp"
#include "ebmc/generator.hpp"
#include "ebmc/instance.hpp"

namespace ebmc {

namespace detail {

inline void require_keys(const nlohmann::json& obj,
                         std::initializer_list<const char*> allowed,
                         const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok)
      throw FormatError(std::string("unknown field \"") + it.key() + "\" in " +
                        where);
  }
}

inline int get_int(const nlohmann::json& obj, const char* key,
                   const char* where) {
  if (!obj.contains(key))
    throw FormatError(std::string("missing field \"") + key + "\" in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number_integer())
    throw FormatError(std::string("field \"") + key + "\" in " + where +
                      " must be an integer");
  return v.get<int>();
}

}  // namespace detail

inline nlohmann::json to_json(const Instance& inst) {
  nlohmann::json j;
  j["version"] = 1;
  j["num_ais_types"] = inst.num_ais_types();
  auto& lakes = j["lakes"] = nlohmann::json::array();
  for (int l = 0; l < inst.num_lakes(); ++l) {
    nlohmann::json types = nlohmann::json::array();
    for (int t = 0; t < inst.num_ais_types(); ++t)
      if (inst.infested_types(l) & (TypeMask{1} << t)) types.push_back(t);
    lakes.push_back({{"id", l}, {"infested_types", std::move(types)}});
  }
  auto& counties = j["counties"] = nlohmann::json::array();
  for (int c = 0; c < inst.num_counties(); ++c)
    counties.push_back({{"id", c},
                        {"budget", inst.budget(c)},
                        {"lakes", inst.county_lakes(c)}});
  auto& arcs = j["arcs"] = nlohmann::json::array();
  for (const Arc& a : inst.arcs())
    arcs.push_back({{"from", a.from}, {"to", a.to}, {"weight", a.weight}});
  return j;
}

inline Instance from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("instance file must hold an object");
  detail::require_keys(j, {"version", "num_ais_types", "lakes", "counties",
                           "arcs"},
                       "instance");
  if (detail::get_int(j, "version", "instance") != 1)
    throw FormatError("unsupported instance file version");
  const int k = detail::get_int(j, "num_ais_types", "instance");

  if (!j.contains("lakes") || !j.at("lakes").is_array())
    throw FormatError("instance needs a \"lakes\" array");
  const auto& jlakes = j.at("lakes");
  std::vector<TypeMask> infested(jlakes.size(), 0);
  std::vector<std::uint8_t> lake_seen(jlakes.size(), 0);
  for (const auto& jl : jlakes) {
    if (!jl.is_object()) throw FormatError("lake entries must be objects");
    detail::require_keys(jl, {"id", "infested_types"}, "lake");
    const int id = detail::get_int(jl, "id", "lake");
    if (id < 0 || id >= static_cast<int>(jlakes.size()) || lake_seen[id])
      throw FormatError("lake ids must be dense from 0 and unique");
    lake_seen[id] = 1;
    if (!jl.contains("infested_types") || !jl.at("infested_types").is_array())
      throw FormatError("lake needs an \"infested_types\" array");
    for (const auto& jt : jl.at("infested_types")) {
      if (!jt.is_number_integer())
        throw FormatError("infested_types entries must be integers");
      const int t = jt.get<int>();
      if (t < 0 || t >= k)
        throw FormatError("infested type " + std::to_string(t) +
                          " outside [0, num_ais_types)");
      infested[id] |= TypeMask{1} << t;
    }
  }

  if (!j.contains("counties") || !j.at("counties").is_array())
    throw FormatError("instance needs a \"counties\" array");
  const auto& jcounties = j.at("counties");
  std::vector<CountySpec> counties(jcounties.size());
  std::vector<std::uint8_t> county_seen(jcounties.size(), 0);
  for (const auto& jc : jcounties) {
    if (!jc.is_object()) throw FormatError("county entries must be objects");
    detail::require_keys(jc, {"id", "budget", "lakes"}, "county");
    const int id = detail::get_int(jc, "id", "county");
    if (id < 0 || id >= static_cast<int>(jcounties.size()) || county_seen[id])
      throw FormatError("county ids must be dense from 0 and unique");
    county_seen[id] = 1;
    counties[id].budget = detail::get_int(jc, "budget", "county");
    if (!jc.contains("lakes") || !jc.at("lakes").is_array())
      throw FormatError("county needs a \"lakes\" array");
    for (const auto& jl : jc.at("lakes")) {
      if (!jl.is_number_integer())
        throw FormatError("county lake ids must be integers");
      counties[id].lakes.push_back(jl.get<int>());
    }
  }

  std::vector<Arc> arcs;
  if (!j.contains("arcs") || !j.at("arcs").is_array())
    throw FormatError("instance needs an \"arcs\" array");
  for (const auto& ja : j.at("arcs")) {
    if (!ja.is_object()) throw FormatError("arc entries must be objects");
    detail::require_keys(ja, {"from", "to", "weight"}, "arc");
    Arc a;
    a.from = detail::get_int(ja, "from", "arc");
    a.to = detail::get_int(ja, "to", "arc");
    if (!ja.contains("weight") || !ja.at("weight").is_number_integer())
      throw FormatError("arc weight must be an integer");
    a.weight = ja.at("weight").get<Weight>();
    arcs.push_back(a);
  }

  try {
    return Instance(k, std::move(infested), std::move(counties),
                    std::move(arcs));
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << to_json(inst).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return from_json(j);
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_ll(const std::string& s, long long& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

inline long long csv_int(const std::string& cell, const char* what,
                         const std::string& file, int row) {
  long long v;
  if (!parse_ll(cell, v))
    throw FormatError(file + " row " + std::to_string(row) + ": bad " + what +
                      " \"" + trim(cell) + "\"");
  return v;
}

struct CsvRows {
  std::vector<std::vector<std::string>> rows;  // data rows only
  std::vector<int> line_numbers;               // 1-based, header skipped
};

inline CsvRows read_csv(const std::string& path, std::size_t columns,
                        const char* header_first_field) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvRows out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (lineno == 1) {
      long long probe;
      if (!parse_ll(cells[0], probe)) {
        if (trim(cells[0]) != header_first_field)
          throw FormatError(path + ": unrecognized header \"" + trim(cells[0]) +
                            "\"");
        continue;  // header row
      }
    }
    if (cells.size() != columns)
      throw FormatError(path + " row " + std::to_string(lineno) + ": expected " +
                        std::to_string(columns) + " columns, got " +
                        std::to_string(cells.size()));
    out.rows.push_back(std::move(cells));
    out.line_numbers.push_back(lineno);
  }
  return out;
}

}  // namespace detail

// Raw survey data: a lakes table (lake_id,county_id,infested_types with the
// types ';'-separated), a boat-traffic table (from,to,traffic) and a budgets
// table (county_id,budget). Arc weights become risky-boat counts; arcs whose
// whole traffic is safe disappear.
inline Instance load_traffic_csv(const std::string& lakes_path,
                                 const std::string& arcs_path,
                                 const std::string& budgets_path,
                                 int num_ais_types) {
  const auto lakes = detail::read_csv(lakes_path, 3, "lake_id");
  const int n = static_cast<int>(lakes.rows.size());
  std::vector<TypeMask> infested(n, 0);
  std::vector<int> county_of(n, -1);
  std::vector<std::uint8_t> seen(n, 0);
  int max_county = -1;

  for (std::size_t r = 0; r < lakes.rows.size(); ++r) {
    const auto& row = lakes.rows[r];
    const int lineno = lakes.line_numbers[r];
    const int id = static_cast<int>(
        detail::csv_int(row[0], "lake_id", lakes_path, lineno));
    if (id < 0 || id >= n || seen[id])
      throw FormatError(lakes_path + " row " + std::to_string(lineno) +
                        ": lake ids must be dense from 0 and unique");
    seen[id] = 1;
    county_of[id] = static_cast<int>(
        detail::csv_int(row[1], "county_id", lakes_path, lineno));
    if (county_of[id] < 0)
      throw FormatError(lakes_path + " row " + std::to_string(lineno) +
                        ": negative county_id");
    max_county = std::max(max_county, county_of[id]);
    const std::string types = detail::trim(row[2]);
    if (!types.empty()) {
      for (const auto& cell : detail::split(types, ';')) {
        const int t = static_cast<int>(
            detail::csv_int(cell, "infested type", lakes_path, lineno));
        if (t < 0 || t >= num_ais_types)
          throw FormatError(lakes_path + " row " + std::to_string(lineno) +
                            ": infested type outside [0, num_ais_types)");
        infested[id] |= TypeMask{1} << t;
      }
    }
  }

  const int nc = max_county + 1;
  std::vector<CountySpec> counties(std::max(nc, 0));
  for (int l = 0; l < n; ++l) counties[county_of[l]].lakes.push_back(l);
  for (int c = 0; c < nc; ++c)
    if (counties[c].lakes.empty())
      throw FormatError(lakes_path + ": county ids must be dense from 0");

  const auto arcs_csv = detail::read_csv(arcs_path, 3, "from");
  std::vector<Arc> arcs;
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t r = 0; r < arcs_csv.rows.size(); ++r) {
    const auto& row = arcs_csv.rows[r];
    const int lineno = arcs_csv.line_numbers[r];
    const int from =
        static_cast<int>(detail::csv_int(row[0], "from", arcs_path, lineno));
    const int to =
        static_cast<int>(detail::csv_int(row[1], "to", arcs_path, lineno));
    const long long traffic =
        detail::csv_int(row[2], "traffic", arcs_path, lineno);
    if (from < 0 || from >= n || to < 0 || to >= n)
      throw FormatError(arcs_path + " row " + std::to_string(lineno) +
                        ": arc references unknown lake");
    if (traffic < 0)
      throw FormatError(arcs_path + " row " + std::to_string(lineno) +
                        ": negative traffic");
    pairs.emplace_back(from, to);
    arcs.push_back(
        {from, to, risky_weight(traffic, infested[from], infested[to])});
  }
  std::sort(pairs.begin(), pairs.end());
  if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
    throw FormatError(arcs_path + ": duplicate (from,to) pair");

  const auto budgets_csv = detail::read_csv(budgets_path, 2, "county_id");
  std::vector<std::uint8_t> budget_seen(std::max(nc, 0), 0);
  for (std::size_t r = 0; r < budgets_csv.rows.size(); ++r) {
    const auto& row = budgets_csv.rows[r];
    const int lineno = budgets_csv.line_numbers[r];
    const int c = static_cast<int>(
        detail::csv_int(row[0], "county_id", budgets_path, lineno));
    if (c < 0 || c >= nc)
      throw FormatError(budgets_path + " row " + std::to_string(lineno) +
                        ": unknown county_id");
    if (budget_seen[c])
      throw FormatError(budgets_path + " row " + std::to_string(lineno) +
                        ": duplicate county_id");
    budget_seen[c] = 1;
    counties[c].budget = static_cast<int>(
        detail::csv_int(row[1], "budget", budgets_path, lineno));
  }
  for (int c = 0; c < nc; ++c)
    if (!budget_seen[c])
      throw FormatError(budgets_path + ": missing budget for county " +
                        std::to_string(c));

  try {
    return Instance(num_ais_types, std::move(infested), std::move(counties),
                    std::move(arcs));
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
}

}  // namespace ebmc
