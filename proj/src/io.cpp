#include "phantom/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace phantom {

namespace {

void emit(const nlohmann::json& v, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (v.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map: sorted
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        emit(it.value(), out);
      }
      out += '}';
      return;
    }
    case value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        emit(v[i], out);
      }
      out += ']';
      return;
    }
    case value_t::number_float: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      out += buf;
      return;
    }
    default:
      out += v.dump();  // strings, integers, bool, null
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& doc) {
  std::string out;
  emit(doc, out);
  out += '\n';
  return out;
}

nlohmann::json profile_to_json(const Profile& v) {
  nlohmann::json doc;
  doc["m"] = v.projects();
  nlohmann::json votes = nlohmann::json::array();
  for (std::size_t i = 0; i < v.voters(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < v.projects(); ++j) row.push_back(v.at(i, j));
    votes.push_back(std::move(row));
  }
  doc["votes"] = std::move(votes);
  return doc;
}

Profile profile_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("votes") || !doc["votes"].is_array()) {
    throw parse_error("profile document needs a votes array");
  }
  std::vector<Division> rows;
  for (const auto& row : doc["votes"]) {
    if (!row.is_array()) throw parse_error("votes rows must be arrays");
    std::vector<double> shares;
    for (const auto& cell : row) {
      if (!cell.is_number()) throw parse_error("vote shares must be numbers");
      shares.push_back(cell.get<double>());
    }
    rows.emplace_back(std::move(shares));
  }
  if (doc.contains("m")) {
    const auto m = doc["m"].get<std::size_t>();
    for (const auto& r : rows) {
      if (r.size() != m) {
        throw parse_error("declared m disagrees with a vote row");
      }
    }
  }
  return Profile(std::move(rows));
}

Profile profile_from_csv(std::istream& in) {
  std::vector<Division> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::vector<double> shares;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        double val = std::stod(cell, &used);
        while (used < cell.size() &&
               std::isspace(static_cast<unsigned char>(cell[used]))) {
          ++used;
        }
        if (used != cell.size()) throw std::invalid_argument(cell);
        shares.push_back(val);
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;  // header line
        continue;
      }
      throw parse_error("non-numeric csv cell: " + line);
    }
    first = false;
    rows.emplace_back(std::move(shares));
  }
  if (rows.empty()) throw parse_error("csv profile has no vote rows");
  return Profile(std::move(rows));
}

Profile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot read " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return profile_from_csv(in);
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  // Sniff: JSON documents start with an object or array.
  const auto head = text.find_first_not_of(" \t\r\n");
  if (head != std::string::npos && (text[head] == '{' || text[head] == '[')) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw parse_error("malformed json in " + path);
    return profile_from_json(doc);
  }
  std::istringstream ss(text);
  return profile_from_csv(ss);
}

Division division_from_string(const std::string& text) {
  std::vector<double> shares;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      shares.push_back(std::stod(cell));
    } catch (...) {
      throw parse_error("bad division component: " + cell);
    }
  }
  if (shares.size() < 2) throw parse_error("division needs at least 2 shares");
  return Division(std::move(shares));  // invariant failures keep their own exit code
}

nlohmann::json loss_report_to_json(const LossReport& report) {
  nlohmann::json doc;
  doc["outcome"] = report.outcome.shares();
  doc["proportional"] = report.proportional.shares();
  doc["loss"] = report.loss;
  if (report.tstar.has_value()) doc["tstar"] = *report.tstar;
  return doc;
}

}  // namespace phantom
