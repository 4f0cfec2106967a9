#include "schemas.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qovae/repr/dataset_io.hpp"

namespace qovae::tool {

namespace {

enum class Col { Int, Real, Text };

struct CsvSchema {
  std::vector<std::pair<std::string, Col>> columns;
};

const std::map<std::string, CsvSchema>& csv_schemas() {
  using enum Col;
  static const std::map<std::string, CsvSchema> schemas{
      {"train-log",
       {{{"epoch", Int}, {"train_recon", Real}, {"train_kl", Real}, {"val_recon", Real}, {"val_kl", Real},
         {"seconds", Real}}}},
      {"interpolation",
       {{{"step", Int}, {"t", Real}, {"S", Real}, {"length", Int}, {"tokens", Text}, {"error", Text}}}},
      {"distance", {{{"pair", Int}, {"i", Int}, {"j", Int}, {"distance", Real}, {"abs_dS", Real}}}},
      {"distance-bins",
       {{{"bin", Int}, {"lo", Real}, {"hi", Real}, {"count", Int}, {"mean_distance", Real}, {"mean_abs_dS", Real}}}},
      {"latent-map",
       {{{"index", Int}, {"x", Real}, {"y", Real}, {"S", Real}, {"length", Int}, {"last_device", Text},
         {"second_last_device", Text}, {"functional_group", Text}, {"tokens", Text}}}},
      {"entropy-kde", {{{"set", Text}, {"bipartition", Text}, {"x", Real}, {"density", Real}}}},
      {"schmidt-rank-hist", {{{"set", Text}, {"bipartition", Text}, {"rank", Int}, {"count", Int}}}},
      {"device-count-hist", {{{"set", Text}, {"kind", Text}, {"devices_per_setup", Int}, {"setups", Int}}}},
      {"ket-frequency", {{{"set", Text}, {"ket", Text}, {"fraction", Real}}}},
      {"bo",
       {{{"rank", Int}, {"iteration", Int}, {"y", Real}, {"metric", Real}, {"fidelity", Real}, {"S", Real},
         {"length", Int}, {"tokens", Text}, {"z", Text}}}},
  };
  return schemas;
}

bool parses_as(const std::string& s, Col c) {
  if (c == Col::Text) return true;
  std::istringstream in(s);
  if (c == Col::Int) {
    long long v;
    in >> v;
  } else {
    double v;
    in >> v;
  }
  return !in.fail() && in.eof();
}

std::vector<std::string> check_csv(const CsvSchema& schema, const std::filesystem::path& path) {
  std::vector<std::string> problems;
  std::ifstream in(path);
  if (!in) return {"cannot open " + path.string()};
  std::string line;
  if (!std::getline(in, line)) return {"empty file"};
  const auto header = split_csv(line);
  if (header.size() != schema.columns.size()) problems.push_back("header has " + std::to_string(header.size()) + " columns");
  for (std::size_t i = 0; i < std::min(header.size(), schema.columns.size()); ++i) {
    if (header[i] != schema.columns[i].first)
      problems.push_back("column " + std::to_string(i + 1) + " is '" + header[i] + "', expected '" +
                         schema.columns[i].first + "'");
  }
  std::size_t row = 1;
  while (std::getline(in, line) && problems.size() < 20) {
    ++row;
    if (!line.empty() && line.back() == '\r') problems.push_back("row " + std::to_string(row) + ": CRLF line ending");
    const auto fields = split_csv(line);
    if (fields.size() != schema.columns.size()) {
      problems.push_back("row " + std::to_string(row) + ": " + std::to_string(fields.size()) + " fields");
      continue;
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parses_as(fields[i], schema.columns[i].second))
        problems.push_back("row " + std::to_string(row) + ": '" + fields[i] + "' is not valid for " +
                           schema.columns[i].first);
    }
  }
  return problems;
}

std::vector<std::string> check_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {"cannot open " + path.string()};
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    return {std::string("invalid JSON: ") + e.what()};
  }
  std::vector<std::string> problems;
  for (const char* set : {"generated", "training"}) {
    if (!j.contains(set)) {
      problems.push_back(std::string("missing ") + set);
      continue;
    }
    for (const char* key : {"count", "skipped", "mode_S", "mode_count", "mean_S", "sd_S", "entangled_fraction"})
      if (!j[set].contains(key)) problems.push_back(std::string(set) + " lacks " + key);
  }
  for (const char* key : {"unique_fraction", "novel_fraction"})
    if (!j.contains(key)) problems.push_back(std::string("missing ") + key);
  return problems;
}

}  // namespace

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> schema_kinds() {
  std::vector<std::string> kinds{"dataset", "report-summary"};
  for (const auto& [k, s] : csv_schemas()) kinds.push_back(k);
  return kinds;
}

std::vector<std::string> validate_file(const std::string& kind, const std::filesystem::path& path,
                                       const repr::Vocabulary& vocab) {
  if (kind == "dataset") {
    try {
      (void)repr::read_dataset(path, vocab);
    } catch (const std::exception& e) {
      return {e.what()};
    }
    return {};
  }
  if (kind == "report-summary") return check_summary(path);
  auto it = csv_schemas().find(kind);
  if (it == csv_schemas().end()) throw std::invalid_argument("unknown schema kind: " + kind);
  return check_csv(it->second, path);
}

}  // namespace qovae::tool
