#include "qovae/repr/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qovae::repr {

double round_entanglement(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return std::strtod(buf, nullptr);
}

std::string format_record(const DatasetRecord& record) {
  std::string out = render(record.setup);
  if (record.label) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "\t%.6f\t", record.label->entanglement);
    out += buf;
    for (std::size_t k = 0; k < record.label->srv.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(record.label->srv[k]);
    }
  }
  return out;
}

DatasetRecord parse_record(const std::string& line, const Vocabulary& vocab, std::size_t line_no) {
  DatasetRecord rec;
  const std::size_t tab = line.find('\t');
  try {
    rec.setup = parse(std::string_view(line).substr(0, tab), vocab);
  } catch (const ParseError& e) {
    throw ParseError(e.position(), e.reason(), line_no);
  }
  if (tab == std::string::npos) return rec;

  const std::size_t tab2 = line.find('\t', tab + 1);
  if (tab2 == std::string::npos) throw ParseError(tab, "metadata needs S and SRV fields", line_no);
  RecordLabel label;
  const std::string s_field = line.substr(tab + 1, tab2 - tab - 1);
  {
    const char* first = s_field.data();
    const char* last = first + s_field.size();
    auto [end, ec] = std::from_chars(first, last, label.entanglement);
    if (ec != std::errc{} || end != last || !std::isfinite(label.entanglement) || label.entanglement < 0) {
      throw ParseError(tab + 1, "malformed S value '" + s_field + "'", line_no);
    }
  }
  const std::string srv_field = line.substr(tab2 + 1);
  std::size_t start = 0;
  for (std::size_t k = 0; k < 7; ++k) {
    const std::size_t comma = srv_field.find(',', start);
    if ((k < 6) == (comma == std::string::npos)) throw ParseError(tab2 + 1, "SRV needs 7 comma-separated integers", line_no);
    const std::string part = srv_field.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    int v = 0;
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || end != part.data() + part.size() || v < 1) {
      throw ParseError(tab2 + 1 + start, "malformed SRV entry '" + part + "'", line_no);
    }
    label.srv[k] = v;
    start = comma + 1;
  }
  rec.label = label;
  return rec;
}

std::vector<DatasetRecord> read_dataset(std::istream& in, const Vocabulary& vocab) {
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) continue;
    out.push_back(parse_record(line, vocab, line_no));
  }
  return out;
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  return read_dataset(in, vocab);
}

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records, const std::string& comment) {
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string l;
    while (std::getline(lines, l)) out << "# " << l << '\n';
  }
  for (const auto& r : records) out << format_record(r) << '\n';
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records,
                   const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset " + path.string());
  write_dataset(out, records, comment);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qovae::repr
