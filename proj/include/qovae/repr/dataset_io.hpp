#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qovae/repr/setup.hpp"

namespace qovae::repr {

struct RecordLabel {
  double entanglement = 0.0;  // S, kept at 6 decimals
  std::array<int, 7> srv{1, 1, 1, 1, 1, 1, 1};
  friend bool operator==(const RecordLabel&, const RecordLabel&) = default;
};

/// One dataset line: `TOKENS[\tS\tr1,...,r7]`.
struct DatasetRecord {
  Setup setup;
  std::optional<RecordLabel> label;
  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// Rounds to the 6 decimal places used on disk.
double round_entanglement(double s);

std::string format_record(const DatasetRecord& record);
/// `line_no` is only used for error reporting.
DatasetRecord parse_record(const std::string& line, const Vocabulary& vocab, std::size_t line_no = 0);

std::vector<DatasetRecord> read_dataset(std::istream& in, const Vocabulary& vocab);
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path, const Vocabulary& vocab);

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records, const std::string& comment = {});
void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records,
                   const std::string& comment = {});

}  // namespace qovae::repr
