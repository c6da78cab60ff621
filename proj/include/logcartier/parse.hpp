#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logcartier/cartier.hpp"
#include "logcartier/connection.hpp"
#include "logcartier/diffop.hpp"

namespace logcartier {

// One `key = value` line as read from a chart file.
struct FileEntry {
  std::string value;
  int line = 0;
};

struct FileSection {
  std::string kind;  // connection | higgs | splitting
  std::string name;
  int line = 0;
  std::map<std::string, FileEntry> entries;
};

struct ChartFile {
  std::string path;
  std::map<std::string, FileEntry> top;
  std::vector<FileSection> sections;
};

// Reads the line-oriented chart format; throws Error(Parse) with "path:line: ..." messages.
ChartFile read_chart_file(const std::string& path);
ChartFile parse_chart_text(const std::string& text, const std::string& path = "<input>");

ChartSpec chart_spec_from(const ChartFile& f);
// Validates the chart; errors name the offending field with its file and line.
Chart chart_from(const ChartFile& f);

const FileSection& find_section(const ChartFile& f, const std::string& kind, const std::string& name);
std::vector<std::string> section_names(const ChartFile& f, const std::string& kind);

ConnModule connection_from(const Chart& chart, const ChartFile& f, const std::string& name);
HiggsModule higgs_from(const Chart& chart, const ChartFile& f, const std::string& name);
Splitting splitting_from(const Chart& chart, const ChartFile& f, const std::string& name);

// Literals: `2*x^[1,0] - x^[0,3]`, with an optional `e[s]` factor for indexed elements.
IndexedElt parse_indexed(const Chart& chart, const std::string& text);
AlgElt parse_element(const Chart& chart, const std::string& text);
// `f_1 * dlog[1] + f_2 * dlog[2]` (1-based indices).
LogForm parse_form(const Chart& chart, const std::string& text);
// `f * D^[i,j] + ...` with the multi-index read in the given basis.
PDOp parse_operator(const Chart& chart, const std::string& text, OpBasis basis, int order_bound);

std::vector<LatticePoint> parse_points(const std::string& text, std::size_t ambient);
std::vector<std::string> split_top_level(const std::string& text, char sep);

}  // namespace logcartier
