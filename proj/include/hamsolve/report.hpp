#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hamsolve {

/// %.17g, so values round-trip.
std::string format_real(double v);

/// Comma-separated table with a header row. Cells are written verbatim.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `text` to `path`, creating parent directories. Throws Error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hamsolve
