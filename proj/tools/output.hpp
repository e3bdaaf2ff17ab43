#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cli {

// RFC-4180 CSV: fields with commas, quotes or newlines are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& fields);
  void write(const std::filesystem::path& file) const;

 private:
  std::string text_;
  std::size_t width_;
};

std::string num(double x);

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool markers = true;
};

// Minimal line plot with axes, ticks and a legend.
void write_svg_plot(const std::filesystem::path& file, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<Series>& series);

}  // namespace cli
