#ifndef SUBLIMIT_RUNNER_SVG_HPP
#define SUBLIMIT_RUNNER_SVG_HPP

// Static line charts. Output depends only on the data, so charts are as
// reproducible as the CSVs behind them.

#include <iosfwd>
#include <string>
#include <vector>

namespace sublimit::runner {

struct Series {
  std::string name;
  std::vector<double> y;
};

void write_line_chart(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::vector<double>& x, const std::vector<Series>& series);

}  // namespace sublimit::runner

#endif  // SUBLIMIT_RUNNER_SVG_HPP
