#pragma once

#include <string>
#include <vector>

#include "mimosa/config.hpp"

namespace mimosa {

// One generated molecule for one input; `best` marks the highest-density
// output per input.
struct ResultRow {
  std::string input_smiles;
  std::string output_smiles;
  double similarity = 0.0;
  std::vector<double> deltas;
  double log_density = 0.0;
  bool best = false;
  bool error = false;
  std::string error_message;
};

struct MetricReport {
  struct Row {
    std::string input_smiles;
    double similarity = 0.0;
    std::vector<double> deltas;
    bool success = false;
  };
  std::vector<Row> rows;  // one per input (its best output)
  double mean_similarity = 0.0;
  double std_similarity = 0.0;
  std::vector<double> mean_delta;
  std::vector<double> std_delta;
  double success_rate = 0.0;
};

// Success = sim >= threshold and every property delta >= its threshold,
// evaluated on each input's best output; pure function of its inputs.
MetricReport compute_metrics(const std::vector<ResultRow>& results,
                             const MetricThresholds& thresholds);

void write_results_file(const std::string& path,
                        const std::vector<ResultRow>& rows,
                        const std::vector<std::string>& property_names);
std::vector<ResultRow> read_results_file(const std::string& path);

std::string format_report(const MetricReport& report,
                          const std::vector<std::string>& property_names);

}  // namespace mimosa
