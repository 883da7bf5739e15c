#include "mimosa/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mimosa {

MetricReport compute_metrics(const std::vector<ResultRow>& results,
                             const MetricThresholds& thresholds) {
  MetricReport rep;
  const std::size_t m = thresholds.deltas.size();
  rep.mean_delta.assign(m, 0.0);
  rep.std_delta.assign(m, 0.0);

  for (const ResultRow& r : results) {
    if (!r.best && !r.error) continue;
    MetricReport::Row row;
    row.input_smiles = r.input_smiles;
    if (r.error) {
      row.success = false;
      row.deltas.assign(m, 0.0);
      rep.rows.push_back(std::move(row));
      continue;
    }
    row.similarity = r.similarity;
    row.deltas = r.deltas;
    row.deltas.resize(m, 0.0);
    row.success = r.similarity >= thresholds.sim;
    for (std::size_t i = 0; i < m; ++i)
      if (row.deltas[i] < thresholds.deltas[i]) row.success = false;
    rep.rows.push_back(std::move(row));
  }

  if (rep.rows.empty()) return rep;

  int successes = 0;
  int scored = 0;
  for (const auto& row : rep.rows) {
    if (row.success) ++successes;
    ++scored;
    rep.mean_similarity += row.similarity;
    for (std::size_t i = 0; i < m; ++i) rep.mean_delta[i] += row.deltas[i];
  }
  rep.mean_similarity /= scored;
  for (std::size_t i = 0; i < m; ++i) rep.mean_delta[i] /= scored;
  for (const auto& row : rep.rows) {
    const double ds = row.similarity - rep.mean_similarity;
    rep.std_similarity += ds * ds;
    for (std::size_t i = 0; i < m; ++i) {
      const double dd = row.deltas[i] - rep.mean_delta[i];
      rep.std_delta[i] += dd * dd;
    }
  }
  rep.std_similarity = std::sqrt(rep.std_similarity / scored);
  for (std::size_t i = 0; i < m; ++i)
    rep.std_delta[i] = std::sqrt(rep.std_delta[i] / scored);
  rep.success_rate = static_cast<double>(successes) / scored;
  return rep;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_results_file(const std::string& path,
                        const std::vector<ResultRow>& rows,
                        const std::vector<std::string>& property_names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write results file: " + path);
  out << "#input\toutput\tsimilarity";
  for (const auto& n : property_names) out << "\tdelta_" << n;
  out << "\tlog_density\tbest\terror\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const ResultRow& r : rows) {
    out << r.input_smiles << '\t' << r.output_smiles << '\t' << num(r.similarity);
    for (std::size_t i = 0; i < property_names.size(); ++i)
      out << '\t' << num(i < r.deltas.size() ? r.deltas[i] : 0.0);
    out << '\t' << num(r.log_density) << '\t' << (r.best ? 1 : 0) << '\t'
        << (r.error ? r.error_message : "") << '\n';
  }
}

std::vector<ResultRow> read_results_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file: " + path);
  std::vector<ResultRow> rows;
  std::string line;
  int ncols = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      ncols = static_cast<int>(split_tabs(line.substr(1)).size());
      continue;
    }
    auto f = split_tabs(line);
    if (ncols < 0) ncols = static_cast<int>(f.size());
    if (static_cast<int>(f.size()) != ncols)
      throw std::runtime_error(path + ": ragged results row");
    ResultRow r;
    r.input_smiles = f[0];
    r.output_smiles = f[1];
    r.similarity = std::stod(f[2]);
    const int nprops = ncols - 6;
    for (int i = 0; i < nprops; ++i) r.deltas.push_back(std::stod(f[3 + i]));
    r.log_density = std::stod(f[3 + nprops]);
    r.best = f[4 + nprops] == "1";
    r.error = !f[5 + nprops].empty();
    r.error_message = f[5 + nprops];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_report(const MetricReport& report,
                          const std::vector<std::string>& property_names) {
  std::ostringstream out;
  out << "inputs scored: " << report.rows.size() << "\n";
  out << "similarity: " << report.mean_similarity << " +/- "
      << report.std_similarity << "\n";
  for (std::size_t i = 0; i < property_names.size(); ++i)
    out << property_names[i] << " improvement: " << report.mean_delta[i]
        << " +/- " << report.std_delta[i] << "\n";
  out << "success rate: " << report.success_rate << "\n";
  return out.str();
}

}  // namespace mimosa
