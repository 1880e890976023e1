#include "wdsmc/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "wdsmc/errors.hpp"

namespace wdsmc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string meta_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() >= suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".meta.json";
  return csv_path + ".meta.json";
}

bool file_exists(const std::string& path) {
  std::ifstream in(path);
  return in.good();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& text, const std::string& path) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw ParseError(path + ": not a number: '" + text + "'");
  return v;
}

long parse_long(const std::string& text, const std::string& path) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin) throw ParseError(path + ": not an integer: '" + text + "'");
  return v;
}

// Non-empty lines of a CSV file, with a required first header line.
std::vector<std::string> read_csv_lines(const std::string& path, std::string* header) {
  std::istringstream stream(read_text_file(path));
  std::vector<std::string> lines;
  std::string line;
  bool first = true;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      *header = line;
      first = false;
      continue;
    }
    lines.push_back(line);
  }
  if (first) throw ParseError(path + ": empty file");
  return lines;
}

// Series CSV shared by observations and trajectories: rows (t, x...),
// grouped by ascending t starting at 1.
struct SeriesTable {
  std::vector<Eigen::MatrixXd> frames;
  int dimension = 0;
};

void write_series(std::ofstream& out, const std::vector<Eigen::MatrixXd>& frames,
                  int dimension) {
  out << "t";
  for (int k = 1; k <= dimension; ++k) out << ",x" << k;
  out << "\n";
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Eigen::MatrixXd& frame = frames[t];
    for (Eigen::Index i = 0; i < frame.rows(); ++i) {
      out << (t + 1);
      for (Eigen::Index k = 0; k < frame.cols(); ++k)
        out << ',' << format_double(frame(i, k));
      out << "\n";
    }
  }
}

SeriesTable read_series(const std::string& path) {
  std::string header;
  const std::vector<std::string> lines = read_csv_lines(path, &header);
  const std::vector<std::string> cols = split(header, ',');
  if (cols.size() < 2 || cols[0] != "t")
    throw ParseError(path + ": expected header t,x1,...");
  SeriesTable table;
  table.dimension = static_cast<int>(cols.size()) - 1;
  std::vector<std::vector<double>> rows;  // flat coords of the current step
  long current = 0;
  auto flush = [&]() {
    if (current == 0) return;
    Eigen::MatrixXd frame(static_cast<Eigen::Index>(rows.size()), table.dimension);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int k = 0; k < table.dimension; ++k) frame(i, k) = rows[i][k];
    table.frames.push_back(std::move(frame));
    rows.clear();
  };
  for (const std::string& line : lines) {
    const std::vector<std::string> fields = split(line, ',');
    if (static_cast<int>(fields.size()) != table.dimension + 1)
      throw ParseError(path + ": wrong field count in '" + line + "'");
    const long t = parse_long(fields[0], path);
    if (t < 1) throw ParseError(path + ": step indices start at 1");
    if (t != current) {
      if (t != current + 1) throw ParseError(path + ": steps must be contiguous");
      flush();
      current = t;
    }
    std::vector<double> coords(table.dimension);
    for (int k = 0; k < table.dimension; ++k) coords[k] = parse_double(fields[k + 1], path);
    rows.push_back(std::move(coords));
  }
  flush();
  if (table.frames.empty()) throw ParseError(path + ": no data rows");
  return table;
}

std::vector<double> default_times(std::size_t n) {
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i + 1);
  return times;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream content;
  content << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path);
  return content.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

void write_observations(const std::string& csv_path, const ObservationSeries& obs) {
  if (obs.horizon() == 0) throw EmptyInputError("no observations to write");
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw IoError("cannot create " + csv_path);
  std::vector<Eigen::MatrixXd> frames;
  frames.reserve(obs.observations.size());
  for (const auto& dist : obs.observations) frames.push_back(dist.points);
  write_series(out, frames, obs.dimension());
  out.flush();
  if (!out) throw IoError("write failed for " + csv_path);

  ordered_json meta;
  meta["times"] = obs.times;
  meta["noise_sigma"] = obs.noise_sigma;
  meta["dimension"] = obs.dimension();
  write_text_file(meta_path_for(csv_path), meta.dump(2) + "\n");
}

ObservationSeries read_observations(const std::string& csv_path) {
  const SeriesTable table = read_series(csv_path);
  ObservationSeries obs;
  for (const auto& frame : table.frames) obs.observations.emplace_back(frame);
  obs.times = default_times(table.frames.size());
  const std::string meta_path = meta_path_for(csv_path);
  if (file_exists(meta_path)) {
    ordered_json meta;
    try {
      meta = ordered_json::parse(read_text_file(meta_path));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(meta_path + ": " + e.what());
    }
    if (meta.contains("times")) {
      obs.times = meta["times"].get<std::vector<double>>();
      if (obs.times.size() != obs.observations.size())
        throw ParseError(meta_path + ": times length disagrees with the table");
    }
    if (meta.contains("noise_sigma")) obs.noise_sigma = meta["noise_sigma"].get<double>();
    if (meta.contains("dimension") &&
        meta["dimension"].get<int>() != obs.dimension())
      throw ParseError(meta_path + ": dimension disagrees with the table");
  }
  return obs;
}

void write_trajectory(const std::string& csv_path, const Trajectory& trajectory) {
  if (trajectory.horizon() == 0) throw EmptyInputError("no frames to write");
  const int dim = static_cast<int>(trajectory.frames.front().cols());
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw IoError("cannot create " + csv_path);
  write_series(out, trajectory.frames, dim);
  out.flush();
  if (!out) throw IoError("write failed for " + csv_path);

  ordered_json meta;
  meta["times"] = trajectory.frame_times;
  write_text_file(meta_path_for(csv_path), meta.dump(2) + "\n");
}

Trajectory read_trajectory(const std::string& csv_path) {
  const SeriesTable table = read_series(csv_path);
  Trajectory trajectory;
  trajectory.frames = table.frames;
  trajectory.frame_times = default_times(table.frames.size());
  const std::string meta_path = meta_path_for(csv_path);
  if (file_exists(meta_path)) {
    ordered_json meta;
    try {
      meta = ordered_json::parse(read_text_file(meta_path));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(meta_path + ": " + e.what());
    }
    if (meta.contains("times")) {
      trajectory.frame_times = meta["times"].get<std::vector<double>>();
      if (trajectory.frame_times.size() != trajectory.frames.size())
        throw ParseError(meta_path + ": times length disagrees with the table");
    }
  }
  return trajectory;
}

namespace {

std::string trace_header(const std::vector<std::string>&) {
  return "t,param,mean,std,ess,h,accept_rate,resampled\n";
}

std::string trace_rows(const StepRecord& rec, const std::vector<std::string>& names) {
  std::ostringstream out;
  for (std::size_t k = 0; k < names.size(); ++k) {
    out << rec.t << ',' << names[k] << ',' << format_double(rec.mean[k]) << ','
        << format_double(rec.std_dev[k]) << ',' << format_double(rec.ess) << ','
        << format_double(rec.bandwidth) << ',' << format_double(rec.accept_rate) << ','
        << (rec.resampled ? 1 : 0) << "\n";
  }
  return out.str();
}

void append_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

PosteriorTraceWriter::PosteriorTraceWriter(const std::string& path,
                                           std::vector<std::string> param_names)
    : path_(path), names_(std::move(param_names)) {
  if (names_.empty()) throw InvalidSpecError("no parameter names for the trace");
  write_text_file(path_, trace_header(names_));
}

void PosteriorTraceWriter::append(const StepRecord& record) {
  if (record.mean.size() != static_cast<Eigen::Index>(names_.size()))
    throw DimensionMismatchError("record dimension disagrees with the trace");
  append_text(path_, trace_rows(record, names_));
}

void write_posterior_trace(const std::string& path, const PosteriorTrace& trace,
                           const std::vector<std::string>& param_names) {
  PosteriorTraceWriter writer(path, param_names);
  for (const auto& rec : trace) writer.append(rec);
}

SnapshotWriter::SnapshotWriter(const std::string& path, std::vector<std::string> param_names)
    : path_(path), names_(std::move(param_names)) {
  if (names_.empty()) throw InvalidSpecError("no parameter names for snapshots");
  std::string header = "t,sample_index,weight";
  for (const auto& name : names_) header += "," + name;
  write_text_file(path_, header + "\n");
}

void SnapshotWriter::append(int t, const Eigen::MatrixXd& thetas,
                            const Eigen::VectorXd& weights) {
  if (thetas.cols() != static_cast<Eigen::Index>(names_.size()) ||
      thetas.rows() != weights.size())
    throw DimensionMismatchError("snapshot shapes disagree");
  std::ostringstream out;
  for (Eigen::Index i = 0; i < thetas.rows(); ++i) {
    out << t << ',' << i << ',' << format_double(weights[i]);
    for (Eigen::Index k = 0; k < thetas.cols(); ++k)
      out << ',' << format_double(thetas(i, k));
    out << "\n";
  }
  append_text(path_, out.str());
}

std::vector<SnapshotFrame> read_snapshots(const std::string& path,
                                          std::vector<std::string>* param_names) {
  std::string header;
  const std::vector<std::string> lines = read_csv_lines(path, &header);
  const std::vector<std::string> cols = split(header, ',');
  if (cols.size() < 4 || cols[0] != "t" || cols[1] != "sample_index" || cols[2] != "weight")
    throw ParseError(path + ": expected header t,sample_index,weight,...");
  const int dim = static_cast<int>(cols.size()) - 3;
  if (param_names) param_names->assign(cols.begin() + 3, cols.end());

  std::vector<SnapshotFrame> frames;
  std::vector<double> weights;
  std::vector<std::vector<double>> thetas;
  long current = 0;
  auto flush = [&]() {
    if (weights.empty()) return;
    SnapshotFrame frame;
    frame.t = static_cast<int>(current);
    frame.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), weights.size());
    frame.thetas.resize(static_cast<Eigen::Index>(thetas.size()), dim);
    for (std::size_t i = 0; i < thetas.size(); ++i)
      for (int k = 0; k < dim; ++k) frame.thetas(i, k) = thetas[i][k];
    frames.push_back(std::move(frame));
    weights.clear();
    thetas.clear();
  };
  for (const std::string& line : lines) {
    const std::vector<std::string> fields = split(line, ',');
    if (static_cast<int>(fields.size()) != dim + 3)
      throw ParseError(path + ": wrong field count in '" + line + "'");
    const long t = parse_long(fields[0], path);
    if (t != current) {
      flush();
      current = t;
    }
    weights.push_back(parse_double(fields[2], path));
    std::vector<double> row(dim);
    for (int k = 0; k < dim; ++k) row[k] = parse_double(fields[k + 3], path);
    thetas.push_back(std::move(row));
  }
  flush();
  return frames;
}

void write_density_grid(const std::string& path, const DensityGrid& grid) {
  const int dim = grid.dimension();
  if (dim < 1 || dim > 2) throw InvalidSpecError("grids are written for 1 or 2 axes");
  std::ostringstream out;
  out << "# origin=";
  for (int k = 0; k < dim; ++k) out << (k ? ";" : "") << format_double(grid.origin[k]);
  out << " cell_size=";
  for (int k = 0; k < dim; ++k) out << (k ? ";" : "") << format_double(grid.cell_size[k]);
  out << " shape=";
  for (int k = 0; k < dim; ++k) out << (k ? ";" : "") << grid.axis_counts[k];
  out << "\n";
  out << (dim == 1 ? "i,value" : "i,j,value") << "\n";
  if (dim == 1) {
    for (int i = 0; i < grid.axis_counts[0]; ++i)
      out << i << ',' << format_double(grid.values[i]) << "\n";
  } else {
    long flat = 0;
    for (int i = 0; i < grid.axis_counts[0]; ++i)
      for (int j = 0; j < grid.axis_counts[1]; ++j, ++flat)
        out << i << ',' << j << ',' << format_double(grid.values[flat]) << "\n";
  }
  write_text_file(path, out.str());
}

DensityGrid read_density_grid(const std::string& path) {
  std::istringstream stream(read_text_file(path));
  std::string comment;
  if (!std::getline(stream, comment) || comment.rfind("# origin=", 0) != 0)
    throw ParseError(path + ": missing grid metadata line");
  if (!comment.empty() && comment.back() == '\r') comment.pop_back();

  auto field_of = [&](const std::string& key) {
    const std::string token = key + "=";
    const std::size_t at = comment.find(token);
    if (at == std::string::npos) throw ParseError(path + ": metadata lacks " + key);
    const std::size_t begin = at + token.size();
    const std::size_t end = comment.find(' ', begin);
    return comment.substr(begin, end == std::string::npos ? end : end - begin);
  };

  DensityGrid grid;
  {
    const std::vector<std::string> parts = split(field_of("origin"), ';');
    grid.origin.resize(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t k = 0; k < parts.size(); ++k)
      grid.origin[k] = parse_double(parts[k], path);
  }
  {
    const std::vector<std::string> parts = split(field_of("cell_size"), ';');
    if (parts.size() != static_cast<std::size_t>(grid.origin.size()))
      throw ParseError(path + ": metadata lengths disagree");
    grid.cell_size.resize(grid.origin.size());
    for (std::size_t k = 0; k < parts.size(); ++k)
      grid.cell_size[k] = parse_double(parts[k], path);
  }
  {
    const std::vector<std::string> parts = split(field_of("shape"), ';');
    if (parts.size() != static_cast<std::size_t>(grid.origin.size()))
      throw ParseError(path + ": metadata lengths disagree");
    for (const auto& p : parts) grid.axis_counts.push_back(static_cast<int>(parse_long(p, path)));
  }

  std::string header;
  if (!std::getline(stream, header)) throw ParseError(path + ": missing column header");
  const int dim = grid.dimension();
  long cells = 1;
  for (int c : grid.axis_counts) cells *= c;
  grid.values = Eigen::VectorXd::Zero(cells);
  std::string line;
  long seen = 0;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (static_cast<int>(fields.size()) != dim + 1)
      throw ParseError(path + ": wrong field count in '" + line + "'");
    long flat = 0;
    for (int k = 0; k < dim; ++k) {
      const long idx = parse_long(fields[k], path);
      if (idx < 0 || idx >= grid.axis_counts[k]) throw ParseError(path + ": index out of grid");
      flat = flat * grid.axis_counts[k] + idx;
    }
    grid.values[flat] = parse_double(fields[dim], path);
    ++seen;
  }
  if (seen != cells) throw ParseError(path + ": expected one row per cell");
  return grid;
}

void write_wd_comparison(const std::string& path, const std::vector<WdComparisonRow>& rows) {
  std::ostringstream out;
  out << "t,wd0,wd1,wd2\n";
  for (const auto& row : rows)
    out << row.t << ',' << format_double(row.wd0) << ',' << format_double(row.wd1) << ','
        << format_double(row.wd2) << "\n";
  write_text_file(path, out.str());
}

std::vector<WdComparisonRow> read_wd_comparison(const std::string& path) {
  std::string header;
  const std::vector<std::string> lines = read_csv_lines(path, &header);
  if (header != "t,wd0,wd1,wd2") throw ParseError(path + ": expected header t,wd0,wd1,wd2");
  std::vector<WdComparisonRow> rows;
  for (const std::string& line : lines) {
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 4) throw ParseError(path + ": wrong field count in '" + line + "'");
    WdComparisonRow row;
    row.t = static_cast<int>(parse_long(fields[0], path));
    row.wd0 = parse_double(fields[1], path);
    row.wd1 = parse_double(fields[2], path);
    row.wd2 = parse_double(fields[3], path);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wdsmc
