#include "fiqa/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <unordered_map>

#include "fiqa/errors.hpp"

namespace fiqa::io {

// Snapshot files are little-endian on disk; raw value I/O relies on that
// being the native order.
static_assert(std::endian::native == std::endian::little);

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  return in;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_real(const std::string& text, const std::string& path,
                  std::size_t line_no) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(path + ":" + std::to_string(line_no) +
                     ": cannot parse \"" + text + "\" as a real");
  }
  return value;
}

void require_header(std::ifstream& in, const std::string& path,
                    const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path + ": empty file, expected header \"" + expected +
                     "\"");
  }
  if (strip_cr(line) != expected) {
    throw ParseError(path + ": expected header \"" + expected + "\", got \"" +
                     strip_cr(line) + "\"");
  }
}

}  // namespace

std::vector<sampling::ScoredItem> read_score_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  require_header(in, path, "item_id,score");

  std::vector<sampling::ScoredItem> items;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected \"item_id,score\"");
    }
    items.push_back(
        sampling::ScoredItem{fields[0], parse_real(fields[1], path, line_no)});
  }
  return items;
}

ScoreSeries join_scores(const std::vector<sampling::ScoredItem>& preds,
                        const std::vector<sampling::ScoredItem>& gts) {
  std::unordered_map<std::string, double> gt_by_id;
  gt_by_id.reserve(gts.size());
  for (const sampling::ScoredItem& g : gts) {
    if (!gt_by_id.emplace(g.id, g.score).second) {
      throw InputError("duplicate item_id \"" + g.id +
                       "\" in ground-truth records");
    }
  }

  ScoreSeries series;
  for (const sampling::ScoredItem& p : preds) {
    const auto it = gt_by_id.find(p.id);
    if (it == gt_by_id.end()) {
      throw LengthMismatch("item_id \"" + p.id +
                           "\" has a prediction but no ground truth");
    }
    series.add(p.id, p.score, it->second);
  }
  if (preds.size() != gts.size()) {
    // Every prediction matched, so some gt id has no prediction. Name one.
    std::unordered_map<std::string, bool> seen;
    for (const sampling::ScoredItem& p : preds) seen.emplace(p.id, true);
    for (const sampling::ScoredItem& g : gts) {
      if (!seen.count(g.id)) {
        throw LengthMismatch("item_id \"" + g.id +
                             "\" has ground truth but no prediction");
      }
    }
    throw LengthMismatch("prediction and ground-truth files differ in size");
  }
  validate(series);
  return series;
}

std::vector<metrics::LeaderboardRow> read_results_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  require_header(in, path, "team,srocc,plcc,gflops,params_m");

  std::vector<metrics::LeaderboardRow> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 5 || fields[0].empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected \"team,srocc,plcc,gflops,params_m\"");
    }
    metrics::LeaderboardRow row;
    row.team = fields[0];
    row.srocc = parse_real(fields[1], path, line_no);
    row.plcc = parse_real(fields[2], path, line_no);
    row.gflops = parse_real(fields[3], path, line_no);
    row.params_millions = parse_real(fields[4], path, line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_leaderboard_csv(std::ostream& out,
                           const std::vector<metrics::LeaderboardEntry>& entries,
                           bool with_budget_flags,
                           budget::BudgetLimits limits) {
  out << "rank,team,score,srocc,plcc,gflops,params_m";
  if (with_budget_flags) out << ",flops_ok,params_ok";
  out << "\n";
  for (const metrics::LeaderboardEntry& e : entries) {
    out << e.rank << ',' << e.team << ',' << std::fixed
        << std::setprecision(4) << e.score << ',' << e.srocc << ',' << e.plcc
        << ',' << e.gflops << ',' << e.params_millions;
    if (with_budget_flags) {
      out << ',' << (limits.flops_ok(e.gflops) ? "yes" : "no") << ','
          << (limits.params_ok(e.params_millions) ? "yes" : "no");
    }
    out << "\n";
  }
  out.unsetf(std::ios_base::floatfield);
}

img::ImagePlane read_pgm(const std::string& path) {
  std::ifstream in = open_input(path);

  // Header tokens (magic, width, height, maxval) separated by whitespace,
  // with '#' comment lines allowed between them.
  const auto next_token = [&]() -> std::string {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string comment;
        std::getline(in, comment);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(c);
    }
    if (tok.empty()) throw ParseError(path + ": truncated PGM header");
    return tok;
  };

  if (next_token() != "P5") {
    throw ParseError(path + ": not a binary PGM (P5) file");
  }
  const auto parse_dim = [&](const std::string& tok) -> std::size_t {
    std::size_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 1) {
      throw ParseError(path + ": bad PGM dimension \"" + tok + "\"");
    }
    return value;
  };
  const std::size_t width = parse_dim(next_token());
  const std::size_t height = parse_dim(next_token());
  const std::string maxval = next_token();
  if (maxval != "255") {
    throw ParseError(path + ": only maxval 255 is supported, got " + maxval);
  }

  img::ImagePlane plane(height, width);
  std::vector<unsigned char> bytes(height * width);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw ParseError(path + ": truncated PGM pixel data");
  }
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    plane.data[i] = static_cast<double>(bytes[i]) / 255.0;
  }
  return plane;
}

void write_pgm(const std::string& path, const img::ImagePlane& plane) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write \"" + path + "\"");
  out << "P5\n" << plane.width << " " << plane.height << "\n255\n";
  std::vector<unsigned char> bytes(plane.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const double v = std::clamp(plane.data[i], 0.0, 1.0);
    bytes[i] = static_cast<unsigned char>(v * 255.0 + 0.5);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError("short write to \"" + path + "\"");
}

std::vector<double> read_snapshot(const std::string& path) {
  std::ifstream in = open_input(path);
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (static_cast<std::size_t>(in.gcount()) != sizeof(count)) {
    throw ParseError(path + ": truncated snapshot header");
  }
  std::vector<double> weights(count);
  const std::streamsize want =
      static_cast<std::streamsize>(count * sizeof(double));
  in.read(reinterpret_cast<char*>(weights.data()), want);
  if (in.gcount() != want) {
    throw ParseError(path + ": truncated snapshot payload");
  }
  return weights;
}

void write_snapshot(const std::string& path,
                    const std::vector<double>& weights) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write \"" + path + "\"");
  const std::uint64_t count = weights.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(weights.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) throw ParseError("short write to \"" + path + "\"");
}

}  // namespace fiqa::io
