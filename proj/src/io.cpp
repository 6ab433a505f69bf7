#include "farsa/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

namespace farsa {

namespace {

std::string read_plain_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string read_gzip_file(const std::string& path) {
  gzFile gz = gzopen(path.c_str(), "rb");
  if (gz == nullptr) throw ParseError(path + ": cannot open file");
  std::string out;
  char chunk[1 << 16];
  int got;
  while ((got = gzread(gz, chunk, sizeof(chunk))) > 0) {
    out.append(chunk, static_cast<std::size_t>(got));
  }
  if (got < 0) {
    int errnum = 0;
    std::string msg = gzerror(gz, &errnum);
    gzclose(gz);
    throw ParseError(path + ": gzip read failed: " + msg);
  }
  gzclose(gz);
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const char* begin, const char* end, const std::string& name,
                    std::size_t line, const char* what) {
  std::string token(begin, end);
  errno = 0;
  char* parsed_end = nullptr;
  double v = std::strtod(token.c_str(), &parsed_end);
  if (parsed_end != token.c_str() + token.size() || token.empty() || errno == ERANGE ||
      !std::isfinite(v)) {
    fail(name, line, std::string("invalid ") + what + " '" + token + "'");
  }
  return v;
}

}  // namespace

Dataset parse_libsvm_buffer(const std::string& buffer, const std::string& name) {
  Dataset data;
  CsrMatrix& m = data.features;
  m.row_ptr.push_back(0);
  int max_col = -1;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<char> seen;  // duplicate-index scratch, grown on demand

  while (pos < buffer.size()) {
    std::size_t eol = buffer.find('\n', pos);
    if (eol == std::string::npos) eol = buffer.size();
    ++line_no;
    std::string_view line(buffer.data() + pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t cursor = line.find_first_not_of(" \t");
    if (cursor == std::string_view::npos) continue;  // blank line

    // label token
    std::size_t label_end = line.find_first_of(" \t", cursor);
    if (label_end == std::string_view::npos) label_end = line.size();
    data.labels.push_back(parse_double(line.data() + cursor, line.data() + label_end, name,
                                       line_no, "label"));
    cursor = label_end;

    std::size_t row_start = m.col_idx.size();
    while (cursor < line.size()) {
      cursor = line.find_first_not_of(" \t", cursor);
      if (cursor == std::string_view::npos) break;
      std::size_t tok_end = line.find_first_of(" \t", cursor);
      if (tok_end == std::string_view::npos) tok_end = line.size();
      std::string_view tok = line.substr(cursor, tok_end - cursor);
      std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos) {
        fail(name, line_no, "expected index:value, got '" + std::string(tok) + "'");
      }
      long idx = 0;
      {
        std::string idx_str(tok.substr(0, colon));
        errno = 0;
        char* idx_end = nullptr;
        idx = std::strtol(idx_str.c_str(), &idx_end, 10);
        if (idx_end != idx_str.c_str() + idx_str.size() || idx_str.empty() ||
            errno == ERANGE) {
          fail(name, line_no, "invalid feature index '" + idx_str + "'");
        }
      }
      if (idx < 1) fail(name, line_no, "feature indices are 1-based, got " +
                                           std::to_string(idx));
      int col = static_cast<int>(idx - 1);
      if (col < static_cast<int>(seen.size()) && seen[col]) {
        fail(name, line_no, "duplicate feature index " + std::to_string(idx));
      }
      double val = parse_double(tok.data() + colon + 1, tok.data() + tok.size(), name,
                                line_no, "feature value");
      if (col >= static_cast<int>(seen.size())) seen.resize(col + 1, 0);
      seen[col] = 1;
      m.col_idx.push_back(col);
      m.vals.push_back(val);
      max_col = std::max(max_col, col);
      cursor = tok_end;
    }

    // sort the row by column and clear the scratch
    std::size_t row_len = m.col_idx.size() - row_start;
    std::vector<std::pair<int, double>> row(row_len);
    for (std::size_t r = 0; r < row_len; ++r) {
      row[r] = {m.col_idx[row_start + r], m.vals[row_start + r]};
      seen[m.col_idx[row_start + r]] = 0;
    }
    std::sort(row.begin(), row.end());
    for (std::size_t r = 0; r < row_len; ++r) {
      m.col_idx[row_start + r] = row[r].first;
      m.vals[row_start + r] = row[r].second;
    }
    m.row_ptr.push_back(m.col_idx.size());
  }

  m.rows = static_cast<int>(data.labels.size());
  m.cols = max_col + 1;
  if (m.rows == 0) throw ParseError(name + ": no samples found");
  return data;
}

Dataset parse_libsvm(const std::string& path) {
  std::string buffer = ends_with(path, ".gz") ? read_gzip_file(path) : read_plain_file(path);
  return parse_libsvm_buffer(buffer, path);
}

std::vector<double> scale_features(Dataset& data) {
  CsrMatrix& m = data.features;
  std::vector<double> max_abs(m.cols, 0.0);
  for (std::size_t k = 0; k < m.nnz(); ++k) {
    max_abs[m.col_idx[k]] = std::max(max_abs[m.col_idx[k]], std::fabs(m.vals[k]));
  }
  std::vector<double> factors(m.cols, 1.0);
  for (int j = 0; j < m.cols; ++j) {
    if (max_abs[j] > 0.0) factors[j] = 1.0 / max_abs[j];
  }
  for (std::size_t k = 0; k < m.nnz(); ++k) m.vals[k] *= factors[m.col_idx[k]];
  return factors;
}

std::vector<double> map_labels(const std::vector<double>& raw) {
  std::set<double> distinct(raw.begin(), raw.end());
  if (distinct.size() != 2) {
    throw ParseError("expected exactly 2 distinct labels, found " +
                     std::to_string(distinct.size()));
  }
  double low = *distinct.begin();
  std::vector<double> mapped(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) mapped[i] = raw[i] == low ? -1.0 : 1.0;
  return mapped;
}

std::vector<std::vector<int>> assign_groups(int n, int num_groups) {
  if (n < 1 || num_groups < 1 || num_groups > n) {
    throw InvalidArgument("assign_groups: need 1 <= num_groups <= n");
  }
  int base = n / num_groups;
  int remainder = n % num_groups;
  std::vector<std::vector<int>> groups(num_groups);
  int next = 0;
  for (int g = 0; g < num_groups; ++g) {
    // the last `remainder` groups take one extra coordinate
    int size = base + (g >= num_groups - remainder ? 1 : 0);
    groups[g].resize(size);
    for (int r = 0; r < size; ++r) groups[g][r] = next++;
  }
  return groups;
}

double lambda_min(const SmoothLoss& loss, const std::vector<std::vector<int>>& groups) {
  DenseVector zero(loss.dim(), 0.0);
  DenseVector g0 = loss.gradient(zero);
  double best = 0.0;
  for (const std::vector<int>& coords : groups) {
    double block_sq = 0.0;
    for (int j : coords) block_sq += g0[j] * g0[j];
    best = std::max(best, std::sqrt(block_sq / static_cast<double>(coords.size())));
  }
  return best;
}

ProblemInstance build_instance(const Dataset& data, double group_fraction,
                               double lambda_scale, bool parallel) {
  if (!(group_fraction > 0.0 && group_fraction <= 1.0)) {
    throw InvalidArgument("build_instance: group fraction must lie in (0, 1]");
  }
  if (!(lambda_scale > 0.0)) {
    throw InvalidArgument("build_instance: lambda scale must be positive");
  }
  ProblemInstance inst;
  inst.group_fraction = group_fraction;
  inst.lambda_scale = lambda_scale;
  inst.loss = std::make_shared<LogisticLoss>(data.features, map_labels(data.labels), 1e-8,
                                             parallel);
  int n = data.features.cols;
  int num_groups = std::max(1, static_cast<int>(std::lround(group_fraction * n)));
  GroupPartition part;
  part.n = n;
  part.groups = assign_groups(n, num_groups);
  inst.lambda_min_value = lambda_min(*inst.loss, part.groups);
  part.weights.reserve(part.groups.size());
  for (const std::vector<int>& g : part.groups) {
    part.weights.push_back(lambda_scale * inst.lambda_min_value *
                           std::sqrt(static_cast<double>(g.size())));
  }
  inst.objective.loss = inst.loss.get();
  inst.objective.partition = std::move(part);
  return inst;
}

}  // namespace farsa
