#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "rwre/errors.hpp"
#include "rwre/harness.hpp"

namespace rwre {

namespace {

constexpr const char* kRecordHeader =
    "example,n,replicate,env_seed,walk_seed,censored,total_steps,"
    "theta_mle,sigma_hat,ci_lo,ci_hi,theta_mom,clipped_mom";

constexpr const char* kSummaryHeader =
    "example,n,estimator,count,censored_frac,q1,median,q3,iqr,outliers";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Multi-valued numeric fields are joined with ';' inside one CSV cell.
std::string fmt_vec(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt_double(v[i]);
  }
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_vec(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& tok : split(s, ';')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

std::string emit_records_csv(const std::vector<ReplicateRecord>& records) {
  std::string out = kRecordHeader;
  out += '\n';
  for (const auto& r : records) {
    out += r.example;
    out += ',' + std::to_string(r.n);
    out += ',' + std::to_string(r.replicate);
    out += ',' + std::to_string(r.env_seed);
    out += ',' + std::to_string(r.walk_seed);
    out += r.censored ? ",true" : ",false";
    out += ',' + std::to_string(r.total_steps);
    out += ',' + fmt_vec(r.theta_mle);
    out += ',' + fmt_vec(r.sigma);
    out += ',' + fmt_vec(r.ci_lo);
    out += ',' + fmt_vec(r.ci_hi);
    out += ',';
    if (r.theta_mom) out += fmt_double(*r.theta_mom);
    out += ',';
    if (r.clipped_mom) out += *r.clipped_mom ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::vector<ReplicateRecord> parse_records_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kRecordHeader)
    throw ConfigError("unexpected record CSV header");
  std::vector<ReplicateRecord> records;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13)
      throw ConfigError("bad record row: expected 13 fields");
    ReplicateRecord r;
    r.example = f[0];
    r.n = std::stoll(f[1]);
    r.replicate = std::stoll(f[2]);
    r.env_seed = std::stoull(f[3]);
    r.walk_seed = std::stoull(f[4]);
    r.censored = (f[5] == "true");
    r.total_steps = std::stoull(f[6]);
    r.theta_mle = parse_vec(f[7]);
    r.sigma = parse_vec(f[8]);
    r.ci_lo = parse_vec(f[9]);
    r.ci_hi = parse_vec(f[10]);
    if (!f[11].empty()) r.theta_mom = std::stod(f[11]);
    if (!f[12].empty()) r.clipped_mom = (f[12] == "true");
    records.push_back(std::move(r));
  }
  return records;
}

std::string emit_summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.example;
    out += ',' + std::to_string(r.n);
    out += ',' + r.estimator;
    out += ',' + std::to_string(r.count);
    out += ',' + fmt_double(r.censored_frac);
    out += ',' + fmt_double(r.q1);
    out += ',' + fmt_double(r.median);
    out += ',' + fmt_double(r.q3);
    out += ',' + fmt_double(r.iqr);
    out += ',' + std::to_string(r.outliers);
    out += '\n';
  }
  return out;
}

}  // namespace rwre
