#include "hrtlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <string>

#include "hrtlab/error.hpp"

namespace hrtlab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "alpha,beta,min_singular,condition_number,leakage\n";
  for (const auto& r : rows) {
    out << format_double(r.alpha) << ',' << format_double(r.beta) << ',' << format_double(r.report.minSingular)
        << ',' << format_double(r.report.conditionNumber) << ',' << format_double(r.report.leakage) << '\n';
  }
}

void write_zak_csv(std::ostream& out, const ZakImage& z) {
  out << "i,l,re,im\n";
  for (std::int64_t i = 0; i < z.q(); ++i) {
    for (std::int64_t l = 0; l < z.q(); ++l) {
      const cdouble v = z(i, l);
      out << i << ',' << l << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

void write_ledger_csv(std::ostream& out, const OrbitProductLedger& ledger) {
  out << "n,s_n,zero_hit_flag\n";
  std::size_t hit = 0;
  for (std::size_t n = 0; n < ledger.logSums.size(); ++n) {
    // Flag row n when the factor entering s_n was a zero hit.
    bool flag = false;
    if (n > 0) {
      while (hit < ledger.zeroHits.size() && ledger.zeroHits[hit] < n - 1) ++hit;
      flag = hit < ledger.zeroHits.size() && ledger.zeroHits[hit] == n - 1;
    }
    out << n << ',' << format_double(ledger.logSums[n]) << ',' << (flag ? 1 : 0) << '\n';
  }
}

void write_line_csv(std::ostream& out, const ToralLine& line) {
  out << "segment_index,t0,omega0,t1,omega1\n";
  for (std::size_t k = 0; k < line.segments.size(); ++k) {
    const auto& s = line.segments[k];
    out << k << ',' << format_double(s.t0) << ',' << format_double(s.omega0) << ',' << format_double(s.t1) << ','
        << format_double(s.omega1) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const ProductTrace& trace) {
  out << "n,s_plus,s_minus,zero_flag\n";
  for (std::size_t n = 0; n < trace.forwardLogs.size(); ++n) {
    // Row n is flagged when either factor entering s+_n or s-_n was a zero.
    bool flag = false;
    if (n > 0) {
      const auto fwd = static_cast<std::int64_t>(n - 1);
      const auto bwd = -static_cast<std::int64_t>(n);
      flag = std::find(trace.zeroHits.begin(), trace.zeroHits.end(), fwd) != trace.zeroHits.end() ||
             std::find(trace.zeroHits.begin(), trace.zeroHits.end(), bwd) != trace.zeroHits.end();
    }
    out << n << ',' << format_double(trace.forwardLogs[n]) << ',' << format_double(trace.backwardLogs[n]) << ','
        << (flag ? 1 : 0) << '\n';
  }
}

void write_pgm(std::ostream& out, std::span<const double> values, std::size_t width) {
  if (width == 0 || values.size() % width != 0) {
    throw Error(ErrorKind::InvalidArgument, "PGM data is not a whole number of rows");
  }
  const std::size_t height = values.size() / width;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out << "P2\n" << width << ' ' << height << "\n65535\n";
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double v = values[r * width + c];
      long level = 0;
      if (!std::isfinite(v)) {
        level = v > 0 ? 65535 : 0;
      } else if (hi > lo) {
        level = std::lround((v - lo) / (hi - lo) * 65535.0);
      }
      out << level << (c + 1 == width ? '\n' : ' ');
    }
  }
}

std::vector<double> parse_range(std::string_view text) {
  auto number = [&](std::string_view part) {
    std::string s(part);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad number '" + s + "' in range '" + std::string(text) + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::ParseError, "bad number '" + s + "' in range '" + std::string(text) + "'");
    }
    return v;
  };
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) return {number(text)};
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw Error(ErrorKind::ParseError, "range must be start:stop:step, got '" + std::string(text) + "'");
  }
  const double start = number(text.substr(0, c1));
  const double stop = number(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = number(text.substr(c2 + 1));
  if (!(step > 0.0)) throw Error(ErrorKind::ParseError, "range step must be positive");
  if (stop < start) throw Error(ErrorKind::ParseError, "range stop is below start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hrtlab
