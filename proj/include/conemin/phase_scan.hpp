#ifndef CONEMIN_PHASE_SCAN_HPP
#define CONEMIN_PHASE_SCAN_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "conemin/competitors.hpp"
#include "conemin/cone_geometry.hpp"
#include "conemin/errors.hpp"
#include "conemin/shooting.hpp"

namespace conemin {

enum class Verdict { minimizing, not_minimizing, undetermined };
enum class Certificate { barrier_line, competitor_found, threshold_formula, none };
enum class DecideMode { certified, formula_only };
enum class OutputFormat { csv, json, svg };

inline const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::minimizing:
    return "Minimizing";
  case Verdict::not_minimizing:
    return "NotMinimizing";
  case Verdict::undetermined:
    return "Undetermined";
  }
  return "?";
}

inline const char* to_string(Certificate c) {
  switch (c) {
  case Certificate::barrier_line:
    return "BarrierLine";
  case Certificate::competitor_found:
    return "CompetitorFound";
  case Certificate::threshold_formula:
    return "ThresholdFormula";
  case Certificate::none:
    return "None";
  }
  return "?";
}

inline Verdict parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::minimizing, Verdict::not_minimizing, Verdict::undetermined}) {
    if (s == to_string(v)) {
      return v;
    }
  }
  throw io_error("unknown verdict '" + s + "'");
}

inline Certificate parse_certificate(const std::string& s) {
  for (Certificate c : {Certificate::barrier_line, Certificate::competitor_found,
                        Certificate::threshold_formula, Certificate::none}) {
    if (s == to_string(c)) {
      return c;
    }
  }
  throw io_error("unknown certificate '" + s + "'");
}

struct Decision {
  Verdict verdict = Verdict::undetermined;
  Certificate certificate = Certificate::none;
  // Barrier margin, 1/n - S of the best competitor, or lambda - lambda*.
  long double margin = 0.0L;
  std::string diagnostics;
};

struct ScanRecord {
  int n = 0;
  double lambda = 0.0;
  Decision decision;
  double lambda_star = 0.0;
  std::int64_t wall_time_ms = 0;
};

inline bool operator==(const ScanRecord& a, const ScanRecord& b) {
  return a.n == b.n && a.lambda == b.lambda && a.decision.verdict == b.decision.verdict &&
         a.decision.certificate == b.decision.certificate &&
         a.decision.margin == b.decision.margin && a.lambda_star == b.lambda_star &&
         a.wall_time_ms == b.wall_time_ms;
}

/// lambda*(n) = 2 sqrt(n-1) / n.
inline double threshold(int n) {
  if (n < 2) {
    throw std::domain_error("threshold: n must be >= 2");
  }
  return 2.0 * std::sqrt(n - 1.0) / n;
}

struct DecideConfig {
  int barrier_samples = 1000;
  CompetitorSearchConfig search;
};

/// Certified mode runs both certificates; formula-only compares lambda with
/// lambda*(n). Numerical failures become Undetermined.
inline Decision decide(const ConeSpace& space, DecideMode mode, const DecideConfig& cfg = {}) {
  Decision d;
  if (mode == DecideMode::formula_only) {
    const double star = threshold(space.n());
    d.certificate = Certificate::threshold_formula;
    d.margin = static_cast<long double>(space.lambda()) - star;
    d.verdict = space.lambda() >= star ? Verdict::minimizing : Verdict::not_minimizing;
    return d;
  }
  try {
    std::optional<BarrierCertificate> barrier;
    if (barrier_slope(space)) {
      barrier = barrier_certificate(space, cfg.barrier_samples);
    }
    const bool barrier_ok = barrier && barrier->valid();
    const auto search = competitor_search(space, cfg.search);
    if (barrier_ok && search.found) {
      d.diagnostics = "barrier and competitor certificates conflict";
      d.margin = 0.0L;
    } else if (barrier_ok) {
      d.verdict = Verdict::minimizing;
      d.certificate = Certificate::barrier_line;
      d.margin = barrier->margin;
    } else if (search.found) {
      d.verdict = Verdict::not_minimizing;
      d.certificate = Certificate::competitor_found;
      d.margin = search.margin;
    } else {
      d.diagnostics = "no barrier slope and no competitor below 1/n";
      d.margin = search.margin;
    }
  } catch (const std::exception& e) {
    d = Decision{};
    d.diagnostics = e.what();
  }
  return d;
}

struct ScanConfig {
  DecideMode mode = DecideMode::certified;
  DecideConfig decide;
  unsigned jobs = 0; // 0: hardware concurrency
  // Per-point wall time; off by default so repeated scans are byte-identical.
  bool record_timing = false;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = count == 1 ? lo
                      : (i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  }
  return v;
}

/// Evaluates decide on every (n, lambda) pair with a bounded worker pool.
/// Output is sorted by (n, lambda) independent of scheduling.
inline std::vector<ScanRecord> scan(const std::vector<int>& ns, const std::vector<double>& lambdas,
                                    const ScanConfig& cfg = {}) {
  std::vector<ScanRecord> records;
  records.reserve(ns.size() * lambdas.size());
  for (int n : ns) {
    const double star = threshold(n);
    for (double l : lambdas) {
      ConeSpace check(n, l); // validates the grid point
      (void)check;
      ScanRecord r;
      r.n = n;
      r.lambda = l;
      r.lambda_star = star;
      records.push_back(r);
    }
  }
  if (records.empty()) {
    return records;
  }
  unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, records.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      ScanRecord& r = records[i];
      const auto t0 = std::chrono::steady_clock::now();
      r.decision = decide(ConeSpace(r.n, r.lambda), cfg.mode, cfg.decide);
      if (cfg.record_timing) {
        r.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
    worker();
  }
  std::stable_sort(records.begin(), records.end(), [](const ScanRecord& a, const ScanRecord& b) {
    return a.n != b.n ? a.n < b.n : a.lambda < b.lambda;
  });
  return records;
}

/// Midpoint between the last NotMinimizing lambda and the first Minimizing
/// lambda above it, for one n.
inline std::optional<double> empirical_threshold(const std::vector<ScanRecord>& records, int n) {
  std::optional<double> last_not;
  std::optional<double> first_min;
  for (const auto& r : records) {
    if (r.n != n) {
      continue;
    }
    if (r.decision.verdict == Verdict::not_minimizing) {
      last_not = std::max(last_not.value_or(r.lambda), r.lambda);
    }
  }
  if (!last_not) {
    return std::nullopt;
  }
  for (const auto& r : records) {
    if (r.n == n && r.decision.verdict == Verdict::minimizing && r.lambda > *last_not) {
      first_min = std::min(first_min.value_or(r.lambda), r.lambda);
    }
  }
  if (!first_min) {
    return std::nullopt;
  }
  return 0.5 * (*last_not + *first_min);
}

/// True when, for this n, no NotMinimizing verdict sits above a Minimizing one.
inline bool verdicts_monotone(const std::vector<ScanRecord>& records, int n) {
  std::optional<double> lowest_min;
  for (const auto& r : records) {
    if (r.n == n && r.decision.verdict == Verdict::minimizing) {
      lowest_min = std::min(lowest_min.value_or(r.lambda), r.lambda);
    }
  }
  if (!lowest_min) {
    return true;
  }
  return std::none_of(records.begin(), records.end(), [&](const ScanRecord& r) {
    return r.n == n && r.decision.verdict == Verdict::not_minimizing && r.lambda > *lowest_min;
  });
}

// ---------------------------------------------------------------------------
// Emitters.

namespace detail {

inline std::string fmt_ld(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", x);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '"':
      out += "\\\"";
      break;
    case '\\':
      out += "\\\\";
      break;
    case '\n':
      out += "\\n";
      break;
    default:
      if (static_cast<unsigned char>(c) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out += buf;
      } else {
        out += c;
      }
    }
  }
  return out;
}

} // namespace detail

inline constexpr const char* csv_version_line = "# cone-min-lab v1";
inline constexpr const char* csv_header = "n,lambda,verdict,certificate,margin,lambda_star,wall_time_ms";

inline void emit_csv(std::ostream& out, const std::vector<ScanRecord>& records) {
  out << csv_version_line << '\n' << csv_header << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << detail::fmt_ld(r.lambda) << ',' << to_string(r.decision.verdict) << ','
        << to_string(r.decision.certificate) << ',' << detail::fmt_ld(r.decision.margin) << ','
        << detail::fmt_ld(r.lambda_star) << ',' << r.wall_time_ms << '\n';
  }
}

/// Written by hand: all reals are printed with enough digits to restore the
/// exact binary value, margins in extended precision.
inline void emit_json(std::ostream& out, const std::vector<ScanRecord>& records) {
  out << "[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << (i ? ",\n  " : "\n  ") << "{\"n\": " << r.n << ", \"lambda\": " << detail::fmt_ld(r.lambda)
        << ", \"verdict\": \"" << to_string(r.decision.verdict) << "\", \"certificate\": \""
        << to_string(r.decision.certificate) << "\", \"margin\": "
        << detail::fmt_ld(r.decision.margin) << ", \"lambda_star\": "
        << detail::fmt_ld(r.lambda_star) << ", \"wall_time_ms\": " << r.wall_time_ms;
    if (!r.decision.diagnostics.empty()) {
      out << ", \"diagnostics\": \"" << detail::json_escape(r.decision.diagnostics) << "\"";
    }
    out << "}";
  }
  out << (records.empty() ? "]\n" : "\n]\n");
}

using ld_json = nlohmann::basic_json<std::map, std::vector, std::string, bool, std::int64_t,
                                     std::uint64_t, long double>;

inline std::vector<ScanRecord> parse_json(std::istream& in) {
  ld_json doc;
  try {
    doc = ld_json::parse(in);
  } catch (const std::exception& e) {
    throw io_error(std::string("scan JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw io_error("scan JSON: top level must be an array");
  }
  std::vector<ScanRecord> out;
  for (const auto& item : doc) {
    try {
      ScanRecord r;
      r.n = item.at("n").get<int>();
      r.lambda = static_cast<double>(item.at("lambda").get<long double>());
      r.decision.verdict = parse_verdict(item.at("verdict").get<std::string>());
      r.decision.certificate = parse_certificate(item.at("certificate").get<std::string>());
      r.decision.margin = item.at("margin").get<long double>();
      r.lambda_star = static_cast<double>(item.at("lambda_star").get<long double>());
      r.wall_time_ms = item.at("wall_time_ms").get<std::int64_t>();
      if (item.contains("diagnostics")) {
        r.decision.diagnostics = item.at("diagnostics").get<std::string>();
      }
      out.push_back(std::move(r));
    } catch (const io_error&) {
      throw;
    } catch (const std::exception& e) {
      throw io_error(std::string("scan JSON record: ") + e.what());
    }
  }
  return out;
}

/// Standalone SVG of the (n, lambda) plane: records as dots coloured by
/// verdict, and the curve lambda*(n) = 2 sqrt(n-1)/n.
inline void emit_svg(std::ostream& out, const std::vector<ScanRecord>& records) {
  constexpr double W = 720.0;
  constexpr double H = 480.0;
  constexpr double left = 70.0;
  constexpr double right = 30.0;
  constexpr double top = 40.0;
  constexpr double bottom = 60.0;
  int n_lo = 2;
  int n_hi = 6;
  double l_lo = 0.5;
  if (!records.empty()) {
    n_lo = records.front().n;
    n_hi = records.front().n;
    l_lo = 1.0;
    for (const auto& r : records) {
      n_lo = std::min(n_lo, r.n);
      n_hi = std::max(n_hi, r.n);
      l_lo = std::min(l_lo, r.lambda);
    }
    l_lo = std::max(0.0, std::min(l_lo, threshold(n_hi)) - 0.02);
  }
  const double x0 = n_lo - 0.5;
  const double x1 = n_hi + 0.5;
  const double y0 = l_lo;
  const double y1 = 1.02;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };
  char buf[256];

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\" font-size=\"12\">\n",
                W, H, W, H);
  out << buf;
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", px(x0),
                py(y0), px(x1), py(y0));
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", px(x0),
                py(y0), px(x0), py(y1));
  out << buf;
  for (int n = n_lo; n <= n_hi; ++n) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%d</text>\n", px(n),
                  py(y0) + 18.0, n);
    out << buf;
  }
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double y = y0 + (1.0 - y0) * i / ticks;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.3f</text>\n", px(x0) - 6.0,
                  py(y) + 4.0, y);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">n</text>\n",
                0.5 * (px(x0) + px(x1)), H - 15.0);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"18\" y=\"%.2f\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 18 %.2f)\">lambda</text>\n",
                0.5 * (py(y0) + py(y1)), 0.5 * (py(y0) + py(y1)));
  out << buf;

  for (const auto& r : records) {
    const char* colour = r.decision.verdict == Verdict::minimizing       ? "#2166ac"
                         : r.decision.verdict == Verdict::not_minimizing ? "#b2182b"
                                                                         : "#777777";
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\" fill-opacity=\"0.6\"/>\n",
                  px(r.n), py(r.lambda), colour);
    out << buf;
  }

  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  const int samples = 200;
  for (int i = 0; i <= samples; ++i) {
    const double x = std::max(x0, 1.5) + (x1 - std::max(x0, 1.5)) * i / samples;
    const double y = 2.0 * std::sqrt(x - 1.0) / x;
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(x), py(std::max(y, y0)));
    out << buf;
  }
  out << "\"/>\n";

  const char* labels[] = {"Minimizing", "NotMinimizing", "Undetermined"};
  const char* colours[] = {"#2166ac", "#b2182b", "#777777"};
  for (int i = 0; i < 3; ++i) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"/><text x=\"%.2f\" "
                  "y=\"%.2f\">%s</text>\n",
                  left + 10.0 + 130.0 * i, 20.0, colours[i], left + 18.0 + 130.0 * i, 24.0,
                  labels[i]);
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"24\">curve: 2 sqrt(n-1)/n</text>\n", left + 400.0);
  out << buf;
  out << "</svg>\n";
}

inline void emit(const std::vector<ScanRecord>& records, OutputFormat format, std::ostream& out) {
  switch (format) {
  case OutputFormat::csv:
    emit_csv(out, records);
    break;
  case OutputFormat::json:
    emit_json(out, records);
    break;
  case OutputFormat::svg:
    emit_svg(out, records);
    break;
  }
  if (!out) {
    throw io_error("emit: stream write failed");
  }
}

inline void emit(const std::vector<ScanRecord>& records, OutputFormat format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw io_error("cannot open " + path + " for writing");
  }
  emit(records, format, out);
  out.flush();
  if (!out) {
    throw io_error("write to " + path + " failed");
  }
}

} // namespace conemin

#endif // CONEMIN_PHASE_SCAN_HPP
