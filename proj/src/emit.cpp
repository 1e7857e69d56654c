#include "posthoc/emit.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "posthoc/config_io.hpp"
#include "posthoc/errors.hpp"
#include "posthoc/version.hpp"

namespace posthoc {

namespace {

using nlohmann::json;

// nlohmann silently prints non-finite doubles as null; make that explicit.
json num_or_null(double v) {
  if (!std::isfinite(v)) return json();
  return json(v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

json cell_to_json(const ConditionalCell& c) {
  json j;
  j["regime"] = to_string(c.regime);
  j["theory_type"] = to_string(c.theory_type);
  j["n_trials"] = c.n_trials;
  j["n_published"] = c.n_published;
  if (c.defined) {
    j["mean_mu"] = c.mean_mu;
    j["mean_mu_hat"] = c.mean_mu_hat;
    j["se_mean_mu"] = c.se_mean_mu;
  } else {
    j["mean_mu"] = json();
    j["mean_mu_hat"] = json();
    j["se_mean_mu"] = json();
    j["reason"] = "no published trials";
  }
  return j;
}

json report_to_json_obj(const DecompositionReport& r) {
  json j;
  j["schema"] = "decomposition_report/1";
  j["exact"] = false;
  json cells = json::array();
  for (const ConditionalCell& c : r.cells) cells.push_back(cell_to_json(c));
  j["cells"] = cells;
  j["n_published_O"] = r.n_published_O;
  j["n_published_D"] = r.n_published_D;
  j["p_good_given_O"] = r.p_good_given_O;
  j["p_good_given_D"] = r.p_good_given_D;
  j["mean_mu_O"] = r.mean_mu_O;
  j["mean_mu_D"] = r.mean_mu_D;
  j["darwinian_learning"] = r.darwinian_learning;
  j["statistical_learning"] = r.statistical_learning;
  j["identity_residual"] = r.identity_residual;
  if (r.improvement.defined) {
    j["improvement"] = r.improvement.ratio;
  } else {
    j["improvement"] = json();
    j["improvement_reason"] = "mean_mu_O is not positive; ratio undefined";
  }
  j["raw_difference"] = r.improvement.raw_difference;
  j["single_type"] = r.single_type;
  j["represented_type"] = r.single_type ? json(to_string(r.represented_type)) : json();
  json se;
  se["p_good_given_O"] = r.standard_errors.p_good_given_O;
  se["p_good_given_D"] = r.standard_errors.p_good_given_D;
  se["mean_mu_O"] = r.standard_errors.mean_mu_O;
  se["mean_mu_D"] = r.standard_errors.mean_mu_D;
  se["darwinian_learning"] = r.standard_errors.darwinian_learning;
  se["statistical_learning"] = r.standard_errors.statistical_learning;
  se["improvement"] = num_or_null(r.standard_errors.improvement);
  j["standard_errors"] = se;
  return j;
}

json exact_cell_to_json(const ExactCell& c) {
  json j;
  j["regime"] = to_string(c.regime);
  j["theory_type"] = to_string(c.theory_type);
  j["n_trials"] = json();
  j["n_published"] = json();
  j["prob_published"] = c.prob_published;
  if (c.defined) {
    j["mean_mu"] = c.mean_mu;
    j["mean_mu_hat"] = c.mean_mu_hat;
  } else {
    j["mean_mu"] = json();
    j["mean_mu_hat"] = json();
    j["reason"] = "no publication probability";
  }
  j["se_mean_mu"] = json();
  return j;
}

json exact_report_to_json_obj(const ExactReport& r) {
  json j;
  j["schema"] = "decomposition_report/1";
  j["exact"] = true;
  json cells = json::array();
  for (const ExactCell& c : r.cells) cells.push_back(exact_cell_to_json(c));
  j["cells"] = cells;
  j["pub_rate_O"] = r.pub_rate_O;
  j["pub_rate_D"] = r.pub_rate_D;
  j["p_good_given_O"] = r.p_good_given_O;
  j["p_good_given_D"] = r.p_good_given_D;
  j["mean_mu_O"] = r.mean_mu_O;
  j["mean_mu_D"] = r.mean_mu_D;
  j["darwinian_learning"] = r.darwinian_learning;
  j["statistical_learning"] = r.statistical_learning;
  j["identity_residual"] = r.identity_residual;
  if (r.improvement.defined) {
    j["improvement"] = r.improvement.ratio;
  } else {
    j["improvement"] = json();
    j["improvement_reason"] = "mean_mu_O is not positive; ratio undefined";
  }
  j["raw_difference"] = r.improvement.raw_difference;
  j["single_type"] = r.single_type;
  j["represented_type"] = r.single_type ? json(to_string(r.represented_type)) : json();
  j["standard_errors"] = json();
  return j;
}

json series_to_json(const HistogramSeries& s) {
  json j;
  j["label"] = s.label;
  j["lo"] = s.lo;
  j["hi"] = s.hi;
  j["n"] = s.n;
  j["mean_mu_hat"] = num_or_null(s.mean_mu_hat());
  j["good_counts"] = s.good_counts;
  j["bad_counts"] = s.bad_counts;
  return j;
}

// Shared row assembly: empty strings are genuinely empty CSV fields.
std::string csv_row(const std::string& grid_value, double sd_mu, double sd_mu_hat,
                    const DecompositionReport* report, const std::string& reason) {
  std::ostringstream row;
  row << grid_value << ',' << format_double(sd_mu) << ',' << format_double(sd_mu_hat)
      << ',';
  if (report != nullptr) {
    const DecompositionReport& r = *report;
    row << format_double(r.mean_mu_O) << ',' << format_double(r.mean_mu_D) << ','
        << format_double(r.p_good_given_O) << ',' << format_double(r.p_good_given_D)
        << ',' << format_double(r.darwinian_learning) << ','
        << format_double(r.statistical_learning) << ',';
    if (r.improvement.defined) {
      row << format_double(r.improvement.ratio) << ','
          << format_double(r.standard_errors.improvement) << ',';
    } else {
      row << ",,";
    }
    row << r.n_published_O << ',' << r.n_published_D << ',';
  } else {
    row << ",,,,,,,,,,";
  }
  row << csv_escape(reason) << '\n';
  return row.str();
}

}  // namespace

const char* const kSweepCsvHeader =
    "grid_value,sd_mu,sd_mu_hat,mean_mu_O,mean_mu_D,p_good_O,p_good_D,"
    "darwinian_learning,statistical_learning,improvement,se_improvement,"
    "n_published_O,n_published_D,reason\n";

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

std::string manifest_to_json(const RunManifest& manifest) {
  json j;
  j["schema"] = "run_manifest/1";
  j["command"] = manifest.command;
  j["config_digest"] = manifest.config_digest;
  j["master_seed"] = manifest.master_seed;
  j["engine_version"] = manifest.engine_version;
  j["outputs"] = manifest.outputs;
  j["defaults_applied"] = manifest.defaults_applied;
  j["warnings"] = manifest.warnings;
  j["timestamp"] = manifest.timestamp;
  return j.dump(2) + "\n";
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = kSweepCsvHeader;
  for (const SweepPoint& p : result.points) {
    const std::string grid =
        std::isnan(p.grid_value) ? std::string() : format_double(p.grid_value);
    if (p.ok) {
      std::string reason;
      if (!p.report.improvement.defined) {
        reason = "improvement undefined: mean_mu_O <= 0; raw difference " +
                 format_double(p.report.improvement.raw_difference);
      }
      out += csv_row(grid, p.sd_mu, p.sd_mu_hat, &p.report, reason);
    } else {
      out += csv_row(grid, p.sd_mu, p.sd_mu_hat, nullptr, p.failure_reason);
    }
  }
  return out;
}

std::string report_to_csv(const DecompositionReport& report, double sd_mu,
                          double sd_mu_hat) {
  std::string reason;
  if (!report.improvement.defined) {
    reason = "improvement undefined: mean_mu_O <= 0; raw difference " +
             format_double(report.improvement.raw_difference);
  }
  return std::string(kSweepCsvHeader) + csv_row("", sd_mu, sd_mu_hat, &report, reason);
}

std::string failed_report_to_csv(const std::string& reason, double sd_mu,
                                 double sd_mu_hat) {
  return std::string(kSweepCsvHeader) + csv_row("", sd_mu, sd_mu_hat, nullptr, reason);
}

std::string sweep_to_json(const SweepResult& result, std::optional<double> crossing) {
  json j;
  j["schema"] = "sweep_result/1";
  j["engine_version"] = kEngineVersion;
  j["config"] = json::parse(serialize_config(result.config));
  j["crossing"] = crossing ? json(*crossing) : json();
  json points = json::array();
  for (const SweepPoint& p : result.points) {
    json pj;
    pj["grid_value"] = num_or_null(p.grid_value);
    pj["sd_mu"] = p.sd_mu;
    pj["sd_mu_hat"] = p.sd_mu_hat;
    pj["ok"] = p.ok;
    if (p.ok) {
      pj["report"] = report_to_json_obj(p.report);
    } else {
      pj["reason"] = p.failure_reason;
    }
    points.push_back(pj);
  }
  j["points"] = points;
  return j.dump(2) + "\n";
}

std::string report_to_json(const DecompositionReport& report) {
  return report_to_json_obj(report).dump(2) + "\n";
}

std::string exact_report_to_json(const ExactReport& report) {
  return exact_report_to_json_obj(report).dump(2) + "\n";
}

std::string scatter_to_csv(const ScatterData& data) {
  std::string out = "trial,regime,mu_hat,mu,published\n";
  for (std::size_t i = 0; i < data.marks.size(); ++i) {
    const ScatterMark& m = data.marks[i];
    out += std::to_string(i / 2) + ',' + to_string(m.regime) + ',' +
           format_double(m.mu_hat) + ',' + format_double(m.mu) + ',' +
           (m.published ? "true" : "false") + '\n';
  }
  return out;
}

std::string scatter_to_json(const ScatterData& data) {
  json j;
  j["schema"] = "scatter/1";
  j["engine_version"] = kEngineVersion;
  j["hurdle"] = std::isinf(data.hurdle)
                    ? json(data.hurdle > 0 ? "inf" : "-inf")
                    : json(data.hurdle);
  json marks = json::array();
  for (std::size_t i = 0; i < data.marks.size(); ++i) {
    const ScatterMark& m = data.marks[i];
    json mj;
    mj["trial"] = i / 2;
    mj["regime"] = to_string(m.regime);
    mj["mu_hat"] = m.mu_hat;
    mj["mu"] = m.mu;
    mj["published"] = m.published;
    marks.push_back(mj);
  }
  j["marks"] = marks;
  return j.dump(2) + "\n";
}

std::string histogram_to_json(const HistogramData& data) {
  json j;
  j["schema"] = "histogram/1";
  j["engine_version"] = kEngineVersion;
  j["hurdle"] = std::isinf(data.hurdle)
                    ? json(data.hurdle > 0 ? "inf" : "-inf")
                    : json(data.hurdle);
  j["series"] = json::array(
      {series_to_json(data.all_O), series_to_json(data.all_D),
       series_to_json(data.pub_O), series_to_json(data.pub_D)});
  if (data.report_ok) {
    j["report"] = report_to_json_obj(data.report);
  } else {
    j["report"] = json();
    j["report_reason"] = data.report_reason;
  }
  return j.dump(2) + "\n";
}

std::string oracle_to_json(const ExactReport& exact, const std::vector<ZScore>* zscores,
                           const DecompositionReport* mc_report) {
  json j;
  j["schema"] = "oracle_run/1";
  j["engine_version"] = kEngineVersion;
  j["exact"] = exact_report_to_json_obj(exact);
  if (zscores != nullptr) {
    j["mc_zscores"] = json::parse(zscores_to_json(*zscores));
  } else {
    j["mc_zscores"] = json();
  }
  j["mc_report"] = mc_report != nullptr ? report_to_json_obj(*mc_report) : json();
  return j.dump(2) + "\n";
}

std::string zscores_to_csv(const std::vector<ZScore>& scores) {
  std::string out = "quantity,mc,exact,se,z\n";
  for (const ZScore& s : scores) {
    out += s.quantity + ',' + format_double(s.mc) + ',' + format_double(s.exact) + ',' +
           format_double(s.se) + ',' + format_double(s.z) + '\n';
  }
  return out;
}

std::string zscores_to_json(const std::vector<ZScore>& scores) {
  json j;
  j["schema"] = "mc_vs_oracle/1";
  double max_abs = 0.0;
  json arr = json::array();
  for (const ZScore& s : scores) {
    json sj;
    sj["quantity"] = s.quantity;
    sj["mc"] = s.mc;
    sj["exact"] = s.exact;
    sj["se"] = s.se;
    sj["z"] = num_or_null(s.z);
    arr.push_back(sj);
    if (std::isfinite(s.z)) max_abs = std::max(max_abs, std::abs(s.z));
  }
  j["zscores"] = arr;
  j["max_abs_z"] = max_abs;
  return j.dump(2) + "\n";
}

}  // namespace posthoc
