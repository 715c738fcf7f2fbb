#pragma once

// DensitySpec JSON input, report serialization, and the flow CSV. Reports
// are emitted through a small streaming writer with a fixed field order and
// 17-significant-digit numbers, so identical runs produce byte-identical
// output.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lsdlab/bounds.hpp"
#include "lsdlab/common.hpp"
#include "lsdlab/density.hpp"
#include "lsdlab/functionals.hpp"
#include "lsdlab/stein.hpp"
#include "lsdlab/time_integral.hpp"
#include "lsdlab/transport.hpp"

namespace lsdlab {

// ---------------------------------------------------------------------------
// Spec hashing (FNV-1a over the raw spec bytes).

inline std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// DensitySpec parsing.

inline RelativeDensity parse_density_spec(const nlohmann::json& j) {
  try {
    const std::string family = j.value("family", "mixture");
    if (family == "mixture") {
      if (!j.contains("components") || !j["components"].is_array() ||
          j["components"].empty())
        throw spec_error("mixture spec needs a non-empty components array");
      const auto& comps = j["components"];
      const int dim = j.contains("dim")
                          ? j["dim"].get<int>()
                          : static_cast<int>(comps[0]["mean"].size());
      std::vector<MixtureComponent> cs;
      cs.reserve(comps.size());
      for (const auto& c : comps) {
        MixtureComponent mc;
        mc.weight = c.at("weight").get<double>();
        const auto mean = c.at("mean").get<std::vector<double>>();
        if (static_cast<int>(mean.size()) != dim)
          throw spec_error("component mean does not match dim");
        mc.mean = Eigen::Map<const Vec>(mean.data(), dim);
        const auto& cov = c.at("cov");
        if (!cov.is_array() || static_cast<int>(cov.size()) != dim)
          throw spec_error("component cov must be a dim x dim matrix");
        mc.cov.resize(dim, dim);
        for (int r = 0; r < dim; ++r) {
          const auto row = cov[r].get<std::vector<double>>();
          if (static_cast<int>(row.size()) != dim)
            throw spec_error("component cov must be a dim x dim matrix");
          for (int cidx = 0; cidx < dim; ++cidx) mc.cov(r, cidx) = row[cidx];
        }
        cs.push_back(std::move(mc));
      }
      return RelativeDensity(GaussianMixture(dim, std::move(cs)));
    }
    if (family == "tabulated1d") {
      return RelativeDensity(
          Tabulated1D(j.at("grid").get<std::vector<double>>(),
                      j.at("values").get<std::vector<double>>()));
    }
    throw spec_error("unknown density family: " + family);
  } catch (const spec_error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw spec_error(std::string("malformed density spec: ") + e.what());
  } catch (const error& e) {
    throw spec_error(std::string("invalid density spec: ") + e.what());
  }
}

struct LoadedSpec {
  RelativeDensity density;
  std::string hash;
};

inline LoadedSpec load_density_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw spec_error("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw spec_error(std::string("spec is not valid JSON: ") + e.what());
  }
  return {parse_density_spec(j), fnv1a64_hex(bytes)};
}

// ---------------------------------------------------------------------------
// Streaming JSON writer with a fixed field order.

class JsonWriter {
 public:
  JsonWriter& begin_object() {
    pre_value();
    os_ << '{';
    has_items_.push_back(false);
    return *this;
  }
  JsonWriter& end_object() {
    os_ << '}';
    has_items_.pop_back();
    return *this;
  }
  JsonWriter& begin_array() {
    pre_value();
    os_ << '[';
    has_items_.push_back(false);
    return *this;
  }
  JsonWriter& end_array() {
    os_ << ']';
    has_items_.pop_back();
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    if (has_items_.back()) os_ << ',';
    has_items_.back() = true;
    write_string(k);
    os_ << ':';
    after_key_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    pre_value();
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os_ << buf;
    return *this;
  }
  JsonWriter& value(long v) {
    pre_value();
    os_ << v;
    return *this;
  }
  JsonWriter& value(int v) { return value(static_cast<long>(v)); }
  JsonWriter& value(bool v) {
    pre_value();
    os_ << (v ? "true" : "false");
    return *this;
  }
  JsonWriter& value(const std::string& v) {
    pre_value();
    write_string(v);
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& null() {
    pre_value();
    os_ << "null";
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  void pre_value() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (!has_items_.empty()) {
      if (has_items_.back()) os_ << ',';
      has_items_.back() = true;
    }
  }

  void write_string(const std::string& s) {
    os_ << '"';
    for (char c : s) {
      switch (c) {
        case '"': os_ << "\\\""; break;
        case '\\': os_ << "\\\\"; break;
        case '\n': os_ << "\\n"; break;
        case '\t': os_ << "\\t"; break;
        case '\r': os_ << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            os_ << buf;
          } else {
            os_ << c;
          }
      }
    }
    os_ << '"';
  }

  std::ostringstream os_;
  std::vector<bool> has_items_;
  bool after_key_ = false;
};

namespace detail {

inline void write_config(JsonWriter& w, const CheckConfig& cfg) {
  w.key("config").begin_object();
  w.key("gh_order").value(cfg.quad.gh_order);
  w.key("gh_order_nd").value(cfg.quad.gh_order_nd);
  w.key("adaptive_tol").value(cfg.quad.adaptive_tol);
  w.key("mc_samples").value(cfg.quad.mc_samples);
  w.key("mc_seed").value(static_cast<long>(cfg.quad.mc_seed));
  w.key("threads").value(cfg.quad.threads);
  w.key("time_split").value(cfg.time.t_split);
  w.key("time_max").value(cfg.time.t_max);
  w.key("time_tol").value(cfg.time.tol);
  w.end_object();
}

inline void write_density_summary(JsonWriter& w, const RelativeDensity& d) {
  w.key("density").begin_object();
  w.key("family").value(d.is_mixture() ? "mixture" : "tabulated1d");
  w.key("dim").value(d.dim());
  w.key("barycenter").begin_array();
  for (Eigen::Index i = 0; i < d.barycenter().size(); ++i)
    w.value(d.barycenter()(i));
  w.end_array();
  w.key("second_moment").value(d.second_moment());
  w.end_object();
}

inline void write_stein_estimate(JsonWriter& w, const SteinFunctionalEstimate& e) {
  w.begin_object();
  w.key("family").value(e.family);
  w.key("best_parameters").value(e.best_parameters);
  w.key("value").value(e.value);
  w.key("admissibility_certificates").value(e.certificate);
  w.end_object();
}

inline void write_slack_report(JsonWriter& w, const SlackReport& r) {
  w.begin_object();
  w.key("check").value(r.check);
  if (r.verdict == Verdict::precondition_not_met) {
    w.key("lhs").null();
    w.key("rhs").null();
    w.key("slack").null();
    w.key("error_budget").null();
  } else {
    w.key("lhs").value(r.lhs);
    w.key("rhs").value(r.rhs);
    w.key("slack").value(r.slack);
    w.key("error_budget").value(r.error_budget);
  }
  w.key("verdict").value(to_string(r.verdict));
  w.key("note").value(r.note);
  w.end_object();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reports.

/// Full analysis report: functionals through both routes, Stein estimates,
/// W2. Quantities whose preconditions fail are reported as null with a note.
inline std::string analyze_report_json(const RelativeDensity& d,
                                       const std::string& spec_hash,
                                       const CheckConfig& cfg = {}) {
  DensityAnalysis a(d, cfg);
  JsonWriter w;
  w.begin_object();
  w.key("tool").value(std::string("lsdlab ") + kVersion);
  w.key("spec_hash").value(spec_hash);
  detail::write_config(w, cfg);
  detail::write_density_summary(w, d);

  const FunctionalReport& f = a.functionals();
  w.key("functionals").begin_object();
  w.key("entropy").value(f.entropy);
  w.key("entropy_error").value(f.entropy_error);
  w.key("fisher").value(f.fisher);
  w.key("fisher_error").value(f.fisher_error);
  w.key("deficit").value(f.deficit);
  w.key("deficit_error").value(f.deficit_error);
  try {
    const ValueWithError m = a.deficit_mmse();
    w.key("deficit_mmse").value(m.value);
    w.key("deficit_mmse_error").value(m.error);
  } catch (const family_error&) {
    w.key("deficit_mmse").null();
    w.key("deficit_mmse_error").null();
  }
  w.end_object();

  w.key("stein").begin_object();
  try {
    const double s = a.stein_s();
    w.key("discrepancy").value(s);
  } catch (const error&) {
    w.key("discrepancy").null();
  }
  w.key("d_lower_bound");
  detail::write_stein_estimate(w, a.d_est());
  w.key("dtilde_lower_bound");
  try {
    const auto& e = a.dtilde_est(1.0);
    detail::write_stein_estimate(w, e);
  } catch (const error&) {
    w.null();
  }
  w.end_object();

  w.key("transport").begin_object();
  try {
    const W2Result& r = a.w2();
    w.key("w2").value(r.value);
    w.key("method").value(r.method);
    w.key("error").value(r.error);
  } catch (const error&) {
    w.key("w2").null();
    w.key("method").null();
    w.key("error").null();
  }
  w.end_object();

  w.end_object();
  return w.str();
}

/// Machine-readable verification suite output.
inline std::string verify_report_json(const RelativeDensity& d,
                                      const std::string& spec_hash,
                                      const CheckConfig& cfg = {}) {
  const std::vector<SlackReport> reports = verify_all(d, cfg);
  JsonWriter w;
  w.begin_object();
  w.key("tool").value(std::string("lsdlab ") + kVersion);
  w.key("spec_hash").value(spec_hash);
  detail::write_config(w, cfg);
  detail::write_density_summary(w, d);
  w.key("checks").begin_array();
  int failures = 0;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::fail) ++failures;
    detail::write_slack_report(w, r);
  }
  w.end_array();
  w.key("failures").value(failures);
  w.end_object();
  return w.str();
}

// ---------------------------------------------------------------------------
// Flow CSV (RFC 4180; numbers at 12 significant digits, empty cells where a
// column's precondition fails).

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

inline std::string flow_csv(const RelativeDensity& d,
                            const std::vector<double>& ts,
                            const CheckConfig& cfg = {}) {
  if (!d.is_mixture())
    throw spec_error("flow requires a mixture-backed density");
  const bool centered = d.centered(1e-9);
  const bool flow1d = d.dim() == 1;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "t,fisher_t,scaled_fisher,rho,w2_flow,deficit_integrand\r\n";
  const int order = cfg.quad.order_for(d.dim());
  for (double t : ts) {
    const double it = evolved_fisher(d, t, cfg.quad).value;
    os << num(t) << "," << num(it) << ",";
    if (centered) os << num(std::exp(2.0 * t) * it);
    os << ",";
    if (centered && t > 0.0) os << num(rho(d, t, cfg.quad));
    os << ",";
    if (flow1d) {
      const auto w = w2_flow(d, {t}, cfg.quad);
      os << num(w.front().second.value);
    }
    os << ",";
    const double integrand = t < cfg.time.t_split
                                 ? hessian_form_integrand(d, t, order)
                                 : mmse_form_integrand(d, t, order);
    os << num(integrand) << "\r\n";
  }
  return os.str();
}

}  // namespace lsdlab
