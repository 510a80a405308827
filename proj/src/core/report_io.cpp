#include "core/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace evodich {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void JsonWriter::separator() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  separator();
  out_ += '"';
  out_ += k;
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  if (std::isfinite(v))
    out_ += format_double(v);
  else
    out_ += "null";
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(unsigned long long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separator();
  out_ += '"';
  for (char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::null() {
  separator();
  out_ += "null";
  return *this;
}

namespace {

void write_spectrum_fields(JsonWriter& w, const SpectrumReport& report) {
  w.key("eigenvalues").begin_array();
  for (const auto& ev : report.eigenvalue_list) {
    w.begin_array();
    w.value(ev.real());
    w.value(ev.imag());
    w.end_array();
  }
  w.end_array();
  w.key("unit_circle_gap").value(report.unit_circle_gap);
  w.key("axis_gap").value(report.axis_gap);
  w.key("pairing_distance").value(report.pairing_distance);
}

void write_table(JsonWriter& w, const EquivalenceTable& t) {
  w.begin_object();
  w.key("theorem").value(t.theorem);
  w.key("system").value(t.system);
  w.key("conditions").begin_array();
  for (const auto& c : t.conditions) {
    w.begin_object();
    w.key("label").value(c.label);
    w.key("verdict").value(c.holds);
    w.key("margin").value(c.margin);
    w.end_object();
  }
  w.end_array();
  w.key("diagnostics").begin_object();
  for (const auto& [k, v] : t.diagnostics) w.key(k).value(v);
  w.end_object();
  w.key("degenerate").value(t.degenerate);
  w.key("consistent").value(t.consistent);
  w.key("pass");
  if (t.pass.has_value())
    w.value(*t.pass);
  else
    w.null();
  w.end_object();
}

} // namespace

std::string spectrum_report_json(const SpectrumReport& report) {
  JsonWriter w;
  w.begin_object();
  write_spectrum_fields(w, report);
  w.end_object();
  return w.str();
}

std::string eigenvalues_csv(const SpectrumReport& report) {
  std::string out = "re,im\n";
  for (const auto& ev : report.eigenvalue_list)
    out += format_double(ev.real()) + "," + format_double(ev.imag()) + "\n";
  return out;
}

std::string projections_csv(const ProjectionFamily& family) {
  std::string out = "index,x,row,col,re,im\n";
  for (size_t j = 0; j < family.blocks.size(); ++j) {
    const Mat& p = family.blocks[j];
    for (int r = 0; r < p.rows(); ++r)
      for (int c = 0; c < p.cols(); ++c)
        out += std::to_string(j) + "," + format_double(family.grid[j]) + "," + std::to_string(r) +
               "," + std::to_string(c) + "," + format_double(p(r, c).real()) + "," +
               format_double(p(r, c).imag()) + "\n";
  }
  return out;
}

std::string operator_csv(const Mat& dense) {
  std::string out;
  char buf[96];
  for (int r = 0; r < dense.rows(); ++r) {
    for (int c = 0; c < dense.cols(); ++c) {
      Complex v = dense(r, c);
      std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", v.real(), v.imag());
      out += buf;
      out += c + 1 < dense.cols() ? "," : "";
    }
    out += "\n";
  }
  return out;
}

std::string dichotomy_report_json(const AnalyzeOutcome& outcome) {
  const DichotomyReport& rep = outcome.dichotomy;
  JsonWriter w;
  w.begin_object();
  w.key("verdict").value(to_string(rep.verdict));
  w.key("M").value(rep.m_constant);
  w.key("lambda").value(rep.lambda);
  w.key("residuals").begin_object();
  w.key("commutation").value(rep.commutation_residual);
  w.key("decay_margin").value(rep.decay_rate);
  w.key("growth_margin").value(rep.growth_rate);
  w.key("kernel_invertibility").value(rep.kernel_invertibility);
  w.key("fit").value(rep.fit_residual);
  if (outcome.projection_built) {
    w.key("idempotency").value(outcome.projections.family.idempotency_residual);
    w.key("off_block_mass").value(outcome.projections.off_block_mass);
    w.key("continuity_modulus").value(outcome.projections.family.continuity_modulus);
  }
  w.end_object();
  w.key("rank").value(rep.rank);
  w.key("provenance").value(rep.provenance);
  w.key("degenerate").value(rep.degenerate);
  if (!rep.detail.empty()) w.key("detail").value(rep.detail);
  w.key("window").value(outcome.window);
  w.key("cells").value(outcome.cells);
  w.key("periodized").value(outcome.periodized);
  if (outcome.theorem6.has_value()) {
    const Theorem6Report& t6 = *outcome.theorem6;
    w.key("projection_conditions").begin_object();
    w.key("idempotency").value(t6.idempotency);
    w.key("commutation").value(t6.commutation);
    w.key("stable_radius").value(t6.stable_radius);
    w.key("kernel_margin").value(t6.kernel_margin);
    w.key("dagger_radius").value(t6.dagger_radius);
    w.key("multiplication_leakage").value(t6.multiplication_leakage);
    w.key("kernel_dim").value(t6.kernel_dim);
    w.key("complement_dim").value(t6.complement_dim);
    w.key("holds").begin_array();
    w.value(t6.condition1);
    w.value(t6.condition2);
    w.value(t6.condition3);
    w.value(t6.condition4);
    w.end_array();
    w.end_object();
  }
  w.end_object();
  return w.str();
}

std::string tables_json(const std::vector<EquivalenceTable>& tables, const std::string& system) {
  JsonWriter w;
  w.begin_object();
  w.key("system").value(system);
  w.key("tables").begin_array();
  for (const auto& t : tables) write_table(w, t);
  w.end_array();
  bool all_consistent = true;
  for (const auto& t : tables)
    if (t.pass.has_value() && !*t.pass) all_consistent = false;
  w.key("consistent").value(all_consistent);
  w.end_object();
  return w.str();
}

std::string tables_csv(const std::vector<EquivalenceTable>& tables) {
  std::string out = "system,theorem,condition,verdict,margin\n";
  for (const auto& t : tables)
    for (const auto& c : t.conditions)
      out += t.system + "," + t.theorem + ",\"" + c.label + "\"," +
             (t.degenerate ? "degenerate" : (c.holds ? "true" : "false")) + "," +
             format_double(c.margin) + "\n";
  return out;
}

std::string gallery_json(const std::vector<GalleryOutcome>& outcomes, std::uint64_t seed) {
  JsonWriter w;
  w.begin_object();
  w.key("seed").value(static_cast<unsigned long long>(seed));
  w.key("systems").begin_array();
  for (const auto& o : outcomes) {
    w.begin_object();
    w.key("name").value(o.name);
    w.key("expected_verdict").value(o.expected_verdict);
    if (o.failed) {
      w.key("error").value(o.error_message);
      w.end_object();
      continue;
    }
    w.key("verdict").value(o.verdict);
    w.key("verdict_matches").value(o.verdict_matches);
    w.key("unit_circle_gap").value(o.unit_circle_gap);
    w.key("lambda").value(o.lambda);
    w.key("M").value(o.m_constant);
    w.key("rank").value(o.rank);
    if (o.pointwise_abscissa.has_value())
      w.key("pointwise_abscissa").value(*o.pointwise_abscissa);
    w.key("pointwise_spectrum_misleading").value(o.pointwise_spectrum_misleading);
    w.key("facts").begin_array();
    for (const auto& f : o.facts) {
      w.begin_object();
      w.key("description").value(f.description);
      w.key("measured").value(f.measured);
      w.key("oracle").value(f.oracle_value);
      w.key("ok").value(f.ok);
      w.end_object();
    }
    w.end_array();
    w.key("tables").begin_array();
    for (const auto& t : o.tables) write_table(w, t);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  bool all_ok = true;
  for (const auto& o : outcomes) {
    if (o.failed) all_ok = false;
    for (const auto& t : o.tables)
      if (t.pass.has_value() && !*t.pass) all_ok = false;
  }
  w.key("consistent").value(all_ok);
  w.end_object();
  return w.str();
}

std::string gallery_csv(const std::vector<GalleryOutcome>& outcomes) {
  std::string out = "system,theorem,condition,verdict,margin\n";
  for (const auto& o : outcomes)
    for (const auto& t : o.tables)
      for (const auto& c : t.conditions)
        out += o.name + "," + t.theorem + ",\"" + c.label + "\"," +
               (t.degenerate ? "degenerate" : (c.holds ? "true" : "false")) + "," +
               format_double(c.margin) + "\n";
  return out;
}

} // namespace evodich
