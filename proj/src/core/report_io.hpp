#pragma once

#include "core/analyze.hpp"
#include "core/gallery.hpp"
#include "core/theorems.hpp"

#include <string>
#include <vector>

namespace evodich {

// Deterministic JSON builder. Doubles are printed with 17 significant
// digits so every value round-trips exactly; non-finite values become null.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long v);
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& null();
  const std::string& str() const { return out_; }

private:
  void separator();
  std::string out_;
  std::vector<bool> first_;
  bool pending_key_ = false;
};

std::string format_double(double v);

std::string spectrum_report_json(const SpectrumReport& report);
std::string eigenvalues_csv(const SpectrumReport& report);
std::string projections_csv(const ProjectionFamily& family);
std::string operator_csv(const Mat& dense);
std::string dichotomy_report_json(const AnalyzeOutcome& outcome);
std::string tables_json(const std::vector<EquivalenceTable>& tables, const std::string& system);
std::string tables_csv(const std::vector<EquivalenceTable>& tables);
std::string gallery_json(const std::vector<GalleryOutcome>& outcomes, std::uint64_t seed);
std::string gallery_csv(const std::vector<GalleryOutcome>& outcomes);

} // namespace evodich
