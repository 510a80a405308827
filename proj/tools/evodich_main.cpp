// Command-line front end over the evodich C API.
//
// Subcommands:
//   analyze   dichotomy verdict, operator spectrum and projection family
//   spectrum  eigenvalue cloud of the one-step evolution operator as CSV
//   verify    equivalence tables for the theorem checks
//   gallery   run the built-in reference systems
//
// Exit codes: 0 success (definite verdict / consistent tables),
//             1 error or inconsistent tables,
//             2 degenerate (on-axis) verdict.

#include <evodich.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { evodich_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct OwnedSystem {
  evodich_system* ptr = nullptr;
  ~OwnedSystem() { evodich_system_free(ptr); }
};

int fail(evodich_status status, const OwnedString& message) {
  std::cerr << "error (" << evodich_status_name(status) << ")";
  if (message.ptr) std::cerr << ": " << message.ptr;
  std::cerr << "\n";
  return 1;
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return out.good();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"evodich - stability and exponential-dichotomy analysis of y' = A(t) y via "
               "evolution-semigroup spectra"};
  app.require_subcommand(1);

  std::string input_path;
  std::string out_dir = ".";
  evodich_options options = evodich_options_default();
  std::string format = "json";

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("--input", input_path, "system description JSON file")->required();
    else
      cmd->add_option("--input", input_path, "system description JSON file");
    cmd->add_option("--out", out_dir, "output directory (default: current)");
    cmd->add_option("-N,--grid", options.grid_size, "grid cells per analysis window")
        ->check(CLI::Range(2, 1 << 20));
    cmd->add_option("--step", options.step, "grid step (default: period / N)");
    cmd->add_option("-p,--exponent", options.p_exponent, "L_p exponent")->check(CLI::Range(1.0, 64.0));
    cmd->add_option("--tol", options.tol, "integrator tolerance")
        ->check(CLI::Range(1e-15, 1.0));
    cmd->add_option("--seed", options.seed, "seed for sampled diagnostics");
    cmd->add_option("--format", format, "output format: json or csv (csv adds summaries)")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "dichotomy analysis of one system");
  add_common(analyze, true);
  CLI::App* verify = app.add_subcommand(
      "verify", "equivalence tables (omit --input to verify the built-in gallery)");
  add_common(verify, false);
  CLI::App* gallery = app.add_subcommand("gallery", "run the built-in reference systems");
  add_common(gallery, false);
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalue cloud of e^{hD}");
  add_common(spectrum, true);

  CLI11_PARSE(app, argc, argv);
  options.format_csv = format == "csv" ? 1 : 0;

  std::filesystem::path out(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << out << "\n";
    return 1;
  }

  OwnedSystem system;
  if (!input_path.empty()) {
    OwnedString err;
    evodich_status st = evodich_system_load_file(input_path.c_str(), &system.ptr, &err.ptr);
    if (st != EVODICH_OK) return fail(st, err);
  }

  if (analyze->parsed()) {
    OwnedString dich, spec, proj, err;
    int32_t verdict_class = 0;
    evodich_status st = evodich_analyze(system.ptr, &options, &dich.ptr, &spec.ptr, &proj.ptr,
                                        &verdict_class, &err.ptr);
    if (st != EVODICH_OK) return fail(st, err);
    if (!write_file(out / "dichotomy.json", dich.str()) ||
        !write_file(out / "spectrum.json", spec.str()) ||
        !write_file(out / "projections.csv", proj.str()))
      return 1;
    std::cout << dich.str() << "\n";
    return verdict_class;
  }

  if (spectrum->parsed()) {
    OwnedString csv, meta, err;
    evodich_status st = evodich_spectrum(system.ptr, &options, &csv.ptr, &meta.ptr, &err.ptr);
    if (st != EVODICH_OK) return fail(st, err);
    if (!write_file(out / "spectrum.csv", csv.str()) ||
        !write_file(out / "spectrum_meta.json", meta.str()))
      return 1;
    std::cout << meta.str() << "\n";
    return 0;
  }

  if (verify->parsed()) {
    if (system.ptr) {
      OwnedString tables, csv, err;
      int32_t consistent = 0;
      evodich_status st =
          evodich_verify(system.ptr, &options, &tables.ptr, &csv.ptr, &consistent, &err.ptr);
      if (st != EVODICH_OK) return fail(st, err);
      if (!write_file(out / "verify.json", tables.str())) return 1;
      if (options.format_csv && !write_file(out / "verify.csv", csv.str())) return 1;
      std::cout << tables.str() << "\n";
      return consistent ? 0 : 1;
    }
    OwnedString report, csv, err;
    int32_t consistent = 0;
    evodich_status st =
        evodich_gallery(&options, &report.ptr, &csv.ptr, &consistent, &err.ptr);
    if (st != EVODICH_OK) return fail(st, err);
    if (!write_file(out / "verify.json", report.str())) return 1;
    if (options.format_csv && !write_file(out / "verify.csv", csv.str())) return 1;
    std::cout << report.str() << "\n";
    return consistent ? 0 : 1;
  }

  if (gallery->parsed()) {
    OwnedString report, csv, err;
    int32_t consistent = 0;
    evodich_status st =
        evodich_gallery(&options, &report.ptr, &csv.ptr, &consistent, &err.ptr);
    if (st != EVODICH_OK) return fail(st, err);
    if (!write_file(out / "gallery.json", report.str()) ||
        !write_file(out / "gallery.csv", csv.str()))
      return 1;
    std::cout << report.str() << "\n";
    return consistent ? 0 : 1;
  }

  return 1;
}
