#include "core/gallery.hpp"

#include "core/parallel.hpp"

#include <cmath>
#include <limits>

namespace evodich {

SystemSpec make_vinograd(double a) {
  // Entries are degree-2 trig polynomials:
  //   cos^2 t = (1 + cos 2t)/2,  sin t cos t = (sin 2t)/2,
  //   sin^2 t = (1 - cos 2t)/2.
  Mat a0(2, 2), ac(2, 2), as(2, 2);
  a0 << Complex(-1 + a / 2), Complex(1.0), Complex(-1.0), Complex(-1 + a / 2);
  ac << Complex(a / 2), Complex(0.0), Complex(0.0), Complex(-a / 2);
  as << Complex(0.0), Complex(-a / 2), Complex(-a / 2), Complex(0.0);
  std::vector<SystemSpec::Harmonic> hs;
  hs.push_back({0, a0, Mat::Zero(2, 2)});
  hs.push_back({2, ac, as});
  return SystemSpec::periodic_harmonics(2, kTwoPi, std::move(hs),
                                        "vinograd(a=" + std::to_string(a) + ")");
}

SystemSpec make_mathieu(double alpha, double q) {
  // y'' + (alpha - 2 q cos 2t) y = 0 as a first-order system, period pi.
  Mat a0(2, 2), ac(2, 2);
  a0 << Complex(0.0), Complex(1.0), Complex(-alpha), Complex(0.0);
  ac << Complex(0.0), Complex(0.0), Complex(2 * q), Complex(0.0);
  std::vector<SystemSpec::Harmonic> hs;
  hs.push_back({0, a0, Mat::Zero(2, 2)});
  hs.push_back({1, ac, Mat::Zero(2, 2)});
  return SystemSpec::periodic_harmonics(
      2, kPi, std::move(hs),
      "mathieu(alpha=" + std::to_string(alpha) + ",q=" + std::to_string(q) + ")");
}

namespace {

std::shared_ptr<const SystemSpec> make_constant(const char* name,
                                                std::initializer_list<double> entries, int d) {
  Mat m(d, d);
  int i = 0;
  for (double v : entries) {
    m(i / d, i % d) = Complex(v, 0.0);
    ++i;
  }
  auto spec = SystemSpec::constant(m, name);
  return std::make_shared<const SystemSpec>(std::move(spec));
}

// Closed-form check for the Vinograd system: substitutes the candidate
// solution y(t) = e^{(a-1)t} (cos t, -sin t) into the equation and only
// returns the implied period-multiplier once the residual vanishes.
double vinograd_multiplier_oracle(double a) {
  SystemSpec spec = make_vinograd(a);
  double worst = 0.0;
  const int samples = 1000;
  for (int i = 0; i <= samples; ++i) {
    double t = kTwoPi * i / samples;
    double g = std::exp((a - 1) * t);
    Eigen::Vector2cd y(g * std::cos(t), -g * std::sin(t));
    Eigen::Vector2cd dy(g * ((a - 1) * std::cos(t) - std::sin(t)),
                        g * (-(a - 1) * std::sin(t) - std::cos(t)));
    Mat at = spec.evaluate(t);
    worst = std::max(worst, (dy - at * y).norm() / std::max(1.0, g));
  }
  if (worst > 1e-10)
    throw Error(ErrorCode::numeric,
                "vinograd closed-form oracle: candidate solution residual " +
                    std::to_string(worst));
  return std::exp((a - 1) * kTwoPi);
}

// exp of the trace integral over one window: by Liouville's formula this is
// det U(T, 0), i.e. the product of the multipliers.
double liouville_determinant_oracle(const SystemSpec& spec, double window) {
  const int samples = 4096;
  double h = window / samples;
  Complex acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    // Midpoint rule; the integrands here are smooth.
    acc += spec.evaluate((i + 0.5) * h).trace() * h;
  }
  return std::exp(acc.real());
}

std::vector<GallerySystem> build_gallery() {
  std::vector<GallerySystem> g;

  {
    GallerySystem s;
    double a = 1.5;
    s.name = "vinograd_expanding";
    s.spec = std::make_shared<const SystemSpec>(make_vinograd(a));
    s.expected_verdict = "spectrally_hyperbolic";
    s.pointwise_spectrum_misleading = true;
    s.facts.push_back({KnownFact::Kind::largest_multiplier_modulus,
                       "closed-form solution multiplier e^{(a-1) 2 pi}",
                       [a] { return vinograd_multiplier_oracle(a); }, 1e-6});
    auto spec_copy = s.spec;
    s.facts.push_back({KnownFact::Kind::smallest_multiplier_modulus,
                       "Liouville determinant over the closed-form multiplier",
                       [a, spec_copy] {
                         return liouville_determinant_oracle(*spec_copy, kTwoPi) /
                                vinograd_multiplier_oracle(a);
                       },
                       1e-6});
    s.facts.push_back({KnownFact::Kind::expansion_exponent, "closed-form exponent a - 1",
                       [a] {
                         vinograd_multiplier_oracle(a); // residual gate
                         return a - 1;
                       },
                       1e-3});
    s.facts.push_back({KnownFact::Kind::pointwise_abscissa,
                       "trace/determinant closed form (a-2)/2",
                       [a] { return (a - 2) / 2; }, 1e-9});
    g.push_back(std::move(s));
  }

  {
    GallerySystem s;
    double a = 0.5;
    s.name = "vinograd_contracting";
    s.spec = std::make_shared<const SystemSpec>(make_vinograd(a));
    s.expected_verdict = "uniformly_stable";
    s.facts.push_back({KnownFact::Kind::largest_multiplier_modulus,
                       "closed-form solution multiplier e^{(a-1) 2 pi}",
                       [a] { return vinograd_multiplier_oracle(a); }, 1e-6});
    s.facts.push_back({KnownFact::Kind::decay_exponent, "closed-form slow exponent 1 - a",
                       [a] {
                         vinograd_multiplier_oracle(a);
                         return 1 - a;
                       },
                       1e-3});
    s.facts.push_back({KnownFact::Kind::pointwise_abscissa,
                       "trace/determinant closed form (a-2)/2",
                       [a] { return (a - 2) / 2; }, 1e-9});
    g.push_back(std::move(s));
  }

  {
    GallerySystem s;
    s.name = "saddle_constant";
    s.spec = make_constant("saddle_constant", {-1, 0, 0, 2}, 2);
    s.expected_verdict = "spectrally_hyperbolic";
    s.facts.push_back({KnownFact::Kind::largest_multiplier_modulus, "diagonal flow e^{2 * 2 pi}",
                       [] { return std::exp(2 * kTwoPi); }, 1e-8});
    s.facts.push_back({KnownFact::Kind::expansion_exponent, "diagonal rate 2",
                       [] { return 2.0; }, 1e-9});
    s.facts.push_back({KnownFact::Kind::decay_exponent, "diagonal rate 1",
                       [] { return 1.0; }, 1e-9});
    g.push_back(std::move(s));
  }

  {
    GallerySystem s;
    s.name = "stable_node";
    s.spec = make_constant("stable_node", {-3, 0, 0, -1}, 2);
    s.expected_verdict = "uniformly_stable";
    s.facts.push_back({KnownFact::Kind::largest_multiplier_modulus, "diagonal flow e^{-2 pi}",
                       [] { return std::exp(-kTwoPi); }, 1e-8});
    s.facts.push_back({KnownFact::Kind::decay_exponent, "slowest diagonal rate 1",
                       [] { return 1.0; }, 1e-9});
    s.facts.push_back({KnownFact::Kind::pointwise_abscissa, "max Re of {-3, -1}",
                       [] { return -1.0; }, 1e-9});
    g.push_back(std::move(s));
  }

  {
    GallerySystem s;
    s.name = "harmonic_oscillator";
    s.spec = make_constant("harmonic_oscillator", {0, -1, 1, 0}, 2);
    s.expected_verdict = "none";
    s.facts.push_back({KnownFact::Kind::largest_multiplier_modulus, "rotation group modulus 1",
                       [] { return 1.0; }, 1e-8});
    s.facts.push_back({KnownFact::Kind::pointwise_abscissa, "Re of +-i",
                       [] { return 0.0; }, 1e-9});
    g.push_back(std::move(s));
  }

  {
    GallerySystem s;
    s.name = "mixed_rotation";
    s.spec = make_constant("mixed_rotation", {-1, 0, 0, 0, 0, -1, 0, 1, 0}, 3);
    s.expected_verdict = "none";
    s.facts.push_back({KnownFact::Kind::largest_multiplier_modulus,
                       "rotation block keeps modulus 1", [] { return 1.0; }, 1e-8});
    g.push_back(std::move(s));
  }

  {
    GallerySystem s;
    s.name = "spiral_source";
    s.spec = make_constant("spiral_source", {0.3, -1, 1, 0.3}, 2);
    s.expected_verdict = "spectrally_hyperbolic";
    s.facts.push_back({KnownFact::Kind::smallest_multiplier_modulus, "spiral flow e^{0.3 * 2 pi}",
                       [] { return std::exp(0.3 * kTwoPi); }, 1e-8});
    s.facts.push_back({KnownFact::Kind::expansion_exponent, "spiral rate 0.3",
                       [] { return 0.3; }, 1e-6});
    s.facts.push_back({KnownFact::Kind::pointwise_abscissa, "Re of 0.3 +- i",
                       [] { return 0.3; }, 1e-9});
    g.push_back(std::move(s));
  }

  {
    GallerySystem s;
    s.name = "mathieu_unstable";
    s.spec = std::make_shared<const SystemSpec>(make_mathieu(1.0, 1.0));
    s.expected_verdict = "spectrally_hyperbolic";
    auto spec_copy = s.spec;
    s.facts.push_back({KnownFact::Kind::multiplier_product_modulus,
                       "Liouville determinant exp(integral of tr A) = 1",
                       [spec_copy] { return liouville_determinant_oracle(*spec_copy, kPi); },
                       1e-6});
    g.push_back(std::move(s));
  }

  return g;
}

double measure_fact(KnownFact::Kind kind, const AnalyzeOutcome& outcome, const Monodromy& mono,
                    double pointwise_abscissa) {
  double largest = 0.0, smallest = std::numeric_limits<double>::infinity();
  for (const auto& mu : mono.multipliers) {
    largest = std::max(largest, std::abs(mu));
    smallest = std::min(smallest, std::abs(mu));
  }
  switch (kind) {
    case KnownFact::Kind::largest_multiplier_modulus: return largest;
    case KnownFact::Kind::smallest_multiplier_modulus: return smallest;
    case KnownFact::Kind::multiplier_product_modulus: {
      return std::abs(mono.matrix.determinant());
    }
    case KnownFact::Kind::expansion_exponent: return outcome.dichotomy.growth_rate;
    case KnownFact::Kind::decay_exponent: return outcome.dichotomy.decay_rate;
    case KnownFact::Kind::pointwise_abscissa: return pointwise_abscissa;
  }
  throw Error(ErrorCode::invalid_argument, "unknown fact kind");
}

} // namespace

const std::vector<GallerySystem>& builtin_gallery() {
  static const std::vector<GallerySystem> gallery = build_gallery();
  return gallery;
}

std::vector<GalleryOutcome> run_gallery(const RunOptions& options) {
  const auto& gallery = builtin_gallery();
  std::vector<GalleryOutcome> outcomes(gallery.size());

  parallel_for(
      static_cast<int>(gallery.size()),
      [&](int idx) {
        const GallerySystem& sys = gallery[idx];
        GalleryOutcome& out = outcomes[idx];
        out.name = sys.name;
        out.expected_verdict = sys.expected_verdict;
        try {
          AnalyzeOutcome outcome = analyze_system(sys.spec, options);
          out.verdict = to_string(outcome.dichotomy.verdict);
          out.verdict_matches = out.verdict == sys.expected_verdict;
          out.unit_circle_gap = outcome.spectrum.unit_circle_gap;
          out.lambda = outcome.dichotomy.lambda;
          out.m_constant = outcome.dichotomy.m_constant;
          out.rank = outcome.dichotomy.rank;

          Monodromy mono = monodromy(*outcome.family, outcome.cells);

          // Pointwise spectral abscissa over a fine grid of the window.
          double abscissa = -std::numeric_limits<double>::infinity();
          const int samples = 512;
          for (int i = 0; i < samples; ++i) {
            double t = outcome.window * i / samples;
            for (const auto& ev : eigenvalues(sys.spec->evaluate(t)))
              abscissa = std::max(abscissa, ev.real());
          }
          out.pointwise_abscissa = abscissa;
          bool stable_verdict = outcome.dichotomy.verdict == DichotomyVerdict::uniformly_stable;
          out.pointwise_spectrum_misleading =
              abscissa < -1e-9 && !stable_verdict &&
              outcome.dichotomy.verdict != DichotomyVerdict::none;

          for (const auto& fact : sys.facts) {
            FactOutcome fo;
            fo.description = fact.description;
            fo.oracle_value = fact.oracle();
            fo.measured = measure_fact(fact.kind, outcome, mono, abscissa);
            fo.ok = std::abs(fo.measured - fo.oracle_value) <=
                    fact.tolerance * std::max(1.0, std::abs(fo.oracle_value));
            out.facts.push_back(std::move(fo));
          }

          out.tables = run_applicable_checks(sys.spec, options);
        } catch (const std::exception& e) {
          out.failed = true;
          out.error_message = e.what();
        }
      },
      options.threads);
  return outcomes;
}

} // namespace evodich
