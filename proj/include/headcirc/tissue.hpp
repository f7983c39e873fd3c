#pragma once

// Frequency-dependent tissue electrical properties and the complex
// conductivity sigma_c(w) = sigma(w) + i*w*eps(w).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "headcirc/errors.hpp"

namespace headcirc {

inline constexpr double kEps0 = 8.8541878128e-12;  // F/m, CODATA

struct ComplexConductivity {
  std::complex<double> value;  // S/m
};

struct TissueSample {
  double frequency_hz;
  double sigma;    // S/m
  double eps_rel;  // dimensionless
};

// Optional sink for non-fatal notices (out-of-range clamping and the like).
using WarningSink = std::function<void(const std::string&)>;

class TissueSpectrum {
 public:
  TissueSpectrum(std::string name, std::vector<TissueSample> samples)
      : name_(std::move(name)), samples_(std::move(samples)) {
    if (samples_.empty())
      throw ValidationError("tissue '" + name_ + "': table is empty");
    double prev = 0.0;
    for (const auto& s : samples_) {
      if (!(s.frequency_hz > 0.0))
        throw ValidationError("tissue '" + name_ + "': frequency must be > 0");
      if (s.frequency_hz <= prev)
        throw FormatError("tissue '" + name_ +
                          "': frequencies must be strictly increasing");
      if (s.sigma < 0.0 || s.eps_rel < 0.0)
        throw ValidationError("tissue '" + name_ +
                              "': sigma and eps_rel must be >= 0");
      prev = s.frequency_hz;
    }
  }

  static TissueSpectrum constant(std::string name, double sigma, double eps_rel,
                                 double at_hz = 1000.0) {
    return TissueSpectrum(std::move(name), {{at_hz, sigma, eps_rel}});
  }

  const std::string& name() const { return name_; }
  const std::vector<TissueSample>& samples() const { return samples_; }

  double min_frequency() const { return samples_.front().frequency_hz; }
  double max_frequency() const { return samples_.back().frequency_hz; }
  bool dispersive() const {
    for (const auto& s : samples_)
      if (s.sigma != samples_.front().sigma ||
          s.eps_rel != samples_.front().eps_rel)
        return true;
    return false;
  }

  // Linear interpolation in log10(f); clamps outside the table range.
  TissueSample at(double f, const WarningSink& warn = {}) const {
    if (!(f > 0.0)) throw DomainError("tissue query frequency must be > 0");
    if (samples_.size() == 1 || f <= samples_.front().frequency_hz ||
        f >= samples_.back().frequency_hz) {
      if (samples_.size() > 1 &&
          (f < samples_.front().frequency_hz ||
           f > samples_.back().frequency_hz) &&
          warn) {
        std::ostringstream os;
        os << "tissue '" << name_ << "': frequency " << f
           << " Hz outside table range, clamping";
        warn(os.str());
      }
      const auto& s =
          (f <= samples_.front().frequency_hz) ? samples_.front() : samples_.back();
      return {f, s.sigma, s.eps_rel};
    }
    auto hi = std::lower_bound(
        samples_.begin(), samples_.end(), f,
        [](const TissueSample& s, double v) { return s.frequency_hz < v; });
    auto lo = hi - 1;
    if (hi->frequency_hz == f) return {f, hi->sigma, hi->eps_rel};
    const double t = (std::log10(f) - std::log10(lo->frequency_hz)) /
                     (std::log10(hi->frequency_hz) - std::log10(lo->frequency_hz));
    return {f, lo->sigma + t * (hi->sigma - lo->sigma),
            lo->eps_rel + t * (hi->eps_rel - lo->eps_rel)};
  }

  ComplexConductivity complex_conductivity(double f,
                                           const WarningSink& warn = {}) const {
    const TissueSample s = at(f, warn);
    const double omega = 2.0 * M_PI * f;
    return {{s.sigma, omega * s.eps_rel * kEps0}};
  }

 private:
  std::string name_;
  std::vector<TissueSample> samples_;
};

// CSV format: header `frequency_hz,sigma_s_per_m,eps_rel`, `#` comments.
inline TissueSpectrum load_tissue_table(std::istream& in,
                                        const std::string& name) {
  std::vector<TissueSample> samples;
  std::string line;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find("frequency_hz") != std::string::npos) continue;
      // headerless tables are accepted; fall through and parse the row
    }
    std::istringstream row(line);
    TissueSample s{};
    char c1 = 0, c2 = 0;
    if (!(row >> s.frequency_hz >> c1 >> s.sigma >> c2 >> s.eps_rel) ||
        c1 != ',' || c2 != ',') {
      std::ostringstream os;
      os << "tissue '" << name << "': malformed CSV row at line " << lineno;
      throw FormatError(os.str());
    }
    samples.push_back(s);
  }
  return TissueSpectrum(name, std::move(samples));
}

inline void write_tissue_table(std::ostream& out, const TissueSpectrum& t) {
  out << "frequency_hz,sigma_s_per_m,eps_rel\n";
  out.precision(17);
  for (const auto& s : t.samples())
    out << s.frequency_hz << "," << s.sigma << "," << s.eps_rel << "\n";
}

// The four media of the three-shell model plus surrounding air.
struct TissueSet {
  TissueSpectrum brain;
  TissueSpectrum skull;
  TissueSpectrum scalp;
  TissueSpectrum air;

  bool dispersive() const {
    return brain.dispersive() || skull.dispersive() || scalp.dispersive();
  }
};

}  // namespace headcirc
