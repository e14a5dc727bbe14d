#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgroup/rational.hpp"
#include "pgroup/series.hpp"
#include "pgroup/spec.hpp"

namespace pgroup {

struct DensityTerm {
  int level = 0;
  BigInt num, den;
  bool stable = false;
  std::string source;  // "engine", "closed_form", "extended"
  int k = 0;           // quotient used (engine terms)
  bool unverified = false;
  Rational value() const { return den == 0 ? Rational(0) : Rational(num, den); }
};

struct DensitySequence {
  std::string spec_id;
  Family family = Family::G;
  SeriesKind kind = SeriesKind::LowerP;
  int p = 3;
  std::vector<DensityTerm> terms;
  std::optional<Rational> registered_limit;
  std::optional<int> cutoff;  // first level that could not be computed
  std::string cutoff_reason;
  std::vector<std::string> mismatches;  // engine term != closed form

  std::string to_csv() const;
  std::string to_json() const;
  std::string to_human() const;
};

// closed forms for the infinite groups, keyed by a named subgroup
struct ClosedForm {
  int from_level = 1;
  std::function<std::pair<BigInt, BigInt>(int)> term;
  Rational limit;
};

// named: Z, H, base, full, trivial, K (with n, m; W only)
std::optional<ClosedForm> closed_form(Family fam, const std::string& named, SeriesKind kind, int p, int n = 0,
                                      int m = 0);
std::optional<ClosedForm> closed_form(const SubgroupSpec& spec, SeriesKind kind);

// log_p |K S_i : S_i| and log_p |G : S_i| inside one finite quotient
std::pair<int, int> engine_term(const Subgroup& k, const FiltrationSeries& s, int level);

struct DensityOptions {
  int k_max = 3;
  int k_start = 1;
  bool extend_closed_form = true;
  SeriesOptions series;
};

DensitySequence density_terms(const SubgroupSpec& spec, SeriesKind kind, int i_max, const DensityOptions& opt = {});
// terms straight from a registered closed form
DensitySequence closed_form_sequence(const SubgroupSpec& spec, SeriesKind kind, int i_max);

struct HdimEstimate {
  Rational estimate;  // min over the tail window
  Rational oscillation;
  std::optional<Rational> limit;
  bool strong = false;
  int window = 0;
  std::optional<double> rate_constant;  // max over tail of i * |d_i - limit|
};

HdimEstimate hdim_estimate(const DensitySequence& seq, int tail_window = 8, double tol = 1e-2);

// ---------------------------------------------------------------------------
// spectra

struct Interval {
  Rational lo, hi;
  bool closed_right = true;
};

class SpectrumSet {
 public:
  SpectrumSet& add_interval(const Rational& lo, const Rational& hi, bool closed_right = true);
  SpectrumSet& add_point(const Rational& r);
  SpectrumSet& unite(const SpectrumSet& o);
  void normalize();

  const std::vector<Interval>& intervals() const { return iv_; }
  const std::vector<Rational>& points() const { return pts_; }
  int components() const { return static_cast<int>(iv_.size() + pts_.size()); }
  bool contains(const Rational& r) const;
  bool operator==(const SpectrumSet& o) const;

  std::string str() const;  // "[0,1/5] ∪ {3/5} ∪ {1}"
  std::string to_json() const;

 private:
  std::vector<Interval> iv_;
  std::vector<Rational> pts_;
};

SpectrumSet unite(SpectrumSet a, const SpectrumSet& b);
SpectrumSet normal_spectrum(const Rational& xi, const Rational& eta);
SpectrumSet product_spectrum(int m, const Rational& xi);
SpectrumSet product_spectrum_closed(int m, int n);  // merged form for xi = 1/n
SpectrumSet fg_spectrum_W(SeriesKind kind, int p, int n_max);
SpectrumSet full_L_spectrum_W(int p, int n_max);

// [0,4/5) plus the truncated point set; membership is exact for every n
struct LSpectrumG {
  int p = 3;
  SpectrumSet truncated;
  bool contains(const Rational& r) const;
};
LSpectrumG L_spectrum_G(int p, int n_max);

std::vector<BigInt> elem_ab_slice(const Rational& eta, const std::vector<BigInt>& layer_ranks);

// K = <x^{p^n}, y_0..y_{m-1}> in G under the lower p-series
struct SectionDensity {
  DensitySequence k_seq;   // extended levels from the largest quotient
  DensitySequence kz_seq;  // log|K ∩ Z| / log|Z| at level p^k + 1, one term per k
  std::vector<std::string> cross_check_failures;
  Rational predicted_k, predicted_kz;
};
SectionDensity section_K_density(int n, int m, int p, int k_max, const SeriesOptions& opt = {});

}  // namespace pgroup
