#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgroup/subgroup.hpp"

namespace pgroup {

enum class SeriesKind { LowerCentral, LowerP, Frattini, Jennings, PPower };

SeriesKind parse_series_kind(const std::string& s);  // P L F D C
std::string series_code(SeriesKind k);
std::string series_name(SeriesKind k);
// index of the first term (F and P start at 0, the others at 1)
int first_level(SeriesKind k);

enum class JenningsMethod { Recursive, ClosedForm, Both };

struct SeriesOptions {
  AgemoOptions agemo;
  JenningsMethod jennings = JenningsMethod::ClosedForm;
};

struct FiltrationSeries {
  Ctx ctx;
  SeriesKind kind;
  std::vector<Subgroup> terms;  // terms[0] is the whole group, last is trivial
  std::vector<int> layer_log;
  bool unverified = false;

  int first() const { return first_level(kind); }
  int last_level() const { return first() + static_cast<int>(terms.size()) - 1; }
  // term at a level; beyond the end the trivial subgroup
  Subgroup term(int level) const;
  int log_index(int level) const;
};

FiltrationSeries lower_central(const Ctx& ctx);
FiltrationSeries lower_p(const Ctx& ctx, const SeriesOptions& opt = {});
FiltrationSeries frattini(const Ctx& ctx, const SeriesOptions& opt = {});
FiltrationSeries jennings(const Ctx& ctx, const SeriesOptions& opt = {});
FiltrationSeries p_power(const Ctx& ctx, const SeriesOptions& opt = {});
// cached dispatcher
const FiltrationSeries& series(const Ctx& ctx, SeriesKind kind, const SeriesOptions& opt = {});

// registered layer ranks, where a closed form is known
std::optional<int> predicted_rank(SeriesKind kind, Family fam, int p, int k, int level);

struct LayerRow {
  int level;
  int log_index;  // log_p |G : S_level|
  int rank;       // log_p |S_level : S_{level+1}|
  std::optional<bool> stable;
  std::optional<int> predicted;
  std::optional<bool> match() const {
    if (!predicted) return std::nullopt;
    return *predicted == rank;
  }
};

struct LayerTable {
  std::string group;
  SeriesKind kind;
  bool unverified = false;
  std::vector<LayerRow> rows;
  std::string to_csv() const;
  std::string to_json() const;
  std::string to_human() const;
};

// with_stability compares against the next level k+1
LayerTable layer_table(const Ctx& ctx, SeriesKind kind, const SeriesOptions& opt = {}, bool with_stability = false);

struct StableValue {
  int level;
  int k;          // first k at which the value agreed with k+1
  int log_index;  // log_p |G : S_level|
  int rank;
};

// grows k from k_start until two consecutive levels agree; nullopt if k_max is hit
std::optional<StableValue> stability(SeriesKind kind, int p, int level, int k_max, const SeriesOptions& opt = {},
                                     int k_start = 1);

struct TowerRow {
  int level;
  int log_index;  // log |G_i : G_i^{p^i}|
  int predicted;
  bool exact;
  std::optional<bool> iterated_agrees;
};
std::vector<TowerRow> p_power_tower(int p, int i_max, const SeriesOptions& opt = {});

}  // namespace pgroup
