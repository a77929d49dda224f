#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "deid/phantom.hpp"
#include "deid/pipeline.hpp"
#include "deid/render.hpp"
#include "deid/stats.hpp"

namespace deid {

// Both-empty convention: 1. Throws DimMismatch.
double dice(const Volume& a, const Volume& b);
double iou(const Volume& a, const Volume& b);

enum class TissueClass { BrainTissue, CsfLike };
enum class SegRegion { BrainRestricted, WholeHead };

std::string_view to_string(TissueClass c);
std::string_view to_string(SegRegion r);
const std::vector<TissueClass>& all_tissue_classes();

// Intensity band [lo, hi) of each class.
std::array<float, 2> tissue_band(TissueClass c);

// Voxels whose intensity falls in the class band; BrainRestricted only
// considers voxels with brain = 1.
Volume segment(const Volume& x, const Volume& brain, TissueClass c, SegRegion region);

struct ClassOverlap {
  TissueClass tissue;
  double dice = 1.0;
  double iou = 1.0;
};

std::vector<ClassOverlap> segmentation_impact(const Volume& x, const Volume& y, const Volume& brain, SegRegion region);

// Shared settings for the attack simulations.
struct AttackParams {
  double delta = 0.2;
  View view = View::Frontal;
  DeidParams deid;
};

struct TrialResult {
  DeidMethod method;
  std::size_t chosen = 0;
  std::size_t query_slot = 0;
  bool correct = false;
};

// argmin_j dist(query, candidates[j]); ties go to the lowest index.
std::size_t nearest_candidate(const std::vector<double>& query, std::span<const std::vector<double>> candidates);

// De-identifies every gallery member with `method` (member j uses
// derive_seed(seed, j)) and picks the one closest to the original query
// rendering. Throws InvalidGallery for repeated subjects or a query outside
// the gallery.
TrialResult identification_trial(const Phantom& query, std::span<const Phantom> gallery, DeidMethod method,
                                 const AttackParams& params, Seed seed);

inline constexpr std::size_t kRankGridPoints = 101;

struct RankCurve {
  std::vector<double> ranks;  // alpha_C per query, sorted
  std::vector<double> alpha;  // 101-point grid over [0, 1]
  std::vector<double> top;    // fraction of queries with alpha_C <= alpha
  double ks = 0.0;
  double ks_pvalue = 1.0;
};

// One relative rank per query: rank of the query's own de-identified entry
// among all N by distance to its original, with ties ordered by seeded keys.
// originals[i] and deidentified[i] belong to subject i.
RankCurve rank_curve(std::span<const std::vector<double>> originals, std::span<const std::vector<double>> deidentified,
                     std::span<const std::size_t> queries, Seed seed);

// Renders and de-identifies each subject, then rank_curve. Throws
// InvalidGallery for fewer than 10 subjects.
RankCurve rank_retrieval(std::span<const Phantom> subjects, std::span<const std::size_t> queries, DeidMethod method,
                         const AttackParams& params, Seed seed);

struct IdentificationConfig {
  std::size_t subjects = 100;
  std::size_t trials = 500;
  std::size_t options = 5;
  std::size_t side = 64;
  bool vary_head_size = false;
  Seed seed = 0;
  std::vector<DeidMethod> methods = all_methods();
  AttackParams attack;
  std::size_t bootstrap_resamples = 1000;
};

struct MethodReport {
  DeidMethod method;
  std::size_t correct = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double binomial_p = 1.0;  // against 1 / options
  BootstrapResult bootstrap;
  RankCurve ranks;
  double deid_seconds = 0.0;
};

struct IdentificationReport {
  IdentificationConfig config;
  std::vector<MethodReport> methods;

  const MethodReport& at(DeidMethod m) const;
};

// Trials share one plan across methods: galleries of `options` distinct
// subjects with the query slot balanced over positions, and rank queries
// cycling through all subjects.
IdentificationReport run_identification(const IdentificationConfig& config);

struct SegmentationConfig {
  std::size_t subjects = 10;
  std::size_t side = 64;
  Seed seed = 0;
  std::vector<DeidMethod> methods = all_methods();
  DeidParams deid;
};

struct SegmentationRow {
  DeidMethod method;
  SegRegion region;
  TissueClass tissue;
  double dice = 0.0;  // mean over subjects
  double iou = 0.0;
  double dice_min = 0.0;
  double iou_min = 0.0;
};

struct SegmentationReport {
  SegmentationConfig config;
  std::vector<SegmentationRow> rows;

  const SegmentationRow& at(DeidMethod m, SegRegion r, TissueClass c) const;
};

SegmentationReport run_segmentation(const SegmentationConfig& config);

std::string to_json(const IdentificationReport& report, int indent = 2);
std::string to_json(const SegmentationReport& report, int indent = 2);

}  // namespace deid
