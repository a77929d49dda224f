#include "deid/eval.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

#include "deid/error.hpp"

namespace deid {

namespace {

constexpr std::uint64_t kPlanTag = 0x706c616eULL;
constexpr std::uint64_t kDeidTag = 0x6465696dULL;
constexpr std::uint64_t kRankTag = 0x72616e6bULL;
constexpr std::uint64_t kSubjectTag = 0x7375626aULL;
constexpr std::uint64_t kBootTag = 0x626f6f74ULL;

std::pair<std::size_t, std::size_t> overlap_counts(const Volume& a, const Volume& b) {
  require_same_dims(a, b, "overlap");
  std::size_t inter = 0, total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a[i] != 0.0f, y = b[i] != 0.0f;
    inter += x && y;
    total += static_cast<std::size_t>(x) + static_cast<std::size_t>(y);
  }
  return {inter, total};
}

std::vector<double> features_of(const Volume& v, const AttackParams& p) {
  return match_features(render_face(v, p.delta, p.view));
}

void fisher_yates_prefix(std::vector<std::size_t>& v, std::size_t k, SeedStream& s) {
  for (std::size_t i = 0; i < k && i + 1 < v.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(s.below(v.size() - i));
    std::swap(v[i], v[j]);
  }
}

}  // namespace

double dice(const Volume& a, const Volume& b) {
  const auto [inter, total] = overlap_counts(a, b);
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(total);
}

double iou(const Volume& a, const Volume& b) {
  const auto [inter, total] = overlap_counts(a, b);
  const std::size_t uni = total - inter;
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::string_view to_string(TissueClass c) {
  return c == TissueClass::BrainTissue ? "brain_tissue" : "csf_like";
}

std::string_view to_string(SegRegion r) {
  return r == SegRegion::BrainRestricted ? "brain_restricted" : "whole_head";
}

const std::vector<TissueClass>& all_tissue_classes() {
  static const std::vector<TissueClass> classes{TissueClass::BrainTissue, TissueClass::CsfLike};
  return classes;
}

std::array<float, 2> tissue_band(TissueClass c) {
  if (c == TissueClass::BrainTissue) return {0.45f, 0.72f};
  return {0.25f, 0.45f};
}

Volume segment(const Volume& x, const Volume& brain, TissueClass c, SegRegion region) {
  require_same_dims(x, brain, "segment");
  const auto [lo, hi] = tissue_band(c);
  Volume out(x.dims());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (region == SegRegion::BrainRestricted && brain[i] != 1.0f) continue;
    out[i] = (x[i] >= lo && x[i] < hi) ? 1.0f : 0.0f;
  }
  return out;
}

std::vector<ClassOverlap> segmentation_impact(const Volume& x, const Volume& y, const Volume& brain,
                                              SegRegion region) {
  require_same_dims(x, y, "segmentation_impact");
  std::vector<ClassOverlap> out;
  for (TissueClass c : all_tissue_classes()) {
    const Volume sx = segment(x, brain, c, region);
    const Volume sy = segment(y, brain, c, region);
    out.push_back({c, dice(sx, sy), iou(sx, sy)});
  }
  return out;
}

std::size_t nearest_candidate(const std::vector<double>& query, std::span<const std::vector<double>> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidGallery, "empty gallery");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const double d = feature_distance(query, candidates[j]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

TrialResult identification_trial(const Phantom& query, std::span<const Phantom> gallery, DeidMethod method,
                                 const AttackParams& params, Seed seed) {
  std::set<std::uint64_t> ids;
  std::optional<std::size_t> slot;
  for (std::size_t j = 0; j < gallery.size(); ++j) {
    if (!ids.insert(gallery[j].subject_id).second) {
      throw Error(ErrorCode::InvalidGallery, "subject " + std::to_string(gallery[j].subject_id) + " repeated");
    }
    if (gallery[j].subject_id == query.subject_id) slot = j;
  }
  if (!slot) throw Error(ErrorCode::InvalidGallery, "query is not in the gallery");

  const auto q = features_of(query.scan, params);
  std::vector<std::vector<double>> cand;
  for (std::size_t j = 0; j < gallery.size(); ++j) {
    const Volume y = deidentify(gallery[j].scan, gallery[j].brain, method, params.deid, derive_seed(seed, j));
    cand.push_back(features_of(y, params));
  }
  const std::size_t chosen = nearest_candidate(q, cand);
  return {method, chosen, *slot, chosen == *slot};
}

RankCurve rank_curve(std::span<const std::vector<double>> originals, std::span<const std::vector<double>> deidentified,
                     std::span<const std::size_t> queries, Seed seed) {
  const std::size_t n = originals.size();
  if (n < 10) throw Error(ErrorCode::InvalidGallery, "rank retrieval needs at least 10 subjects");
  if (deidentified.size() != n) throw Error(ErrorCode::DimMismatch, "originals and de-identified counts differ");
  if (queries.empty()) throw Error(ErrorCode::EmptyInput, "no queries");

  RankCurve rc;
  rc.ranks.reserve(queries.size());
  std::vector<double> dist(n);
  for (std::size_t t = 0; t < queries.size(); ++t) {
    const std::size_t c = queries[t];
    if (c >= n) throw Error(ErrorCode::IndexOutOfRange, "query index " + std::to_string(c));
    for (std::size_t j = 0; j < n; ++j) dist[j] = feature_distance(originals[c], deidentified[j]);
    const Seed ts = derive_seed(seed, t);
    const double key_c = uniform_at(ts, c);
    std::size_t rank = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == c) continue;
      if (dist[j] < dist[c] || (dist[j] == dist[c] && uniform_at(ts, j) < key_c)) ++rank;
    }
    rc.ranks.push_back(static_cast<double>(rank) / static_cast<double>(n - 1));
  }
  std::sort(rc.ranks.begin(), rc.ranks.end());
  rc.alpha.resize(kRankGridPoints);
  rc.top.resize(kRankGridPoints);
  for (std::size_t i = 0; i < kRankGridPoints; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(kRankGridPoints - 1);
    rc.alpha[i] = a;
    const auto hit = std::upper_bound(rc.ranks.begin(), rc.ranks.end(), a + 1e-12) - rc.ranks.begin();
    rc.top[i] = static_cast<double>(hit) / static_cast<double>(rc.ranks.size());
  }
  rc.ks = ks_statistic_uniform(rc.ranks);
  rc.ks_pvalue = kolmogorov_pvalue(rc.ks, rc.ranks.size());
  return rc;
}

RankCurve rank_retrieval(std::span<const Phantom> subjects, std::span<const std::size_t> queries, DeidMethod method,
                         const AttackParams& params, Seed seed) {
  if (subjects.size() < 10) throw Error(ErrorCode::InvalidGallery, "rank retrieval needs at least 10 subjects");
  std::vector<std::vector<double>> orig, deid;
  for (std::size_t j = 0; j < subjects.size(); ++j) {
    orig.push_back(features_of(subjects[j].scan, params));
    const Volume y = deidentify(subjects[j].scan, subjects[j].brain, method, params.deid, derive_seed(seed, j));
    deid.push_back(features_of(y, params));
  }
  return rank_curve(orig, deid, queries, derive_seed(seed, kRankTag));
}

const MethodReport& IdentificationReport::at(DeidMethod m) const {
  for (const auto& r : methods) {
    if (r.method == m) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "method " + std::string(to_string(m)) + " not in report");
}

IdentificationReport run_identification(const IdentificationConfig& cfg) {
  if (cfg.options < 2) throw Error(ErrorCode::InvalidGallery, "need at least two options per trial");
  if (cfg.subjects < std::max<std::size_t>(cfg.options, 10)) {
    throw Error(ErrorCode::InvalidGallery, "need at least max(options, 10) subjects");
  }
  if (cfg.trials == 0) throw Error(ErrorCode::InvalidCount, "trials must be positive");

  PhantomParams pp;
  pp.side = cfg.side;
  pp.vary_head_size = cfg.vary_head_size;
  std::vector<Phantom> subjects(cfg.subjects);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < cfg.subjects; ++i) {
    subjects[i] = generate_phantom(derive_seed(derive_seed(cfg.seed, kSubjectTag), i), pp);
  }
  std::vector<std::vector<double>> originals(cfg.subjects);
  for (std::size_t i = 0; i < cfg.subjects; ++i) originals[i] = features_of(subjects[i].scan, cfg.attack);

  // Trial plan, shared by all methods.
  SeedStream plan(derive_seed(cfg.seed, kPlanTag));
  std::vector<std::size_t> slots(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) slots[t] = t % cfg.options;
  fisher_yates_prefix(slots, slots.size(), plan);
  std::vector<std::vector<std::size_t>> galleries(cfg.trials);
  std::vector<std::size_t> pool(cfg.subjects);
  for (auto& g : galleries) {
    std::iota(pool.begin(), pool.end(), 0);
    fisher_yates_prefix(pool, cfg.options, plan);
    g.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cfg.options));
  }
  std::vector<std::size_t> rank_queries(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) rank_queries[t] = t % cfg.subjects;

  IdentificationReport report{cfg, {}};
  const Seed deid_root = derive_seed(cfg.seed, kDeidTag);
  for (DeidMethod m : cfg.methods) {
    MethodReport mr;
    mr.method = m;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<double>> deid(cfg.subjects);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < cfg.subjects; ++i) {
      const Volume y = deidentify(subjects[i].scan, subjects[i].brain, m, cfg.attack.deid, derive_seed(deid_root, i));
      deid[i] = features_of(y, cfg.attack);
    }
    mr.deid_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<double> outcomes(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto& g = galleries[t];
      std::vector<std::vector<double>> cand;
      cand.reserve(g.size());
      for (std::size_t s : g) cand.push_back(deid[s]);
      const std::size_t chosen = nearest_candidate(originals[g[slots[t]]], cand);
      outcomes[t] = chosen == slots[t] ? 1.0 : 0.0;
      mr.correct += chosen == slots[t];
    }
    mr.trials = cfg.trials;
    mr.rate = static_cast<double>(mr.correct) / static_cast<double>(mr.trials);
    mr.binomial_p = binomial_test_two_sided(mr.correct, mr.trials, 1.0 / static_cast<double>(cfg.options));
    mr.bootstrap = bootstrap_ci(outcomes, cfg.bootstrap_resamples, derive_seed(cfg.seed, kBootTag));
    mr.ranks = rank_curve(originals, deid, rank_queries, derive_seed(cfg.seed, kRankTag));
    report.methods.push_back(std::move(mr));
  }
  return report;
}

const SegmentationRow& SegmentationReport::at(DeidMethod m, SegRegion r, TissueClass c) const {
  for (const auto& row : rows) {
    if (row.method == m && row.region == r && row.tissue == c) return row;
  }
  throw Error(ErrorCode::InvalidArgument, "row not in report");
}

SegmentationReport run_segmentation(const SegmentationConfig& cfg) {
  if (cfg.subjects == 0) throw Error(ErrorCode::InvalidCount, "subjects must be positive");
  PhantomParams pp;
  pp.side = cfg.side;
  SegmentationReport report{cfg, {}};
  const Seed deid_root = derive_seed(cfg.seed, kDeidTag);
  for (DeidMethod m : cfg.methods) {
    for (SegRegion region : {SegRegion::BrainRestricted, SegRegion::WholeHead}) {
      for (TissueClass c : all_tissue_classes()) {
        report.rows.push_back({m, region, c, 0.0, 0.0, 1.0, 1.0});
      }
    }
  }
  for (std::size_t i = 0; i < cfg.subjects; ++i) {
    const Phantom ph = generate_phantom(derive_seed(derive_seed(cfg.seed, kSubjectTag), i), pp);
    for (DeidMethod m : cfg.methods) {
      const Volume y = deidentify(ph.scan, ph.brain, m, cfg.deid, derive_seed(deid_root, i));
      for (SegRegion region : {SegRegion::BrainRestricted, SegRegion::WholeHead}) {
        for (const ClassOverlap& co : segmentation_impact(ph.scan, y, ph.brain, region)) {
          for (auto& row : report.rows) {
            if (row.method != m || row.region != region || row.tissue != co.tissue) continue;
            row.dice += co.dice / static_cast<double>(cfg.subjects);
            row.iou += co.iou / static_cast<double>(cfg.subjects);
            row.dice_min = std::min(row.dice_min, co.dice);
            row.iou_min = std::min(row.iou_min, co.iou);
          }
        }
      }
    }
  }
  return report;
}

std::string to_json(const IdentificationReport& report, int indent) {
  using nlohmann::ordered_json;
  const auto& c = report.config;
  ordered_json j;
  j["config"] = {{"subjects", c.subjects}, {"trials", c.trials},      {"options", c.options},
                 {"side", c.side},         {"seed", c.seed},          {"delta", c.attack.delta},
                 {"view", to_string(c.attack.view)}, {"vary_head_size", c.vary_head_size}};
  ordered_json methods = ordered_json::array();
  for (const auto& m : report.methods) {
    methods.push_back({{"method", to_string(m.method)},
                       {"correct", m.correct},
                       {"trials", m.trials},
                       {"rate", m.rate},
                       {"binomial_p_vs_chance", m.binomial_p},
                       {"bootstrap_mean", m.bootstrap.mean},
                       {"bootstrap_sd", m.bootstrap.sd},
                       {"rank_ks", m.ranks.ks},
                       {"rank_ks_p", m.ranks.ks_pvalue},
                       {"rank_alpha", m.ranks.alpha},
                       {"rank_top", m.ranks.top},
                       {"deid_seconds", m.deid_seconds}});
  }
  j["methods"] = std::move(methods);
  return j.dump(indent);
}

std::string to_json(const SegmentationReport& report, int indent) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["config"] = {{"subjects", report.config.subjects}, {"side", report.config.side}, {"seed", report.config.seed}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", to_string(r.method)},
                    {"region", to_string(r.region)},
                    {"class", to_string(r.tissue)},
                    {"dice", r.dice},
                    {"iou", r.iou},
                    {"dice_min", r.dice_min},
                    {"iou_min", r.iou_min}});
  }
  j["table"] = std::move(rows);
  return j.dump(indent);
}

}  // namespace deid
