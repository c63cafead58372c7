#include "phonoscope/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phonoscope/error.hpp"

namespace phonoscope {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double clamp_db(double v) { return std::clamp(v, -kDbClamp, kDbClamp); }

// Ratios are floored relative to the estimate energy so that scaling the
// estimate cancels exactly instead of being skewed by an absolute epsilon.
double ratio_db(double num, double den, double scale) {
  const double floor = kEnergyFloor * (scale > 0.0 ? scale : 1.0);
  return clamp_db(10.0 * std::log10((num + floor) / (den + floor)));
}

}  // namespace

SegmentDecomposition si_decompose(std::span<const double> estimate,
                                  std::span<const double> ref_speech,
                                  std::span<const double> ref_noise) {
  if (estimate.size() < 2)
    fail(ErrorKind::InvalidArgument, "decomposition needs at least 2 samples");
  if (estimate.size() != ref_speech.size() || estimate.size() != ref_noise.size())
    fail(ErrorKind::InvalidArgument,
         "decomposition inputs have different lengths (" + std::to_string(estimate.size()) +
             ", " + std::to_string(ref_speech.size()) + ", " + std::to_string(ref_noise.size()) +
             ")");

  const double e_ss = dot(ref_speech, ref_speech);
  if (e_ss <= 0.0)
    fail(ErrorKind::InvalidArgument, "speech reference has zero energy");
  const double e_nn = dot(ref_noise, ref_noise);
  const double e_sn = dot(ref_speech, ref_noise);
  const double b_s = dot(estimate, ref_speech);
  const double b_n = dot(estimate, ref_noise);
  const double e_est = dot(estimate, estimate);

  SegmentDecomposition d;
  d.estimate_energy = e_est;
  d.alpha = b_s / e_ss;
  d.e_target = d.alpha * b_s;  // = alpha^2 * e_ss

  const double det = e_ss * e_nn - e_sn * e_sn;
  const double det_norm = e_nn > 0.0 ? det / (e_ss * e_nn) : 0.0;
  if (e_nn <= 0.0 || std::abs(det_norm) < 1e-10) {
    // near-collinear references: fold everything outside span{s} into artifacts
    d.collinear_fallback = true;
    d.c_speech = d.alpha;
    d.c_noise = 0.0;
    d.e_interf = 0.0;
    d.e_artif = std::max(0.0, e_est - d.e_target);
    return d;
  }

  d.c_speech = (b_s * e_nn - b_n * e_sn) / det;
  d.c_noise = (b_n * e_ss - b_s * e_sn) / det;
  const double e_proj = d.c_speech * b_s + d.c_noise * b_n;  // ||p_sn||^2 via c'Gc = c'b
  d.e_interf = std::max(0.0, e_proj - d.e_target);
  d.e_artif = std::max(0.0, e_est - e_proj);
  return d;
}

double sir_in(std::span<const double> speech_image_seg,
              std::span<const double> noise_image_seg) {
  if (speech_image_seg.size() != noise_image_seg.size())
    fail(ErrorKind::InvalidArgument, "sir_in segments have different lengths");
  const double e_s = energy(speech_image_seg);
  const double e_n = energy(noise_image_seg);
  return clamp_db(10.0 * std::log10((e_s + kEnergyFloor) / (e_n + kEnergyFloor)));
}

double sir_out(const SegmentDecomposition& d) {
  return ratio_db(d.e_target, d.e_interf, d.estimate_energy);
}

double sar_out(const SegmentDecomposition& d) {
  return ratio_db(d.e_target + d.e_interf, d.e_artif, d.estimate_energy);
}

namespace {

// integer-shift alignment search over +/-10 ms
std::ptrdiff_t best_shift(std::span<const double> estimate, std::span<const double> reference,
                          int rate) {
  const std::ptrdiff_t max_shift = std::ptrdiff_t(0.010 * rate);
  const std::ptrdiff_t n = std::ptrdiff_t(std::min(estimate.size(), reference.size()));
  std::ptrdiff_t best = 0;
  double best_corr = -1.0;
  for (std::ptrdiff_t shift = -max_shift; shift <= max_shift; ++shift) {
    double corr = 0.0, ee = 0.0, rr = 0.0;
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, -shift);
         i < n - std::max<std::ptrdiff_t>(0, shift); ++i) {
      const double e = estimate[std::size_t(i + shift)];
      const double r = reference[std::size_t(i)];
      corr += e * r;
      ee += e * e;
      rr += r * r;
    }
    const double den = std::sqrt(ee * rr);
    const double score = den > 0.0 ? std::abs(corr) / den : 0.0;
    if (score > best_corr) {
      best_corr = score;
      best = shift;
    }
  }
  return best;
}

}  // namespace

UtteranceEvaluation evaluate_utterance(const MixtureBundle& bundle, const Waveform& enhanced,
                                       const AlignmentTrack& track, const CategoryMap& map,
                                       const UtteranceMeta& meta, const EvalOptions& options) {
  enhanced.validate();
  if (enhanced.num_channels() != 1)
    fail(ErrorKind::InvalidArgument,
         "enhanced signal must be single-channel, got " +
             std::to_string(enhanced.num_channels()) + " channels");
  if (enhanced.sample_rate != bundle.mixture.sample_rate)
    fail(ErrorKind::InvalidArgument, "enhanced sample rate differs from the mixture");
  if (options.ref_channel < 0 ||
      std::size_t(options.ref_channel) >= bundle.speech_image.num_channels())
    fail(ErrorKind::InvalidArgument,
         "reference channel " + std::to_string(options.ref_channel) + " out of range");

  const int rate = bundle.mixture.sample_rate;
  const auto& s_full = bundle.speech_image.channels[std::size_t(options.ref_channel)];
  const auto& n_full = bundle.noise_image.channels[std::size_t(options.ref_channel)];
  std::vector<double> est = enhanced.channels[0];

  const std::size_t ref_len = s_full.size();
  const std::size_t est_len = est.size();
  const std::size_t diff = est_len > ref_len ? est_len - ref_len : ref_len - est_len;
  if (diff > options.delay_tolerance)
    fail(ErrorKind::InvalidArgument,
         "enhanced length " + std::to_string(est_len) + " differs from reference length " +
             std::to_string(ref_len) + " by more than the delay tolerance of " +
             std::to_string(options.delay_tolerance) + " samples");

  if (options.xcorr_align) {
    const std::ptrdiff_t shift = best_shift(est, s_full, rate);
    if (shift > 0)
      est.erase(est.begin(), est.begin() + shift);
    else if (shift < 0)
      est.insert(est.begin(), std::size_t(-shift), 0.0);
  }

  const std::size_t len = std::min(ref_len, est.size());
  est.resize(len, 0.0);
  const std::span<const double> s(s_full.data(), len);
  const std::span<const double> n(n_full.data(), len);

  const SegmentRanges ranges = to_sample_ranges(track, rate, options.min_duration_s);
  for (const SampleRange& r : ranges.included)
    if (r.end > len)
      fail(ErrorKind::InvalidArgument,
           "alignment interval '" + r.label + "' ends at sample " + std::to_string(r.end) +
               ", beyond the signal length " + std::to_string(len));

  UtteranceEvaluation out;
  out.excluded = ranges.excluded;

  const auto make_record = [&](RecordLevel level) {
    EvaluationRecord rec;
    rec.utterance_id = meta.utterance_id;
    rec.gender = meta.gender;
    rec.algorithm_id = meta.algorithm_id;
    rec.snr_db = meta.snr_db;
    rec.level = level;
    return rec;
  };

  // utterance-level record
  {
    std::vector<double> est_u, s_u, n_u;
    std::span<const double> est_span(est), s_span(s), n_span(n);
    if (options.utterance_excludes_silence && !ranges.included.empty()) {
      for (const SampleRange& r : ranges.included) {
        est_u.insert(est_u.end(), est.begin() + r.begin, est.begin() + r.end);
        s_u.insert(s_u.end(), s.begin() + r.begin, s.begin() + r.end);
        n_u.insert(n_u.end(), n.begin() + r.begin, n.begin() + r.end);
      }
      est_span = est_u;
      s_span = s_u;
      n_span = n_u;
    }
    const SegmentDecomposition d = si_decompose(est_span, s_span, n_span);
    if (d.collinear_fallback) ++out.collinear_segments;
    EvaluationRecord rec = make_record(RecordLevel::Utterance);
    rec.segment_index = -1;
    rec.sir_in = sir_in(s_span, n_span);
    rec.sir_out = sir_out(d);
    rec.sar_out = sar_out(d);
    rec.duration_s = double(est_span.size()) / rate;
    out.records.push_back(std::move(rec));
  }

  int seg_index = 0;
  for (const SampleRange& r : ranges.included) {
    const std::span<const double> est_seg(est.data() + r.begin, r.end - r.begin);
    const std::span<const double> s_seg(s.data() + r.begin, r.end - r.begin);
    const std::span<const double> n_seg(n.data() + r.begin, r.end - r.begin);
    const SegmentDecomposition d = si_decompose(est_seg, s_seg, n_seg);
    if (d.collinear_fallback) ++out.collinear_segments;

    EvaluationRecord rec = make_record(RecordLevel::Phoneme);
    rec.segment_index = seg_index++;
    rec.label = r.label;
    const auto entry = map.lookup(r.label);
    if (entry.has_value()) {
      rec.category = entry->category;
    } else {
      rec.category = "unmapped";
      ++out.unmapped_labels;
    }
    rec.sir_in = sir_in(s_seg, n_seg);
    rec.sir_out = sir_out(d);
    rec.sar_out = sar_out(d);
    rec.duration_s = double(r.end - r.begin) / rate;
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace phonoscope
