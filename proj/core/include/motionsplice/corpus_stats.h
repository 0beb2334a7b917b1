#pragma once

#include <cstddef>
#include <map>
#include <span>

#include "motionsplice/timed_script.h"

namespace motionsplice {

// Dataset-level summary in the shape of a motion-language dataset comparison
// table. A "text" is the full script of one motion; its word count is the sum
// of whitespace-separated tokens over all segments.
struct CorpusStats {
  std::size_t n_motions = 0;
  std::size_t n_texts = 0;
  std::size_t total_frames = 0;
  double total_hours = 0.0;
  double max_duration_s = 0.0;
  double min_duration_s = 0.0;
  double mean_frames = 0.0;
  double median_frames = 0.0;
  std::size_t mode_frames = 0;
  // Bucket lower edge (multiple of the bin width) -> motions in that bucket.
  std::map<std::size_t, std::size_t> frame_histogram;
  double words_mean = 0.0;
  double words_median = 0.0;
  // Segment count -> motions with that many segments.
  std::map<std::size_t, std::size_t> actions_per_sequence;
};

CorpusStats corpus_stats(std::span<const AnnotatedMotion> corpus,
                         std::size_t histogram_bin_frames = 50);

std::size_t count_words(std::string_view text);

// Mean clip length implied by a dataset's headline numbers:
// total_hours * 3600 * fps / n_motions.
double implied_mean_frames(std::size_t n_motions, double total_hours, double fps);

}  // namespace motionsplice
