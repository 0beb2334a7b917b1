#include "motionsplice/corpus_stats.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "motionsplice/error.h"

namespace motionsplice {
namespace {

template <typename T>
double median_of(std::vector<T> values) {
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) {
    return static_cast<double>(values[mid]);
  }
  return 0.5 * (static_cast<double>(values[mid - 1]) + static_cast<double>(values[mid]));
}

}  // namespace

std::size_t count_words(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  for (const char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_word) {
      ++words;
    }
    in_word = !space;
  }
  return words;
}

CorpusStats corpus_stats(std::span<const AnnotatedMotion> corpus,
                         std::size_t histogram_bin_frames) {
  if (histogram_bin_frames == 0) {
    throw InvalidArgument("histogram bin width must be positive");
  }
  CorpusStats s;
  s.n_motions = corpus.size();
  if (corpus.empty()) {
    return s;
  }
  std::vector<std::size_t> frames;
  std::vector<std::size_t> words;
  std::map<std::size_t, std::size_t> frame_counts;
  s.min_duration_s = std::numeric_limits<double>::infinity();
  for (const auto& clip : corpus) {
    const MotionSequence& m = clip.motion();
    const std::size_t f = m.frame_count();
    frames.push_back(f);
    ++frame_counts[f];
    s.total_frames += f;
    const double seconds = duration_seconds(m);
    s.total_hours += seconds / 3600.0;
    s.max_duration_s = std::max(s.max_duration_s, seconds);
    s.min_duration_s = std::min(s.min_duration_s, seconds);
    ++s.frame_histogram[(f / histogram_bin_frames) * histogram_bin_frames];

    std::size_t w = 0;
    for (const auto& seg : clip.script().segments()) {
      w += count_words(seg.text);
    }
    words.push_back(w);
    ++s.n_texts;
    ++s.actions_per_sequence[clip.script().size()];
  }
  s.mean_frames = static_cast<double>(s.total_frames) / static_cast<double>(s.n_motions);
  s.median_frames = median_of(frames);
  // Smallest length among the most frequent ones.
  std::size_t best = 0;
  for (const auto& [length, count] : frame_counts) {
    if (count > best) {
      best = count;
      s.mode_frames = length;
    }
  }
  double word_sum = 0.0;
  for (const std::size_t w : words) {
    word_sum += static_cast<double>(w);
  }
  s.words_mean = word_sum / static_cast<double>(words.size());
  s.words_median = median_of(words);
  return s;
}

double implied_mean_frames(std::size_t n_motions, double total_hours, double fps) {
  if (n_motions == 0) {
    throw InvalidArgument("implied mean needs at least one motion");
  }
  return total_hours * 3600.0 * fps / static_cast<double>(n_motions);
}

}  // namespace motionsplice
