#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace pir {

// Exact per-server communication accounting for one protocol run. Counts
// declared bit lengths, never padded byte lengths.
struct TranscriptReport {
  std::vector<uint64_t> upload_bits;
  std::vector<uint64_t> download_bits;

  uint64_t total_upload() const {
    return std::accumulate(upload_bits.begin(), upload_bits.end(),
                           uint64_t{0});
  }
  uint64_t total_download() const {
    return std::accumulate(download_bits.begin(), download_bits.end(),
                           uint64_t{0});
  }

  bool operator==(const TranscriptReport&) const = default;
};

}  // namespace pir
