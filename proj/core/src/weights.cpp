#include "srkit/weights.hpp"

#include <charconv>
#include <string>

namespace srkit {

WeightVector::WeightVector(std::vector<int> w) : w_(std::move(w)) {
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (w_[i] < 1) throw Error("weights must be positive integers");
    if (i > 0 && w_[i] < w_[i - 1]) throw Error("weights must be non-decreasing");
  }
}

int WeightVector::degree_of(const MultiIndex& mu) const {
  if (mu.size() != w_.size()) throw DimensionMismatch("multi-index length does not match weight vector");
  int d = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) d += mu[i] * w_[i];
  return d;
}

WeightVector parse_weights(std::string_view text) {
  std::vector<int> w;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || ptr != piece.data() + piece.size())
      throw Error("malformed weight list '" + std::string(text) + "'");
    w.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return WeightVector(std::move(w));
}

}  // namespace srkit
