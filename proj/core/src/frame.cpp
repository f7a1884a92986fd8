#include "srkit/frame.hpp"

#include "srkit/error.hpp"
#include "srkit/linalg.hpp"
#include "srkit/parallel.hpp"

#include <random>

namespace srkit {

SRFrame::SRFrame(std::string name, std::vector<VectorField> fields)
    : name_(std::move(name)), dim_(fields.empty() ? 0 : fields.front().dim()), fields_(std::move(fields)) {
  if (fields_.empty()) throw Error("a frame needs at least one vector field");
  if (dim_ == 0) throw Error("a frame needs positive dimension");
  for (const auto& x : fields_)
    if (x.dim() != dim_) throw DimensionMismatch("frame fields live in different dimensions");
}

SRFrame SRFrame::centred_at(std::span<const Rational> x) const {
  if (x.size() != dim_) throw DimensionMismatch("base point has wrong dimension");
  std::vector<VectorField> shifted;
  for (const auto& f : fields_) shifted.push_back(f.translate(x));
  return SRFrame(name_, std::move(shifted));
}

std::vector<std::vector<Rational>> SRFrame::matrix_at(std::span<const Rational> x) const {
  std::vector<std::vector<Rational>> m(dim_, std::vector<Rational>(fields_.size()));
  for (std::size_t j = 0; j < fields_.size(); ++j) {
    auto v = fields_[j].at(x);
    for (std::size_t i = 0; i < dim_; ++i) m[i][j] = v[i];
  }
  return m;
}

std::string to_string(const BracketWord& w) {
  if (w.size() == 1) return "X" + std::to_string(w[0] + 1);
  std::string inner = to_string(BracketWord(w.begin() + 1, w.end()));
  return "[X" + std::to_string(w[0] + 1) + "," + inner + "]";
}

const VectorField& BracketCache::field(const BracketWord& word) {
  if (word.empty()) throw Error("empty bracket word");
  if (auto it = cache_.find(word); it != cache_.end()) return it->second;
  VectorField value = word.size() == 1 ? frame_[static_cast<std::size_t>(word[0])]
                                       : lie_bracket(frame_[static_cast<std::size_t>(word[0])],
                                                     field(BracketWord(word.begin() + 1, word.end())));
  return cache_.emplace(word, std::move(value)).first->second;
}

std::vector<BracketWord> words_of_length(std::size_t letters, std::size_t k) {
  std::vector<BracketWord> out;
  BracketWord w(k, 0);
  if (k == 0 || letters == 0) return out;
  while (true) {
    out.push_back(w);
    std::size_t i = k;
    while (i > 0 && w[i - 1] == static_cast<int>(letters) - 1) w[--i] = 0;
    if (i == 0) return out;
    ++w[i - 1];
  }
}

namespace {

struct LevelFields {
  std::vector<std::vector<BracketWord>> words;
  std::vector<std::vector<VectorField>> fields;
};

LevelFields bracket_table(const SRFrame& f, std::size_t depth) {
  BracketCache cache(f);
  LevelFields t;
  for (std::size_t k = 1; k <= depth; ++k) {
    t.words.push_back(words_of_length(f.size(), k));
    std::vector<VectorField> level;
    for (const auto& w : t.words.back()) level.push_back(cache.field(w));
    t.fields.push_back(std::move(level));
  }
  return t;
}

Filtration filtration_from_table(const SRFrame& f, const LevelFields& t, std::span<const Rational> x,
                                 std::size_t max_depth) {
  Filtration out;
  out.base.assign(x.begin(), x.end());
  EchelonBasis basis(f.dim());
  std::vector<BracketWord> chosen;
  for (std::size_t k = 1; k <= max_depth; ++k) {
    for (std::size_t i = 0; i < t.words[k - 1].size() && basis.rank() < f.dim(); ++i) {
      const auto& field = t.fields[k - 1][i];
      if (field.is_zero()) continue;
      if (basis.add(field.at(x))) chosen.push_back(t.words[k - 1][i]);
    }
    out.dims.push_back(basis.rank());
    out.bases.push_back(chosen);
    if (basis.rank() == f.dim()) {
      out.bracket_generating = true;
      out.step = k;
      return out;
    }
  }
  out.depth_limited = true;
  out.step = max_depth;
  return out;
}

}  // namespace

Filtration filtration_at(const SRFrame& f, std::span<const Rational> x, std::size_t max_depth,
                         bool require_generating) {
  if (max_depth < 1) throw Error("max_depth must be at least 1");
  if (x.size() != f.dim()) throw DimensionMismatch("base point has wrong dimension");
  Filtration out;
  out.base.assign(x.begin(), x.end());
  BracketCache cache(f);
  EchelonBasis basis(f.dim());
  std::vector<BracketWord> chosen;
  for (std::size_t k = 1; k <= max_depth; ++k) {
    for (const auto& w : words_of_length(f.size(), k)) {
      if (basis.rank() == f.dim()) break;
      const auto& field = cache.field(w);
      if (!field.is_zero() && basis.add(field.at(x))) chosen.push_back(w);
    }
    out.dims.push_back(basis.rank());
    out.bases.push_back(chosen);
    if (basis.rank() == f.dim()) {
      out.bracket_generating = true;
      out.step = k;
      return out;
    }
  }
  out.depth_limited = true;
  out.step = max_depth;
  if (require_generating)
    throw Error("not bracket-generating within max_depth " + std::to_string(max_depth) + " at (" + to_string(out.base) +
                ")");
  return out;
}

bool is_bracket_generating(const SRFrame& f, std::span<const Rational> x, std::size_t max_depth) {
  return filtration_at(f, x, max_depth).bracket_generating;
}

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::regular:
      return "regular";
    case PointClass::singular:
      return "singular";
    case PointClass::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Classification classify_point(const SRFrame& f, std::span<const Rational> x, const Rational& probe_radius,
                              std::size_t probe_count, std::uint64_t seed, std::size_t max_depth) {
  if (probe_count < 1) throw Error("probe_count must be at least 1");
  if (probe_radius <= 0) throw Error("probe radius must be positive");
  if (max_depth == 0) max_depth = 4;
  Classification out;
  const auto table = bracket_table(f, max_depth);
  out.at_point = filtration_from_table(f, table, x, max_depth);

  constexpr long kGrid = 1024;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> step(-kGrid, kGrid);
  for (std::size_t k = 0; k < probe_count; ++k) {
    Point p(x.begin(), x.end());
    for (auto& c : p) c += probe_radius * ratio(step(rng), kGrid);
    out.probes.push_back(std::move(p));
  }

  std::vector<Filtration> results(probe_count);
  parallel_for(probe_count, [&](std::size_t k) { results[k] = filtration_from_table(f, table, out.probes[k], max_depth); });

  for (std::size_t k = 0; k < probe_count; ++k)
    if (results[k].dims != out.at_point.dims) {
      out.verdict = PointClass::singular;
      out.differing_probe = k;
      out.differing_filtration = results[k];
      return out;
    }
  // Equal depth-limited filtrations say nothing about the ranks beyond max_depth.
  out.verdict = out.at_point.depth_limited ? PointClass::inconclusive : PointClass::regular;
  return out;
}

VectorField gradient(const SRFrame& f, const Polynomial& u) {
  VectorField g(f.dim());
  for (const auto& x : f.fields()) g += x.apply(u) * x;
  return g;
}

Polynomial grad_norm_sq(const SRFrame& f, const Polynomial& u) {
  Polynomial s(f.dim());
  for (const auto& x : f.fields()) {
    Polynomial xu = x.apply(u);
    s += xu * xu;
  }
  return s;
}

RationalFunction grad_inner(const SRFrame& f, const RationalFunction& u, const RationalFunction& v) {
  RationalFunction s(f.dim());
  for (const auto& x : f.fields()) s += x.apply(u) * x.apply(v);
  return s;
}

RationalFunction sub_laplacian(const SRFrame& f, const RationalFunction& u, const Density& m) {
  if (u.dim() != f.dim()) throw DimensionMismatch("function and frame dimensions differ");
  RationalFunction s(f.dim());
  for (const auto& x : f.fields()) {
    RationalFunction xu = x.apply(u);
    s += x.apply(xu);
    RationalFunction div = divergence(x, m);
    if (!div.is_zero()) s += xu * div;
  }
  return s;
}

MinimalControl minimal_control(const SRFrame& f, std::span<const Rational> x, const std::vector<Rational>& v) {
  if (v.size() != f.dim()) throw DimensionMismatch("tangent vector has wrong dimension");
  auto m = f.matrix_at(x);
  auto u = least_norm_solution(m, f.size(), v);
  if (!u) throw Error("not horizontal: vector is outside the distribution at (" + to_string(Point(x.begin(), x.end())) + ")");
  MinimalControl out;
  out.norm_sq = dot(*u, *u);
  out.control = std::move(*u);
  return out;
}

Rational frame_inner(const SRFrame& f, std::span<const Rational> x, const std::vector<Rational>& v,
                     const std::vector<Rational>& w) {
  return dot(minimal_control(f, x, v).control, minimal_control(f, x, w).control);
}

Rational hamiltonian(const SRFrame& f, std::span<const Rational> x, const std::vector<Rational>& covector) {
  if (covector.size() != f.dim()) throw DimensionMismatch("covector has wrong dimension");
  Rational h = 0;
  for (const auto& field : f.fields()) {
    Rational pairing = dot(covector, field.at(x));
    h += pairing * pairing;
  }
  return h / 2;
}

std::vector<Rational> sharp(const SRFrame& f, std::span<const Rational> x, const std::vector<Rational>& covector) {
  if (covector.size() != f.dim()) throw DimensionMismatch("covector has wrong dimension");
  std::vector<Rational> out(f.dim(), Rational(0));
  for (const auto& field : f.fields()) {
    auto value = field.at(x);
    Rational pairing = dot(covector, value);
    for (std::size_t i = 0; i < f.dim(); ++i) out[i] += pairing * value[i];
  }
  return out;
}

}  // namespace srkit
