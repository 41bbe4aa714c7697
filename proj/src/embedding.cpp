#include "natl/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace natl {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in (0, 1].
  double unit() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> to_vector(const SemanticVector& v) {
  auto c = v.components();
  return {c.begin(), c.end()};
}

constexpr std::string_view kVariableKey = "$";

}  // namespace

SemanticVector SemanticVector::normalized(std::vector<double> components) {
  double norm2 = 0.0;
  for (double x : components) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite vector component");
    norm2 += x * x;
  }
  double norm = std::sqrt(norm2);
  if (components.empty() || !(norm > 1e-300)) {
    throw std::invalid_argument("cannot normalize a zero vector");
  }
  for (double& x : components) x /= norm;
  return SemanticVector(std::move(components));
}

SemanticVector SemanticVector::negated() const {
  std::vector<double> c = components_;
  for (double& x : c) x = -x;
  return SemanticVector(std::move(c));
}

double similarity(const SemanticVector& a, const SemanticVector& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dimension()) +
                                " vs " + std::to_string(b.dimension()));
  }
  return std::clamp(dot(a.components(), b.components()), -1.0, 1.0);
}

SemanticVector embed(const Term& t, const EmbeddingProvider& p) {
  switch (t.kind()) {
    case TermKind::basic:
      return p.embed_basic(t.symbol());
    case TermKind::variable:
      return p.embed_variable();
    case TermKind::compound: {
      std::vector<SemanticVector> elements;
      elements.reserve(t.elements().size());
      for (const auto& e : t.elements()) elements.push_back(embed(e, p));
      return p.combine_compound(embed(t.relation(), p), elements);
    }
    case TermKind::statement:
      return p.combine_statement(p.embed_copula(t.copula()), embed(t.left(), p),
                                 embed(t.right(), p));
    case TermKind::linkage:
      return p.combine_linkage(p.embed_copula(t.copula()), embed(t.left(), p),
                               embed(t.right(), p));
  }
  throw std::logic_error("unreachable term kind");
}

SynonymTable SynonymTable::parse(std::string_view text) {
  SynonymTable table;
  std::set<std::string> clustered;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    bool antonym = false;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '!') {
      antonym = true;
      line[first] = ' ';
    }
    std::istringstream words(line);
    std::vector<std::string> symbols;
    for (std::string w; words >> w;) {
      if (!is_identifier(w)) {
        throw std::invalid_argument("synonyms line " + std::to_string(line_number) +
                                    ": invalid symbol '" + w + "'");
      }
      symbols.push_back(w);
    }
    if (antonym) {
      if (symbols.size() != 2) {
        throw std::invalid_argument("synonyms line " + std::to_string(line_number) +
                                    ": an antonym line needs exactly two symbols");
      }
      table.antonyms.emplace_back(symbols[0], symbols[1]);
      continue;
    }
    for (const auto& s : symbols) {
      if (!clustered.insert(s).second) {
        throw std::invalid_argument("synonyms line " + std::to_string(line_number) +
                                    ": symbol '" + s + "' already belongs to a cluster");
      }
    }
    table.clusters.push_back(std::move(symbols));
  }
  return table;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open synonyms file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ToyProvider::ToyProvider() : ToyProvider(Options{}) {}

ToyProvider::ToyProvider(Options options) : options_(std::move(options)) {
  const std::size_t d = options_.dimension;
  if (d < 2) throw std::invalid_argument("embedding dimension must be at least 2");
  const double s = options_.cluster_similarity;
  if (!(s > 0.0 && s <= 1.0)) {
    throw std::invalid_argument("cluster similarity must be in (0, 1]");
  }

  for (const auto& cluster : options_.synonyms.clusters) {
    if (cluster.empty()) continue;
    if (cluster.size() + 1 > d) {
      throw std::invalid_argument("synonym cluster larger than the embedding dimension");
    }
    // Orthonormal basis: base first, then one direction per member.
    std::vector<std::vector<double>> basis;
    auto orthonormal = [&](std::vector<double> v) {
      for (const auto& b : basis) {
        double p = dot(v, b);
        for (std::size_t i = 0; i < d; ++i) v[i] -= p * b[i];
      }
      double n = std::sqrt(dot(v, v));
      if (!(n > 1e-9)) throw std::logic_error("degenerate synonym basis");
      for (double& x : v) x /= n;
      return v;
    };
    basis.push_back(orthonormal(raw("cluster:" + cluster.front())));
    const auto base = basis.front();
    for (const auto& member : cluster) {
      auto u = orthonormal(raw(member));
      basis.push_back(u);
      std::vector<double> v(d);
      for (std::size_t i = 0; i < d; ++i) {
        v[i] = std::sqrt(s) * base[i] + std::sqrt(1.0 - s) * u[i];
      }
      fixed_.insert_or_assign(member, SemanticVector::normalized(std::move(v)));
    }
  }

  std::set<std::string> targets;
  for (const auto& [source, target] : options_.synonyms.antonyms) {
    if (fixed_.count(target) != 0 || !targets.insert(target).second) {
      throw std::invalid_argument("antonym target '" + target +
                                  "' already has a fixed vector");
    }
  }
  for (const auto& [source, target] : options_.synonyms.antonyms) {
    if (targets.count(source) != 0) {
      throw std::invalid_argument("antonym source '" + source +
                                  "' is itself an antonym target");
    }
  }
  for (const auto& [source, target] : options_.synonyms.antonyms) {
    fixed_.insert_or_assign(target, embed_basic(source).negated());
  }
}

std::vector<double> ToyProvider::raw(std::string_view key) const {
  SplitMix64 seed_mix(options_.seed);
  SplitMix64 rng(fnv1a(key) ^ seed_mix.next());
  std::vector<double> v(options_.dimension);
  for (std::size_t i = 0; i < v.size(); i += 2) {
    // Box-Muller.
    double r = std::sqrt(-2.0 * std::log(rng.unit()));
    double theta = 2.0 * std::numbers::pi * rng.unit();
    v[i] = r * std::cos(theta);
    if (i + 1 < v.size()) v[i + 1] = r * std::sin(theta);
  }
  return v;
}

SemanticVector ToyProvider::embed_basic(std::string_view symbol) const {
  if (auto it = fixed_.find(symbol); it != fixed_.end()) return it->second;
  return SemanticVector::normalized(raw(symbol));
}

SemanticVector ToyProvider::embed_variable() const {
  return SemanticVector::normalized(raw(kVariableKey));
}

SemanticVector ToyProvider::embed_copula(const Copula& copula) const {
  if (!copula.negates.empty()) {
    return SemanticVector::normalized(raw("copula:" + copula.negates)).negated();
  }
  return SemanticVector::normalized(raw("copula:" + copula.id));
}

std::vector<std::size_t> ToyProvider::permutation(char family, std::size_t position) const {
  std::string key = "perm:";
  key += family;
  key += ':';
  key += std::to_string(position);
  SplitMix64 seed_mix(options_.seed);
  SplitMix64 rng(fnv1a(key) ^ seed_mix.next());
  std::vector<std::size_t> p(options_.dimension);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = p.size() - 1; i > 0; --i) {
    std::swap(p[i], p[rng.next() % (i + 1)]);
  }
  return p;
}

SemanticVector ToyProvider::mix(char family, const SemanticVector& head,
                                std::span<const SemanticVector> children) const {
  std::vector<double> sum = to_vector(head);
  for (std::size_t pos = 0; pos < children.size(); ++pos) {
    const auto& child = children[pos];
    if (child.dimension() != sum.size()) {
      throw std::invalid_argument("dimension mismatch in composition");
    }
    auto perm = permutation(family, pos + 1);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[perm[i]] += child[i];
  }
  return SemanticVector::normalized(std::move(sum));
}

SemanticVector ToyProvider::combine_compound(const SemanticVector& relation,
                                             std::span<const SemanticVector> elements) const {
  return mix('C', relation, elements);
}

SemanticVector ToyProvider::combine_statement(const SemanticVector& copula,
                                              const SemanticVector& left,
                                              const SemanticVector& right) const {
  const SemanticVector children[] = {left, right};
  return mix('S', copula, children);
}

SemanticVector ToyProvider::combine_linkage(const SemanticVector& copula,
                                            const SemanticVector& left,
                                            const SemanticVector& right) const {
  const SemanticVector children[] = {left, right};
  return mix('L', copula, children);
}

}  // namespace natl
