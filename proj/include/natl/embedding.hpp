#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "natl/copula.hpp"
#include "natl/term.hpp"

namespace natl {

/// Unit-norm vector of fixed dimension.
class SemanticVector {
 public:
  /// Normalizes `components`. Throws std::invalid_argument on a zero or
  /// non-finite input.
  static SemanticVector normalized(std::vector<double> components);

  std::size_t dimension() const { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }
  std::span<const double> components() const { return components_; }
  SemanticVector negated() const;

  friend bool operator==(const SemanticVector&, const SemanticVector&) = default;

 private:
  explicit SemanticVector(std::vector<double> c) : components_(std::move(c)) {}
  std::vector<double> components_;
};

/// Cosine similarity clamped to [-1, 1]. Throws std::invalid_argument when
/// the dimensions differ.
double similarity(const SemanticVector& a, const SemanticVector& b);

/// Supplies the basic and copula vectors and the three composition
/// functions. Implementations must be deterministic and immutable.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dimension() const = 0;
  virtual SemanticVector embed_basic(std::string_view symbol) const = 0;
  virtual SemanticVector embed_variable() const = 0;
  virtual SemanticVector embed_copula(const Copula& copula) const = 0;
  virtual SemanticVector combine_compound(const SemanticVector& relation,
                                          std::span<const SemanticVector> elements) const = 0;
  virtual SemanticVector combine_statement(const SemanticVector& copula,
                                           const SemanticVector& left,
                                           const SemanticVector& right) const = 0;
  virtual SemanticVector combine_linkage(const SemanticVector& copula,
                                         const SemanticVector& left,
                                         const SemanticVector& right) const = 0;
};

SemanticVector embed(const Term& t, const EmbeddingProvider& provider);

/// Synonym clusters and antonym pairs for the toy provider. File format:
/// one cluster per line (symbols separated by whitespace), antonym lines
/// start with `!` and hold exactly two symbols, `#` starts a comment.
struct SynonymTable {
  std::vector<std::vector<std::string>> clusters;
  std::vector<std::pair<std::string, std::string>> antonyms;

  /// Throws std::invalid_argument on malformed lines or a symbol listed in
  /// two clusters.
  static SynonymTable parse(std::string_view text);
  static SynonymTable load(const std::filesystem::path& path);
};

/// Closed-form deterministic provider. Basic vectors come from a seeded
/// hash of the symbol; cluster members get pairwise similarity exactly
/// `cluster_similarity`; antonym targets are the negated source vector.
class ToyProvider final : public EmbeddingProvider {
 public:
  struct Options {
    std::size_t dimension = 64;
    std::uint64_t seed = 0;
    double cluster_similarity = 0.95;
    SynonymTable synonyms;
  };

  ToyProvider();
  explicit ToyProvider(Options options);

  std::size_t dimension() const override { return options_.dimension; }
  SemanticVector embed_basic(std::string_view symbol) const override;
  SemanticVector embed_variable() const override;
  SemanticVector embed_copula(const Copula& copula) const override;
  SemanticVector combine_compound(const SemanticVector& relation,
                                  std::span<const SemanticVector> elements) const override;
  SemanticVector combine_statement(const SemanticVector& copula,
                                   const SemanticVector& left,
                                   const SemanticVector& right) const override;
  SemanticVector combine_linkage(const SemanticVector& copula,
                                 const SemanticVector& left,
                                 const SemanticVector& right) const override;

  const Options& options() const { return options_; }

 private:
  std::vector<double> raw(std::string_view key) const;
  std::vector<std::size_t> permutation(char family, std::size_t position) const;
  SemanticVector mix(char family, const SemanticVector& head,
                     std::span<const SemanticVector> children) const;

  Options options_;
  std::map<std::string, SemanticVector, std::less<>> fixed_;
};

}  // namespace natl
