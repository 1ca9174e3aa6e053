#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wmlab/genmodel.hpp"
#include "wmlab/minsolve.hpp"

namespace wmlab {

using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& q);
// Exact value of a decimal literal such as "0.2" or "1/3".
Rational parse_rational(const std::string& text);
// Shortest decimal whose double is exactly v (so 0.3 -> 3/10), else the exact binary value.
Rational decimal_rational(double v);

// Weights p_1..p_d over task degrees. Zero weights are allowed; verifiers
// that need p_1 > 0 check it themselves.
class DegreeMixture {
 public:
  static DegreeMixture from_exact(std::vector<Rational> p);
  static DegreeMixture from_values(const std::vector<double>& p);
  static DegreeMixture parse(const std::string& csv);
  static DegreeMixture uniform(int d);
  // All mass on degree d (the "uniform over the full family" weighting).
  static DegreeMixture top_only(int d);

  int d() const { return static_cast<int>(p_.size()); }
  double p(int k) const { return p_[static_cast<std::size_t>(k - 1)]; }
  const Rational& exact(int k) const { return exact_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<double>& probabilities() const { return p_; }
  std::string describe() const;

 private:
  std::vector<double> p_;
  std::vector<Rational> exact_;
};

enum class FamilyKind { Parity, RandomPolynomial };
enum class CoeffLaw { Uniform, Gaussian };

struct TaskFamily {
  FamilyKind kind = FamilyKind::Parity;
  int k = 1;
  CoeffLaw law = CoeffLaw::Uniform;
  ModelPtr model;
};

struct LatentParity {
  Mask subset = 0;
  int sign = 1;
};

// All signed latent parities with |S| <= k, ordered by (|S|, mask) then sign (+ before -).
std::vector<LatentParity> parity_family_members(int d, int k);

// Task h = sign * chi_S o psi^{-1}, i.e. labels sign * chi_S(z) on the support.
SupportedTask parity_task(const ModelPtr& model, LatentParity p);

SupportedTask sample_task(const TaskFamily& family, std::mt19937_64& rng);

struct MixtureDraw {
  int k = 0;
  SupportedTask task;
};
// families[k-1] must be the family for degree k, for every k in 1..d.
MixtureDraw sample_mixture_task(const DegreeMixture& mixture, std::span<const TaskFamily> families,
                                std::mt19937_64& rng);
int sample_degree(const DegreeMixture& mixture, std::mt19937_64& rng);

std::vector<SupportedTask> enumerate_family(const TaskFamily& family);

}  // namespace wmlab
