#include "wmlab/tasks.hpp"

#include <cmath>
#include <sstream>

#include "wmlab/errors.hpp"

namespace wmlab {

std::string to_string(const Rational& q) { return q.str(); }

Rational decimal_rational(double v) {
  if (!std::isfinite(v)) throw ValidationError("non-finite weight");
  double scale = 1.0;
  long long den = 1;
  for (int j = 0; j <= 17; ++j) {
    const double scaled = v * scale;
    if (std::abs(scaled) < 9e18) {
      const long long num = std::llround(scaled);
      if (static_cast<double>(num) / static_cast<double>(den) == v) return Rational(num, den);
    }
    scale *= 10.0;
    if (j < 17) den *= 10;
  }
  return Rational(v);
}

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) throw ValidationError("empty number");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      Rational num = parse_rational(text.substr(0, slash));
      Rational den = parse_rational(text.substr(slash + 1));
      if (den == 0) throw ValidationError("zero denominator in '" + raw + "'");
      return num / den;
    }
    // Plain decimal: digits with optional sign and point, read exactly.
    bool plain = true;
    int dots = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '.') ++dots;
      else if (!(std::isdigit(static_cast<unsigned char>(c)) || (i == 0 && (c == '-' || c == '+')))) plain = false;
    }
    if (plain && dots <= 1) {
      const bool neg = text[0] == '-';
      std::string digits = (text[0] == '-' || text[0] == '+') ? text.substr(1) : text;
      const auto dot = digits.find('.');
      std::string frac = dot == std::string::npos ? "" : digits.substr(dot + 1);
      std::string whole = dot == std::string::npos ? digits : digits.substr(0, dot);
      if (whole.empty() && frac.empty()) throw ValidationError("bad number '" + raw + "'");
      boost::multiprecision::cpp_int num(whole.empty() ? "0" : whole);
      boost::multiprecision::cpp_int den = 1;
      for (char c : frac) {
        num = num * 10 + (c - '0');
        den *= 10;
      }
      Rational q(num, den);
      return neg ? Rational(-q) : q;
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw ValidationError("bad number '" + raw + "'");
    return decimal_rational(v);
  } catch (const std::invalid_argument&) {
    throw ValidationError("bad number '" + raw + "'");
  } catch (const std::out_of_range&) {
    throw ValidationError("number out of range '" + raw + "'");
  }
}

DegreeMixture DegreeMixture::from_exact(std::vector<Rational> p) {
  if (p.empty()) throw ValidationError("mixture needs at least one weight");
  DegreeMixture m;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || p[i] > 1)
      throw ValidationError("mixture weight p_" + std::to_string(i + 1) + " must lie in [0,1]");
    m.p_.push_back(static_cast<double>(p[i]));
    sum += m.p_.back();
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("mixture weights must sum to 1 (got " + std::to_string(sum) + ")");
  m.exact_ = std::move(p);
  return m;
}

DegreeMixture DegreeMixture::from_values(const std::vector<double>& p) {
  std::vector<Rational> q;
  for (double v : p) q.push_back(decimal_rational(v));
  return from_exact(std::move(q));
}

DegreeMixture DegreeMixture::parse(const std::string& csv) {
  std::vector<Rational> q;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) q.push_back(parse_rational(item));
  return from_exact(std::move(q));
}

DegreeMixture DegreeMixture::uniform(int d) {
  if (d < 1) throw ValidationError("mixture needs d >= 1");
  return from_exact(std::vector<Rational>(static_cast<std::size_t>(d), Rational(1, d)));
}

DegreeMixture DegreeMixture::top_only(int d) {
  if (d < 1) throw ValidationError("mixture needs d >= 1");
  std::vector<Rational> q(static_cast<std::size_t>(d), Rational(0));
  q.back() = 1;
  return from_exact(std::move(q));
}

std::string DegreeMixture::describe() const {
  std::string out;
  for (std::size_t i = 0; i < exact_.size(); ++i) out += (i ? "," : "") + to_string(exact_[i]);
  return out;
}

std::vector<LatentParity> parity_family_members(int d, int k) {
  if (k < 0 || k > d) throw DimensionError("family degree k must satisfy 0 <= k <= d");
  std::vector<LatentParity> out;
  for (Mask s : masks_up_to_degree(d, k)) {
    out.push_back({s, 1});
    out.push_back({s, -1});
  }
  return out;
}

SupportedTask parity_task(const ModelPtr& model, LatentParity p) {
  std::vector<double> y;
  for (const auto& pt : model->support_points()) y.push_back(p.sign * parity_sign(p.subset, pt.z));
  return SupportedTask::from_labels(model, std::move(y),
                                    std::string(p.sign < 0 ? "-" : "+") + "chi" + format_subset(p.subset) + " o psi^-1");
}

static void check_family(const TaskFamily& f) {
  if (!f.model) throw ValidationError("task family has no model");
  if (f.k < 0 || f.k > f.model->d()) throw ValidationError("task family degree k must satisfy 0 <= k <= d");
}

SupportedTask sample_task(const TaskFamily& family, std::mt19937_64& rng) {
  check_family(family);
  const int d = family.model->d();
  if (family.kind == FamilyKind::Parity) {
    const auto members = parity_family_members(d, family.k);
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    return parity_task(family.model, members[pick(rng)]);
  }
  const auto masks = masks_up_to_degree(d, family.k);
  std::vector<double> coeffs(std::size_t{1} << d, 0.0);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Mask s : masks) coeffs[s] = family.law == CoeffLaw::Uniform ? uni(rng) : gauss(rng);
  const auto g = inverse_wht(FourierSpectrum(d, std::move(coeffs)));
  return SupportedTask::from_latent_function(family.model, g, "random polynomial, k=" + std::to_string(family.k));
}

int sample_degree(const DegreeMixture& mixture, std::mt19937_64& rng) {
  const auto& p = mixture.probabilities();
  std::discrete_distribution<int> pick(p.begin(), p.end());
  return pick(rng) + 1;
}

MixtureDraw sample_mixture_task(const DegreeMixture& mixture, std::span<const TaskFamily> families,
                                std::mt19937_64& rng) {
  const int k = sample_degree(mixture, rng);
  if (families.size() < static_cast<std::size_t>(k) || families[static_cast<std::size_t>(k - 1)].k != k)
    throw ValidationError("no task family supplied for degree " + std::to_string(k));
  return {k, sample_task(families[static_cast<std::size_t>(k - 1)], rng)};
}

std::vector<SupportedTask> enumerate_family(const TaskFamily& family) {
  check_family(family);
  if (family.kind != FamilyKind::Parity)
    throw RefusalError("only the parity family can be enumerated; random polynomial families are continuous");
  std::vector<SupportedTask> out;
  for (const auto& p : parity_family_members(family.model->d(), family.k)) out.push_back(parity_task(family.model, p));
  return out;
}

}  // namespace wmlab
