#include "pagraph/edge_law.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "pagraph/error.hpp"

namespace pagraph {

namespace {

constexpr double kNormalizationTolerance = 1e-9;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError,
                "cannot parse " + std::string(what) + " from '" + s + "'");
  }
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::ParseError,
                "cannot parse " + std::string(what) + " from '" + s + "'");
  }
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

EdgeCountDistribution EdgeCountDistribution::deterministic(std::int64_t x0) {
  if (x0 <= 0) {
    throw Error(ErrorCode::NonPositiveSupport,
                "deterministic edge count must be >= 1, got " + std::to_string(x0));
  }
  EdgeCountDistribution law;
  law.kind_ = LawKind::Deterministic;
  law.point_ = x0;
  law.finish();
  return law;
}

EdgeCountDistribution EdgeCountDistribution::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorCode::RangeError,
                "geometric success probability must lie in (0,1), got " + format_double(q));
  }
  EdgeCountDistribution law;
  law.kind_ = LawKind::Geometric;
  law.success_ = q;
  law.finish();
  return law;
}

EdgeCountDistribution EdgeCountDistribution::explicit_law(std::vector<double> probs) {
  RawEdgeLaw raw;
  raw.kind = LawKind::Explicit;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    raw.masses.emplace_back(static_cast<std::int64_t>(k) + 1, probs[k]);
  }
  return validate_edge_law(raw);
}

void EdgeCountDistribution::finish() {
  switch (kind_) {
    case LawKind::Deterministic:
      mean_ = static_cast<double>(point_);
      lattice_ = point_;
      break;
    case LawKind::Geometric:
      mean_ = 1.0 / success_;
      lattice_ = 1;
      break;
    case LawKind::Explicit: {
      mean_ = 0.0;
      lattice_ = 0;
      cdf_.resize(probs_.size());
      double acc = 0.0;
      for (std::size_t k = 0; k < probs_.size(); ++k) {
        const auto j = static_cast<std::int64_t>(k) + 1;
        mean_ += static_cast<double>(j) * probs_[k];
        acc += probs_[k];
        cdf_[k] = acc;
        if (probs_[k] > 0.0) lattice_ = std::gcd(lattice_, j);
      }
      cdf_.back() = 1.0;
      break;
    }
  }
}

double EdgeCountDistribution::pmf(std::int64_t j) const noexcept {
  if (j <= 0) return 0.0;
  switch (kind_) {
    case LawKind::Deterministic:
      return j == point_ ? 1.0 : 0.0;
    case LawKind::Geometric:
      return success_ * std::pow(1.0 - success_, static_cast<double>(j - 1));
    case LawKind::Explicit:
      return static_cast<std::size_t>(j) <= probs_.size() ? probs_[j - 1] : 0.0;
  }
  return 0.0;
}

std::optional<std::int64_t> EdgeCountDistribution::max_support() const noexcept {
  switch (kind_) {
    case LawKind::Deterministic: return point_;
    case LawKind::Geometric: return std::nullopt;
    case LawKind::Explicit: return static_cast<std::int64_t>(probs_.size());
  }
  return std::nullopt;
}

std::int64_t EdgeCountDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case LawKind::Deterministic:
      return point_;
    case LawKind::Geometric: {
      // Inverse CDF on the unbounded support {1, 2, ...}.
      const double u = rng.uniform_pos();
      return 1 + static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-success_)));
    }
    case LawKind::Explicit: {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      return static_cast<std::int64_t>(it - cdf_.begin()) + 1;
    }
  }
  return point_;
}

std::string EdgeCountDistribution::label() const {
  switch (kind_) {
    case LawKind::Deterministic: return "det:" + std::to_string(point_);
    case LawKind::Geometric: return "geom:" + format_double(success_);
    case LawKind::Explicit: {
      std::string out = "explicit:";
      for (std::size_t k = 0; k < probs_.size(); ++k) {
        if (k) out += ',';
        out += format_double(probs_[k]);
      }
      return out;
    }
  }
  return {};
}

EdgeCountDistribution validate_edge_law(const RawEdgeLaw& raw) {
  switch (raw.kind) {
    case LawKind::Deterministic:
      return EdgeCountDistribution::deterministic(raw.point);
    case LawKind::Geometric:
      return EdgeCountDistribution::geometric(raw.success);
    case LawKind::Explicit:
      break;
  }

  if (raw.masses.empty()) throw Error(ErrorCode::EmptyLaw, "explicit law has no entries");
  std::map<std::int64_t, double> merged;
  double total = 0.0;
  for (const auto& [j, p] : raw.masses) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::NotNormalized,
                  "probability at j=" + std::to_string(j) + " is not a finite nonnegative number");
    }
    if (p > 0.0 && j <= 0) {
      throw Error(ErrorCode::NonPositiveSupport,
                  "mass " + format_double(p) + " at j=" + std::to_string(j));
    }
    if (j > 0) merged[j] += p;
    total += p;
  }
  if (total <= 0.0) throw Error(ErrorCode::EmptyLaw, "explicit law has zero total mass");
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw Error(ErrorCode::NotNormalized, "probabilities sum to " + format_double(total));
  }
  while (!merged.empty() && merged.rbegin()->second == 0.0) merged.erase(std::prev(merged.end()));

  std::vector<double> probs(static_cast<std::size_t>(merged.rbegin()->first), 0.0);
  for (const auto& [j, p] : merged) probs[static_cast<std::size_t>(j - 1)] = p / total;

  EdgeCountDistribution law;
  law.kind_ = LawKind::Explicit;
  law.probs_ = std::move(probs);
  law.finish();
  return law;
}

RawEdgeLaw parse_raw_edge_law(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError,
                "law must look like det:K, geom:Q or explicit:p1,p2,...; got '" +
                    std::string(text) + "'");
  }
  const std::string kind = trim(text.substr(0, colon));
  const std::string_view body = text.substr(colon + 1);

  RawEdgeLaw raw;
  if (kind == "det" || kind == "deterministic") {
    raw.kind = LawKind::Deterministic;
    raw.point = parse_int(body, "deterministic edge count");
  } else if (kind == "geom" || kind == "geometric") {
    raw.kind = LawKind::Geometric;
    raw.success = parse_double(body, "geometric success probability");
  } else if (kind == "explicit") {
    raw.kind = LawKind::Explicit;
    std::int64_t j = 1;
    std::size_t start = 0;
    while (start <= body.size()) {
      const auto comma = body.find(',', start);
      const auto piece = body.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start);
      if (!trim(piece).empty()) raw.masses.emplace_back(j, parse_double(piece, "probability"));
      ++j;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else {
    throw Error(ErrorCode::ParseError, "unknown law kind '" + kind + "'");
  }
  return raw;
}

}  // namespace pagraph
