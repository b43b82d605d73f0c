#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maxlab/grid.hpp"
#include "maxlab/lipschitz.hpp"

namespace maxlab {

/// Generator tag such as "gauge-power(0.5)" or "step".
///   indicator            chi of the ball about the box center with radius a quarter of the box
///   gauge-power(beta)    rho(x)^beta
///   neg-gauge-power(beta) -rho(x)^beta
///   log-gauge            log(rho(x) + h), h the grid spacing
///   random-smooth(seed)  sum of six random low-frequency cosines
///   step                 1 where x_0 exceeds the box midpoint, else 0
///   constant(c)          c
struct CorpusTag {
  std::string kind;
  std::optional<double> param;
  std::string text() const;
};

/// Throws std::invalid_argument on an unknown kind or a missing/extra parameter.
CorpusTag parse_corpus_tag(std::string_view text);

SampledField generate_field(const CorpusTag& tag, const GridPtr& grid, std::uint64_t seed);
SampledField generate_field(std::string_view tag, const GridPtr& grid, std::uint64_t seed);

std::vector<NamedField> generate_corpus(const std::vector<std::string>& tags, const GridPtr& grid,
                                        std::uint64_t seed);

/// Ball used by the indicator tag.
Ball indicator_ball(const GridSpec& grid);

}  // namespace maxlab
