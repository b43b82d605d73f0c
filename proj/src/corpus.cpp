#include "maxlab/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "maxlab/rng.hpp"

namespace maxlab {

namespace {

bool takes_param(const std::string& kind) {
  return kind == "gauge-power" || kind == "neg-gauge-power" || kind == "random-smooth" || kind == "constant";
}

bool known(const std::string& kind) {
  return takes_param(kind) || kind == "indicator" || kind == "log-gauge" || kind == "step";
}

double origin_gauge(const GridSpec& g, std::span<const double> x) {
  return detail::gauge(g.group().kind(), g.group().coord_dim(), x.data());
}

}  // namespace

std::string CorpusTag::text() const {
  if (!param) return kind;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s(%.17g)", kind.c_str(), *param);
  return buf;
}

CorpusTag parse_corpus_tag(std::string_view text) {
  CorpusTag tag;
  const auto open = text.find('(');
  if (open == std::string_view::npos) {
    tag.kind = std::string(text);
  } else {
    if (text.back() != ')') throw std::invalid_argument("corpus tag '" + std::string(text) + "': missing ')'");
    tag.kind = std::string(text.substr(0, open));
    const auto inner = text.substr(open + 1, text.size() - open - 2);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), v);
    if (ec != std::errc() || ptr != inner.data() + inner.size())
      throw std::invalid_argument("corpus tag '" + std::string(text) + "': bad parameter");
    tag.param = v;
  }
  if (!known(tag.kind)) throw std::invalid_argument("unknown corpus tag '" + std::string(text) + "'");
  if (takes_param(tag.kind) != tag.param.has_value())
    throw std::invalid_argument("corpus tag '" + std::string(text) + "': parameter " +
                                (tag.param ? "not expected" : "required"));
  if ((tag.kind == "gauge-power" || tag.kind == "neg-gauge-power") && !(*tag.param > 0.0))
    throw std::invalid_argument("corpus tag '" + std::string(text) + "': exponent must be positive");
  return tag;
}

Ball indicator_ball(const GridSpec& grid) {
  double extent = kInf;
  const auto& w = grid.group().dilation_weights();
  for (int k = 0; k < grid.dim(); ++k)
    if (w[static_cast<std::size_t>(k)] == 1)
      extent = std::min(extent, grid.hi()[static_cast<std::size_t>(k)] - grid.lo()[static_cast<std::size_t>(k)]);
  return Ball(grid.box_center(), 0.25 * extent);
}

SampledField generate_field(const CorpusTag& tag, const GridPtr& grid, std::uint64_t seed) {
  const GridSpec& g = *grid;
  if (tag.kind == "indicator") return indicator(mask_from_ball(indicator_ball(g), grid));
  if (tag.kind == "constant") return SampledField::constant(grid, *tag.param);
  if (tag.kind == "gauge-power" || tag.kind == "neg-gauge-power") {
    const double s = tag.kind == "gauge-power" ? 1.0 : -1.0;
    const double beta = *tag.param;
    return sample([&](std::span<const double> x) { return s * std::pow(origin_gauge(g, x), beta); }, grid);
  }
  if (tag.kind == "log-gauge") {
    const double h = g.spacing(0);
    return sample([&](std::span<const double> x) { return std::log(origin_gauge(g, x) + h); }, grid);
  }
  if (tag.kind == "step") {
    const double mid = g.box_center()[0];
    return sample([&](std::span<const double> x) { return x[0] > mid ? 1.0 : 0.0; }, grid);
  }
  // random-smooth
  constexpr int kModes = 6;
  CounterRng rng(seed ^ mix64(static_cast<std::uint64_t>(std::llround(*tag.param))), "random-smooth");
  struct Mode {
    double amp, phase;
    double freq[3];
  };
  std::vector<Mode> modes(kModes);
  for (auto& m : modes) {
    m.amp = rng.normal() / kModes;
    m.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 3; ++k) m.freq[k] = k < g.dim() ? static_cast<double>(rng.index(4)) : 0.0;
  }
  return sample(
      [&](std::span<const double> x) {
        double v = 0.0;
        for (const auto& m : modes) {
          double arg = m.phase;
          for (int k = 0; k < g.dim(); ++k) {
            const auto ku = static_cast<std::size_t>(k);
            arg += std::numbers::pi * m.freq[k] * (x[ku] - g.lo()[ku]) / (g.hi()[ku] - g.lo()[ku]);
          }
          v += m.amp * std::cos(arg);
        }
        return v;
      },
      grid);
}

SampledField generate_field(std::string_view tag, const GridPtr& grid, std::uint64_t seed) {
  return generate_field(parse_corpus_tag(tag), grid, seed);
}

std::vector<NamedField> generate_corpus(const std::vector<std::string>& tags, const GridPtr& grid,
                                        std::uint64_t seed) {
  std::vector<NamedField> out;
  for (const auto& t : tags) out.push_back({t, generate_field(t, grid, seed)});
  return out;
}

}  // namespace maxlab
