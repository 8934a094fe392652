#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grhs/candidate.hpp"
#include "grhs/soliton.hpp"

namespace grhs {

/// Named parameter overrides for a gallery entry, plus a variant tag.
struct GalleryOptions {
  std::map<std::string, double> overrides;
  std::string variant;
};

/// "1.5", "1.8", "1.9", "1.10".
std::vector<std::string> gallery_ids();
/// Variant tags accepted by an id; the first one is the default.
std::vector<std::string> gallery_variants(std::string_view id);
/// Parameter names and defaults of an id.
std::map<std::string, double> gallery_defaults(std::string_view id);

/// Candidate as printed. For "1.8" the variant "theta-free" drops theta from
/// the linear coefficient of h. Throws ConfigError on an unknown id, variant
/// or override name.
WarpedCandidate gallery(std::string_view id, const GalleryOptions& options = {});

/// Sample grid sized so the absolute round-off floor of the entry stays
/// below the closed-form tolerance.
GridSpec gallery_grid(std::string_view id, const GalleryOptions& options = {});

}  // namespace grhs
