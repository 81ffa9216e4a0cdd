#pragma once

// JSON spec files.
//
// Source spec:
//   {"space": {"atoms": [...], "probs": [...]},
//    "generators": [["a"], ["a","b"]],                       (optional)
//    "kernels": [{"name": "f", "arity": 2, "symmetric": true,
//                 "value_space": "unit" | "real" | {"labels": K},
//                 "values": {"a,b": 0.7, ...}}],
//    "cdfs": [{"name": "F", "kind": "step" | "pwl", "points": [[x, c], ...]}]}  (optional)
//
// Represented spec (what `represent` writes): "partition":
// {"breakpoints": [...], "cell_labels": [...]} in place of "space", with
// kernel keys naming cells. Symmetric kernels may list only one tuple per
// orbit; the loader fills in the rest.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stdrep/kernels.hpp"
#include "stdrep/representation.hpp"
#include "stdrep/spaces.hpp"

namespace stdrep::io {

struct NamedCdf {
    std::string name;
    Cdf cdf;
};

struct SpecFile {
    SpacePtr space;         ///< set for source specs
    PartitionPtr partition; ///< set for represented specs
    std::optional<Generators> generators;
    KernelFamily family;
    std::vector<NamedCdf> cdfs;
};

/// Throws SpecError naming the offending field, e.g. "space.probs: ...".
SpecFile parse_spec(const nlohmann::json& doc);
SpecFile load_spec(const std::filesystem::path& path);
/// Parses text; JSON syntax errors become SpecError with line information.
SpecFile parse_spec_text(const std::string& text);

ValueSpace parse_value_space(const nlohmann::json& j, const std::string& where);
nlohmann::json value_space_json(const ValueSpace& vs);

Cdf parse_cdf(const nlohmann::json& j, const std::string& where);
nlohmann::json cdf_json(const Cdf& cdf);

/// Kernel spec object; symmetric kernels list only nondecreasing index tuples.
nlohmann::json kernel_json(const Kernel& k);

/// A step family as a represented spec document.
nlohmann::json represented_json(const KernelFamily& step_family);

/// A table family with its space as a source spec document.
nlohmann::json source_json(const KernelFamily& table_family,
                           const std::optional<Generators>& generators = std::nullopt);

/// Discrete space of a spec: the source space, or the cell space of a
/// represented spec, together with a table family over it.
std::pair<SpacePtr, KernelFamily> as_table_family(const SpecFile& spec);

} // namespace stdrep::io
