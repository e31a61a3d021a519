#pragma once

#include <filesystem>
#include <string>

#include "lhcn/citation.hpp"
#include "lhcn/gcn.hpp"

namespace lhcn {

// Everything that determines a run besides the input files themselves.
// Serialized as flat "key = value" lines ('#' starts a comment); a copy is
// written next to every output so runs can be reproduced exactly.
struct RunManifest {
    std::filesystem::path content;    // .content file (always required)
    std::filesystem::path cites;      // .cites file (citation mode)
    std::filesystem::path incidence;  // incidence-list file (generic mode)
    CitesOrder cites_order = CitesOrder::cited_first;
    bool dedup = true;
    bool singleton_completion = true;
    TrainConfig train;
    int seeds = 1;  // number of consecutive seeded runs
    std::filesystem::path out_dir = "runs";

    static RunManifest from_file(const std::filesystem::path& path);

    // Applies one key/value pair; unknown keys and malformed values are
    // parse errors. Shared by the file reader and the CLI overrides.
    void apply(const std::string& key, const std::string& value);

    std::string to_text() const;
    void validate() const;
};

}  // namespace lhcn
