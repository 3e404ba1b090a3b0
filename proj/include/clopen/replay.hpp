#pragma once

#include "clopen/io.hpp"

#include <string>
#include <vector>

namespace clopen {

struct ReplayResult {
    bool ok = true;
    std::vector<std::string> problems;

    void fail(std::string what) {
        ok = false;
        problems.push_back(std::move(what));
    }
};

// Standalone verification of a report document: certificates are replayed by
// closure checks, witnesses by exact dmin-separation and period arithmetic,
// against the model rebuilt from the embedded system. Never reruns the original
// decision procedure.
ReplayResult replay_report(const Json& doc);

}  // namespace clopen
