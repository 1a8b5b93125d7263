#pragma once

// Machine-readable check runners behind the command-line tool and the Python
// bindings. Every command consumes the key-value config (manifold description
// plus command parameters) and produces a JSON report; `pass` aggregates the
// command's tolerance checks. All sampling is seeded, so identical inputs
// give byte-identical reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cosym/config.hpp"
#include "cosym/manifold.hpp"

namespace cosym {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::optional<int> steps;
};

struct RunOutcome {
    nlohmann::ordered_json report;
    bool pass = false;
};

/// Commands: reeb-check, volume, flux, commutator, fragment, lift, integrals.
RunOutcome run_command(const std::string& command, const KeyValueConfig& cfg,
                       const RunOverrides& overrides = {});

std::vector<std::string> command_names();

nlohmann::ordered_json manifold_json(const Manifold& m);

}  // namespace cosym
