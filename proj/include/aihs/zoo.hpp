// Named operator catalogue. Each entry builds an OperatorRep from (dim,
// params, seed) and carries the structural spectral facts used as
// hypothesis ground truth — at truncation every spectral point is an
// eigenvalue, so whether a boundary point is a non-eigenvalue of the
// underlying operator is structural knowledge, not something the matrix
// can certify.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aihs/operator_core.hpp"

namespace aihs {

struct ZooParams {
    Index dim = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> extra;  // entry-specific knobs

    double get(const std::string& key, double fallback) const {
        const auto it = extra.find(key);
        return it == extra.end() ? fallback : it->second;
    }
};

struct ZooEntry {
    std::string name;
    std::string description;
    std::string spectral_facts;
    std::function<OperatorRep(const ZooParams&)> build;
    // Structural answer to "is lambda a boundary point of sigma(T*) that is
    // not an eigenvalue of T*?": true/false when known, nullopt when only
    // numerical evidence exists.
    std::function<std::optional<bool>(Complex, const ZooParams&)> boundary_not_eigenvalue_adjoint;
};

const std::vector<ZooEntry>& zoo_entries();
const ZooEntry* zoo_find(const std::string& name);
OperatorRep zoo_build(const std::string& name, const ZooParams& params);

// Deterministic standard normal from splitmix-style bit mixing; used for
// seeded dense/random entries so runs are reproducible across platforms.
double deterministic_gaussian(std::uint64_t& state);

// The default e* candidate dictionary: e_1, (1/k), (k^{-3/4}), uniform,
// and a seeded Gaussian direction, all normalized.
std::vector<CVector> standard_estar_candidates(Index dim, std::uint64_t seed);
CVector named_estar_profile(const std::string& name, Index dim, std::uint64_t seed);

}  // namespace aihs
