#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>

#include "brwre/model.hpp"
#include "brwre/rng.hpp"

namespace brwre {

/// An explicit local configuration overriding the i.i.d. draw on finitely
/// many sites (used to plant traps and audit seeds).
struct EnvironmentPatch {
    std::unordered_map<Site, SiteLaw, SiteHash> sites;
};

/// A lazily realized i.i.d. environment over the whole lattice.
///
/// The law at a site is a pure function of (law, env_seed, site): a keyed
/// counter-based generator produces one uniform variate per site, mapped
/// through the inverse CDF of Q's weights. Nothing is materialized, so any
/// site can be probed reproducibly and instances are freely shared across
/// threads.
class EnvironmentRealization {
public:
    EnvironmentRealization(const EnvironmentLaw& law, std::uint64_t env_seed)
        : law_(&law), seed_(env_seed), rng_(KeyedRng(env_seed).with(0x656E76ULL)) {}

    const EnvironmentLaw& law() const { return *law_; }
    std::uint64_t env_seed() const { return seed_; }

    /// Support-law index of the i.i.d. draw at `x`. Ignores patches.
    int omega_at(const Site& x) const {
        return law_->sample_law(rng_.u64(site_key(x)));
    }

    /// Site law effectively in force at `x` (patch override, else the draw).
    const SiteLaw& law_at(const Site& x) const {
        if (patch_) {
            auto it = patch_->sites.find(x);
            if (it != patch_->sites.end()) return it->second;
        }
        return law_->support[static_cast<size_t>(omega_at(x))];
    }

    bool patched_at(const Site& x) const {
        return patch_ && patch_->sites.count(x) > 0;
    }

    /// Environment agreeing with `patch` on its sites and with *this
    /// elsewhere. Patch laws are validated against the step set.
    EnvironmentRealization with_patch(EnvironmentPatch patch) const;

private:
    const EnvironmentLaw* law_;
    std::uint64_t seed_;
    KeyedRng rng_;
    std::shared_ptr<const EnvironmentPatch> patch_;
};

} // namespace brwre
