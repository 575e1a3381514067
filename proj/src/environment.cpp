#include "brwre/environment.hpp"

namespace brwre {

namespace {

// Same thresholds the validated support laws carry; patch laws arrive raw.
void attach_patch_thresholds(SiteLaw& law) {
    law.thresholds.clear();
    Rat cum(0);
    for (const auto& a : law.atoms) {
        cum += a.probability;
        if (cum >= Rat(1)) {
            law.thresholds.push_back(UINT64_MAX);
        } else {
            unsigned __int128 n = static_cast<unsigned __int128>(cum.num());
            n <<= 64;
            law.thresholds.push_back(
                static_cast<std::uint64_t>(n / static_cast<unsigned __int128>(cum.den())));
        }
    }
    if (!law.thresholds.empty()) law.thresholds.back() = UINT64_MAX;
}

} // namespace

EnvironmentRealization EnvironmentRealization::with_patch(EnvironmentPatch patch) const {
    std::vector<ValidationIssue> issues;
    for (auto& [site, law] : patch.sites) {
        (void)site;
        Rat sum(0);
        for (const auto& a : law.atoms) {
            sum += a.probability;
            if (a.vector.total() < 1)
                issues.push_back({ValidationIssue::Kind::ZeroOffspringVector,
                                  "patch law has an empty offspring vector"});
            for (auto& [idx, cnt] : a.vector.counts) {
                (void)cnt;
                if (idx < 0 || idx >= static_cast<int>(law_->step_set.steps.size()))
                    issues.push_back({ValidationIssue::Kind::IndexOutOfRange,
                                      "patch law references an unknown step"});
            }
        }
        if (sum != Rat(1))
            issues.push_back({ValidationIssue::Kind::ProbabilitySumMismatch,
                              "patch law probabilities sum to " + sum.str()});
        attach_patch_thresholds(law);
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));

    EnvironmentRealization env(*this);
    if (patch_) {
        // Compose: new entries override, previous patch persists elsewhere.
        EnvironmentPatch merged = *patch_;
        for (auto& [site, law] : patch.sites) merged.sites[site] = law;
        env.patch_ = std::make_shared<const EnvironmentPatch>(std::move(merged));
    } else {
        env.patch_ = std::make_shared<const EnvironmentPatch>(std::move(patch));
    }
    return env;
}

} // namespace brwre
