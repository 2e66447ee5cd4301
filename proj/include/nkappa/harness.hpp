#pragma once

#include "nkappa/classify.hpp"
#include "nkappa/pick.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace nk {

// Property suites instantiating the global claims: the kappa upper bound,
// witness exactness, gap monotonicity, form-conversion round-trips, and
// epsilon-regularization.
enum class SuiteId { UpperBound, Exactness, Monotone, RoundTrip, Regularize };

struct GenConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    double re_max = 10.0;
    double im_min = 1e-3; // strictly positive: points live in the upper half-plane
    double im_max = 10.0;
    int max_atoms = 4;
    int max_pieces = 2;
    int max_poles = 3;

    void validate() const;
};

struct TrialFailure {
    std::size_t trial = 0;
    std::string detail;
    std::string replay; // serialized instance for replay
};

struct Report {
    SuiteId suite = SuiteId::UpperBound;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t passes = 0;
    std::vector<TrialFailure> failures;

    bool ok() const { return failures.empty(); }
};

// per-trial generator stream; seed-split so trial results are order-free
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

StieltjesMeasure gen_measure(std::mt19937_64& rng, const GenConfig& cfg,
                             bool nu_tail, bool finite_zero_moment);
PhiRep gen_phi_rep(std::mt19937_64& rng, const GenConfig& cfg);
KappaForm gen_case_a_form(std::mt19937_64& rng, const GenConfig& cfg);
PointSet gen_points(std::mt19937_64& rng, const FunctionHandle& fun,
                    std::size_t count, const GenConfig& cfg);

// fixed, when given, pins the function under test; otherwise each trial
// generates fresh representation data
Report run_suite(const GenConfig& cfg, SuiteId suite,
                 const FunctionHandle* fixed = nullptr);

const char* suite_name(SuiteId s);
std::optional<SuiteId> suite_from_name(const std::string& name);

} // namespace nk
