#ifndef RIKIT_VERIFY_HPP
#define RIKIT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rikit/common.hpp"

namespace rikit::verify {

struct Params {
    std::uint64_t seed = 20240501;
    int grid = 2048;
    double tol_rel = 1e-10;
    std::string out_dir;  // empty: no artifacts written
    int jobs = 1;
};

struct HypothesisCheck {
    std::string name;
    bool verdict = false;
    std::string confidence;  // "exact" | "probed"
    double estimate = 0.0;
};

struct ConstantRecord {
    std::string name;
    double value = 0.0;
    std::string provenance;  // "paper-derived" | "empirical"
};

struct Report {
    std::string case_id;
    int n_samples = 0;
    int n_skipped = 0;
    double worst_ratio = 1.0;  // the sample closest to (or beyond) the band edge
    double band_lo = 0.0;
    double band_hi = kInf;
    std::vector<HypothesisCheck> hypotheses;
    std::vector<ConstantRecord> constants;
    std::string verdict;  // "pass" | "fail" | "not-applicable"
    std::vector<std::pair<double, double>> ratio_cloud;  // (sample tag, ratio)
    nlohmann::json details = nlohmann::json::object();

    // a pass with a failed hypothesis is impossible: finalize() demotes it
    void finalize();
    nlohmann::json to_json() const;
};

// case ids:
//   duality-identity, norm-duality, restricted-unrestricted, honsimple,
//   sandwich, when-R-nonincreasing, iteration-R, iteration-H, hlp, axioms,
//   char-optimal-iii, k-formula
Report run_case(const std::string& case_id, const Params& params);
std::vector<std::string> all_case_ids();

/// Runs all cases, writes report-<case>.json, ratios-<case>.svg and
/// summary.csv into params.out_dir when set. Exit severity: 0 all pass, 1 a
/// case failed.
int run_all(const Params& params, std::vector<Report>* out = nullptr);

}  // namespace rikit::verify

#endif
