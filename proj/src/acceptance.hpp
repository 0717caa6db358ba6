#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace fpuwave {

struct AcceptanceOptions {
    int L = 3;
    int k = 512;
    double tol = 1e-12;
    long max_iter = 200000;
    /// Run only checks that involve the Toda chain.
    bool toda_only = false;
};

enum class Verdict { pass, fail, skipped };

const char* to_string(Verdict v);

struct CriterionResult {
    int id = 0;
    std::string name;
    Verdict verdict = Verdict::fail;
    std::string summary;
    nlohmann::json metrics;
    double seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "PASS  [3] solver soundness: ..." style report line.
std::string format_line(const CriterionResult& r);

/// True when no evaluated criterion failed.
bool all_passed(const std::vector<CriterionResult>& results);

nlohmann::json to_json(const CriterionResult& r);

} // namespace fpuwave
