#pragma once

#include <string>
#include <vector>

namespace dubois {

/// One verified statement, usually indexed by a filtration level p.
struct ResultRow {
    int p = 0;
    bool pass = false;
    std::string evidence; // "exact" or "dims-match"
    std::string note;
};

/// Outcome of one named verifier. Failures are data, not exceptions.
struct CheckReport {
    std::string name;
    std::vector<ResultRow> rows;
    std::string error; // nonempty if the verifier could not run at all
    double ms = 0.0;

    bool passed() const {
        if (!error.empty()) return false;
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }

    void add(int p, bool pass, std::string evidence = "exact", std::string note = "") {
        rows.push_back({p, pass, std::move(evidence), std::move(note)});
    }
};

} // namespace dubois
