#pragma once

#include <string>
#include <vector>

#include "treecut/rational.hpp"
#include "treecut/rng.hpp"

namespace treecut {

// Critical offspring distribution for Galton-Watson sampling: mean exactly 1,
// finite positive variance sigma^2 = sum_i i(i-1) xi_i.
class OffspringLaw {
public:
    enum class Kind { poisson1, geometric, binary, table };

    // Poisson with mean 1.
    static OffspringLaw poisson1();
    // P(k) = p (1-p)^k on {0,1,2,...}; criticality forces p = 1/2.
    static OffspringLaw geometric(const Rational& p);
    // Mass 1-p on 0 and p on 2; criticality forces p = 1/2.
    static OffspringLaw binary(const Rational& p);
    // Explicit pmf entries (value, probability); exact sums checked.
    static OffspringLaw table(std::vector<std::pair<int, Rational>> pmf);
    // Parse "poisson1", "geom:1/2", "binary:1/2" or "table:FILE"
    // (file lines: "value probability", probabilities as rationals).
    static OffspringLaw parse(const std::string& text);

    Kind kind() const { return kind_; }
    std::string name() const;

    // Exact sigma^2 (equals 1 for poisson1).
    Rational variance() const;
    double sigma() const;

    // One unconditioned offspring draw.
    int sample(RngStream& rng) const;

    // n offspring counts conditioned on summing to n-1 (the size-n total
    // progeny event).  Geometric and binary laws use exact O(n) conditional
    // constructions; poisson1 and table laws use rejection with a bounded
    // budget.  Throws UnattainableSize when the event has probability zero
    // or the budget is exhausted.
    std::vector<int> conditioned_offsets(int n, RngStream& rng) const;

    // Cheap necessary condition for attainability of total progeny n.
    bool plausibly_attainable(int n) const;

private:
    OffspringLaw() = default;

    Kind kind_ = Kind::poisson1;
    Rational param_;                             // p for geometric/binary
    std::vector<std::pair<int, Rational>> pmf_;  // table entries, sorted by value

    // Sampling tables (doubles; used only for Monte Carlo draws).
    std::vector<double> cumulative_;
    void build_tables();
    void validate() const;
};

}  // namespace treecut
