#include "treecut/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "treecut/errors.hpp"

namespace treecut {

namespace {

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            // Accept plain integers and short decimals like "0.5".
            auto dot = text.find('.');
            if (dot == std::string::npos) return Rational(BigInt(text));
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            BigInt den = 1;
            for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
            return Rational(BigInt(digits), den);
        }
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw InvalidArgument("cannot parse rational: " + text);
    }
}

}  // namespace

OffspringLaw OffspringLaw::poisson1() {
    OffspringLaw law;
    law.kind_ = Kind::poisson1;
    law.build_tables();
    return law;
}

OffspringLaw OffspringLaw::geometric(const Rational& p) {
    OffspringLaw law;
    law.kind_ = Kind::geometric;
    law.param_ = p;
    law.validate();
    law.build_tables();
    return law;
}

OffspringLaw OffspringLaw::binary(const Rational& p) {
    OffspringLaw law;
    law.kind_ = Kind::binary;
    law.param_ = p;
    law.validate();
    law.build_tables();
    return law;
}

OffspringLaw OffspringLaw::table(std::vector<std::pair<int, Rational>> pmf) {
    OffspringLaw law;
    law.kind_ = Kind::table;
    std::sort(pmf.begin(), pmf.end());
    law.pmf_ = std::move(pmf);
    law.validate();
    law.build_tables();
    return law;
}

OffspringLaw OffspringLaw::parse(const std::string& text) {
    if (text == "poisson1") return poisson1();
    if (text.rfind("geom:", 0) == 0) return geometric(parse_rational(text.substr(5)));
    if (text.rfind("binary:", 0) == 0) return binary(parse_rational(text.substr(7)));
    if (text.rfind("table:", 0) == 0) {
        std::ifstream in(text.substr(6));
        if (!in) throw InvalidArgument("cannot open offspring table file: " + text.substr(6));
        std::vector<std::pair<int, Rational>> pmf;
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream is(line);
            int value;
            std::string prob;
            if (is >> value >> prob) pmf.emplace_back(value, parse_rational(prob));
        }
        return table(std::move(pmf));
    }
    throw InvalidArgument("unknown offspring law: " + text);
}

std::string OffspringLaw::name() const {
    switch (kind_) {
        case Kind::poisson1: return "poisson1";
        case Kind::geometric: return "geom:" + param_.str();
        case Kind::binary: return "binary:" + param_.str();
        case Kind::table: return "table";
    }
    return "?";
}

void OffspringLaw::validate() const {
    switch (kind_) {
        case Kind::poisson1:
            return;
        case Kind::geometric: {
            if (param_ <= 0 || param_ >= 1) throw UnsupportedLaw("geometric: p must be in (0,1)");
            Rational mean = (1 - param_) / param_;
            if (mean != 1) throw UnsupportedLaw("geometric: mean must equal 1 (got " + mean.str() + ")");
            return;
        }
        case Kind::binary: {
            if (param_ <= 0 || param_ >= 1) throw UnsupportedLaw("binary: p must be in (0,1)");
            Rational mean = 2 * param_;
            if (mean != 1) throw UnsupportedLaw("binary: mean must equal 1 (got " + mean.str() + ")");
            return;
        }
        case Kind::table: {
            if (pmf_.empty()) throw UnsupportedLaw("table: empty pmf");
            Rational total = 0, mean = 0;
            for (auto& [value, prob] : pmf_) {
                if (value < 0 || prob < 0) throw UnsupportedLaw("table: bad entry");
                total += prob;
                mean += value * prob;
            }
            if (total != 1) throw UnsupportedLaw("table: probabilities must sum to exactly 1");
            if (mean != 1) throw UnsupportedLaw("table: mean must equal exactly 1");
            if (variance() == 0) throw UnsupportedLaw("table: variance must be positive");
            return;
        }
    }
}

Rational OffspringLaw::variance() const {
    switch (kind_) {
        case Kind::poisson1:
            return 1;
        case Kind::geometric: {
            Rational q = 1 - param_;
            return 2 * q * q / (param_ * param_);
        }
        case Kind::binary:
            return 2 * param_;
        case Kind::table: {
            Rational v = 0;
            for (auto& [value, prob] : pmf_) v += Rational(value) * (value - 1) * prob;
            return v;
        }
    }
    return 0;
}

double OffspringLaw::sigma() const {
    return std::sqrt(static_cast<double>(variance()));
}

void OffspringLaw::build_tables() {
    cumulative_.clear();
    switch (kind_) {
        case Kind::poisson1: {
            // P(k) = e^{-1}/k!; extend until the tail is below 1e-18.
            double p = std::exp(-1.0), acc = 0.0;
            for (int k = 0; acc < 1.0 - 1e-18 && k < 64; ++k) {
                acc += p;
                cumulative_.push_back(acc);
                p /= (k + 1);
            }
            break;
        }
        case Kind::table: {
            double acc = 0.0;
            for (auto& [value, prob] : pmf_) {
                acc += static_cast<double>(prob);
                cumulative_.push_back(acc);
            }
            break;
        }
        default:
            break;  // geometric/binary sampled directly from bits
    }
}

int OffspringLaw::sample(RngStream& rng) const {
    switch (kind_) {
        case Kind::geometric: {
            // p = 1/2: count leading successes in fair bits.
            int k = 0;
            while (rng.coin()) ++k;
            return k;
        }
        case Kind::binary:
            return rng.coin() ? 2 : 0;
        case Kind::poisson1: {
            double u = rng.uniform01();
            auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
            return static_cast<int>(it - cumulative_.begin());
        }
        case Kind::table: {
            double u = rng.uniform01() * cumulative_.back();
            auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
            return pmf_[static_cast<std::size_t>(it - cumulative_.begin())].first;
        }
    }
    return 0;
}

bool OffspringLaw::plausibly_attainable(int n) const {
    if (n < 1) return false;
    long long target = n - 1;
    switch (kind_) {
        case Kind::poisson1:
        case Kind::geometric:
            return true;
        case Kind::binary:
            return target % 2 == 0;
        case Kind::table: {
            long long lo = static_cast<long long>(pmf_.front().first) * n;
            long long hi = static_cast<long long>(pmf_.back().first) * n;
            if (target < lo || target > hi) return false;
            long long g = 0;
            for (auto& [value, prob] : pmf_) g = std::gcd(g, static_cast<long long>(value - pmf_.front().first));
            if (g == 0) return target == lo;
            return (target - lo) % g == 0;
        }
    }
    return true;
}

std::vector<int> OffspringLaw::conditioned_offsets(int n, RngStream& rng) const {
    if (n < 1) throw InvalidArgument("conditioned_offsets: n must be >= 1");
    if (!plausibly_attainable(n))
        throw UnattainableSize("total progeny " + std::to_string(n) + " unattainable under " + name());
    std::vector<int> xi(static_cast<std::size_t>(n), 0);
    switch (kind_) {
        case Kind::binary: {
            // Conditional law: uniform placement of (n-1)/2 twos among n slots.
            int twos = (n - 1) / 2;
            std::vector<int> pos(static_cast<std::size_t>(n));
            std::iota(pos.begin(), pos.end(), 0);
            for (int i = 0; i < twos; ++i) {
                auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
                std::swap(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)]);
                xi[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] = 2;
            }
            return xi;
        }
        case Kind::geometric: {
            // P(sequence) depends only on the sum, so the conditional law is
            // uniform over compositions of n-1 into n parts; draw one by
            // placing n-1 bars among 2n-2 slots.
            int slots = 2 * n - 2, bars = n - 1;
            std::vector<char> bar(static_cast<std::size_t>(std::max(slots, 0)), 0);
            std::vector<int> pos(static_cast<std::size_t>(std::max(slots, 0)));
            std::iota(pos.begin(), pos.end(), 0);
            for (int i = 0; i < bars; ++i) {
                auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(slots - i)));
                std::swap(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)]);
                bar[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] = 1;
            }
            int part = 0, run = 0;
            for (int s = 0; s < slots; ++s) {
                if (bar[static_cast<std::size_t>(s)]) {
                    xi[static_cast<std::size_t>(part++)] = run;
                    run = 0;
                } else {
                    ++run;
                }
            }
            xi[static_cast<std::size_t>(part)] = run;
            return xi;
        }
        case Kind::poisson1:
        case Kind::table: {
            // Rejection on the sum; success probability ~ c/sqrt(n).
            long long budget = 1000 + 200 * static_cast<long long>(std::ceil(std::sqrt(n)));
            for (long long attempt = 0; attempt < budget; ++attempt) {
                long long sum = 0;
                for (int i = 0; i < n; ++i) {
                    xi[static_cast<std::size_t>(i)] = sample(rng);
                    sum += xi[static_cast<std::size_t>(i)];
                    if (sum > n - 1) break;
                }
                if (sum == n - 1) return xi;
            }
            throw UnattainableSize("rejection budget exhausted for total progeny " +
                                   std::to_string(n) + " under " + name());
        }
    }
    return xi;
}

}  // namespace treecut
