#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace flatmwe {

// ---------------------------------------------------------------------------
// Errors. Exit-code mapping for the CLI: usage=1, data=2, internal=3.
// ---------------------------------------------------------------------------

// Malformed input data (bad CoNLL-U rows, bad score files, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse error carrying the 1-based line number of the offending row.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& msg)
        : DataError("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Caller violated a documented precondition.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

// Inconsistent model/score dimensions.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values where finite ones are required.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Log-domain arithmetic with a saturating "minus infinity".
//
// Minus infinity is a large negative finite constant so that sums of up to a
// few hundred terms cannot overflow to IEEE -inf; additions saturate exactly
// to kNegInf, which keeps tie comparisons between impossible structures exact.
// ---------------------------------------------------------------------------

inline constexpr double kNegInf = -1e30;
inline constexpr double kNegInfThreshold = -1e29;

inline bool is_neg_inf(double x) { return x <= kNegInfThreshold; }

inline double sat_add(double a, double b) {
    if (is_neg_inf(a) || is_neg_inf(b)) return kNegInf;
    return a + b;
}

inline double sat_add(double a, double b, double c) { return sat_add(sat_add(a, b), c); }

// log(sum(exp(xs))) over entries, treating saturated entries as zero mass.
inline double log_sum_exp(const std::vector<double>& xs) {
    double m = kNegInf;
    for (double x : xs)
        if (!is_neg_inf(x) && x > m) m = x;
    if (is_neg_inf(m)) return kNegInf;
    double s = 0.0;
    for (double x : xs)
        if (!is_neg_inf(x)) s += std::exp(x - m);
    return m + std::log(s);
}

// ---------------------------------------------------------------------------
// Relation-label matching.
//
// Labels are compared exactly after stripping a subtype suffix from the
// candidate at the boundary character, so "flat:name" matches "flat" while
// "flatter" does not. The target is never stripped.
// ---------------------------------------------------------------------------

inline std::string_view strip_subtype(std::string_view label, char boundary = ':') {
    auto pos = label.find(boundary);
    return pos == std::string_view::npos ? label : label.substr(0, pos);
}

inline bool label_matches(std::string_view label, std::string_view target, char boundary = ':') {
    return label == target || strip_subtype(label, boundary) == target;
}

// ---------------------------------------------------------------------------
// Small string helpers.
// ---------------------------------------------------------------------------

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-') {
        neg = true;
        i = 1;
        if (s.size() == 1) return false;
    }
    long v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
        if (v > 1000000000) return false;
    }
    out = static_cast<int>(neg ? -v : v);
    return true;
}

// ---------------------------------------------------------------------------
// Index-preserving parallel map. Results land at their input index, so output
// order never depends on scheduling. jobs <= 1 runs inline.
// ---------------------------------------------------------------------------

inline unsigned default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, Fn&& fn, unsigned jobs = default_jobs())
    -> std::vector<decltype(fn(items.front(), std::size_t{0}))> {
    using R = decltype(fn(items.front(), std::size_t{0}));
    std::vector<R> out(items.size());
    if (items.empty()) return out;
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(items.size()));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i], i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < items.size(); i += jobs) out[i] = fn(items[i], i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace flatmwe
