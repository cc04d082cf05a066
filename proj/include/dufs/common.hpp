#ifndef DUFS_COMMON_HPP
#define DUFS_COMMON_HPP

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace dufs {

using NodeId = std::uint32_t;

// Bad user input: unusable parameter combinations, missing files.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad data: malformed files, empty graphs, inconsistent logs.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class LabelKind { OutDegree, InDegree, UndirectedDegree, JointDegree, Attribute };

std::string label_kind_name(LabelKind kind);
LabelKind parse_label_kind(const std::string& name);

/// Labels are strings: "5" (a degree), "3,7" (in-degree,out-degree) or an
/// attribute name. Ordering is numeric first, then lexicographic.
using Label = std::string;

struct LabelLess {
    bool operator()(const Label& a, const Label& b) const;
};

using MassMap = std::map<Label, double, LabelLess>;

/// Numeric value of a degree label. Throws DataError on non-numeric labels.
long long label_degree(const Label& label);

Label joint_label(long long in_degree, long long out_degree);

/// Seedable RNG with unbiased integer draws. mt19937_64 has a fixed
/// cross-platform output sequence, so runs are reproducible everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Lemire multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 eng_;
};

}  // namespace dufs

#endif
