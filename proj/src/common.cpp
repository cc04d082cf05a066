#include "dufs/common.hpp"

#include <charconv>

namespace dufs {

std::string label_kind_name(LabelKind kind) {
    switch (kind) {
        case LabelKind::OutDegree: return "out-degree";
        case LabelKind::InDegree: return "in-degree";
        case LabelKind::UndirectedDegree: return "und-degree";
        case LabelKind::JointDegree: return "joint-degree";
        case LabelKind::Attribute: return "attribute";
    }
    return "?";
}

LabelKind parse_label_kind(const std::string& name) {
    if (name == "out-degree") return LabelKind::OutDegree;
    if (name == "in-degree") return LabelKind::InDegree;
    if (name == "und-degree" || name == "degree") return LabelKind::UndirectedDegree;
    if (name == "joint-degree" || name == "joint") return LabelKind::JointDegree;
    if (name == "attribute") return LabelKind::Attribute;
    throw ConfigError("unknown label kind: " + name);
}

namespace {

// Parses "a" or "a,b" made of decimal integers. Returns the number of
// numeric components (0, 1 or 2).
int parse_label_numbers(const Label& s, long long& a, long long& b) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, a);
    if (ec != std::errc{}) return 0;
    if (p == last) return 1;
    if (*p != ',') return 0;
    auto [q, ec2] = std::from_chars(p + 1, last, b);
    if (ec2 != std::errc{} || q != last) return 0;
    return 2;
}

}  // namespace

bool LabelLess::operator()(const Label& x, const Label& y) const {
    long long xa = 0, xb = 0, ya = 0, yb = 0;
    int nx = parse_label_numbers(x, xa, xb);
    int ny = parse_label_numbers(y, ya, yb);
    auto rank = [](int n) { return n == 1 ? 0 : n == 2 ? 1 : 2; };
    if (nx != ny) return rank(nx) < rank(ny);  // single numeric < joint < non-numeric
    if (nx == 1) return xa < ya;
    if (nx == 2) return xa != ya ? xa < ya : xb < yb;
    return x < y;
}

long long label_degree(const Label& label) {
    long long a = 0, b = 0;
    if (parse_label_numbers(label, a, b) != 1)
        throw DataError("non-numeric degree label: " + label);
    return a;
}

Label joint_label(long long in_degree, long long out_degree) {
    return std::to_string(in_degree) + "," + std::to_string(out_degree);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::logic_error("Rng::below(0)");
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        std::uint64_t threshold = (0 - n) % n;
        while (lo < threshold) {
            m = static_cast<unsigned __int128>(next_u64()) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace dufs
