#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "hexlat/moduli.hpp"

namespace hexlat {

struct partition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Integer coordinates (k, l) of the lattice point k v1 + l w1.
struct IndexPair {
    long long k;
    long long l;

    friend bool operator==(const IndexPair&, const IndexPair&) = default;
    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

// Order-three rotation about the deep hole in index coordinates.
inline IndexPair rotate_index(long long k, long long l) { return {1 - k - l, k}; }
inline IndexPair rotate_index(const IndexPair& p) { return rotate_index(p.k, p.l); }

// Orbit {a, rot a, rot^2 a}; a is the lexicographically smallest member.
struct Triple {
    IndexPair a;
    IndexPair b;
    IndexPair c;

    static Triple from_leader(const IndexPair& lead) {
        return {lead, rotate_index(lead), rotate_index(rotate_index(lead))};
    }
};

// Exact shell key: squared distance to the deep hole in units of 2/(3 sqrt3),
//   ||k v + l w - p||^2 = 2 N / (3 sqrt3),  N = 3(k^2 + kl + l^2 - k - l) + 1.
inline long long shell_key(long long k, long long l) {
    return 3 * (k * k + k * l + l * l - k - l) + 1;
}

inline double shell_radius_from_key(long long key) {
    return std::sqrt(2.0 * static_cast<double>(key) / (3.0 * std::sqrt(3.0)));
}

// All integer pairs at one exact distance from the deep hole, grouped into
// rotation triples.
struct ShellIndexSet {
    double radius = 0.0;
    long long key = 0;
    std::vector<Triple> triples;

    std::size_t size() const { return 3 * triples.size(); }

    std::vector<IndexPair> members() const {
        std::vector<IndexPair> out;
        out.reserve(size());
        for (const Triple& t : triples) {
            out.push_back(t.a);
            out.push_back(t.b);
            out.push_back(t.c);
        }
        return out;
    }
};

// Groups index pairs into rotation orbits. The input must be closed under
// rotate_index and duplicate-free.
inline std::vector<Triple> partition_into_triples(const std::vector<IndexPair>& pairs) {
    std::set<IndexPair> pending(pairs.begin(), pairs.end());
    if (pending.size() != pairs.size())
        throw partition_error("partition_into_triples: duplicate index pairs");
    std::vector<Triple> out;
    out.reserve(pairs.size() / 3);
    while (!pending.empty()) {
        // smallest remaining pair leads; its orbit is removed with it, so the
        // leader is also the smallest within the orbit
        const IndexPair lead = *pending.begin();
        const Triple t = Triple::from_leader(lead);
        for (const IndexPair& m : {t.a, t.b, t.c}) {
            if (pending.erase(m) != 1)
                throw partition_error("partition_into_triples: input not closed under rotation");
        }
        out.push_back(t);
    }
    return out;
}

// Shells of the hexagonal lattice around the deep hole, for radii <= r_max,
// sorted by radius. Scans |k|, |l| <= ceil(r_max / 0.4) + 2, which covers the
// disk of radius r_max around p, and buckets by the exact integer key.
inline std::vector<ShellIndexSet> enumerate_shells(double r_max) {
    if (!(r_max > 0.0)) throw std::domain_error("enumerate_shells: r_max must be positive");
    const long long bound = static_cast<long long>(std::ceil(r_max / 0.4)) + 2;
    std::map<long long, std::vector<IndexPair>> buckets;
    for (long long k = -bound; k <= bound; ++k) {
        for (long long l = -bound; l <= bound; ++l) {
            const long long key = shell_key(k, l);
            if (shell_radius_from_key(key) <= r_max) buckets[key].push_back({k, l});
        }
    }
    std::vector<ShellIndexSet> shells;
    shells.reserve(buckets.size());
    for (auto& [key, members] : buckets) {
        ShellIndexSet s;
        s.key = key;
        s.radius = shell_radius_from_key(key);
        s.triples = partition_into_triples(members);
        shells.push_back(std::move(s));
    }
    return shells;
}

}  // namespace hexlat
