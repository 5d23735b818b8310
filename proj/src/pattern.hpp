#pragma once

// Internal helpers shared by the constraint-based and score-based searches:
// v-structure orientation and Meek rules over an adjacency pattern.

#include <vector>

namespace iris::detail {

struct Pattern {
    size_t n = 0;
    std::vector<char> directed;    // directed[i*n+j]: i -> j
    std::vector<char> undirected;  // undirected[i*n+j] == undirected[j*n+i]

    explicit Pattern(size_t n_) : n(n_), directed(n_ * n_, 0), undirected(n_ * n_, 0) {}

    bool dir(size_t i, size_t j) const { return directed[i * n + j]; }
    bool und(size_t i, size_t j) const { return undirected[i * n + j]; }
    bool adjacent(size_t i, size_t j) const {
        return dir(i, j) || dir(j, i) || und(i, j);
    }
    void set_undirected(size_t i, size_t j) {
        undirected[i * n + j] = undirected[j * n + i] = 1;
    }
    // Orients i -> j unless the opposite orientation already exists.
    bool orient(size_t i, size_t j) {
        if (dir(j, i) || dir(i, j)) return dir(i, j);
        undirected[i * n + j] = undirected[j * n + i] = 0;
        directed[i * n + j] = 1;
        return true;
    }
};

// Applies Meek rules 1-3 until fixpoint.
inline void meek_closure(Pattern& p) {
    const size_t n = p.n;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t b = 0; b < n; ++b)
            for (size_t c = 0; c < n; ++c) {
                if (!p.und(b, c)) continue;
                // R1: a -> b, b - c, a and c nonadjacent  =>  b -> c
                for (size_t a = 0; a < n; ++a)
                    if (p.dir(a, b) && !p.adjacent(a, c) && a != c) {
                        p.orient(b, c);
                        changed = true;
                        break;
                    }
                if (!p.und(b, c)) continue;
                // R2: b -> a -> c with b - c  =>  b -> c
                for (size_t a = 0; a < n; ++a)
                    if (p.dir(b, a) && p.dir(a, c)) {
                        p.orient(b, c);
                        changed = true;
                        break;
                    }
                if (!p.und(b, c)) continue;
                // R3: b - a1, b - a2, a1 -> c, a2 -> c, a1 and a2 nonadjacent  =>  b -> c
                bool done = false;
                for (size_t a1 = 0; a1 < n && !done; ++a1) {
                    if (!p.und(b, a1) || !p.dir(a1, c)) continue;
                    for (size_t a2 = a1 + 1; a2 < n; ++a2) {
                        if (!p.und(b, a2) || !p.dir(a2, c)) continue;
                        if (p.adjacent(a1, a2)) continue;
                        p.orient(b, c);
                        changed = true;
                        done = true;
                        break;
                    }
                }
            }
    }
}

}  // namespace iris::detail
