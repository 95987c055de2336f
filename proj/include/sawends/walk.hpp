#pragma once

#include <string>
#include <vector>

#include "sawends/graph_core.hpp"

namespace sawends {

/// A finite vertex sequence; an n-step walk has n+1 vertices.
struct Walk {
    std::vector<VertexKey> vertices;

    int steps() const { return static_cast<int>(vertices.size()) - 1; }
    const VertexKey& origin() const { return vertices.front(); }
    const VertexKey& end() const { return vertices.back(); }
    const VertexKey& operator[](int i) const { return vertices[i]; }
    friend bool operator==(const Walk&, const Walk&) = default;
};

struct SawCheck {
    bool valid = true;
    int index = -1;      // first offending position
    std::string reason;  // "revisit" or "not adjacent"

    explicit operator bool() const { return valid; }
};

inline SawCheck verify_saw(const GraphOracle& g, const Walk& w) {
    KeySet seen;
    for (int i = 0; i < static_cast<int>(w.vertices.size()); ++i) {
        if (i > 0) {
            auto nb = g.neighbors(w.vertices[i - 1]);
            if (!std::binary_search(nb.begin(), nb.end(), w.vertices[i])) return {false, i, "not adjacent"};
        }
        if (!seen.insert(w.vertices[i]).second) return {false, i, "revisit"};
    }
    return {};
}

}  // namespace sawends
