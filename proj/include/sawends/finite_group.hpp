#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "sawends/errors.hpp"

namespace sawends {

/// Finite group given by its multiplication table; elements are 0..order-1
/// and table[a][b] = a*b.
class FiniteGroup {
public:
    FiniteGroup() = default;

    explicit FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
        const int n = order();
        if (n == 0) throw InvalidPresentation("empty multiplication table");
        for (auto& row : table_) {
            if (static_cast<int>(row.size()) != n)
                throw InvalidPresentation("multiplication table is not square");
            for (int x : row)
                if (x < 0 || x >= n) throw InvalidPresentation("table entry out of range");
        }
        identity_ = -1;
        for (int e = 0; e < n && identity_ < 0; ++e) {
            bool ok = true;
            for (int x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
            if (ok) identity_ = e;
        }
        if (identity_ < 0) throw InvalidPresentation("multiplication table has no identity");
        inverse_.assign(n, -1);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (table_[a][b] == identity_) inverse_[a] = b;
        for (int a = 0; a < n; ++a) {
            if (inverse_[a] < 0 || table_[inverse_[a]][a] != identity_)
                throw InvalidPresentation("element " + std::to_string(a) + " has no two-sided inverse");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                        throw InvalidPresentation("multiplication table is not associative");
    }

    static FiniteGroup cyclic(int n) {
        if (n < 1) throw InvalidParameter("cyclic group order must be positive");
        std::vector<std::vector<int>> t(n, std::vector<int>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
        return FiniteGroup(std::move(t));
    }

    int order() const noexcept { return static_cast<int>(table_.size()); }
    int identity() const noexcept { return identity_; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inverse_[a]; }
    bool contains(int a) const noexcept { return a >= 0 && a < order(); }
    const std::vector<std::vector<int>>& table() const noexcept { return table_; }

private:
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int identity_ = 0;
};

/// Right cosets Cx of a subgroup C. The subgroup itself is represented by
/// the identity; every other coset by its least element.
class RightCosets {
public:
    RightCosets() = default;

    RightCosets(const FiniteGroup& g, std::vector<int> subgroup) : subgroup_(std::move(subgroup)) {
        const int n = g.order();
        member_.assign(n, -1);
        for (std::size_t i = 0; i < subgroup_.size(); ++i) {
            int s = subgroup_[i];
            if (!g.contains(s)) throw InvalidPresentation("subgroup element out of range");
            if (member_[s] >= 0) throw InvalidPresentation("subgroup lists an element twice");
            member_[s] = static_cast<int>(i);
        }
        for (int a : subgroup_)
            for (int b : subgroup_)
                if (member_[g.mul(a, b)] < 0) throw InvalidPresentation("subgroup is not closed");
        if (member_[g.identity()] < 0) throw InvalidPresentation("subgroup lacks the identity");
        rep_.assign(n, -1);
        part_.assign(n, -1);
        for (int x = 0; x < n; ++x) {
            int best = n;
            for (int c : subgroup_) best = std::min(best, g.mul(c, x));
            if (member_[x] >= 0) best = g.identity();
            rep_[x] = best;
            // x = c * rep  =>  c = x * rep^{-1}
            part_[x] = member_[g.mul(x, g.inv(best))];
        }
    }

    /// Index of x within the subgroup list, or -1.
    int member_index(int x) const { return member_[x]; }
    bool contains(int x) const { return member_[x] >= 0; }
    int representative(int x) const { return rep_[x]; }
    /// Subgroup index of c with x = c * representative(x).
    int subgroup_part(int x) const { return part_[x]; }
    const std::vector<int>& elements() const noexcept { return subgroup_; }

private:
    std::vector<int> subgroup_;
    std::vector<int> member_;
    std::vector<int> rep_;
    std::vector<int> part_;
};

}  // namespace sawends
