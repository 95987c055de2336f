#pragma once

// Standard test graphs and random words shared by the suites.

#include <memory>
#include <random>
#include <vector>

#include "sawends/sawends.hpp"

namespace fixtures {

using namespace sawends;

// Z4 *_{Z2} Z6: C = {0,2} in Z4 and {0,3} in Z6.
inline std::shared_ptr<const AmalgamPresentation> z4_z2_z6() {
    return std::make_shared<const AmalgamPresentation>(FiniteGroup::cyclic(4), FiniteGroup::cyclic(6),
                                                       std::vector<int>{0, 2}, std::vector<int>{0, 3}, "Z4*Z2Z6");
}

// Z2 * Z3 with trivial C.
inline std::shared_ptr<const AmalgamPresentation> z2_z3() {
    return std::make_shared<const AmalgamPresentation>(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3),
                                                       std::vector<int>{0}, std::vector<int>{0}, "Z2*Z3");
}

// HNN(Z4, Z2, id): C1 = C2 = {0, 2}, phi the identity.
inline std::shared_ptr<const HnnPresentation> hnn_z4() {
    return std::make_shared<const HnnPresentation>(FiniteGroup::cyclic(4), std::vector<int>{0, 2},
                                                   std::vector<int>{0, 2}, std::vector<int>{0, 2}, "HNN(Z4,Z2,id)");
}

inline std::vector<int> nonidentity(int order) {
    std::vector<int> v;
    for (int i = 1; i < order; ++i) v.push_back(i);
    return v;
}

/// Cayley graph w.r.t. all nonidentity elements of both factors.
inline CayleyGraph<AmalgamGroup> amalgam_graph(std::shared_ptr<const AmalgamPresentation> p) {
    return glued_amalgam_graph({nonidentity(p->group(Factor::H).order())},
                               {nonidentity(p->group(Factor::K).order())}, p);
}

/// Cayley graph w.r.t. {s, s^2, s^3, t, t^-1}.
inline CayleyGraph<HnnGroup> hnn_graph(std::shared_ptr<const HnnPresentation> p) {
    std::vector<std::vector<HnnLetter>> words;
    for (int x : nonidentity(p->base().order())) words.push_back({HnnLetter::h(x)});
    words.push_back({HnnLetter::t(1)});
    words.push_back({HnnLetter::t(-1)});
    return cayley_oracle(HnnGroup(p), words, "hnn");
}

inline std::vector<AmalgamLetter> random_amalgam_word(const AmalgamPresentation& p, int len, std::mt19937_64& rng) {
    std::vector<AmalgamLetter> w;
    for (int i = 0; i < len; ++i) {
        Factor f = rng() % 2 ? Factor::H : Factor::K;
        w.push_back({f, static_cast<int>(rng() % p.group(f).order())});
    }
    return w;
}

inline std::vector<HnnLetter> random_hnn_word(const HnnPresentation& p, int len, std::mt19937_64& rng) {
    std::vector<HnnLetter> w;
    for (int i = 0; i < len; ++i) {
        switch (rng() % 3) {
            case 0: w.push_back(HnnLetter::t(1)); break;
            case 1: w.push_back(HnnLetter::t(-1)); break;
            default: w.push_back(HnnLetter::h(static_cast<int>(rng() % p.base().order())));
        }
    }
    return w;
}

inline FreeProduct c3_c3() { return build_free_product(cycle_factor(3), cycle_factor(3)); }
inline FreeProduct k2_k2() { return build_free_product(complete_factor(2), complete_factor(2)); }

}  // namespace fixtures
