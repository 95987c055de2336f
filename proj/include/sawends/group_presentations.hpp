#pragma once

#include <algorithm>
#include <deque>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sawends/finite_group.hpp"
#include "sawends/graph_core.hpp"

namespace sawends {

// Serialized normal forms (vertex key format, version 1):
//   amalgam  "c<i>" followed by "|H<r>" / "|K<r>" per syllable, meaning
//            C[i] * r_1 * ... * r_n with r_k nontrivial right-coset
//            representatives alternating between the factors;
//   HNN      "g<h>" followed by "|t+<r>" / "|t-<r>", meaning
//            h * t^{e_1} * r_1 * ... * t^{e_n} * r_n.
inline constexpr int kNormalFormKeyVersion = 1;

enum class Factor : std::uint8_t { H = 0, K = 1 };

inline Factor other(Factor f) { return f == Factor::H ? Factor::K : Factor::H; }
inline char factor_tag(Factor f) { return f == Factor::H ? 'H' : 'K'; }

namespace detail {
inline int parse_int(const std::string& s, std::size_t& pos) {
    std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (start == pos) throw InvalidVertex("malformed normal-form key: " + s);
    return std::stoi(s.substr(start, pos - start));
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Amalgamated free product H *_C K
// ---------------------------------------------------------------------------

/// H *_C K with finite factors. C is given by its two embeddings: c_in_h[i]
/// and c_in_k[i] are the images of the same element of C, and entry 0 must
/// be the identity.
class AmalgamPresentation {
public:
    AmalgamPresentation(FiniteGroup h, FiniteGroup k, std::vector<int> c_in_h, std::vector<int> c_in_k,
                        std::string name = "amalgam")
        : name_(std::move(name)), factor_{std::move(h), std::move(k)} {
        if (c_in_h.size() != c_in_k.size() || c_in_h.empty())
            throw InvalidPresentation("C must have the same nonzero order in both factors");
        if (c_in_h[0] != factor_[0].identity() || c_in_k[0] != factor_[1].identity())
            throw InvalidPresentation("first listed element of C must be the identity");
        cosets_[0] = RightCosets(factor_[0], c_in_h);
        cosets_[1] = RightCosets(factor_[1], c_in_k);
        // The pairing c_in_h[i] <-> c_in_k[i] must be a homomorphism.
        const int c = static_cast<int>(c_in_h.size());
        for (int i = 0; i < c; ++i) {
            for (int j = 0; j < c; ++j) {
                int ph = cosets_[0].member_index(factor_[0].mul(c_in_h[i], c_in_h[j]));
                int pk = cosets_[1].member_index(factor_[1].mul(c_in_k[i], c_in_k[j]));
                if (ph != pk) throw InvalidPresentation("C embeddings are not compatible");
            }
        }
    }

    const std::string& name() const noexcept { return name_; }
    const FiniteGroup& group(Factor f) const { return factor_[static_cast<int>(f)]; }
    const RightCosets& cosets(Factor f) const { return cosets_[static_cast<int>(f)]; }
    int c_order() const { return static_cast<int>(cosets_[0].elements().size()); }
    /// Image of C-index i in the given factor.
    int embed(Factor f, int i) const { return cosets(f).elements()[i]; }

private:
    std::string name_;
    FiniteGroup factor_[2];
    RightCosets cosets_[2];
};

struct AmalgamLetter {
    Factor factor;
    int element;
    friend bool operator==(const AmalgamLetter&, const AmalgamLetter&) = default;
};

struct AmalgamSyllable {
    Factor factor;
    int rep;  // nontrivial right-coset representative in `factor`
    friend bool operator==(const AmalgamSyllable&, const AmalgamSyllable&) = default;
};

/// Element in canonical normal form c * r_1 * ... * r_n.
struct AmalgamElement {
    const AmalgamPresentation* presentation = nullptr;
    int c = 0;  // index into C
    std::vector<AmalgamSyllable> syllables;

    int length() const { return static_cast<int>(syllables.size()); }
    bool is_identity() const { return syllables.empty() && c == 0; }
    friend bool operator==(const AmalgamElement& a, const AmalgamElement& b) {
        return a.presentation == b.presentation && a.c == b.c && a.syllables == b.syllables;
    }

    VertexKey key() const {
        std::string s = "c" + std::to_string(c);
        for (auto& y : syllables) {
            s += '|';
            s += factor_tag(y.factor);
            s += std::to_string(y.rep);
        }
        return VertexKey(std::move(s));
    }

    /// First factor of the normal form; nullopt for elements of C.
    std::optional<Factor> leading_factor() const {
        if (syllables.empty()) return std::nullopt;
        return syllables.front().factor;
    }
};

class AmalgamGroup {
public:
    using Element = AmalgamElement;
    using Letter = AmalgamLetter;

    explicit AmalgamGroup(std::shared_ptr<const AmalgamPresentation> p) : p_(std::move(p)) {}

    const AmalgamPresentation& presentation() const { return *p_; }

    Element identity() const { return Element{p_.get(), 0, {}}; }

    void check(const Letter& x) const {
        if (!p_->group(x.factor).contains(x.element))
            throw InvalidLetter("letter " + std::string(1, factor_tag(x.factor)) +
                                std::to_string(x.element) + " is not in its factor");
    }

    /// Right-to-left rewriting: each letter is pushed onto the front of the
    /// already-normalized suffix.
    Element reduce(std::span<const Letter> word) const {
        for (auto& x : word) check(x);
        Element e = identity();
        std::deque<AmalgamSyllable> syl;
        for (auto it = word.rbegin(); it != word.rend(); ++it) prepend(e.c, syl, *it);
        e.syllables.assign(syl.begin(), syl.end());
        return e;
    }

    /// Left-to-right reducer used only as an independent cross-check: free
    /// syllable cancellation on raw factor elements, then a single coset
    /// normalization pass.
    Element reduce_left_to_right(std::span<const Letter> word) const {
        for (auto& x : word) check(x);
        struct Raw {
            Factor f;
            int g;
        };
        std::vector<Raw> stack;
        int lead = 0;  // C element absorbed at the very front
        for (auto& x : word) {
            const auto& G = p_->group(x.factor);
            const auto& cos = p_->cosets(x.factor);
            if (!stack.empty() && stack.back().f == x.factor) {
                stack.back().g = G.mul(stack.back().g, x.element);
            } else if (cos.contains(x.element)) {
                if (stack.empty()) {
                    lead = c_mul(lead, cos.member_index(x.element));
                } else {
                    auto& top = stack.back();
                    top.g = p_->group(top.f).mul(top.g, p_->embed(top.f, cos.member_index(x.element)));
                }
                continue;
            } else {
                stack.push_back({x.factor, x.element});
            }
            // Collapse syllables that fell into C.
            while (!stack.empty() && p_->cosets(stack.back().f).contains(stack.back().g)) {
                int ci = p_->cosets(stack.back().f).member_index(stack.back().g);
                stack.pop_back();
                if (stack.empty()) {
                    lead = c_mul(lead, ci);
                } else {
                    auto& top = stack.back();
                    top.g = p_->group(top.f).mul(top.g, p_->embed(top.f, ci));
                }
            }
        }
        Element e = identity();
        int carry = 0;
        e.syllables.resize(stack.size());
        for (std::size_t i = stack.size(); i-- > 0;) {
            const auto& G = p_->group(stack[i].f);
            const auto& cos = p_->cosets(stack[i].f);
            int g = G.mul(stack[i].g, p_->embed(stack[i].f, carry));
            e.syllables[i] = {stack[i].f, cos.representative(g)};
            carry = cos.subgroup_part(g);
        }
        e.c = c_mul(lead, carry);
        return e;
    }

    /// Reduction by random binary splitting; every split point must give the
    /// same answer when normal forms are unique.
    template <class Rng>
    Element reduce_randomized(std::span<const Letter> word, Rng& rng) const {
        if (word.size() <= 1) return reduce(word);
        std::uniform_int_distribution<std::size_t> pick(1, word.size() - 1);
        std::size_t cut = pick(rng);
        return multiply(reduce_randomized(word.subspan(0, cut), rng),
                        reduce_randomized(word.subspan(cut), rng));
    }

    std::vector<Letter> letters(const Element& a) const {
        std::vector<Letter> w;
        if (a.c != 0) w.push_back({Factor::H, p_->embed(Factor::H, a.c)});
        for (auto& y : a.syllables) w.push_back({y.factor, y.rep});
        return w;
    }

    Element multiply(const Element& a, const Element& b) const {
        own(a);
        own(b);
        // Prepend a's letters onto b's normal form.
        Element out = b;
        std::deque<AmalgamSyllable> syl(b.syllables.begin(), b.syllables.end());
        auto la = letters(a);
        for (auto it = la.rbegin(); it != la.rend(); ++it) prepend(out.c, syl, *it);
        out.syllables.assign(syl.begin(), syl.end());
        return out;
    }

    Element inverse(const Element& a) const {
        own(a);
        auto la = letters(a);
        std::vector<Letter> w;
        for (auto it = la.rbegin(); it != la.rend(); ++it)
            w.push_back({it->factor, p_->group(it->factor).inv(it->element)});
        return reduce(w);
    }

    Element decode(const VertexKey& k) const {
        const std::string& s = k.bytes();
        std::size_t pos = 0;
        if (s.empty() || s[pos++] != 'c') throw InvalidVertex("malformed amalgam key: " + s);
        Element e = identity();
        e.c = detail::parse_int(s, pos);
        if (e.c >= p_->c_order()) throw InvalidVertex("C index out of range: " + s);
        while (pos < s.size()) {
            if (s[pos++] != '|' || pos >= s.size()) throw InvalidVertex("malformed amalgam key: " + s);
            char tag = s[pos++];
            if (tag != 'H' && tag != 'K') throw InvalidVertex("malformed amalgam key: " + s);
            Factor f = tag == 'H' ? Factor::H : Factor::K;
            int r = detail::parse_int(s, pos);
            const auto& cos = p_->cosets(f);
            if (!p_->group(f).contains(r) || cos.representative(r) != r || cos.contains(r))
                throw InvalidVertex("not a nontrivial coset representative: " + s);
            if (!e.syllables.empty() && e.syllables.back().factor == f)
                throw InvalidVertex("syllables do not alternate: " + s);
            e.syllables.push_back({f, r});
        }
        if (e.key() != k) throw InvalidVertex("non-canonical amalgam key: " + s);
        return e;
    }

private:
    void own(const Element& a) const {
        if (a.presentation != p_.get()) throw PresentationMismatch("element belongs to another presentation");
    }

    int c_mul(int i, int j) const {
        const auto& G = p_->group(Factor::H);
        return p_->cosets(Factor::H).member_index(G.mul(p_->embed(Factor::H, i), p_->embed(Factor::H, j)));
    }

    // x * (C[c] * r_1 * ... ) rewritten in place.
    void prepend(int& c, std::deque<AmalgamSyllable>& syl, const Letter& x) const {
        const auto& G = p_->group(x.factor);
        const auto& cos = p_->cosets(x.factor);
        int y = G.mul(x.element, p_->embed(x.factor, c));
        if (!syl.empty() && syl.front().factor == x.factor) {
            y = G.mul(y, syl.front().rep);
            syl.pop_front();
        }
        c = cos.subgroup_part(y);
        int r = cos.representative(y);
        if (!cos.contains(r)) syl.push_front({x.factor, r});
    }

    std::shared_ptr<const AmalgamPresentation> p_;
};

// ---------------------------------------------------------------------------
// HNN extension <H, t | t^{-1} c t = phi(c), c in C1>
// ---------------------------------------------------------------------------

class HnnPresentation {
public:
    /// phi[i] is the image of c1[i]; both lists start with the identity.
    HnnPresentation(FiniteGroup h, std::vector<int> c1, std::vector<int> c2, std::vector<int> phi,
                    std::string name = "hnn")
        : name_(std::move(name)), h_(std::move(h)), c1_(h_, std::move(c1)), c2_(h_, std::move(c2)) {
        const auto& e1 = c1_.elements();
        if (phi.size() != e1.size() || e1.size() != c2_.elements().size())
            throw InvalidPresentation("phi must be a bijection C1 -> C2");
        phi_.assign(h_.order(), -1);
        phi_inv_.assign(h_.order(), -1);
        for (std::size_t i = 0; i < e1.size(); ++i) {
            if (!c2_.contains(phi[i])) throw InvalidPresentation("phi image outside C2");
            if (phi_inv_[phi[i]] >= 0) throw InvalidPresentation("phi is not injective");
            phi_[e1[i]] = phi[i];
            phi_inv_[phi[i]] = e1[i];
        }
        for (int a : e1)
            for (int b : e1)
                if (phi_[h_.mul(a, b)] != h_.mul(phi_[a], phi_[b]))
                    throw InvalidPresentation("phi is not a homomorphism");
    }

    const std::string& name() const noexcept { return name_; }
    const FiniteGroup& base() const noexcept { return h_; }
    const RightCosets& c1() const noexcept { return c1_; }
    const RightCosets& c2() const noexcept { return c2_; }
    int phi(int c) const { return phi_[c]; }
    int phi_inverse(int c) const { return phi_inv_[c]; }

private:
    std::string name_;
    FiniteGroup h_;
    RightCosets c1_, c2_;
    std::vector<int> phi_, phi_inv_;
};

/// A letter is either an element of H or t^{+1} / t^{-1}.
struct HnnLetter {
    int t_exponent = 0;  // 0 for an H letter
    int element = 0;

    static HnnLetter h(int x) { return {0, x}; }
    static HnnLetter t(int e) { return {e, 0}; }
    friend bool operator==(const HnnLetter&, const HnnLetter&) = default;
};

struct HnnSyllable {
    int exponent;  // +1 or -1
    int rep;       // C2-coset rep for +1, C1-coset rep for -1
    friend bool operator==(const HnnSyllable&, const HnnSyllable&) = default;
};

/// g0 * t^{e_1} g_1 * ... * t^{e_n} g_n in Britton normal form.
struct HnnElement {
    const HnnPresentation* presentation = nullptr;
    int g0 = 0;
    std::vector<HnnSyllable> syllables;

    int length() const { return static_cast<int>(syllables.size()); }
    friend bool operator==(const HnnElement& a, const HnnElement& b) {
        return a.presentation == b.presentation && a.g0 == b.g0 && a.syllables == b.syllables;
    }

    VertexKey key() const {
        std::string s = "g" + std::to_string(g0);
        for (auto& y : syllables) {
            s += y.exponent > 0 ? "|t+" : "|t-";
            s += std::to_string(y.rep);
        }
        return VertexKey(std::move(s));
    }
};

class HnnGroup {
public:
    using Element = HnnElement;
    using Letter = HnnLetter;

    explicit HnnGroup(std::shared_ptr<const HnnPresentation> p) : p_(std::move(p)) {}

    const HnnPresentation& presentation() const { return *p_; }

    Element identity() const { return Element{p_.get(), p_->base().identity(), {}}; }

    void check(const Letter& x) const {
        if (x.t_exponent == 0 ? !p_->base().contains(x.element) : std::abs(x.t_exponent) != 1)
            throw InvalidLetter("invalid HNN letter");
    }

    /// Right-to-left Britton rewriting into the unique normal form.
    Element reduce(std::span<const Letter> word) const {
        for (auto& x : word) check(x);
        int g0 = p_->base().identity();
        std::deque<HnnSyllable> syl;
        for (auto it = word.rbegin(); it != word.rend(); ++it) prepend(g0, syl, *it);
        return Element{p_.get(), g0, {syl.begin(), syl.end()}};
    }

    /// Independent cross-check: left-to-right pinch cancellation on raw
    /// H-syllables, then one coset normalization sweep.
    Element reduce_left_to_right(std::span<const Letter> word) const {
        for (auto& x : word) check(x);
        const auto& H = p_->base();
        std::vector<int> hs{H.identity()};  // hs[i] follows exps[i-1]
        std::vector<int> exps;
        for (auto& x : word) {
            if (x.t_exponent == 0) {
                hs.back() = H.mul(hs.back(), x.element);
                continue;
            }
            if (!exps.empty() && exps.back() == -x.t_exponent) {
                int h = hs.back();
                bool pinch = exps.back() == -1 ? p_->c1().contains(h) : p_->c2().contains(h);
                if (pinch) {
                    int image = exps.back() == -1 ? p_->phi(h) : p_->phi_inverse(h);
                    exps.pop_back();
                    hs.pop_back();
                    hs.back() = H.mul(hs.back(), image);
                    continue;
                }
            }
            exps.push_back(x.t_exponent);
            hs.push_back(H.identity());
        }
        Element e = identity();
        e.syllables.resize(exps.size());
        for (std::size_t i = exps.size(); i-- > 0;) {
            const auto& cos = exps[i] < 0 ? p_->c1() : p_->c2();
            int h = hs[i + 1];
            int c = cos.elements()[cos.subgroup_part(h)];
            e.syllables[i] = {exps[i], cos.representative(h)};
            // t^{-1} c = phi(c) t^{-1};  t c = phi^{-1}(c) t
            int moved = exps[i] < 0 ? p_->phi(c) : p_->phi_inverse(c);
            hs[i] = H.mul(hs[i], moved);
        }
        e.g0 = hs[0];
        return e;
    }

    template <class Rng>
    Element reduce_randomized(std::span<const Letter> word, Rng& rng) const {
        if (word.size() <= 1) return reduce(word);
        std::uniform_int_distribution<std::size_t> pick(1, word.size() - 1);
        std::size_t cut = pick(rng);
        return multiply(reduce_randomized(word.subspan(0, cut), rng),
                        reduce_randomized(word.subspan(cut), rng));
    }

    std::vector<Letter> letters(const Element& a) const {
        std::vector<Letter> w{Letter::h(a.g0)};
        for (auto& y : a.syllables) {
            w.push_back(Letter::t(y.exponent));
            w.push_back(Letter::h(y.rep));
        }
        return w;
    }

    Element multiply(const Element& a, const Element& b) const {
        own(a);
        own(b);
        int g0 = b.g0;
        std::deque<HnnSyllable> syl(b.syllables.begin(), b.syllables.end());
        auto la = letters(a);
        for (auto it = la.rbegin(); it != la.rend(); ++it) prepend(g0, syl, *it);
        return Element{p_.get(), g0, {syl.begin(), syl.end()}};
    }

    Element inverse(const Element& a) const {
        own(a);
        auto la = letters(a);
        std::vector<Letter> w;
        for (auto it = la.rbegin(); it != la.rend(); ++it) {
            if (it->t_exponent != 0)
                w.push_back(Letter::t(-it->t_exponent));
            else
                w.push_back(Letter::h(p_->base().inv(it->element)));
        }
        return reduce(w);
    }

    Element decode(const VertexKey& k) const {
        const std::string& s = k.bytes();
        std::size_t pos = 0;
        if (s.empty() || s[pos++] != 'g') throw InvalidVertex("malformed HNN key: " + s);
        Element e = identity();
        e.g0 = detail::parse_int(s, pos);
        if (!p_->base().contains(e.g0)) throw InvalidVertex("H element out of range: " + s);
        while (pos < s.size()) {
            if (s.compare(pos, 2, "|t") != 0 || pos + 2 >= s.size())
                throw InvalidVertex("malformed HNN key: " + s);
            pos += 2;
            char sign = s[pos++];
            if (sign != '+' && sign != '-') throw InvalidVertex("malformed HNN key: " + s);
            int r = detail::parse_int(s, pos);
            if (!p_->base().contains(r)) throw InvalidVertex("H element out of range: " + s);
            e.syllables.push_back({sign == '+' ? 1 : -1, r});
        }
        // Canonical iff re-reduction is the identity map.
        if (reduce(letters(e)).key() != k) throw InvalidVertex("non-canonical HNN key: " + s);
        return e;
    }

private:
    void own(const Element& a) const {
        if (a.presentation != p_.get()) throw PresentationMismatch("element belongs to another presentation");
    }

    void prepend(int& g0, std::deque<HnnSyllable>& syl, const Letter& x) const {
        const auto& H = p_->base();
        if (x.t_exponent == 0) {
            g0 = H.mul(x.element, g0);
            return;
        }
        if (x.t_exponent < 0) {
            // t^{-1} g0 = t^{-1} c r = phi(c) t^{-1} r   (c in C1)
            const auto& cos = p_->c1();
            int c = cos.elements()[cos.subgroup_part(g0)];
            int r = cos.representative(g0);
            if (r == H.identity() && !syl.empty() && syl.front().exponent == 1) {
                // t^{-1} c t = phi(c)
                g0 = H.mul(p_->phi(c), syl.front().rep);
                syl.pop_front();
            } else {
                syl.push_front({-1, r});
                g0 = p_->phi(c);
            }
        } else {
            // t g0 = t c r = phi^{-1}(c) t r   (c in C2)
            const auto& cos = p_->c2();
            int c = cos.elements()[cos.subgroup_part(g0)];
            int r = cos.representative(g0);
            if (r == H.identity() && !syl.empty() && syl.front().exponent == -1) {
                g0 = H.mul(p_->phi_inverse(c), syl.front().rep);
                syl.pop_front();
            } else {
                syl.push_front({1, r});
                g0 = p_->phi_inverse(c);
            }
        }
    }

    std::shared_ptr<const HnnPresentation> p_;
};

// ---------------------------------------------------------------------------
// Cayley graphs
// ---------------------------------------------------------------------------

/// Cayley graph of a presented group with respect to a finite symmetric
/// generating set. Vertices are serialized normal forms; left
/// multiplication by any element is a graph automorphism.
template <class Group>
class CayleyGraph {
public:
    using Element = typename Group::Element;
    using Letter = typename Group::Letter;

    CayleyGraph(Group group, const std::vector<std::vector<Letter>>& generator_words,
                std::string name = "cayley")
        : group_(std::make_shared<Group>(std::move(group))) {
        for (auto& w : generator_words) {
            Element g = group_->reduce(w);
            if (g == group_->identity()) throw InvalidGeneratorSet("generator set contains the identity");
            if (std::find(generators_.begin(), generators_.end(), g) == generators_.end())
                generators_.push_back(g);
        }
        if (generators_.empty()) throw InvalidGeneratorSet("empty generator set");
        for (auto& g : generators_) {
            auto gi = group_->inverse(g);
            if (std::find(generators_.begin(), generators_.end(), gi) == generators_.end())
                throw InvalidGeneratorSet("generator set is not closed under inversion");
        }
        auto grp = group_;
        auto gens = generators_;
        oracle_ = GraphOracle(
            std::move(name),
            [grp, gens](const VertexKey& v) {
                Element x = grp->decode(v);
                std::vector<VertexKey> out;
                out.reserve(gens.size());
                for (auto& t : gens) out.push_back(grp->multiply(x, t).key());
                return out;
            },
            static_cast<int>(generators_.size()), Transitivity::vertex_transitive, 1);
    }

    const GraphOracle& oracle() const noexcept { return oracle_; }
    const Group& group() const noexcept { return *group_; }
    const std::vector<Element>& generators() const noexcept { return generators_; }
    Element element(const VertexKey& k) const { return group_->decode(k); }

    /// Left multiplication x -> g x as a vertex map.
    std::function<VertexKey(const VertexKey&)> left_multiplication(const Element& g) const {
        auto grp = group_;
        return [grp, g](const VertexKey& v) { return grp->multiply(g, grp->decode(v)).key(); };
    }

private:
    std::shared_ptr<Group> group_;
    std::vector<Element> generators_;
    GraphOracle oracle_;
};

/// The Cayley graph of a group with respect to the given generator words.
template <class Group>
CayleyGraph<Group> cayley_oracle(Group group,
                                 const std::vector<std::vector<typename Group::Letter>>& generators,
                                 std::string name = "cayley") {
    return CayleyGraph<Group>(std::move(group), generators, std::move(name));
}

/// Generators of a finite factor Cayley graph, used to build the glued graph.
struct FactorGenerators {
    std::vector<int> elements;
};

/// The graph G0: the free-product Cayley graph of the two factor Cayley
/// graphs with C-related vertices identified, i.e. the Cayley graph of
/// H *_C K with respect to T_H union T_K.
inline CayleyGraph<AmalgamGroup> glued_amalgam_graph(const FactorGenerators& t_h, const FactorGenerators& t_k,
                                                     std::shared_ptr<const AmalgamPresentation> p) {
    auto check = [&](const FactorGenerators& t, Factor f) {
        const auto& G = p->group(f);
        for (int x : t.elements) {
            if (!G.contains(x)) throw PresentationMismatch("factor generator outside its group");
            if (x == G.identity()) throw InvalidGeneratorSet("factor generators contain the identity");
            if (std::find(t.elements.begin(), t.elements.end(), G.inv(x)) == t.elements.end())
                throw InvalidGeneratorSet("factor generators are not symmetric");
        }
    };
    check(t_h, Factor::H);
    check(t_k, Factor::K);
    std::vector<std::vector<AmalgamLetter>> words;
    for (int x : t_h.elements) words.push_back({{Factor::H, x}});
    for (int x : t_k.elements) words.push_back({{Factor::K, x}});
    return CayleyGraph<AmalgamGroup>(AmalgamGroup(std::move(p)), words, "glued-amalgam");
}

/// All vertices within distance r of some center.
inline std::set<VertexKey> neighborhood(const GraphOracle& g, const std::vector<VertexKey>& centers, int r) {
    std::set<VertexKey> out;
    for (auto& c : centers) {
        for (auto& [k, d] : bfs_depths(g, c, r)) out.insert(k);
    }
    return out;
}

/// max over generators s of T of dist_{G0}(1, s), which by left invariance
/// equals max over v, s of dist_{G0}(v, v s).
template <class Group>
int generator_stretch(const CayleyGraph<Group>& g0, const std::vector<typename Group::Element>& t, int cap) {
    int best = 0;
    auto one = g0.group().identity().key();
    for (auto& s : t) {
        auto d = distance(g0.oracle(), one, s.key(), cap);
        if (!d) throw RadiusTooSmall("generator farther than cap in G0");
        best = std::max(best, *d);
    }
    return best;
}

enum class Separation { Separated, NotSeparatedWithinRadius };

/// Searches for a path from u to v avoiding `cut`, exploring at most
/// `radius` steps from u. Separated is a finite-radius certificate.
inline Separation separation_test(const GraphOracle& g, const VertexKey& u, const VertexKey& v,
                                  const std::set<VertexKey>& cut, int radius) {
    if (cut.count(u) || cut.count(v)) throw InvalidEndpoint("endpoint lies in the cut");
    if (u == v) return Separation::NotSeparatedWithinRadius;
    auto path = shortest_path(
        g, u, [&](const VertexKey& x) { return x == v; },
        [&](const VertexKey& x) { return cut.count(x) > 0; }, radius);
    return path ? Separation::NotSeparatedWithinRadius : Separation::Separated;
}

}  // namespace sawends
