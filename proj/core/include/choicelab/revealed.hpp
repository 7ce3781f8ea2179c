/// @file revealed.hpp
/// Revealed preference over a finite universe: f is weakly preferred to g
/// when f is chosen from the pair menu {f,g}. For internally consistent
/// correspondences on full families this relation is complete, transitive,
/// and regenerates the correspondence by taking maximal elements.
#pragma once

#include "choicelab/axioms.hpp"
#include "choicelab/core.hpp"

namespace choicelab::revealed {

/// Reflexive binary relation on hypothesis indices, stored as an m x m
/// weak-preference matrix.
class RevealedPreference {
  public:
    RevealedPreference() = default;
    explicit RevealedPreference(std::size_t m);

    std::size_t hypotheses() const { return m_; }
    bool geq(int f, int g) const;        // f weakly preferred to g
    bool strictly(int f, int g) const { return geq(f, g) && !geq(g, f); }
    bool indifferent(int f, int g) const { return geq(f, g) && geq(g, f); }
    void set_geq(int f, int g, bool v);

    /// Weak order from dense ranks (0 = best): f >= g iff rank f <= rank g.
    static RevealedPreference from_ranks(const std::vector<int>& ranks);
    /// Dense ranks of a complete transitive relation (throws otherwise).
    std::vector<int> to_ranks() const;

    std::vector<std::vector<bool>> matrix() const;

    bool operator==(const RevealedPreference& o) const = default;

  private:
    std::size_t m_ = 0;
    std::vector<bool> geq_;
};

/// Pairwise choices of cc define the relation. Requires a recorded choice
/// for every two-element menu of the universe.
RevealedPreference reveal(const ChoiceCorrespondence& cc, std::size_t m);

/// Completeness (f >= g or g >= f for every pair) and transitivity.
/// The witness note names the offending pair or triple.
axioms::Verdict check_complete_transitive(const RevealedPreference& r);

/// Maximal elements of each menu under the relation. Requires the relation
/// to rationalize every menu with a nonempty maximal set (guaranteed when
/// complete and transitive).
ChoiceCorrespondence rationalize(const RevealedPreference& r, const FeasibleFamily& fam);

/// passed iff rationalize(reveal(cc)) reproduces cc on every menu of fam.
axioms::Verdict roundtrip_check(const ChoiceCorrespondence& cc, const FeasibleFamily& fam,
                                std::size_t m);

}  // namespace choicelab::revealed
