// Bundle-versus-fibration comparison along the J-homomorphism ladder.
//
// For each k the question is whether the comparison map from the bundle side
// onto the fibration side of the classification is surjective in the relevant
// homotopy degree. The decision is replayed from registry records: group
// shapes, inclusion and suspension multipliers, and onto-ness facts with their
// literature citations. Nothing is fabricated; if a record is missing or a
// replayed check fails, the verdict is Inconclusive.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fiblab/errors.hpp"
#include "fiblab/fgab.hpp"
#include "fiblab/registry.hpp"

namespace fiblab::bundlecmp {

enum class Verdict {
    EpiByCitedArgument,       // surjective, by a cited argument replayed here
    NotEpiByRankObstruction,  // not surjective: a p-layer rank count forbids it
    Inconclusive,             // missing input or a failed replay check
};

std::string to_string(Verdict v);

struct JVerdict {
    long long k = 0;
    Verdict verdict = Verdict::Inconclusive;
    // Set only for NotEpiByRankObstruction: the prime whose layer counts
    // carry the obstruction.
    std::optional<long long> obstruction_prime;
    std::string detail;                   // one-sentence summary of the decision
    std::vector<std::string> notes;       // replayed steps, one per entry
    std::vector<std::string> citations;   // sources of the records consumed
};

// True when, for every candidate, some p-layer of the candidate needs more
// independent generators than the source provides, so no surjection from the
// source onto any candidate exists. p must be prime and candidates non-empty.
// Layers are scanned one past the deepest p-power on either side, which also
// catches a free-rank deficit.
bool rank_obstruction(const fgab::AbGroup& source,
                      const std::vector<fgab::AbGroup>& candidates,
                      long long p);

// Verdict for the comparison map in dimension 2k-1, for k in 2..6.
//
//   k = 2, 4: the stable J-homomorphism is onto the stable stem and the
//     suspension square commutes with the cited multipliers; chasing the
//     square shows the unstable image generates the fiber torsion group.
//   k = 3: a five-lemma replay on the restriction ladder; the flanking
//     vertical maps are checked to be iso resp. epi from cited generator
//     images, and the stable column is onto by a cited theorem.
//   k = 5: the candidate targets, assembled from the evaluation-fibration
//     sequence, all need more independent 2-layer generators than the
//     bundle side has: rank obstruction at p = 2.
//   k = 6: the bundle side is replayed to a free group of rank 2 and the
//     fibration side to torsion plus free; the torsion must be covered
//     through a group recorded as 2-torsion-free, so the torsion-restricted
//     comparison is obstructed at p = 2. The unrestricted rank comparison
//     cannot decide this case and the notes record why.
//
// k outside 2..6 throws InvalidArgument. Any other failure (missing record,
// ambiguous lookup, failed arithmetic check) yields Inconclusive with the
// failing check named in `detail`.
JVerdict j_verdict(long long k, const registry::Registry& reg);

}  // namespace fiblab::bundlecmp
