#include "fiblab/bundlecmp.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "fiblab/modring.hpp"

namespace fiblab::bundlecmp {

using fgab::AbGroup;
using fgab::IntMatrix;
using registry::GroupCitation;
using registry::Registry;

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::EpiByCitedArgument: return "EpiByCitedArgument";
        case Verdict::NotEpiByRankObstruction: return "NotEpiByRankObstruction";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    throw InternalInconsistency("bundlecmp: bad verdict enum");
}

namespace {

int p_depth(const AbGroup& g, long long p) {
    int depth = 0;
    for (long long d : g.torsion) {
        int e = 0;
        while (d % p == 0) {
            d /= p;
            ++e;
        }
        depth = std::max(depth, e);
    }
    return depth;
}

}  // namespace

bool rank_obstruction(const AbGroup& source,
                      const std::vector<AbGroup>& candidates,
                      long long p) {
    if (candidates.empty())
        throw InvalidArgument("rank_obstruction: candidate list is empty");
    auto f = modring::factorize(p);
    if (p < 2 || f.size() != 1 || f[0].second != 1)
        throw InvalidArgument("rank_obstruction: p must be prime");
    for (const AbGroup& cand : candidates) {
        int jmax = std::max(p_depth(source, p), p_depth(cand, p)) + 1;
        bool obstructed = false;
        for (int j = 1; j <= jmax && !obstructed; ++j)
            obstructed = fgab::layer_dim(cand, p, j) > fgab::layer_dim(source, p, j);
        if (!obstructed) return false;
    }
    return true;
}

namespace {

// Fails the replay: the verdict stays Inconclusive and `detail` names the
// failing check. Thrown internally, never escapes j_verdict.
struct ReplayFailure {
    std::string what;
};

struct Replay {
    const Registry& reg;
    JVerdict& out;

    GroupCitation take(const std::string& key,
                       const std::map<std::string, long long>& params = {}) {
        if (!reg.has(key, params))
            throw ReplayFailure{"missing registry record '" + key + "'"};
        GroupCitation rec = reg.lookup(key, params);
        out.citations.push_back(rec.source);
        return rec;
    }

    void require(bool cond, const std::string& what) {
        if (!cond) throw ReplayFailure{"check failed: " + what};
    }

    void note(const std::string& line) { out.notes.push_back(line); }
};

std::string pi_label(long long i, long long sphere) {
    return "pi_" + std::to_string(i) + "(S^" + std::to_string(sphere) + ")";
}

bool is_infinite_cyclic(const AbGroup& g) {
    return g.free_rank == 1 && g.torsion.empty();
}

// k = 2 and k = 4: the square
//
//   pi_{2k-1}(O_{2k-1}) --J--> pi_{4k-2}(S^{2k-1})
//        | restriction              | suspension
//   pi_{2k-1}(O) ------J----> stable (2k-1)-stem
//
// commutes. The restriction sends a generator to `incl` times a stable
// generator, the suspension is multiplication by `susp` and injective, and
// the bottom J is onto. So the suspension of the unstable image contains an
// element of order (stable order)/gcd(stable order, incl); when that equals
// the full unstable target order and the target is cyclic, the top J is onto.
void replay_stable_square(Replay& r, long long k) {
    GroupCitation o_small = r.take("pi_{2k-1}(O_{2k-1})", {{"k", k}});
    GroupCitation o_stable = r.take("pi_{2k-1}(O)", {{"k", k}});
    GroupCitation incl = r.take("O inclusion multiplier", {{"k", k}});
    GroupCitation tors = r.take("pi_{4k-2}(S^{2k-1})", {{"k", k}});
    GroupCitation stem = r.take("stable stem", {{"k", k}});
    GroupCitation susp = r.take("suspension multiplier", {{"k", k}});
    GroupCitation adams = r.take("J stable epi", {{"k", k}});

    r.require(is_infinite_cyclic(o_small.group),
              "pi_{2k-1}(O_{2k-1}) is infinite cyclic");
    r.require(is_infinite_cyclic(o_stable.group), "pi_{2k-1}(O) is infinite cyclic");
    long long incl_mult = incl.param("value");
    r.require(incl_mult != 0, "restriction multiplier is nonzero");
    {
        IntMatrix m(1, 1);
        m.at(0, 0) = incl_mult;
        fgab::Hom h = fgab::make_hom(o_small.group, o_stable.group, m);
        r.require(fgab::kernel(h).is_trivial(), "restriction to the stable group is injective");
    }

    r.require(tors.group.is_finite() && tors.group.torsion.size() == 1,
              "unstable target is finite cyclic");
    r.require(stem.group.is_finite() && stem.group.torsion.size() == 1,
              "stable stem is finite cyclic");
    long long susp_mult = susp.param("value");
    IntMatrix s(1, 1);
    s.at(0, 0) = susp_mult;
    fgab::Hom sigma = fgab::make_hom(tors.group, stem.group, s);
    r.require(fgab::kernel(sigma).is_trivial(), "suspension into the stable stem is injective");
    std::optional<long long> coker_order = fgab::cokernel(sigma).order();
    r.require(coker_order.has_value(), "suspension cokernel is finite");

    r.require(adams.param("epi") == 1, "stable J is recorded as onto");

    long long stable_order = *stem.group.order();
    long long target_order = *tors.group.order();
    long long elt_order = stable_order / std::gcd(stable_order, incl_mult);
    r.require(elt_order == target_order,
              "image of the restricted generator has full order in the suspension");

    std::string target = pi_label(4 * k - 2, 2 * k - 1);
    r.note("restriction pi_" + std::to_string(2 * k - 1) + "(O_" +
           std::to_string(2 * k - 1) + ") -> pi_" + std::to_string(2 * k - 1) +
           "(O) sends a generator to " + std::to_string(incl_mult) +
           " times a stable generator (injective)");
    r.note("suspension " + tors.group.to_string() + " -> " + stem.group.to_string() +
           " is multiplication by " + std::to_string(susp_mult) +
           ", injective with cokernel order " + std::to_string(*coker_order));
    r.note("stable J is onto, so the restricted generator's stable J-image has order " +
           std::to_string(elt_order) + " = |" + target + "|");
    r.note("the suspension is injective, so the unstable J-image generates " + target);

    r.out.verdict = Verdict::EpiByCitedArgument;
    r.out.detail = "onto: the stable J is onto and the commuting suspension square "
                   "transfers surjectivity to " + target;
}

// k = 3: restriction ladder between the orthogonal-group sequence over S^5
// and the corresponding sphere sequence. The two flanking verticals are
// replayed from cited generator images (one iso, one epi) and the stable
// column is onto by a cited theorem; the five lemma then makes the middle
// vertical onto.
void replay_five_lemma(Replay& r) {
    GroupCitation o3 = r.take("pi_3(O_5)");
    GroupCitation o4 = r.take("pi_4(O_5)");
    GroupCitation o5 = r.take("pi_5(O_5;2)");
    GroupCitation s8 = r.take("pi_8(S^5)");
    GroupCitation s9 = r.take("pi_9(S^5)");
    GroupCitation s10 = r.take("pi_10(S^5)");
    GroupCitation j35 = r.take("J_{3,5} epi");
    GroupCitation j45 = r.take("J_{4,5} image");
    GroupCitation j55 = r.take("J_{5,5} image");

    r.require(is_infinite_cyclic(o3.group), "pi_3(O_5) is infinite cyclic");
    r.require(s8.group.is_finite(), "pi_8(S^5) is finite");
    r.require(j35.param("epi") == 1, "J on pi_3(O_5) is recorded as onto pi_8(S^5)");

    {
        IntMatrix m(1, 1);
        m.at(0, 0) = j45.param("value");
        fgab::Hom h = fgab::make_hom(o4.group, s9.group, m);
        r.require(fgab::kernel(h).is_trivial() && fgab::cokernel(h).is_trivial(),
                  "J on pi_4(O_5) is an isomorphism onto pi_9(S^5)");
    }
    {
        IntMatrix m(1, 1);
        m.at(0, 0) = j55.param("value");
        fgab::Hom h = fgab::make_hom(o5.group, s10.group, m);
        r.require(fgab::cokernel(h).is_trivial(),
                  "J on the 2-primary pi_5(O_5) is onto pi_10(S^5)");
    }

    r.note("ladder verticals: J sends the cited generators of " + o5.group.to_string() +
           " and " + o4.group.to_string() + " to generators, giving an epi and an iso");
    r.note("J: pi_3(O_5) -> " + pi_label(8, 5) + " = " + s8.group.to_string() +
           " is onto by the cited stable-range theorem");
    r.note("rows of the restriction ladder are exact, so the five lemma makes the "
           "middle comparison map onto");

    r.out.verdict = Verdict::EpiByCitedArgument;
    r.out.detail = "onto: five-lemma transfer along the restriction ladder over S^5";
}

// k = 5: the evaluation-fibration sequence for self-maps of S^9 pins the
// fibration side between pi_18(S^9) and pi_9(S^9). The boundary entering
// pi_18(S^9) comes from pi_10(S^9), so the torsion of the target is either
// all of pi_18(S^9) or that group modulo one boundary image; the free part
// is pi_9(S^9) because the next group along is finite. Every candidate then
// out-ranks the 2-primary bundle side at layer depth 1.
void replay_rank_k5(Replay& r) {
    GroupCitation t18 = r.take("pi_18(S^9)");
    GroupCitation fin17 = r.take("pi_17(S^9) finite");
    GroupCitation p10 = r.take("pi_10(S^9)");
    GroupCitation p9 = r.take("pi_9(S^9)");
    GroupCitation source = r.take("pi_9(O_10;2)");

    r.require(fin17.param("finite") == 1, "pi_17(S^9) is recorded finite");
    r.require(is_infinite_cyclic(p9.group), "pi_9(S^9) is infinite cyclic");
    r.require(t18.group.is_finite(), "pi_18(S^9) is finite");
    r.require(p10.group.is_finite() && p10.group.generator_count() == 1,
              "boundary source pi_10(S^9) is finite cyclic");

    AbGroup cand_full = fgab::direct_sum(t18.group, p9.group);
    // Boundary image is either trivial or one embedded copy of pi_10(S^9);
    // the quotient type does not depend on which copy, so embed into the
    // first generator.
    IntMatrix embed(t18.group.generator_count(), 1);
    embed.at(0, 0) = 1;
    fgab::Hom boundary = fgab::make_hom(p10.group, t18.group, embed);
    AbGroup cand_dropped = fgab::direct_sum(fgab::cokernel(boundary), p9.group);

    const long long p = 2;
    std::vector<AbGroup> candidates = {cand_full, cand_dropped};
    bool obstructed = rank_obstruction(source.group, candidates, p);
    r.require(obstructed, "every candidate out-ranks the source at some 2-layer");

    r.note("candidate targets from the evaluation sequence: " + cand_full.to_string() +
           " and " + cand_dropped.to_string());
    r.note("2-layer ranks at depth 1: source " +
           std::to_string(fgab::layer_dim(source.group, p, 1)) + ", candidates " +
           std::to_string(fgab::layer_dim(cand_full, p, 1)) + " and " +
           std::to_string(fgab::layer_dim(cand_dropped, p, 1)));

    r.out.verdict = Verdict::NotEpiByRankObstruction;
    r.out.obstruction_prime = p;
    r.out.detail = "not onto: every candidate target needs more independent 2-layer "
                   "generators than pi_9(O_10;2) = " + source.group.to_string() + " has";
}

// k = 6: replay both sides. Bundle side: pi_12(O_13) is finite, so its map to
// pi_12(S^12) = Z is zero and pi_11(O_12) is an extension of pi_11(O) = Z by
// Z, hence free of rank 2. Fibration side: the boundary from pi_12(S^11)
// factors through a group recorded 2-torsion-free, so it dies, and with
// pi_21(S^11) finite the side is pi_22(S^11) plus a free rank from
// pi_11(S^11). A free source could surject abstractly, but the ladder routes
// the torsion through the 2-torsion-free group, so the torsion-restricted
// comparison at p = 2 decides.
void replay_rank_k6(Replay& r) {
    GroupCitation fin13 = r.take("pi_12(O_13) finite");
    GroupCitation p12 = r.take("pi_12(S^12)");
    GroupCitation o_stable = r.take("pi_{2k-1}(O)", {{"k", 6}});
    GroupCitation eta = r.take("pi_12(S^11)");
    GroupCitation t22 = r.take("pi_22(S^11)");
    GroupCitation fin21 = r.take("pi_21(S^11) finite");
    GroupCitation tfree = r.take("pi_11(O_11) 2-torsion-free");
    GroupCitation p11 = r.take("pi_11(S^11)");

    r.require(fin13.param("finite") == 1, "pi_12(O_13) is recorded finite");
    r.require(is_infinite_cyclic(p12.group), "pi_12(S^12) is infinite cyclic");
    r.require(is_infinite_cyclic(o_stable.group), "pi_11(O) is infinite cyclic");
    // A finite group maps to a torsion-free group only trivially, so the
    // sequence degenerates to 0 -> Z -> pi_11(O_12) -> Z -> 0, which splits.
    AbGroup bundle_side = fgab::direct_sum(p12.group, o_stable.group);
    r.require(bundle_side.torsion.empty(), "bundle side is torsion-free");

    r.require(tfree.param("two_torsion_free") == 1,
              "pi_11(O_11) is recorded 2-torsion-free");
    std::optional<long long> eta_order = eta.group.order();
    r.require(eta_order.has_value() && *eta_order >= 2 &&
                  (*eta_order & (*eta_order - 1)) == 0,
              "boundary source pi_12(S^11) is a nontrivial finite 2-group");
    r.require(t22.group.is_finite(), "pi_22(S^11) is finite");
    r.require(fin21.param("finite") == 1, "pi_21(S^11) is recorded finite");
    r.require(is_infinite_cyclic(p11.group), "pi_11(S^11) is infinite cyclic");
    // The boundary out of a 2-group through a 2-torsion-free group is zero,
    // pi_21(S^11) finite forces the image in pi_11(S^11) to be a full-rank
    // subgroup of Z, and a free quotient splits the extension.
    AbGroup fibration_side =
        fgab::direct_sum(t22.group, AbGroup::free_group(p11.group.free_rank));

    bool abstract_epi = fgab::exists_epimorphism(bundle_side, fibration_side);
    r.note("unrestricted rank comparison cannot decide: exists_epimorphism(" +
           bundle_side.to_string() + ", " + fibration_side.to_string() + ") = " +
           (abstract_epi ? std::string("true") : std::string("false")));

    const long long p = 2;
    AbGroup source_torsion{0, bundle_side.torsion};
    AbGroup target_torsion{0, fibration_side.torsion};
    bool obstructed = rank_obstruction(source_torsion, {target_torsion}, p);
    r.require(obstructed, "target torsion out-ranks the ladder-permitted torsion "
                          "source at some 2-layer");

    r.note("bundle side replayed to " + bundle_side.to_string() +
           ", fibration side to " + fibration_side.to_string());
    r.note("the ladder routes target torsion through a 2-torsion-free group, so "
           "the torsion-restricted comparison applies: 2-layer rank at depth 1 is " +
           std::to_string(fgab::layer_dim(target_torsion, p, 1)) + " against " +
           std::to_string(fgab::layer_dim(source_torsion, p, 1)));

    r.out.verdict = Verdict::NotEpiByRankObstruction;
    r.out.obstruction_prime = p;
    r.out.detail = "not onto: the fibration-side torsion " + target_torsion.to_string() +
                   " cannot be covered through a 2-torsion-free group";
}

}  // namespace

JVerdict j_verdict(long long k, const Registry& reg) {
    if (k < 2 || k > 6)
        throw InvalidArgument("j_verdict: k must be in 2..6");
    JVerdict out;
    out.k = k;
    out.verdict = Verdict::Inconclusive;
    Replay r{reg, out};
    try {
        switch (k) {
            case 2:
            case 4: replay_stable_square(r, k); break;
            case 3: replay_five_lemma(r); break;
            case 5: replay_rank_k5(r); break;
            case 6: replay_rank_k6(r); break;
        }
    } catch (const ReplayFailure& f) {
        out.verdict = Verdict::Inconclusive;
        out.obstruction_prime.reset();
        out.detail = f.what;
    } catch (const Error& e) {
        out.verdict = Verdict::Inconclusive;
        out.obstruction_prime.reset();
        out.detail = std::string("check failed: ") + e.what();
    }
    // Dedupe citations, keeping first-seen order.
    std::set<std::string> seen;
    std::vector<std::string> unique;
    for (std::string& c : out.citations)
        if (seen.insert(c).second) unique.push_back(std::move(c));
    out.citations = std::move(unique);
    return out;
}

}  // namespace fiblab::bundlecmp
