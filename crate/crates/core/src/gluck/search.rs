//! Best-first search for a move script undoing a Gluck twist.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::canonical::{canonical_form, canonical_hash, CanonicalHash};
use crate::diagram::{FreeWord, GeneratorId, HandleDiagram, HandleId, Sign};
use crate::invariants::is_free_trivial;
use crate::moves::{apply_script, Move, MoveScript};

use super::{gluck_twist, require_sphere, GluckError, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Distinct diagrams the search may visit.
    pub max_nodes: usize,
    pub max_depth: usize,
    /// Allow dot/0-framed-unknot exchanges. These are surgeries and change
    /// the manifold, so scripts using them do not prove diffeomorphism.
    pub allow_exchanges: bool,
    /// Allow introducing cancelling pairs (large branching factor).
    pub allow_introductions: bool,
}

impl SearchBudget {
    pub fn nodes(max_nodes: usize) -> Self {
        SearchBudget {
            max_nodes,
            ..Self::default()
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 10_000,
            max_depth: 12,
            allow_exchanges: false,
            allow_introductions: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub visited: usize,
    pub expanded: usize,
}

/// Label-free summary used by the distance heuristic.
struct Profile {
    counts: [i64; 4],
    framings: Vec<i64>,
    links: Vec<i64>,
    word_length: i64,
}

impl Profile {
    fn of(d: &HandleDiagram) -> Self {
        let mut framings: Vec<i64> = d.handles.values().map(|h| h.framing).collect();
        framings.sort_unstable();
        let mut links: Vec<i64> = d.linking.pairs().map(|(_, _, v)| v.abs()).collect();
        links.sort_unstable();
        Profile {
            counts: [
                d.dots.len() as i64,
                d.handles.len() as i64,
                d.three_handles as i64,
                d.four_handles as i64,
            ],
            framings,
            links,
            word_length: d.handles.values().map(|h| h.word.len() as i64).sum(),
        }
    }

    fn distance(&self, other: &Profile) -> i64 {
        let counts: i64 = self.counts.iter().zip(&other.counts).map(|(a, b)| 4 * (a - b).abs()).sum();
        counts + sorted_gap(&self.framings, &other.framings) + sorted_gap(&self.links, &other.links)
            + (self.word_length - other.word_length).abs()
    }
}

fn sorted_gap(a: &[i64], b: &[i64]) -> i64 {
    let n = a.len().max(b.len());
    let pad = |v: &[i64], i: usize| {
        let offset = n - v.len();
        if i < offset {
            0
        } else {
            v[i - offset]
        }
    };
    (0..n).map(|i| (pad(a, i).saturating_sub(pad(b, i))).abs()).sum()
}

fn is_meridian(d: &HandleDiagram, c: &HandleId) -> bool {
    let Ok(h) = d.handle(c) else { return false };
    if h.framing != 0 || !h.word.is_empty() {
        return false;
    }
    let mut row = d.linking.row(c);
    matches!((row.next(), row.next()), (Some((_, v)), None) if v.abs() == 1)
}

fn successors(
    d: &HandleDiagram,
    k: &HandleId,
    anchors: &BTreeSet<HandleId>,
    budget: &SearchBudget,
) -> Vec<Move> {
    let mut over: BTreeSet<HandleId> = anchors.iter().filter(|h| d.handles.contains_key(*h)).cloned().collect();
    over.extend(d.handles.keys().filter(|c| is_meridian(d, c)).cloned());
    if d.handles.contains_key(k) {
        over.insert(k.clone());
    }

    let mut out = Vec::new();
    for j in &over {
        for i in d.handles.keys().filter(|i| *i != j) {
            for sign in [Sign::Plus, Sign::Minus] {
                out.push(Move::SlideHandle {
                    handle: i.clone(),
                    over: j.clone(),
                    sign,
                    band: FreeWord::empty(),
                });
            }
        }
    }
    for a in &d.dots {
        for b in d.dots.iter().filter(|b| *b != a) {
            for sign in [Sign::Plus, Sign::Minus] {
                out.push(Move::SlideDot {
                    dot: a.clone(),
                    over: b.clone(),
                    sign,
                });
            }
        }
    }
    for (h, t) in &d.handles {
        if let [l] = t.word.letters() {
            out.push(Move::CancelPair12 {
                dot: l.generator.clone(),
                handle: h.clone(),
            });
        }
        if d.three_handles > 0 && t.word.is_empty() && t.framing == 0 && d.linking.row(h).next().is_none() {
            out.push(Move::CancelPair23 { handle: h.clone() });
        }
    }
    if budget.allow_introductions {
        let g = GeneratorId::new(d.fresh_id("g"));
        let h = HandleId::new(d.fresh_id("h"));
        out.push(Move::IntroducePair12 { dot: g, handle: h.clone() });
        out.push(Move::IntroducePair23 { handle: h });
    }
    if budget.allow_exchanges {
        for (h, t) in &d.handles {
            if t.word.is_empty() && t.framing == 0 {
                out.push(Move::ExchangeZeroToDot {
                    handle: h.clone(),
                    dot: GeneratorId::new(d.fresh_id("g")),
                });
            }
        }
        for g in &d.dots {
            out.push(Move::ExchangeDotToZero {
                dot: g.clone(),
                handle: HandleId::new(d.fresh_id("h")),
            });
        }
    }
    out
}

struct Node {
    diagram: HandleDiagram,
    parent: Option<(usize, Move)>,
    depth: usize,
}

/// Searches for moves taking `gluck_twist(d, S, +1)` back to `d`.
///
/// The certified log starts at the twisted diagram and is replayed and
/// checked against `canonical_form(d)` before it is returned.
pub fn trivialize_gluck(
    d: &HandleDiagram,
    s: &HandleId,
    k: &HandleId,
    budget: &SearchBudget,
) -> Result<(Verdict, SearchStats), GluckError> {
    require_sphere(d, s)?;
    if k == s {
        return Err(GluckError::SameHandle(k.clone()));
    }
    let kh = d.handle(k)?;
    if !is_free_trivial(&kh.word) || kh.framing.rem_euclid(2) != 1 {
        return Err(GluckError::NotOddTrivial { handle: k.clone() });
    }

    let mut stats = SearchStats::default();
    if budget.max_nodes == 0 {
        return Ok((Verdict::Unknown, stats));
    }
    let target = canonical_form(d)?;
    let target_profile = Profile::of(d);
    let start = gluck_twist(d, s, Sign::Plus)?;
    let anchors: BTreeSet<HandleId> = start.handles.keys().filter(|c| is_meridian(&start, c)).cloned().collect();

    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut frontier: BinaryHeap<Reverse<(i64, CanonicalHash, usize)>> = BinaryHeap::new();

    let start_form = canonical_form(&start)?;
    let start_hash = CanonicalHash::of_bytes(&start_form);
    let mut found = (start_form == target).then_some(0);
    seen.insert(start_form, 0);
    stats.visited = 1;
    nodes.push(Node {
        diagram: start.clone(),
        parent: None,
        depth: 0,
    });
    frontier.push(Reverse((Profile::of(&start).distance(&target_profile), start_hash, 0)));

    while found.is_none() {
        let Some(Reverse((_, _, idx))) = frontier.pop() else { break };
        if nodes[idx].depth >= budget.max_depth {
            continue;
        }
        stats.expanded += 1;
        let parent = nodes[idx].diagram.clone();
        let depth = nodes[idx].depth + 1;
        for mv in successors(&parent, k, &anchors, budget) {
            let Ok(next) = mv.apply(&parent) else { continue };
            let Ok(form) = canonical_form(&next) else { continue };
            if seen.contains_key(&form) {
                continue;
            }
            if stats.visited >= budget.max_nodes {
                break;
            }
            let id = nodes.len();
            let hash = CanonicalHash::of_bytes(&form);
            let hit = form == target;
            seen.insert(form, id);
            stats.visited += 1;
            let priority = Profile::of(&next).distance(&target_profile) + depth as i64;
            nodes.push(Node {
                diagram: next,
                parent: Some((idx, mv)),
                depth,
            });
            if hit {
                found = Some(id);
                break;
            }
            frontier.push(Reverse((priority, hash, id)));
        }
        if stats.visited >= budget.max_nodes && found.is_none() {
            break;
        }
    }

    let Some(mut idx) = found else {
        return Ok((Verdict::Unknown, stats));
    };
    let mut moves = Vec::new();
    while let Some((p, mv)) = &nodes[idx].parent {
        moves.push(mv.clone());
        idx = *p;
    }
    moves.reverse();

    let (end, log) = apply_script(&start, &MoveScript(moves))?;
    let end_form = canonical_form(&end)?;
    if end_form != target || log.replay(&start).is_err() || !log.is_chained() {
        return Err(GluckError::Postcondition("trivialization script does not replay".into()));
    }
    if let Some(first) = log.entries.first() {
        if first.pre != canonical_hash(&start)? {
            return Err(GluckError::Postcondition("log does not start at the twisted diagram".into()));
        }
    }
    Ok((
        Verdict::Certified {
            witness: Witness::Trivialization,
            log,
        },
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn split_block_needs_no_moves() {
        let d = corpus::split_meridian_block();
        let (v, stats) = trivialize_gluck(&d, &"S".into(), &"K".into(), &SearchBudget::default()).unwrap();
        assert!(v.is_certified());
        assert!(v.log().unwrap().is_empty());
        assert_eq!(stats.expanded, 0);
    }

    #[test]
    fn zero_budget_is_unknown() {
        let d = corpus::clasp_instance(1);
        let (v, _) = trivialize_gluck(&d, &"S".into(), &"K".into(), &SearchBudget::nodes(0)).unwrap();
        assert_eq!(v, Verdict::Unknown);
    }

    #[test]
    fn preconditions() {
        let d = corpus::clasp_instance(1);
        let b = SearchBudget::default();
        assert!(matches!(trivialize_gluck(&d, &"S".into(), &"S".into(), &b), Err(GluckError::SameHandle(_))));
        assert!(matches!(trivialize_gluck(&d, &"S".into(), &"C".into(), &b), Err(GluckError::NotOddTrivial { .. })));
        assert!(trivialize_gluck(&d, &"K".into(), &"S".into(), &b).is_err());
    }

    #[test]
    fn sorted_gap_pads_on_the_left() {
        assert_eq!(sorted_gap(&[1, 3], &[0, 1, 3]), 0);
        assert_eq!(sorted_gap(&[2], &[0, 1]), 1);
    }
}
