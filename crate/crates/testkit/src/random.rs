//! Seeded random diagrams, move sequences and certificates.

use kirby_core::moves::Move;
use kirby_core::{FreeWord, GeneratorId, HandleDiagram, HandleId, MoveScript, Sign, SphericalClassCertificate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracles::Mat;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub max_dots: usize,
    pub max_handles: usize,
    /// Bound on |framing| and |linking|.
    pub max_abs: i64,
    pub max_word: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            max_dots: 6,
            max_handles: 10,
            max_abs: 5,
            max_word: 6,
        }
    }
}

fn sign(rng: &mut TestRng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

pub fn random_word(rng: &mut TestRng, dots: &[GeneratorId], max_len: usize) -> FreeWord {
    if dots.is_empty() || max_len == 0 {
        return FreeWord::empty();
    }
    let len = rng.gen_range(0..=max_len);
    FreeWord::reduce((0..len).map(|_| {
        let g = dots.choose(rng).unwrap().clone();
        kirby_core::diagram::Letter::new(g, sign(rng))
    }))
}

pub fn random_diagram(rng: &mut TestRng, p: &Params) -> HandleDiagram {
    let n_dots = rng.gen_range(0..=p.max_dots);
    let n_handles = rng.gen_range(0..=p.max_handles);
    let dots: Vec<GeneratorId> = (1..=n_dots).map(|i| GeneratorId::new(format!("x{i}"))).collect();
    let mut d = HandleDiagram::named("random");
    for g in &dots {
        d = d.with_dot(g.as_str());
    }
    for i in 1..=n_handles {
        let w = random_word(rng, &dots, p.max_word);
        d = d.with_handle(&format!("h{i}"), w, rng.gen_range(-p.max_abs..=p.max_abs));
    }
    for i in 1..=n_handles {
        for j in i + 1..=n_handles {
            if rng.gen_bool(0.5) {
                d = d.with_link(&format!("h{i}"), &format!("h{j}"), rng.gen_range(-p.max_abs..=p.max_abs));
            }
        }
    }
    d.with_three_handles(rng.gen_range(0..=1))
}

/// A random move that never changes the manifold, or `None` if nothing
/// applies.
pub fn random_sound_move(rng: &mut TestRng, d: &HandleDiagram) -> Option<Move> {
    let handles: Vec<HandleId> = d.handles.keys().cloned().collect();
    let dots: Vec<GeneratorId> = d.dots.iter().cloned().collect();
    for _ in 0..16 {
        match rng.gen_range(0..100) {
            0..=49 if handles.len() >= 2 => {
                let pair: Vec<&HandleId> = handles.choose_multiple(rng, 2).collect();
                return Some(Move::SlideHandle {
                    handle: pair[0].clone(),
                    over: pair[1].clone(),
                    sign: sign(rng),
                    band: random_word(rng, &dots, 2),
                });
            }
            50..=64 if dots.len() >= 2 => {
                let pair: Vec<&GeneratorId> = dots.choose_multiple(rng, 2).collect();
                return Some(Move::SlideDot {
                    dot: pair[0].clone(),
                    over: pair[1].clone(),
                    sign: sign(rng),
                });
            }
            65..=72 => {
                let dot = GeneratorId::new(d.fresh_id("g"));
                let handle = HandleId::new(d.fresh_id("p"));
                return Some(Move::IntroducePair12 { dot, handle });
            }
            73..=82 => {
                let cands: Vec<(&HandleId, &GeneratorId)> = d
                    .handles
                    .iter()
                    .filter_map(|(h, t)| match t.word.letters() {
                        [l] => Some((h, &l.generator)),
                        _ => None,
                    })
                    .collect();
                if let Some((h, g)) = cands.choose(rng) {
                    return Some(Move::CancelPair12 {
                        dot: (*g).clone(),
                        handle: (*h).clone(),
                    });
                }
            }
            83..=89 => return Some(Move::IntroducePair23 { handle: HandleId::new(d.fresh_id("z")) }),
            90..=99 if d.three_handles > 0 => {
                let cands: Vec<&HandleId> = d
                    .handles
                    .iter()
                    .filter(|(h, t)| t.word.is_empty() && t.framing == 0 && d.linking.row(h).next().is_none())
                    .map(|(h, _)| h)
                    .collect();
                if let Some(h) = cands.choose(rng) {
                    return Some(Move::CancelPair23 { handle: (*h).clone() });
                }
            }
            _ => {}
        }
    }
    None
}

/// Applies up to `max_len` random sound moves; returns the script and result.
pub fn random_sound_script(rng: &mut TestRng, d: &HandleDiagram, max_len: usize) -> (MoveScript, HandleDiagram) {
    let len = rng.gen_range(1..=max_len);
    let mut cur = d.clone();
    let mut moves = Vec::new();
    for _ in 0..len {
        let Some(mv) = random_sound_move(rng, &cur) else { break };
        if let Ok(next) = mv.apply(&cur) {
            cur = next;
            moves.push(mv);
        }
    }
    (MoveScript(moves), cur)
}

/// Adds a 0-framed trivial-word handle `S*` with random linking.
pub fn with_random_sphere(rng: &mut TestRng, d: &HandleDiagram, max_abs: i64) -> (HandleDiagram, HandleId) {
    let s = d.fresh_id("S");
    let mut out = d.clone().with_handle(&s, FreeWord::empty(), 0);
    for h in d.handles.keys() {
        if rng.gen_bool(0.6) {
            out = out.with_link(h.as_str(), &s, rng.gen_range(-max_abs..=max_abs));
        }
    }
    (out, HandleId::new(s))
}

struct CopyOf {
    handle: HandleId,
    base: usize,
    /// `w_handle = y · base · y⁻¹`.
    y: FreeWord,
}

/// A diagram whose handles include conjugate copies of a few base words, and
/// a certificate with freely trivial boundary product built as nested pairs
/// `A … B` where `B`'s conjugated word is the inverse of `A`'s.
pub fn random_certificate_instance(rng: &mut TestRng) -> (HandleDiagram, SphericalClassCertificate) {
    let n_dots = rng.gen_range(1..=3);
    let dots: Vec<GeneratorId> = (1..=n_dots).map(|i| GeneratorId::new(format!("x{i}"))).collect();
    let mut d = HandleDiagram::named("cert");
    for g in &dots {
        d = d.with_dot(g.as_str());
    }
    let mut copies = Vec::new();
    let n_bases = rng.gen_range(1..=3);
    for b in 0..n_bases {
        let base = loop {
            let w = random_word(rng, &dots, 4);
            if !w.is_empty() {
                break w;
            }
        };
        for c in 0..rng.gen_range(1..=3) {
            let y = if c == 0 { FreeWord::empty() } else { random_word(rng, &dots, 2) };
            let name = format!("b{b}c{c}");
            d = d.with_handle(&name, base.conjugate_by(&y), rng.gen_range(-5..=5));
            copies.push(CopyOf {
                handle: HandleId::new(name),
                base: b,
                y,
            });
        }
    }
    let n_trivial = rng.gen_range(0..=2);
    let trivial: Vec<HandleId> = (0..n_trivial).map(|i| HandleId::new(format!("t{i}"))).collect();
    for t in &trivial {
        d = d.with_handle(t.as_str(), FreeWord::empty(), rng.gen_range(-5..=5));
    }
    let ids = d.handle_ids();
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            if rng.gen_bool(0.5) {
                d = d.with_link(a.as_str(), b.as_str(), rng.gen_range(-5..=5));
            }
        }
    }

    let mut cert = SphericalClassCertificate::default();
    block(rng, &dots, &copies, &trivial, 3, &mut cert);
    (d, cert)
}

fn block(
    rng: &mut TestRng,
    dots: &[GeneratorId],
    copies: &[CopyOf],
    trivial: &[HandleId],
    depth: usize,
    cert: &mut SphericalClassCertificate,
) {
    for _ in 0..rng.gen_range(1..=2) {
        if !trivial.is_empty() && rng.gen_bool(0.3) {
            let t = trivial.choose(rng).unwrap();
            let u = random_word(rng, dots, 2);
            *cert = std::mem::take(cert).term(t.as_str(), sign(rng), u);
            continue;
        }
        let a = copies.choose(rng).unwrap();
        let partners: Vec<&CopyOf> = copies.iter().filter(|c| c.base == a.base).collect();
        let b = partners.choose(rng).unwrap();
        let e = sign(rng);
        let u_a = random_word(rng, dots, 2);
        *cert = std::mem::take(cert).term(a.handle.as_str(), e, u_a.clone());
        if depth > 0 && rng.gen_bool(0.5) {
            block(rng, dots, copies, trivial, depth - 1, cert);
        }
        let u_b = u_a.concat(&a.y).concat(&b.y.inverse());
        *cert = std::mem::take(cert).term(b.handle.as_str(), e.flip(), u_b);
    }
}

/// The full symmetric linking matrix (framings on the diagonal) in
/// `handle_ids()` order, read straight from the diagram.
pub fn pairing_matrix(d: &HandleDiagram) -> Mat {
    let ids = d.handle_ids();
    ids.iter()
        .map(|a| {
            ids.iter()
                .map(|b| if a == b { d.framing(a) as i128 } else { d.linking.get(a, b) as i128 })
                .collect()
        })
        .collect()
}

/// Class vector `Σ ε_t e_{h_t}` in `handle_ids()` order.
pub fn class_vector(d: &HandleDiagram, cert: &SphericalClassCertificate) -> Vec<i128> {
    let ids = d.handle_ids();
    let mut c = vec![0i128; ids.len()];
    for t in &cert.terms {
        let i = ids.iter().position(|h| h == &t.handle).expect("certificate handle exists");
        c[i] += t.sign.value() as i128;
    }
    c
}

/// `∂₂` as dots × handles exponent sums.
pub fn boundary(d: &HandleDiagram) -> Mat {
    d.dots
        .iter()
        .map(|g| d.handles.values().map(|h| h.word.exponent_of(g) as i128).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagrams_are_valid() {
        let mut r = rng(7);
        for _ in 0..200 {
            let d = random_diagram(&mut r, &Params::default());
            d.validate().unwrap();
            let (_, out) = random_sound_script(&mut r, &d, 15);
            out.validate().unwrap();
        }
    }

    #[test]
    fn certificates_are_trivial() {
        let mut r = rng(11);
        for _ in 0..200 {
            let (d, cert) = random_certificate_instance(&mut r);
            d.validate().unwrap();
            assert!(cert.boundary_product(&d).unwrap().is_empty());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_diagram(&mut rng(3), &Params::default());
        let b = random_diagram(&mut rng(3), &Params::default());
        assert_eq!(a, b);
    }
}
