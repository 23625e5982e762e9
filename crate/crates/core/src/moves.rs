//! Kirby moves as exact rewrite rules on handle diagrams.
//!
//! Each rule transforms words, framings and linking numbers by a fixed
//! formula. Write `L` for the full symmetric linking matrix (framings on the
//! diagonal). Sliding handle `i` over `j` with sign `ε` along band `u` is the
//! change of basis `e_i ↦ e_i + ε·e_j`:
//!
//! ```text
//! w_i' = w_i · u · w_j^ε · u⁻¹
//! f_i' = f_i + f_j + 2ε·L_ij
//! L_im' = L_im + ε·L_jm        (m ≠ i, j)
//! L_ij' = L_ij + ε·f_j
//! ```

use std::fmt;

use thiserror::Error;

use crate::canonical::{canonical_hash, CanonicalHash};
use crate::diagram::{DiagramError, FreeWord, GeneratorId, HandleDiagram, HandleId, Sign, TwoHandle};
use crate::gluck;
use crate::lang::format_word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    SlideHandle {
        handle: HandleId,
        over: HandleId,
        sign: Sign,
        band: FreeWord,
    },
    SlideDot {
        dot: GeneratorId,
        over: GeneratorId,
        sign: Sign,
    },
    IntroducePair12 {
        dot: GeneratorId,
        handle: HandleId,
    },
    CancelPair12 {
        dot: GeneratorId,
        handle: HandleId,
    },
    IntroducePair23 {
        handle: HandleId,
    },
    CancelPair23 {
        handle: HandleId,
    },
    ExchangeZeroToDot {
        handle: HandleId,
        dot: GeneratorId,
    },
    ExchangeDotToZero {
        dot: GeneratorId,
        handle: HandleId,
    },
    GluckTwist {
        sphere: HandleId,
        sign: Sign,
    },
    /// Surgery along a sphere handle; the same rewrite as `ExchangeZeroToDot`.
    Surger {
        sphere: HandleId,
        dot: GeneratorId,
    },
}

impl Move {
    /// Whether the move changes the underlying manifold.
    pub fn is_surgery(&self) -> bool {
        matches!(
            self,
            Move::ExchangeZeroToDot { .. } | Move::ExchangeDotToZero { .. } | Move::GluckTwist { .. } | Move::Surger { .. }
        )
    }

    pub fn apply(&self, d: &HandleDiagram) -> Result<HandleDiagram, MoveError> {
        match self {
            Move::SlideHandle { handle, over, sign, band } => slide_two_handle(d, handle, over, *sign, band),
            Move::SlideDot { dot, over, sign } => slide_dot(d, dot, over, *sign),
            Move::IntroducePair12 { dot, handle } => introduce_cancelling_pair(d, PairKind::OneTwo { dot, handle }),
            Move::CancelPair12 { dot, handle } => cancel_pair_12(d, dot, handle),
            Move::IntroducePair23 { handle } => introduce_cancelling_pair(d, PairKind::TwoThree { handle }),
            Move::CancelPair23 { handle } => cancel_pair_23(d, handle),
            Move::ExchangeZeroToDot { handle, dot } => exchange_zero_to_dot(d, handle, dot),
            Move::ExchangeDotToZero { dot, handle } => exchange_dot_to_zero(d, dot, handle),
            Move::GluckTwist { sphere, sign } => gluck::gluck_twist(d, sphere, *sign),
            Move::Surger { sphere, dot } => gluck::surger_sphere(d, sphere, dot),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::SlideHandle { handle, over, sign, band } => {
                write!(f, "slide {handle} over {over} sign {} band {}", sign.symbol(), format_word(band))
            }
            Move::SlideDot { dot, over, sign } => write!(f, "slidedot {dot} over {over} sign {}", sign.symbol()),
            Move::IntroducePair12 { dot, handle } => write!(f, "intro12 {dot} {handle}"),
            Move::CancelPair12 { dot, handle } => write!(f, "cancel12 {dot} {handle}"),
            Move::IntroducePair23 { handle } => write!(f, "intro23 {handle}"),
            Move::CancelPair23 { handle } => write!(f, "cancel23 {handle}"),
            Move::ExchangeZeroToDot { handle, dot } => write!(f, "zerotodot {handle} {dot}"),
            Move::ExchangeDotToZero { dot, handle } => write!(f, "dottozero {dot} {handle}"),
            Move::GluckTwist { sphere, sign } => write!(f, "gluck {sphere} sign {}", sign.symbol()),
            Move::Surger { sphere, dot } => write!(f, "surger {sphere} {dot}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveScript(pub Vec<Move>);

impl MoveScript {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub mv: Move,
    pub pre: CanonicalHash,
    pub post: CanonicalHash,
}

/// A replayable record of applied moves with chained canonical hashes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveLog {
    pub entries: Vec<LogEntry>,
}

impl MoveLog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn script(&self) -> MoveScript {
        MoveScript(self.entries.iter().map(|e| e.mv.clone()).collect())
    }

    /// Post-hash of each step equals the pre-hash of the next.
    pub fn is_chained(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].post == w[1].pre)
    }

    pub fn append(&mut self, other: MoveLog) {
        self.entries.extend(other.entries);
    }

    /// Re-applies the log to `start`, checking every recorded hash.
    pub fn replay(&self, start: &HandleDiagram) -> Result<HandleDiagram, ReplayError> {
        let mut d = start.clone();
        for (step, entry) in self.entries.iter().enumerate() {
            let pre = canonical_hash(&d).map_err(|e| ReplayError::Move(ScriptError { step, source: e.into() }))?;
            if pre != entry.pre {
                return Err(ReplayError::HashMismatch { step, expected: entry.pre, found: pre });
            }
            d = entry
                .mv
                .apply(&d)
                .map_err(|source| ReplayError::Move(ScriptError { step, source }))?;
            let post = canonical_hash(&d).map_err(|e| ReplayError::Move(ScriptError { step, source: e.into() }))?;
            if post != entry.post {
                return Err(ReplayError::HashMismatch { step, expected: entry.post, found: post });
            }
        }
        Ok(d)
    }

    /// Hash chain as text: the start hash, then one line per step.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(first) = self.entries.first() {
            out.push_str(&format!("start {}\n", first.pre));
        }
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!("{} {} -> {}  {}\n", i + 1, e.pre, e.post, e.mv));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("cannot slide handle `{0}` over itself")]
    SelfSlide(HandleId),
    #[error("cannot slide dot `{0}` over itself")]
    SelfDotSlide(GeneratorId),
    #[error("identifier `{0}` is not fresh")]
    NotFresh(String),
    #[error("`{0}` is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("handle `{handle}` does not cancel dot `{dot}`: its word must be the single letter {dot} or {dot}^-1")]
    NotCancelling12 { dot: GeneratorId, handle: HandleId },
    #[error("handle `{handle}` cannot cancel a 3-handle: {reason}")]
    NotCancelling23 { handle: HandleId, reason: &'static str },
    #[error("handle `{handle}` is not a 0-framed handle with trivial word")]
    NotSphereHandle { handle: HandleId },
    #[error("integer overflow")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {}: {source}", .step + 1)]
pub struct ScriptError {
    /// 0-based index of the failing move.
    pub step: usize,
    pub source: MoveError,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Move(#[from] ScriptError),
    #[error("step {}: hash mismatch (log {expected}, replay {found})", .step + 1)]
    HashMismatch {
        step: usize,
        expected: CanonicalHash,
        found: CanonicalHash,
    },
}

pub(crate) fn checked(v: Option<i64>) -> Result<i64, MoveError> {
    v.ok_or(MoveError::Overflow)
}

fn check_band(d: &HandleDiagram, band: &FreeWord) -> Result<(), MoveError> {
    match band.generators().find(|g| !d.has_dot(g)) {
        Some(g) => Err(DiagramError::UnknownGenerator(g.clone()).into()),
        None => Ok(()),
    }
}

fn check_fresh(d: &HandleDiagram, id: &str) -> Result<(), MoveError> {
    if !crate::diagram::is_valid_token(id) {
        return Err(MoveError::InvalidIdentifier(id.to_string()));
    }
    if !d.is_fresh(id) {
        return Err(MoveError::NotFresh(id.to_string()));
    }
    Ok(())
}

pub fn slide_two_handle(
    d: &HandleDiagram,
    i: &HandleId,
    j: &HandleId,
    sign: Sign,
    band: &FreeWord,
) -> Result<HandleDiagram, MoveError> {
    if i == j {
        return Err(MoveError::SelfSlide(i.clone()));
    }
    let hi = d.handle(i)?;
    let hj = d.handle(j)?;
    check_band(d, band)?;
    let e = sign.value();
    let l_ij = d.linking.get(i, j);

    let word = hi.word.concat(&hj.word.pow(e).conjugate_by(band));
    let framing = checked(
        hi.framing
            .checked_add(hj.framing)
            .and_then(|x| x.checked_add(2 * e * l_ij)),
    )?;

    let mut out = d.clone();
    *out.handle_mut(i)? = TwoHandle::new(word, framing);
    for m in d.handles.keys().filter(|m| *m != i && *m != j) {
        let v = checked(d.linking.get(i, m).checked_add(e * d.linking.get(j, m)))?;
        out.linking.set(i, m, v);
    }
    out.linking.set(i, j, checked(l_ij.checked_add(e * hj.framing))?);
    Ok(out)
}

/// Every word substitutes `a ↦ a · b^(−sign)`.
pub fn slide_dot(d: &HandleDiagram, a: &GeneratorId, b: &GeneratorId, sign: Sign) -> Result<HandleDiagram, MoveError> {
    if a == b {
        return Err(MoveError::SelfDotSlide(a.clone()));
    }
    for g in [a, b] {
        if !d.has_dot(g) {
            return Err(DiagramError::UnknownGenerator(g.clone()).into());
        }
    }
    let image = FreeWord::generator(a.clone()).concat(&FreeWord::generator(b.clone()).pow(-sign.value()));
    let mut out = d.clone();
    for h in out.handles.values_mut() {
        h.word = h.word.substitute(a, &image);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub enum PairKind<'a> {
    /// A dot and a 0-framed handle running over it once.
    OneTwo { dot: &'a GeneratorId, handle: &'a HandleId },
    /// A split 0-framed unknot and a 3-handle.
    TwoThree { handle: &'a HandleId },
}

pub fn introduce_cancelling_pair(d: &HandleDiagram, kind: PairKind<'_>) -> Result<HandleDiagram, MoveError> {
    let mut out = d.clone();
    match kind {
        PairKind::OneTwo { dot, handle } => {
            check_fresh(d, dot.as_str())?;
            check_fresh(d, handle.as_str())?;
            if dot.as_str() == handle.as_str() {
                return Err(MoveError::NotFresh(dot.to_string()));
            }
            out.dots.insert(dot.clone());
            out.handles.insert(handle.clone(), TwoHandle::new(FreeWord::generator(dot.clone()), 0));
        }
        PairKind::TwoThree { handle } => {
            check_fresh(d, handle.as_str())?;
            out.handles.insert(handle.clone(), TwoHandle::trivial(0));
            out.three_handles = d.three_handles.checked_add(1).ok_or(MoveError::Overflow)?;
        }
    }
    Ok(out)
}

/// Cancels dot `g` against handle `h` whose word is `g^±1`.
///
/// Other handles running over `g` are first slid over `h` until no word
/// mentions `g`: for `w_m = p · g^t · q` (last occurrence) the slide with
/// `ε = −t·s` (where `w_h = g^s`) and band `q⁻¹` gives `w_m' = p · q`.
pub fn cancel_pair_12(d: &HandleDiagram, g: &GeneratorId, h: &HandleId) -> Result<HandleDiagram, MoveError> {
    if !d.has_dot(g) {
        return Err(DiagramError::UnknownGenerator(g.clone()).into());
    }
    let hw = &d.handle(h)?.word;
    let s = match hw.letters() {
        [l] if &l.generator == g => l.sign,
        _ => {
            return Err(MoveError::NotCancelling12 {
                dot: g.clone(),
                handle: h.clone(),
            })
        }
    };
    let mut out = d.clone();
    let others: Vec<HandleId> = d.handles.keys().filter(|m| *m != h).cloned().collect();
    for m in &others {
        while let Some(pos) = out.handle(m)?.word.letters().iter().rposition(|l| &l.generator == g) {
            let letters = out.handle(m)?.word.letters();
            let t = letters[pos].sign;
            let suffix = FreeWord::reduce(letters[pos + 1..].iter().cloned());
            out = slide_two_handle(&out, m, h, t.flip() * s, &suffix.inverse())?;
        }
    }
    out.dots.remove(g);
    out.handles.remove(h);
    out.linking.remove_handle(h);
    Ok(out)
}

pub fn cancel_pair_23(d: &HandleDiagram, h: &HandleId) -> Result<HandleDiagram, MoveError> {
    let handle = d.handle(h)?;
    let reason = if d.three_handles == 0 {
        Some("there are no 3-handles")
    } else if !handle.word.is_empty() {
        Some("its word is not trivial")
    } else if handle.framing != 0 {
        Some("its framing is not 0")
    } else if d.linking.row(h).next().is_some() {
        Some("it links other handles")
    } else {
        None
    };
    if let Some(reason) = reason {
        return Err(MoveError::NotCancelling23 { handle: h.clone(), reason });
    }
    let mut out = d.clone();
    out.handles.remove(h);
    out.three_handles -= 1;
    Ok(out)
}

/// Replaces the 0-framed unknot `h` by the dot `g`; each handle `m` picks up
/// `g^(L_mh)` at the end of its word.
pub fn exchange_zero_to_dot(d: &HandleDiagram, h: &HandleId, g: &GeneratorId) -> Result<HandleDiagram, MoveError> {
    let handle = d.handle(h)?;
    if !handle.word.is_empty() || handle.framing != 0 {
        return Err(MoveError::NotSphereHandle { handle: h.clone() });
    }
    check_fresh(d, g.as_str())?;
    let mut out = d.clone();
    out.handles.remove(h);
    for (m, t) in out.handles.iter_mut() {
        let l = d.linking.get(m, h);
        if l != 0 {
            t.word = t.word.concat(&FreeWord::generator(g.clone()).pow(l));
        }
    }
    out.linking.remove_handle(h);
    out.dots.insert(g.clone());
    Ok(out)
}

/// Replaces the dot `g` by a 0-framed unknot `h` linked `exponent_g(w_m)`
/// times with each handle `m`, whose word loses its `g` letters.
pub fn exchange_dot_to_zero(d: &HandleDiagram, g: &GeneratorId, h: &HandleId) -> Result<HandleDiagram, MoveError> {
    if !d.has_dot(g) {
        return Err(DiagramError::UnknownGenerator(g.clone()).into());
    }
    if h.as_str() != g.as_str() {
        check_fresh(d, h.as_str())?;
    } else if !crate::diagram::is_valid_token(h.as_str()) || d.handles.contains_key(h) {
        return Err(MoveError::NotFresh(h.to_string()));
    }
    let mut out = d.clone();
    out.dots.remove(g);
    let mut links = Vec::new();
    for (m, t) in out.handles.iter_mut() {
        links.push((m.clone(), t.word.exponent_of(g)));
        t.word = t.word.delete_generator(g);
    }
    out.handles.insert(h.clone(), TwoHandle::trivial(0));
    for (m, v) in links {
        out.linking.set(&m, h, v);
    }
    Ok(out)
}

/// Applies the moves in order, logging chained canonical hashes.
pub fn apply_script(d: &HandleDiagram, script: &MoveScript) -> Result<(HandleDiagram, MoveLog), ScriptError> {
    let mut current = d.clone();
    let mut log = MoveLog::default();
    let mut pre = canonical_hash(&current).map_err(|e| ScriptError { step: 0, source: e.into() })?;
    for (step, mv) in script.0.iter().enumerate() {
        let next = mv.apply(&current).map_err(|source| ScriptError { step, source })?;
        let post = canonical_hash(&next).map_err(|e| ScriptError { step, source: e.into() })?;
        log.entries.push(LogEntry { mv: mv.clone(), pre, post });
        pre = post;
        current = next;
    }
    Ok((current, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_form;
    use crate::corpus;

    fn slide(d: &HandleDiagram, i: &str, j: &str, s: Sign) -> HandleDiagram {
        slide_two_handle(d, &i.into(), &j.into(), s, &FreeWord::empty()).unwrap()
    }

    fn hopf() -> HandleDiagram {
        HandleDiagram::new()
            .with_handle("A", FreeWord::empty(), 0)
            .with_handle("B", FreeWord::empty(), 0)
            .with_link("A", "B", 1)
    }

    #[test]
    fn hopf_slide() {
        // 0 + 0 + 2·1; an odd value here would change the parity of the form.
        let d = slide(&hopf(), "A", "B", Sign::Plus);
        assert_eq!(d.framing(&"A".into()), 2);
        assert_eq!(d.framing(&"B".into()), 0);
        assert_eq!(d.linking.get(&"A".into(), &"B".into()), 1);
    }

    #[test]
    fn slide_then_opposite_slide_is_identity() {
        let d = HandleDiagram::new()
            .with_dot("a")
            .with_dot("b")
            .with_handle("A", FreeWord::from_powers([("a", 1), ("b", -1)]), 3)
            .with_handle("B", FreeWord::from_powers([("b", 2)]), -1)
            .with_handle("C", FreeWord::empty(), 2)
            .with_link("A", "B", 2)
            .with_link("B", "C", -3)
            .with_link("A", "C", 1);
        let band = FreeWord::from_powers([("a", 1), ("b", 1)]);
        for s in [Sign::Plus, Sign::Minus] {
            let there = slide_two_handle(&d, &"A".into(), &"B".into(), s, &band).unwrap();
            let back = slide_two_handle(&there, &"A".into(), &"B".into(), s.flip(), &band).unwrap();
            assert_eq!(back, d);
        }
    }

    #[test]
    fn meridian_slide_shifts_one_linking_number() {
        let d = HandleDiagram::new()
            .with_dot("a")
            .with_handle("K", FreeWord::empty(), 3)
            .with_handle("C", FreeWord::empty(), 0)
            .with_handle("M", FreeWord::from_powers([("a", 2)]), -2)
            .with_link("C", "K", 1)
            .with_link("M", "K", 4);
        for s in [Sign::Plus, Sign::Minus] {
            let out = slide(&d, "M", "C", s);
            let m = out.handle(&"M".into()).unwrap();
            assert_eq!(m.framing, -2);
            assert_eq!(m.word, FreeWord::from_powers([("a", 2)]));
            assert_eq!(out.linking.get(&"M".into(), &"K".into()), 4 + s.value());
            assert_eq!(out.linking.get(&"M".into(), &"C".into()), 0);
        }
    }

    #[test]
    fn slide_errors() {
        let d = hopf();
        assert_eq!(
            slide_two_handle(&d, &"A".into(), &"A".into(), Sign::Plus, &FreeWord::empty()),
            Err(MoveError::SelfSlide("A".into()))
        );
        assert!(matches!(
            slide_two_handle(&d, &"A".into(), &"Z".into(), Sign::Plus, &FreeWord::empty()),
            Err(MoveError::Diagram(DiagramError::UnknownHandle(_)))
        ));
        assert!(slide_two_handle(&d, &"A".into(), &"B".into(), Sign::Plus, &FreeWord::generator("q")).is_err());
    }

    #[test]
    fn dot_slide_examples() {
        let d = HandleDiagram::new()
            .with_dot("a")
            .with_dot("b")
            .with_handle("h", FreeWord::generator("a"), 0)
            .with_handle("k", FreeWord::generator("b"), 0);
        let out = slide_dot(&d, &"a".into(), &"b".into(), Sign::Plus).unwrap();
        assert_eq!(out.handles[&"h".into()].word, FreeWord::from_powers([("a", 1), ("b", -1)]));
        assert_eq!(out.handles[&"k".into()].word, FreeWord::generator("b"));
        let back = slide_dot(&out, &"a".into(), &"b".into(), Sign::Minus).unwrap();
        assert_eq!(back, d);
        assert_eq!(slide_dot(&d, &"a".into(), &"a".into(), Sign::Plus), Err(MoveError::SelfDotSlide("a".into())));
    }

    #[test]
    fn introduce_pairs() {
        let d = HandleDiagram::new();
        let one = introduce_cancelling_pair(&d, PairKind::OneTwo { dot: &"g".into(), handle: &"h".into() }).unwrap();
        assert_eq!(one, HandleDiagram::new().with_dot("g").with_handle("h", FreeWord::generator("g"), 0));
        let two = introduce_cancelling_pair(&d, PairKind::TwoThree { handle: &"h".into() }).unwrap();
        assert_eq!(two, HandleDiagram::new().with_handle("h", FreeWord::empty(), 0).with_three_handles(1));
        assert_eq!(cancel_pair_12(&one, &"g".into(), &"h".into()).unwrap(), d);
        assert_eq!(cancel_pair_23(&two, &"h".into()).unwrap(), d);
        assert_eq!(
            introduce_cancelling_pair(&one, PairKind::TwoThree { handle: &"g".into() }),
            Err(MoveError::NotFresh("g".into()))
        );
    }

    #[test]
    fn cancel_12_examples() {
        let d = HandleDiagram::new().with_dot("g").with_handle("h", FreeWord::generator("g"), 0);
        assert_eq!(cancel_pair_12(&d, &"g".into(), &"h".into()).unwrap(), HandleDiagram::new());

        let d = d.with_handle("m", FreeWord::generator("g"), 0);
        let out = cancel_pair_12(&d, &"g".into(), &"h".into()).unwrap();
        assert_eq!(out, HandleDiagram::new().with_handle("m", FreeWord::empty(), 0));

        // surgered S²×S²
        let d = HandleDiagram::new().with_dot("d").with_handle("K", FreeWord::generator("d"), 0);
        assert_eq!(cancel_pair_12(&d, &"d".into(), &"K".into()).unwrap(), HandleDiagram::new());
    }

    #[test]
    fn cancel_12_clears_interior_occurrences() {
        let d = HandleDiagram::new()
            .with_dot("g")
            .with_dot("a")
            .with_handle("h", FreeWord::from_powers([("g", -1)]), 2)
            .with_handle("m", FreeWord::from_powers([("a", 1), ("g", 2), ("a", -1), ("g", -1), ("a", 1)]), 1)
            .with_link("m", "h", 1);
        let out = cancel_pair_12(&d, &"g".into(), &"h".into()).unwrap();
        assert_eq!(out.handles[&"m".into()].word, FreeWord::generator("a"));
        assert!(out.validate().is_ok());
        assert!(!out.has_dot(&"g".into()));
    }

    #[test]
    fn cancel_12_errors() {
        let d = HandleDiagram::new()
            .with_dot("g")
            .with_handle("h", FreeWord::from_powers([("g", 2)]), 0);
        assert!(matches!(cancel_pair_12(&d, &"g".into(), &"h".into()), Err(MoveError::NotCancelling12 { .. })));
    }

    #[test]
    fn cancel_23_errors() {
        let base = HandleDiagram::new().with_three_handles(1);
        let framed = base.clone().with_handle("h", FreeWord::empty(), 1);
        assert!(matches!(cancel_pair_23(&framed, &"h".into()), Err(MoveError::NotCancelling23 { .. })));
        let linked = base
            .clone()
            .with_handle("h", FreeWord::empty(), 0)
            .with_handle("k", FreeWord::empty(), 0)
            .with_link("h", "k", 1);
        assert!(matches!(cancel_pair_23(&linked, &"h".into()), Err(MoveError::NotCancelling23 { .. })));
        let none = HandleDiagram::new().with_handle("h", FreeWord::empty(), 0);
        assert!(matches!(cancel_pair_23(&none, &"h".into()), Err(MoveError::NotCancelling23 { .. })));
    }

    #[test]
    fn exchange_examples() {
        let lone = HandleDiagram::new().with_handle("S", FreeWord::empty(), 0);
        assert_eq!(exchange_zero_to_dot(&lone, &"S".into(), &"g".into()).unwrap(), HandleDiagram::new().with_dot("g"));

        let d = corpus::s2_x_s2();
        let out = exchange_zero_to_dot(&d, &"S".into(), &"g".into()).unwrap();
        let expected = HandleDiagram::named("S2xS2").with_dot("g").with_handle("K", FreeWord::generator("g"), 0);
        assert_eq!(out, expected);

        let framed = HandleDiagram::new().with_handle("S", FreeWord::empty(), 1);
        assert_eq!(
            exchange_zero_to_dot(&framed, &"S".into(), &"g".into()),
            Err(MoveError::NotSphereHandle { handle: "S".into() })
        );
    }

    #[test]
    fn dot_to_zero_examples() {
        let lone = HandleDiagram::new().with_dot("g");
        assert_eq!(
            exchange_dot_to_zero(&lone, &"g".into(), &"h".into()).unwrap(),
            HandleDiagram::new().with_handle("h", FreeWord::empty(), 0)
        );
        let d = HandleDiagram::new().with_dot("g").with_handle("K", FreeWord::generator("g"), 0);
        let out = exchange_dot_to_zero(&d, &"g".into(), &"h".into()).unwrap();
        assert_eq!(
            canonical_form(&out).unwrap(),
            canonical_form(&corpus::s2_x_s2()).unwrap()
        );
        assert!(exchange_dot_to_zero(&d, &"q".into(), &"h".into()).is_err());
    }

    #[test]
    fn exchange_round_trip() {
        let d = corpus::s2_x_s2()
            .with_dot("a")
            .with_handle("M", FreeWord::from_powers([("a", 2)]), 3)
            .with_link("M", "S", -2);
        let there = exchange_zero_to_dot(&d, &"S".into(), &"g".into()).unwrap();
        let back = exchange_dot_to_zero(&there, &"g".into(), &"S".into()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn scripts() {
        let d = corpus::s2_x_s2();
        let (out, log) = apply_script(&d, &MoveScript::default()).unwrap();
        assert_eq!(out, d);
        assert!(log.is_empty());

        let script = MoveScript(vec![
            Move::IntroducePair12 { dot: "g".into(), handle: "h".into() },
            Move::CancelPair12 { dot: "g".into(), handle: "h".into() },
        ]);
        let (out, log) = apply_script(&d, &script).unwrap();
        assert_eq!(out, d);
        assert_eq!(log.len(), 2);
        assert!(log.is_chained());
        assert_eq!(log.replay(&d).unwrap(), out);
        assert_eq!(log.entries[0].pre, log.entries[1].post);

        let bad = MoveScript(vec![
            Move::IntroducePair23 { handle: "z".into() },
            Move::CancelPair23 { handle: "K".into() },
        ]);
        let err = apply_script(&d, &bad).unwrap_err();
        assert_eq!(err.step, 1);
    }

    #[test]
    fn replay_detects_tampering() {
        let d = corpus::s2_x_s2();
        let script = MoveScript(vec![Move::GluckTwist { sphere: "S".into(), sign: Sign::Plus }]);
        let (_, mut log) = apply_script(&d, &script).unwrap();
        log.entries[0].post = log.entries[0].pre;
        assert!(matches!(log.replay(&d), Err(ReplayError::HashMismatch { step: 0, .. })));
    }
}
