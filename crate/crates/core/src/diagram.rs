//! Handle diagram data model.
//!
//! A diagram records the algebraic shadow of a Kirby diagram: dotted circles
//! (1-handles) act as free generators, every 2-handle carries the reduced word
//! of its attaching circle in those generators together with an integer
//! framing, and pairs of 2-handles carry integer linking numbers. 3- and
//! 4-handles are only counted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Keywords of the text format that may not be used as identifiers.
pub const RESERVED_WORDS: &[&str] = &[
    "diagram",
    "dots",
    "handle",
    "word",
    "framing",
    "link",
    "threehandles",
    "fourhandles",
    "over",
    "sign",
    "band",
    "term",
    "conj",
];

/// Returns true if `s` is a legal identifier token.
pub fn is_valid_token(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED_WORDS.contains(&s)
}

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Self {
                Self(name.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_string())
            }
        }
    };
}

id_type!(
    /// Name of a dotted circle, i.e. a free generator of the 1-skeleton.
    GeneratorId
);
id_type!(
    /// Name of a 2-handle.
    HandleId
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: GeneratorId,
    pub sign: Sign,
}

impl Letter {
    pub fn new(generator: impl Into<GeneratorId>, sign: Sign) -> Self {
        Letter {
            generator: generator.into(),
            sign,
        }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            generator: self.generator.clone(),
            sign: self.sign.flip(),
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.sign != other.sign
    }
}

/// A freely reduced word in the dot generators.
///
/// The letters of a `FreeWord` never contain an adjacent inverse pair; every
/// constructor reduces.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    /// Free reduction with a stack; a single pass suffices.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for letter in letters {
            if out.last().is_some_and(|last| last.cancels(&letter)) {
                out.pop();
            } else {
                out.push(letter);
            }
        }
        FreeWord(out)
    }

    pub fn generator(g: impl Into<GeneratorId>) -> Self {
        FreeWord(vec![Letter::new(g, Sign::Plus)])
    }

    /// Builds `g1^e1 g2^e2 ...` and reduces.
    pub fn from_powers<'a>(powers: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        Self::reduce(powers.into_iter().flat_map(|(g, e)| {
            let sign = if e < 0 { Sign::Minus } else { Sign::Plus };
            std::iter::repeat_n(Letter::new(g, sign), e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        Self::reduce(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(Letter::inverse).collect())
    }

    /// `self^n`; negative powers use the inverse.
    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `u · self · u⁻¹`
    pub fn conjugate_by(&self, u: &FreeWord) -> FreeWord {
        u.concat(self).concat(&u.inverse())
    }

    /// Signed count of letters on `g`.
    pub fn exponent_of(&self, g: &GeneratorId) -> i64 {
        self.0
            .iter()
            .filter(|l| &l.generator == g)
            .map(|l| l.sign.value())
            .sum()
    }

    pub fn contains(&self, g: &GeneratorId) -> bool {
        self.0.iter().any(|l| &l.generator == g)
    }

    pub fn generators(&self) -> impl Iterator<Item = &GeneratorId> {
        self.0.iter().map(|l| &l.generator)
    }

    /// Replaces every occurrence of `g` by `image` (and `g⁻¹` by its inverse).
    pub fn substitute(&self, g: &GeneratorId, image: &FreeWord) -> FreeWord {
        let inv = image.inverse();
        Self::reduce(self.0.iter().flat_map(|l| {
            if &l.generator == g {
                match l.sign {
                    Sign::Plus => image.0.clone(),
                    Sign::Minus => inv.0.clone(),
                }
            } else {
                vec![l.clone()]
            }
        }))
    }

    /// Deletes all letters on `g`, then reduces.
    pub fn delete_generator(&self, g: &GeneratorId) -> FreeWord {
        Self::reduce(self.0.iter().filter(|l| &l.generator != g).cloned())
    }

    pub fn rename_generators(&self, map: &BTreeMap<GeneratorId, GeneratorId>) -> FreeWord {
        FreeWord(
            self.0
                .iter()
                .map(|l| Letter {
                    generator: map.get(&l.generator).cloned().unwrap_or_else(|| l.generator.clone()),
                    sign: l.sign,
                })
                .collect(),
        )
    }

    #[cfg(test)]
    pub(crate) fn from_raw_unchecked(letters: Vec<Letter>) -> Self {
        FreeWord(letters)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(&w[1]))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::lang::format_word(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(GeneratorId),
    #[error("unknown handle `{0}`")]
    UnknownHandle(HandleId),
    #[error("identifier `{0}` is already in use")]
    DuplicateId(String),
    #[error("invalid diagram: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Reduces a raw letter sequence, checking that every letter names a declared dot.
pub fn reduce_word(raw: &[Letter], dots: &BTreeSet<GeneratorId>) -> Result<FreeWord, DiagramError> {
    if let Some(bad) = raw.iter().find(|l| !dots.contains(&l.generator)) {
        return Err(DiagramError::UnknownGenerator(bad.generator.clone()));
    }
    Ok(FreeWord::reduce(raw.iter().cloned()))
}

/// Exponent sums of `word`, one entry per dot in the given order.
pub fn exponent_vector<'a>(word: &FreeWord, dots: impl IntoIterator<Item = &'a GeneratorId>) -> Vec<i64> {
    dots.into_iter().map(|g| word.exponent_of(g)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoHandle {
    pub word: FreeWord,
    pub framing: i64,
}

impl TwoHandle {
    pub fn new(word: FreeWord, framing: i64) -> Self {
        TwoHandle { word, framing }
    }

    /// A handle with empty word, the shape of a 0-framed sphere handle when `framing == 0`.
    pub fn trivial(framing: i64) -> Self {
        TwoHandle {
            word: FreeWord::empty(),
            framing,
        }
    }
}

/// Pairwise linking numbers between distinct 2-handles.
///
/// Both orientations of a pair are stored so that asymmetric raw input can be
/// represented and rejected by [`HandleDiagram::validate`]; [`LinkingData::set`]
/// always writes both. Zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinkingData {
    entries: BTreeMap<(HandleId, HandleId), i64>,
}

impl LinkingData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: &HandleId, b: &HandleId) -> i64 {
        self.entries
            .get(&(a.clone(), b.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn set(&mut self, a: &HandleId, b: &HandleId, value: i64) {
        self.insert_directed(a, b, value);
        self.insert_directed(b, a, value);
    }

    /// Writes a single orientation of a pair. Only for raw input paths.
    pub fn insert_directed(&mut self, a: &HandleId, b: &HandleId, value: i64) {
        let key = (a.clone(), b.clone());
        if value == 0 {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn remove_handle(&mut self, h: &HandleId) {
        self.entries.retain(|(a, b), _| a != h && b != h);
    }

    /// Nonzero entries as ordered pairs `a < b`.
    pub fn pairs(&self) -> impl Iterator<Item = (&HandleId, &HandleId, i64)> {
        self.entries
            .iter()
            .filter(|((a, b), _)| a < b)
            .map(|((a, b), v)| (a, b, *v))
    }

    pub fn directed_entries(&self) -> impl Iterator<Item = (&HandleId, &HandleId, i64)> {
        self.entries.iter().map(|((a, b), v)| (a, b, *v))
    }

    /// Nonzero partners of `h`.
    pub fn row<'a>(&'a self, h: &'a HandleId) -> impl Iterator<Item = (&'a HandleId, i64)> + 'a {
        self.entries
            .iter()
            .filter(move |((a, _), _)| a == h)
            .map(|((_, b), v)| (b, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvalidIdentifier(String),
    IdUsedTwice(String),
    WordUsesUnknownGenerator { handle: HandleId, generator: GeneratorId },
    WordNotReduced(HandleId),
    LinkingUnknownHandle(HandleId),
    SelfLinking(HandleId),
    AsymmetricLinking { a: HandleId, b: HandleId, ab: i64, ba: i64 },
    TooManyFourHandles(u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidIdentifier(s) => write!(f, "`{s}` is not a valid identifier"),
            Violation::IdUsedTwice(s) => write!(f, "`{s}` names both a dot and a handle"),
            Violation::WordUsesUnknownGenerator { handle, generator } => {
                write!(f, "handle `{handle}` uses undeclared generator `{generator}`")
            }
            Violation::WordNotReduced(h) => write!(f, "word of handle `{h}` is not reduced"),
            Violation::LinkingUnknownHandle(h) => write!(f, "linking entry references absent handle `{h}`"),
            Violation::SelfLinking(h) => write!(f, "linking entry pairs `{h}` with itself"),
            Violation::AsymmetricLinking { a, b, ab, ba } => {
                write!(f, "linking of `{a}`,`{b}` is asymmetric ({ab} vs {ba})")
            }
            Violation::TooManyFourHandles(n) => write!(f, "{n} four-handles (at most 1)"),
        }
    }
}

/// The algebraic presentation of a 4-dimensional handlebody.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleDiagram {
    pub name: String,
    pub dots: BTreeSet<GeneratorId>,
    pub handles: BTreeMap<HandleId, TwoHandle>,
    pub linking: LinkingData,
    pub three_handles: u32,
    pub four_handles: u32,
}

impl Default for HandleDiagram {
    fn default() -> Self {
        HandleDiagram {
            name: "X".to_string(),
            dots: BTreeSet::new(),
            handles: BTreeMap::new(),
            linking: LinkingData::new(),
            three_handles: 0,
            four_handles: 0,
        }
    }
}

impl HandleDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn named(name: impl Into<String>) -> Self {
        HandleDiagram {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn with_dot(mut self, g: &str) -> Self {
        self.dots.insert(g.into());
        self
    }

    pub fn with_handle(mut self, h: &str, word: FreeWord, framing: i64) -> Self {
        self.handles.insert(h.into(), TwoHandle::new(word, framing));
        self
    }

    pub fn with_link(mut self, a: &str, b: &str, value: i64) -> Self {
        self.linking.set(&a.into(), &b.into(), value);
        self
    }

    pub fn with_three_handles(mut self, n: u32) -> Self {
        self.three_handles = n;
        self
    }

    pub fn handle(&self, h: &HandleId) -> Result<&TwoHandle, DiagramError> {
        self.handles
            .get(h)
            .ok_or_else(|| DiagramError::UnknownHandle(h.clone()))
    }

    pub(crate) fn handle_mut(&mut self, h: &HandleId) -> Result<&mut TwoHandle, DiagramError> {
        self.handles
            .get_mut(h)
            .ok_or_else(|| DiagramError::UnknownHandle(h.clone()))
    }

    pub fn has_dot(&self, g: &GeneratorId) -> bool {
        self.dots.contains(g)
    }

    pub fn framing(&self, h: &HandleId) -> i64 {
        self.handles.get(h).map_or(0, |t| t.framing)
    }

    /// Entry of the full symmetric linking matrix: the framing on the
    /// diagonal, the linking number off it.
    pub fn pairing(&self, a: &HandleId, b: &HandleId) -> i64 {
        if a == b {
            self.framing(a)
        } else {
            self.linking.get(a, b)
        }
    }

    /// True if `id` is not used by any dot or handle.
    pub fn is_fresh(&self, id: &str) -> bool {
        !self.dots.contains(&GeneratorId::from(id)) && !self.handles.contains_key(&HandleId::from(id))
    }

    /// Deterministic fresh identifier `<prefix><n>` with the smallest free `n >= 1`.
    pub fn fresh_id(&self, prefix: &str) -> String {
        (1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|s| self.is_fresh(s))
            .expect("unbounded")
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        for g in &self.dots {
            if !is_valid_token(g.as_str()) {
                out.push(Violation::InvalidIdentifier(g.to_string()));
            }
        }
        for (h, handle) in &self.handles {
            if !is_valid_token(h.as_str()) {
                out.push(Violation::InvalidIdentifier(h.to_string()));
            }
            if self.dots.contains(&GeneratorId::from(h.as_str())) {
                out.push(Violation::IdUsedTwice(h.to_string()));
            }
            let mut reported = BTreeSet::new();
            for g in handle.word.generators() {
                if !self.dots.contains(g) && reported.insert(g.clone()) {
                    out.push(Violation::WordUsesUnknownGenerator {
                        handle: h.clone(),
                        generator: g.clone(),
                    });
                }
            }
            if !handle.word.is_reduced() {
                out.push(Violation::WordNotReduced(h.clone()));
            }
        }
        let mut reported = BTreeSet::new();
        for (a, b, v) in self.linking.directed_entries() {
            for h in [a, b] {
                if !self.handles.contains_key(h) && reported.insert(h.clone()) {
                    out.push(Violation::LinkingUnknownHandle(h.clone()));
                }
            }
            if a == b {
                out.push(Violation::SelfLinking(a.clone()));
            } else if a < b {
                let back = self.linking.get(b, a);
                if back != v {
                    out.push(Violation::AsymmetricLinking {
                        a: a.clone(),
                        b: b.clone(),
                        ab: v,
                        ba: back,
                    });
                }
            } else if self.linking.get(b, a) == 0 {
                // only the (b, a) direction is missing; report it once here
                out.push(Violation::AsymmetricLinking {
                    a: b.clone(),
                    b: a.clone(),
                    ab: 0,
                    ba: v,
                });
            }
        }
        if self.four_handles > 1 {
            out.push(Violation::TooManyFourHandles(self.four_handles));
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn ensure_valid(&self) -> Result<(), DiagramError> {
        self.validate().map_err(DiagramError::Invalid)
    }

    /// Renames dots and handles. Ids absent from the maps keep their names.
    pub fn relabel(
        &self,
        dot_map: &BTreeMap<GeneratorId, GeneratorId>,
        handle_map: &BTreeMap<HandleId, HandleId>,
    ) -> HandleDiagram {
        let rename_h = |h: &HandleId| handle_map.get(h).cloned().unwrap_or_else(|| h.clone());
        let mut linking = LinkingData::new();
        for (a, b, v) in self.linking.directed_entries() {
            linking.insert_directed(&rename_h(a), &rename_h(b), v);
        }
        HandleDiagram {
            name: self.name.clone(),
            dots: self
                .dots
                .iter()
                .map(|g| dot_map.get(g).cloned().unwrap_or_else(|| g.clone()))
                .collect(),
            handles: self
                .handles
                .iter()
                .map(|(h, t)| {
                    (
                        rename_h(h),
                        TwoHandle::new(t.word.rename_generators(dot_map), t.framing),
                    )
                })
                .collect(),
            linking,
            three_handles: self.three_handles,
            four_handles: self.four_handles,
        }
    }

    pub fn handle_ids(&self) -> Vec<HandleId> {
        self.handles.keys().cloned().collect()
    }
}
