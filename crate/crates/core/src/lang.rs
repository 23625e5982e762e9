//! Text formats: `.kd` diagrams, `.ks` move scripts, and certificate files.
//!
//! All three are line oriented. `#` starts a comment that runs to the end of
//! the line, blank lines are ignored, and tokens are separated by whitespace
//! (`=` is always a token of its own).
//!
//! ```text
//! diagram S2xS2
//! dots a b
//! handle K word a b^-1 a^2 framing 0
//! link K S = 1
//! threehandles 1
//! fourhandles 1
//! ```

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::diagram::{is_valid_token, FreeWord, GeneratorId, HandleDiagram, HandleId, Letter, Sign, TwoHandle};
use crate::gluck::{CertificateTerm, SphericalClassCertificate};
use crate::moves::{Move, MoveScript};

/// 1-based location of a token. `length == 0` marks an end-of-line position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    /// True if the span lies inside `source` (an end-of-line position counts).
    pub fn is_within(&self, source: &str) -> bool {
        let lines: Vec<&str> = source.split('\n').collect();
        if self.line == 0 || self.column == 0 || self.line > lines.len() {
            return false;
        }
        let width = lines[self.line - 1].chars().count();
        self.column + self.length <= width + 1
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    fn expecting(span: SourceSpan, message: impl Into<String>, expected: &[&str]) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// `line:col: message` followed by the offending line and a caret marker.
    pub fn render(&self, source: &str) -> String {
        let mut out = format!("error: {self}\n");
        if let Some(line) = source.split('\n').nth(self.span.line.saturating_sub(1)) {
            out.push_str(&format!("  | {line}\n  | "));
            out.push_str(&" ".repeat(self.span.column.saturating_sub(1)));
            out.push_str(&"^".repeat(self.span.length.max(1)));
            out.push('\n');
        }
        if !self.expected.is_empty() {
            out.push_str(&format!("  = expected one of: {}\n", self.expected.join(", ")));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Token<'a> {
    text: &'a str,
    span: SourceSpan,
}

fn tokenize_line<'a>(line: &'a str, line_no: usize) -> Vec<Token<'a>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let column_of = |byte: usize| line[..byte].chars().count() + 1;
    let push = |from: usize, to: usize, tokens: &mut Vec<Token<'a>>| {
        let text = &code[from..to];
        tokens.push(Token {
            text,
            span: SourceSpan {
                line: line_no,
                column: column_of(from),
                length: text.chars().count(),
            },
        });
    };
    for (i, c) in code.char_indices() {
        if c.is_whitespace() || c == '=' {
            if let Some(s) = start.take() {
                push(s, i, &mut tokens);
            }
            if c == '=' {
                push(i, i + 1, &mut tokens);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        push(s, code.len(), &mut tokens);
    }
    tokens
}

/// Tokens of one statement plus the span just past its last token.
struct Line<'a> {
    tokens: Vec<Token<'a>>,
    end: SourceSpan,
    pos: usize,
}

impl<'a> Line<'a> {
    fn next(&mut self, what: &[&str]) -> Result<&Token<'a>, ParseError> {
        let end = self.end;
        let t = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| ParseError::expecting(end, format!("expected {}", what.join(" or ")), what))?;
        self.pos += 1;
        Ok(t)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.next(&[kw])?;
        if t.text != kw {
            return Err(ParseError::expecting(t.span, format!("expected `{kw}`, found `{}`", t.text), &[kw]));
        }
        Ok(())
    }

    fn ident(&mut self, what: &str) -> Result<&Token<'a>, ParseError> {
        let t = self.next(&[what])?;
        if !is_valid_token(t.text) {
            return Err(ParseError::expecting(t.span, format!("`{}` is not a valid {what}", t.text), &[what]));
        }
        Ok(t)
    }

    fn integer(&mut self, what: &str) -> Result<(i64, SourceSpan), ParseError> {
        let t = self.next(&[what])?;
        t.text
            .parse::<i64>()
            .map(|v| (v, t.span))
            .map_err(|_| ParseError::expecting(t.span, format!("expected {what}, found `{}`", t.text), &["integer"]))
    }

    fn sign(&mut self) -> Result<Sign, ParseError> {
        let t = self.next(&["+", "-"])?;
        match t.text {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            other => Err(ParseError::expecting(t.span, format!("expected sign, found `{other}`"), &["+", "-"])),
        }
    }

    fn rest(&mut self) -> &[Token<'a>] {
        let r = &self.tokens[self.pos..];
        self.pos = self.tokens.len();
        r
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => Err(ParseError::expecting(t.span, format!("unexpected `{}`", t.text), &["end of line"])),
            None => Ok(()),
        }
    }
}

fn statements(source: &str) -> Vec<Line<'_>> {
    source
        .split('\n')
        .enumerate()
        .filter_map(|(i, raw)| {
            let raw = raw.strip_suffix('\r').unwrap_or(raw);
            let tokens = tokenize_line(raw, i + 1);
            let last = tokens.last()?;
            let end = SourceSpan {
                line: i + 1,
                column: last.span.column + last.span.length,
                length: 0,
            };
            Some(Line { tokens, end, pos: 0 })
        })
        .collect()
}

/// A word letter as written, before generator resolution.
struct RawLetter {
    letter: Letter,
    span: SourceSpan,
}

/// Parses `1` or juxtaposed atoms `a`, `a^-1`, `a^3`.
fn parse_word_expr(tokens: &[Token<'_>], end: SourceSpan) -> Result<Vec<RawLetter>, ParseError> {
    let expected = ["word atom", "1"];
    let Some(first) = tokens.first() else {
        return Err(ParseError::expecting(end, "expected a word", &expected));
    };
    if first.text == "1" {
        if let Some(extra) = tokens.get(1) {
            return Err(ParseError::new(extra.span, "the empty word `1` must stand alone"));
        }
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for t in tokens {
        let (name, exponent) = match t.text.split_once('^') {
            Some((name, exp)) => {
                let name_len = name.chars().count();
                let exp_span = SourceSpan {
                    line: t.span.line,
                    column: t.span.column + name_len + 1,
                    length: exp.chars().count().max(1).min(t.span.length - name_len),
                };
                let value = exp
                    .parse::<i64>()
                    .map_err(|_| ParseError::expecting(exp_span, format!("bad exponent `{exp}`"), &["integer"]))?;
                if value == 0 || value.unsigned_abs() > 10_000 {
                    return Err(ParseError::new(exp_span, format!("exponent {value} out of range")));
                }
                (name, value)
            }
            None => (t.text, 1),
        };
        if !is_valid_token(name) {
            let span = SourceSpan {
                length: name.chars().count().max(1).min(t.span.length),
                ..t.span
            };
            return Err(ParseError::expecting(span, format!("`{name}` is not a generator name"), &expected));
        }
        let sign = if exponent < 0 { Sign::Minus } else { Sign::Plus };
        for _ in 0..exponent.unsigned_abs() {
            out.push(RawLetter {
                letter: Letter::new(name, sign),
                span: t.span,
            });
        }
    }
    Ok(out)
}

fn word_of(raw: Vec<RawLetter>) -> FreeWord {
    FreeWord::reduce(raw.into_iter().map(|r| r.letter))
}

/// Compact text of a word: runs become powers, the empty word is `1`.
pub fn format_word(w: &FreeWord) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let count = (j - i) as i64 * letters[i].sign.value();
        parts.push(if count == 1 {
            letters[i].generator.to_string()
        } else {
            format!("{}^{count}", letters[i].generator)
        });
        i = j;
    }
    parts.join(" ")
}

/// Deterministic text of a diagram: ids in sorted order, optional lines
/// (`dots`, `threehandles`, `fourhandles`) only when nonempty.
pub fn serialize_diagram(d: &HandleDiagram) -> String {
    let mut out = format!("diagram {}\n", d.name);
    if !d.dots.is_empty() {
        let names: Vec<&str> = d.dots.iter().map(GeneratorId::as_str).collect();
        out.push_str(&format!("dots {}\n", names.join(" ")));
    }
    for (id, h) in &d.handles {
        out.push_str(&format!("handle {id} word {} framing {}\n", format_word(&h.word), h.framing));
    }
    for (a, b, v) in d.linking.pairs() {
        out.push_str(&format!("link {a} {b} = {v}\n"));
    }
    if d.three_handles > 0 {
        out.push_str(&format!("threehandles {}\n", d.three_handles));
    }
    if d.four_handles > 0 {
        out.push_str(&format!("fourhandles {}\n", d.four_handles));
    }
    out
}

pub fn parse_diagram(source: &str) -> Result<HandleDiagram, ParseError> {
    let mut name: Option<String> = None;
    let mut dots: BTreeMap<String, SourceSpan> = BTreeMap::new();
    let mut handles: BTreeMap<String, (SourceSpan, Vec<RawLetter>, i64)> = BTreeMap::new();
    let mut links: BTreeMap<(String, String), (SourceSpan, SourceSpan, i64)> = BTreeMap::new();
    let mut three: Option<u32> = None;
    let mut four: Option<u32> = None;
    let keywords = ["diagram", "dots", "handle", "link", "threehandles", "fourhandles"];

    for mut line in statements(source) {
        let head = line.next(&keywords)?.clone();
        match head.text {
            "diagram" => {
                if name.is_some() {
                    return Err(ParseError::new(head.span, "duplicate `diagram` header"));
                }
                name = Some(line.ident("diagram name")?.text.to_string());
            }
            "dots" => {
                let rest = line.rest().to_vec();
                if rest.is_empty() {
                    return Err(ParseError::expecting(line.end, "expected generator names", &["identifier"]));
                }
                for t in rest {
                    if !is_valid_token(t.text) {
                        return Err(ParseError::new(t.span, format!("`{}` is not a valid generator name", t.text)));
                    }
                    if dots.insert(t.text.to_string(), t.span).is_some() {
                        return Err(ParseError::new(t.span, format!("dot `{}` declared twice", t.text)));
                    }
                }
            }
            "handle" => {
                let id = line.ident("handle id")?.clone();
                line.keyword("word")?;
                let start = line.pos;
                let framing_at = line.tokens[start..]
                    .iter()
                    .position(|t| t.text == "framing")
                    .map(|p| p + start);
                let Some(framing_at) = framing_at else {
                    return Err(ParseError::expecting(line.end, "expected `framing`", &["framing"]));
                };
                let word_end = line.tokens[framing_at].span;
                let raw = parse_word_expr(&line.tokens[start..framing_at], SourceSpan { length: 0, ..word_end })?;
                line.pos = framing_at + 1;
                let (framing, _) = line.integer("framing")?;
                line.finish()?;
                if handles.contains_key(id.text) {
                    return Err(ParseError::new(id.span, format!("handle `{}` declared twice", id.text)));
                }
                handles.insert(id.text.to_string(), (id.span, raw, framing));
                continue;
            }
            "link" => {
                let a = line.ident("handle id")?.clone();
                let b = line.ident("handle id")?.clone();
                line.keyword("=")?;
                let (value, _) = line.integer("linking number")?;
                line.finish()?;
                if a.text == b.text {
                    return Err(ParseError::new(b.span, "a handle cannot link itself; use its framing"));
                }
                let key = if a.text < b.text {
                    (a.text.to_string(), b.text.to_string())
                } else {
                    (b.text.to_string(), a.text.to_string())
                };
                if links.contains_key(&key) {
                    return Err(ParseError::new(a.span, format!("duplicate link for `{}` and `{}`", a.text, b.text)));
                }
                links.insert(key, (a.span, b.span, value));
                continue;
            }
            "threehandles" | "fourhandles" => {
                let (value, span) = line.integer("count")?;
                let slot = if head.text == "threehandles" { &mut three } else { &mut four };
                if slot.is_some() {
                    return Err(ParseError::new(head.span, format!("duplicate `{}` line", head.text)));
                }
                let limit = if head.text == "fourhandles" { 1 } else { u32::MAX as i64 };
                if !(0..=limit).contains(&value) {
                    return Err(ParseError::new(span, format!("count {value} out of range")));
                }
                *slot = Some(value as u32);
            }
            other => {
                return Err(ParseError::expecting(head.span, format!("unknown statement `{other}`"), &keywords));
            }
        }
        line.finish()?;
    }

    let Some(name) = name else {
        let span = statements(source)
            .first()
            .map(|l| l.tokens[0].span)
            .unwrap_or(SourceSpan { line: 1, column: 1, length: 0 });
        return Err(ParseError::expecting(span, "missing `diagram <name>` header", &["diagram"]));
    };

    let mut d = HandleDiagram::named(name);
    d.dots = dots.keys().map(|s| GeneratorId::new(s.as_str())).collect();
    for (id, (span, raw, framing)) in handles {
        if dots.contains_key(&id) {
            return Err(ParseError::new(span, format!("`{id}` is already declared as a dot")));
        }
        if let Some(bad) = raw.iter().find(|r| !d.dots.contains(&r.letter.generator)) {
            return Err(ParseError::new(
                bad.span,
                format!("unknown generator `{}` (declare it with `dots`)", bad.letter.generator),
            ));
        }
        d.handles.insert(HandleId::new(id), TwoHandle::new(word_of(raw), framing));
    }
    for ((a, b), (a_span, b_span, value)) in links {
        for (name, span) in [(&a, a_span), (&b, b_span)] {
            if !d.handles.contains_key(&HandleId::from(name.as_str())) {
                return Err(ParseError::new(span, format!("unknown handle `{name}`")));
            }
        }
        d.linking.set(&a.as_str().into(), &b.as_str().into(), value);
    }
    d.three_handles = three.unwrap_or(0);
    d.four_handles = four.unwrap_or(0);
    Ok(d)
}

fn band_word(line: &mut Line<'_>) -> Result<FreeWord, ParseError> {
    let end = line.end;
    let rest = line.rest().to_vec();
    Ok(word_of(parse_word_expr(&rest, end)?))
}

/// Parses one move per line.
pub fn parse_script(source: &str) -> Result<MoveScript, ParseError> {
    const COMMANDS: &[&str] = &[
        "slide", "slidedot", "intro12", "cancel12", "intro23", "cancel23", "zerotodot", "dottozero", "gluck", "surger",
    ];
    let mut moves = Vec::new();
    for mut line in statements(source) {
        let head = line.next(COMMANDS)?.clone();
        let mv = match head.text {
            "slide" => {
                let handle = HandleId::new(line.ident("handle id")?.text);
                line.keyword("over")?;
                let over = HandleId::new(line.ident("handle id")?.text);
                line.keyword("sign")?;
                let sign = line.sign()?;
                line.keyword("band")?;
                let band = band_word(&mut line)?;
                Move::SlideHandle { handle, over, sign, band }
            }
            "slidedot" => {
                let dot = GeneratorId::new(line.ident("generator")?.text);
                line.keyword("over")?;
                let over = GeneratorId::new(line.ident("generator")?.text);
                line.keyword("sign")?;
                let sign = line.sign()?;
                Move::SlideDot { dot, over, sign }
            }
            "intro12" | "cancel12" => {
                let dot = GeneratorId::new(line.ident("generator")?.text);
                let handle = HandleId::new(line.ident("handle id")?.text);
                if head.text == "intro12" {
                    Move::IntroducePair12 { dot, handle }
                } else {
                    Move::CancelPair12 { dot, handle }
                }
            }
            "intro23" | "cancel23" => {
                let handle = HandleId::new(line.ident("handle id")?.text);
                if head.text == "intro23" {
                    Move::IntroducePair23 { handle }
                } else {
                    Move::CancelPair23 { handle }
                }
            }
            "zerotodot" => {
                let handle = HandleId::new(line.ident("handle id")?.text);
                let dot = GeneratorId::new(line.ident("generator")?.text);
                Move::ExchangeZeroToDot { handle, dot }
            }
            "dottozero" => {
                let dot = GeneratorId::new(line.ident("generator")?.text);
                let handle = HandleId::new(line.ident("handle id")?.text);
                Move::ExchangeDotToZero { dot, handle }
            }
            "gluck" => {
                let sphere = HandleId::new(line.ident("handle id")?.text);
                line.keyword("sign")?;
                let sign = line.sign()?;
                Move::GluckTwist { sphere, sign }
            }
            "surger" => {
                let sphere = HandleId::new(line.ident("handle id")?.text);
                let dot = GeneratorId::new(line.ident("generator")?.text);
                Move::Surger { sphere, dot }
            }
            other => {
                return Err(ParseError::expecting(head.span, format!("unknown move `{other}`"), COMMANDS));
            }
        };
        line.finish()?;
        moves.push(mv);
    }
    Ok(MoveScript(moves))
}

pub fn serialize_script(script: &MoveScript) -> String {
    script.0.iter().map(|m| format!("{m}\n")).collect()
}

/// Certificate files: one `term <handle> sign <+|-> conj <word-expr>` per line.
pub fn parse_certificate(source: &str) -> Result<SphericalClassCertificate, ParseError> {
    let mut terms = Vec::new();
    for mut line in statements(source) {
        line.keyword("term")?;
        let handle = HandleId::new(line.ident("handle id")?.text);
        line.keyword("sign")?;
        let sign = line.sign()?;
        line.keyword("conj")?;
        let conjugator = band_word(&mut line)?;
        terms.push(CertificateTerm { handle, sign, conjugator });
    }
    if terms.is_empty() {
        return Err(ParseError::expecting(
            SourceSpan { line: 1, column: 1, length: 0 },
            "certificate has no terms",
            &["term"],
        ));
    }
    Ok(SphericalClassCertificate { terms })
}

pub fn serialize_certificate(cert: &SphericalClassCertificate) -> String {
    cert.terms
        .iter()
        .map(|t| format!("term {} sign {} conj {}\n", t.handle, t.sign.symbol(), format_word(&t.conjugator)))
        .collect()
}
