//! Gluck twists, sphere surgery, spherical classes and the triviality checks.

mod search;

use std::fmt;

use thiserror::Error;

use crate::diagram::{DiagramError, FreeWord, GeneratorId, HandleDiagram, HandleId, Sign};
use crate::invariants::is_free_trivial;
use crate::lang::{format_word, serialize_script};
use crate::moves::{apply_script, checked, Move, MoveError, MoveLog, MoveScript, ScriptError};

pub use search::{trivialize_gluck, SearchBudget, SearchStats};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTerm {
    pub handle: HandleId,
    pub sign: Sign,
    pub conjugator: FreeWord,
}

/// A class `Σ ε_t·[h_t]` together with conjugators making the product of
/// `u_t · w_{h_t}^{ε_t} · u_t⁻¹` freely trivial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SphericalClassCertificate {
    pub terms: Vec<CertificateTerm>,
}

impl SphericalClassCertificate {
    pub fn new(terms: Vec<CertificateTerm>) -> Self {
        SphericalClassCertificate { terms }
    }

    pub fn term(mut self, handle: &str, sign: Sign, conjugator: FreeWord) -> Self {
        self.terms.push(CertificateTerm {
            handle: handle.into(),
            sign,
            conjugator,
        });
        self
    }

    /// Product of the conjugated boundary words in `d`.
    pub fn boundary_product(&self, d: &HandleDiagram) -> Result<FreeWord, GluckError> {
        let mut acc = FreeWord::empty();
        for t in &self.terms {
            let w = &d.handle(&t.handle)?.word;
            if let Some(g) = t.conjugator.generators().find(|g| !d.has_dot(g)) {
                return Err(DiagramError::UnknownGenerator(g.clone()).into());
            }
            acc = acc.concat(&w.pow(t.sign.value()).conjugate_by(&t.conjugator));
        }
        Ok(acc)
    }

    /// Coefficient vector over `d.handle_ids()` order.
    pub fn coefficients(&self, d: &HandleDiagram) -> Vec<i64> {
        let ids = d.handle_ids();
        let mut c = vec![0; ids.len()];
        for t in &self.terms {
            if let Some(i) = ids.iter().position(|h| h == &t.handle) {
                c[i] += t.sign.value();
            }
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A trivial-word handle of odd framing.
    Handle(HandleId),
    Certificate(SphericalClassCertificate),
    /// A move script from the twisted diagram back to the original.
    Trivialization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified { witness: Witness, log: MoveLog },
    Unknown,
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    pub fn log(&self) -> Option<&MoveLog> {
        match self {
            Verdict::Certified { log, .. } => Some(log),
            Verdict::Unknown => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Unknown => writeln!(f, "verdict: unknown"),
            Verdict::Certified { witness, log } => {
                writeln!(f, "verdict: certified")?;
                match witness {
                    Witness::Handle(h) => writeln!(f, "witness: handle {h}")?,
                    Witness::Certificate(c) => {
                        let terms: Vec<String> = c
                            .terms
                            .iter()
                            .map(|t| format!("{}{}", t.sign.symbol(), t.handle))
                            .collect();
                        writeln!(f, "witness: certificate {}", terms.join(" "))?
                    }
                    Witness::Trivialization => writeln!(f, "witness: trivialization")?,
                }
                writeln!(f, "script: {} moves", log.len())?;
                write!(f, "{}", serialize_script(&log.script()))?;
                writeln!(f, "chain:")?;
                write!(f, "{}", log.render())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluckError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("certificate has no terms")]
    EmptyCertificate,
    #[error("certificate boundary word {} is not freely trivial", format_word(.0))]
    CertificateNotTrivial(FreeWord),
    #[error("handle `{0}` must differ from the sphere handle")]
    SameHandle(HandleId),
    #[error("handle `{handle}` must have a trivial word and odd framing")]
    NotOddTrivial { handle: HandleId },
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

pub(crate) fn require_sphere(d: &HandleDiagram, s: &HandleId) -> Result<(), MoveError> {
    let h = d.handle(s)?;
    if !h.word.is_empty() || h.framing != 0 {
        return Err(MoveError::NotSphereHandle { handle: s.clone() });
    }
    Ok(())
}

/// With `v_m = L_mS`: `f_m += ε·v_m²` and `L_mn += ε·v_m·v_n` for `m, n ≠ S`.
pub fn gluck_twist(d: &HandleDiagram, s: &HandleId, sign: Sign) -> Result<HandleDiagram, MoveError> {
    require_sphere(d, s)?;
    let e = sign.value();
    let v: Vec<(HandleId, i64)> = d
        .handles
        .keys()
        .filter(|m| *m != s)
        .map(|m| (m.clone(), d.linking.get(m, s)))
        .filter(|(_, x)| *x != 0)
        .collect();
    let mut out = d.clone();
    for (i, (m, vm)) in v.iter().enumerate() {
        let sq = checked(vm.checked_mul(*vm).and_then(|x| x.checked_mul(e)))?;
        let h = out.handle_mut(m)?;
        h.framing = checked(h.framing.checked_add(sq))?;
        for (n, vn) in &v[i + 1..] {
            let delta = checked(vm.checked_mul(*vn).and_then(|x| x.checked_mul(e)))?;
            let cur = out.linking.get(m, n);
            out.linking.set(m, n, checked(cur.checked_add(delta))?);
        }
    }
    Ok(out)
}

/// The surgered manifold: the sphere handle `S` becomes the dot `g`.
pub fn surger_sphere(d: &HandleDiagram, s: &HandleId, g: &GeneratorId) -> Result<HandleDiagram, MoveError> {
    crate::moves::exchange_zero_to_dot(d, s, g)
}

/// Adds a 2/3 pair `h` and slides `h` along each term; the new handle has
/// trivial word and framing `cᵀLc`.
pub fn represent_spherical_class(
    d: &HandleDiagram,
    cert: &SphericalClassCertificate,
    h: &HandleId,
) -> Result<(HandleDiagram, MoveLog), GluckError> {
    if cert.terms.is_empty() {
        return Err(GluckError::EmptyCertificate);
    }
    let product = cert.boundary_product(d)?;
    if !is_free_trivial(&product) {
        return Err(GluckError::CertificateNotTrivial(product));
    }
    let mut script = vec![Move::IntroducePair23 { handle: h.clone() }];
    for t in &cert.terms {
        script.push(Move::SlideHandle {
            handle: h.clone(),
            over: t.handle.clone(),
            sign: t.sign,
            band: t.conjugator.clone(),
        });
    }
    let (out, log) = apply_script(d, &MoveScript(script))?;

    let c = cert.coefficients(d);
    let expected = quadratic_value(d, &c)?;
    let got = out.handle(h)?;
    if !got.word.is_empty() || got.framing != expected {
        return Err(GluckError::Postcondition(format!(
            "new handle has word {} and framing {}, expected 1 and {expected}",
            format_word(&got.word),
            got.framing
        )));
    }
    Ok((out, log))
}

/// `cᵀLc` over `d.handle_ids()` order, with framings on the diagonal.
pub fn quadratic_value(d: &HandleDiagram, c: &[i64]) -> Result<i64, MoveError> {
    let ids = d.handle_ids();
    let mut total: i64 = 0;
    for (i, a) in ids.iter().enumerate() {
        for (j, b) in ids.iter().enumerate() {
            let term = c[i]
                .checked_mul(c[j])
                .and_then(|x| x.checked_mul(d.pairing(a, b)));
            total = checked(term.and_then(|t| total.checked_add(t)))?;
        }
    }
    Ok(total)
}

/// Semi-decision for the odd-spherical-class hypothesis in the surgered
/// manifold. `Unknown` means no witness was found, not that none exists.
pub fn check_gluck_triviality_hypothesis(
    d: &HandleDiagram,
    s: &HandleId,
    cert: Option<&SphericalClassCertificate>,
) -> Result<Verdict, GluckError> {
    require_sphere(d, s)?;
    let g = GeneratorId::new(d.fresh_id("g"));
    let surger = Move::Surger {
        sphere: s.clone(),
        dot: g,
    };
    let (surgered, mut log) = apply_script(d, &MoveScript(vec![surger]))?;

    if let Some((k, _)) = surgered
        .handles
        .iter()
        .find(|(_, h)| is_free_trivial(&h.word) && h.framing.rem_euclid(2) == 1)
    {
        return Ok(Verdict::Certified {
            witness: Witness::Handle(k.clone()),
            log,
        });
    }
    if let Some(cert) = cert {
        let h = HandleId::new(surgered.fresh_id("h"));
        let (out, rest) = represent_spherical_class(&surgered, cert, &h)?;
        if out.framing(&h).rem_euclid(2) == 1 {
            log.append(rest);
            return Ok(Verdict::Certified {
                witness: Witness::Certificate(cert.clone()),
                log,
            });
        }
    }
    Ok(Verdict::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_form;
    use crate::corpus;
    use crate::invariants::{intersection_form, Parity};
    use crate::moves::cancel_pair_12;

    #[test]
    fn twist_on_s2xs2() {
        let d = corpus::s2_x_s2();
        let t = gluck_twist(&d, &"S".into(), Sign::Plus).unwrap();
        assert_eq!(t.framing(&"K".into()), 1);
        assert_eq!(t.linking.get(&"K".into(), &"S".into()), 1);
        let f = intersection_form(&t);
        assert_eq!((f.rank, f.signature, f.parity), (2, 0, Parity::Odd));
    }

    #[test]
    fn split_sphere_twist_is_identity() {
        let d = corpus::s2_x_s2().with_handle("Z", FreeWord::empty(), 0);
        assert_eq!(gluck_twist(&d, &"Z".into(), Sign::Plus).unwrap(), d);
    }

    #[test]
    fn opposite_twists_cancel() {
        let d = HandleDiagram::new()
            .with_dot("a")
            .with_handle("S", FreeWord::empty(), 0)
            .with_handle("A", FreeWord::generator("a"), 2)
            .with_handle("B", FreeWord::empty(), -1)
            .with_link("S", "A", 2)
            .with_link("S", "B", -3)
            .with_link("A", "B", 1);
        let t = gluck_twist(&d, &"S".into(), Sign::Plus).unwrap();
        assert_eq!(t.framing(&"A".into()), 6);
        assert_eq!(t.framing(&"B".into()), 8);
        assert_eq!(t.linking.get(&"A".into(), &"B".into()), -5);
        assert_eq!(gluck_twist(&t, &"S".into(), Sign::Minus).unwrap(), d);
    }

    #[test]
    fn twist_requires_sphere() {
        let d = corpus::cp2_sharp_cp2bar();
        let bad = d.handle_ids().into_iter().find(|h| d.framing(h) != 0).unwrap();
        assert!(matches!(gluck_twist(&d, &bad, Sign::Plus), Err(MoveError::NotSphereHandle { .. })));
    }

    #[test]
    fn surgery_examples() {
        let d = corpus::s2_x_s2();
        let out = surger_sphere(&d, &"S".into(), &"g".into()).unwrap();
        let empty = cancel_pair_12(&out, &"g".into(), &"K".into()).unwrap();
        assert_eq!(canonical_form(&empty).unwrap(), canonical_form(&HandleDiagram::new()).unwrap());

        let split = corpus::s2_x_s2().with_handle("Z", FreeWord::empty(), 0);
        let out = surger_sphere(&split, &"Z".into(), &"g".into()).unwrap();
        assert_eq!(out, corpus::s2_x_s2().with_dot("g"));
    }

    #[test]
    fn represent_examples() {
        let d = corpus::s2_x_s2();
        let one = SphericalClassCertificate::default().term("K", Sign::Plus, FreeWord::empty());
        let (out, _) = represent_spherical_class(&d, &one, &"h".into()).unwrap();
        assert_eq!(out.framing(&"h".into()), 0);
        assert_eq!(out.three_handles, 1);

        let both = one.clone().term("S", Sign::Plus, FreeWord::empty());
        let (out, log) = represent_spherical_class(&d, &both, &"h".into()).unwrap();
        assert_eq!(out.framing(&"h".into()), 2);
        assert_eq!(log.len(), 3);

        let d = HandleDiagram::new()
            .with_dot("a")
            .with_dot("b")
            .with_handle("A", FreeWord::generator("a"), 0)
            .with_handle("B", FreeWord::generator("b"), 0);
        let commutator = SphericalClassCertificate::default()
            .term("A", Sign::Plus, FreeWord::empty())
            .term("B", Sign::Plus, FreeWord::empty())
            .term("A", Sign::Minus, FreeWord::empty())
            .term("B", Sign::Minus, FreeWord::empty());
        assert!(matches!(
            represent_spherical_class(&d, &commutator, &"h".into()),
            Err(GluckError::CertificateNotTrivial(_))
        ));
        let conjugated = SphericalClassCertificate::default()
            .term("A", Sign::Plus, FreeWord::generator("b"))
            .term("A", Sign::Minus, FreeWord::generator("b"));
        assert!(represent_spherical_class(&d, &conjugated, &"h".into()).is_ok());
    }

    #[test]
    fn checker_examples() {
        let d = corpus::s2_x_s2().with_handle("E", FreeWord::empty(), 3);
        let v = check_gluck_triviality_hypothesis(&d, &"S".into(), None).unwrap();
        assert_eq!(v.clone(), Verdict::Certified { witness: Witness::Handle("E".into()), log: v.log().unwrap().clone() });

        let d = corpus::s2_x_s2();
        assert_eq!(check_gluck_triviality_hypothesis(&d, &"S".into(), None).unwrap(), Verdict::Unknown);

        let even = corpus::s2_x_s2()
            .with_handle("A", FreeWord::empty(), 0)
            .with_handle("B", FreeWord::empty(), 0)
            .with_link("A", "B", 1);
        let cert = SphericalClassCertificate::default()
            .term("A", Sign::Plus, FreeWord::empty())
            .term("B", Sign::Plus, FreeWord::empty());
        assert_eq!(check_gluck_triviality_hypothesis(&even, &"S".into(), Some(&cert)).unwrap(), Verdict::Unknown);
    }

    #[test]
    fn checker_certificate_branch() {
        let d = corpus::s2_x_s2()
            .with_handle("A", FreeWord::empty(), 1)
            .with_link("A", "S", 1);
        let cert = SphericalClassCertificate::default()
            .term("A", Sign::Plus, FreeWord::empty())
            .term("K", Sign::Minus, FreeWord::empty());
        let v = check_gluck_triviality_hypothesis(&d, &"S".into(), Some(&cert)).unwrap();
        assert!(matches!(v, Verdict::Certified { witness: Witness::Certificate(_), .. }));
        let log = v.log().unwrap();
        assert!(log.is_chained());
        assert_eq!(log.len(), 4);
        let text = v.to_string();
        assert!(text.starts_with("verdict: certified\n"));
        assert!(text.contains("surger S g1\nintro23 h1\n"));
    }
}
