//! Named example diagrams and the embedded golden checks.

use crate::canonical::canonical_form;
use crate::diagram::{FreeWord, HandleDiagram, HandleId, Sign};
use crate::gluck::{
    check_gluck_triviality_hypothesis, gluck_twist, represent_spherical_class, surger_sphere, trivialize_gluck,
    SearchBudget, SphericalClassCertificate, Verdict,
};
use crate::invariants::{intersection_form, signature, InvariantSummary, Parity};
use crate::lang::parse_script;
use crate::matrix::IntMatrix;
use crate::moves::{apply_script, cancel_pair_12, MoveScript};

/// Two 0-framed unknots `S`, `K` linking once.
pub fn s2_x_s2() -> HandleDiagram {
    HandleDiagram::named("S2xS2")
        .with_handle("K", FreeWord::empty(), 0)
        .with_handle("S", FreeWord::empty(), 0)
        .with_link("K", "S", 1)
}

/// A 0-framed and a 1-framed unknot linking once.
pub fn cp2_sharp_cp2bar() -> HandleDiagram {
    HandleDiagram::named("CP2_CP2bar")
        .with_handle("A", FreeWord::empty(), 0)
        .with_handle("B", FreeWord::empty(), 1)
        .with_link("A", "B", 1)
}

/// An odd unknot `K` with a 0-framed meridian `C`, plus a sphere `S` split
/// from both.
pub fn split_meridian_block() -> HandleDiagram {
    HandleDiagram::named("split_block")
        .with_handle("S", FreeWord::empty(), 0)
        .with_handle("K", FreeWord::empty(), 1)
        .with_handle("C", FreeWord::empty(), 0)
        .with_link("K", "C", 1)
}

/// `S` with a dual `T`, and an odd unknot `K` of framing `k` with meridian `C`.
pub fn clasp_instance(k: i64) -> HandleDiagram {
    let name = if k < 0 { format!("clasp_m{}", -k) } else { format!("clasp_{k}") };
    HandleDiagram::named(name)
        .with_handle("S", FreeWord::empty(), 0)
        .with_handle("T", FreeWord::empty(), 0)
        .with_handle("K", FreeWord::empty(), k)
        .with_handle("C", FreeWord::empty(), 0)
        .with_link("S", "T", 1)
        .with_link("K", "C", 1)
}

/// As [`clasp_instance`] with `T` running once over a 1-handle.
pub fn clasp_instance_with_dot() -> HandleDiagram {
    HandleDiagram::named("clasp_dot")
        .with_dot("a")
        .with_handle("S", FreeWord::empty(), 0)
        .with_handle("T", FreeWord::generator("a"), 0)
        .with_handle("A", FreeWord::from_powers([("a", 2)]), 2)
        .with_handle("K", FreeWord::empty(), 1)
        .with_handle("C", FreeWord::empty(), 0)
        .with_link("S", "T", 1)
        .with_link("K", "C", 1)
        .with_link("A", "T", 1)
}

/// As [`clasp_instance`] with two strands `T`, `U` through `S`.
pub fn two_strand_instance() -> HandleDiagram {
    HandleDiagram::named("two_strands")
        .with_handle("S", FreeWord::empty(), 0)
        .with_handle("T", FreeWord::empty(), 0)
        .with_handle("U", FreeWord::empty(), 0)
        .with_handle("K", FreeWord::empty(), 1)
        .with_handle("C", FreeWord::empty(), 0)
        .with_link("S", "T", 1)
        .with_link("S", "U", 1)
        .with_link("K", "C", 1)
}

#[derive(Clone, Debug)]
pub struct TrivializationInstance {
    pub name: &'static str,
    pub diagram: HandleDiagram,
    pub sphere: HandleId,
    pub handle: HandleId,
    /// A script found by hand, from the twisted diagram back to `diagram`.
    pub hand_script: Option<MoveScript>,
}

const CLASP_SCRIPT: &str = "\
slide T over K sign + band 1
slide T over C sign - band 1
slide C over S sign - band 1
";

fn script(text: &str) -> MoveScript {
    parse_script(text).expect("embedded script parses")
}

/// The curated corpus for the trivialization search.
pub fn trivialization_instances() -> Vec<TrivializationInstance> {
    let reduce_k = "slide K over C sign - band 1\n";
    let restore_k = "slide K over C sign + band 1\n";
    vec![
        TrivializationInstance {
            name: "split_block",
            diagram: split_meridian_block(),
            sphere: "S".into(),
            handle: "K".into(),
            hand_script: Some(MoveScript::default()),
        },
        TrivializationInstance {
            name: "clasp_1",
            diagram: clasp_instance(1),
            sphere: "S".into(),
            handle: "K".into(),
            hand_script: Some(script(CLASP_SCRIPT)),
        },
        TrivializationInstance {
            name: "clasp_3",
            diagram: clasp_instance(3),
            sphere: "S".into(),
            handle: "K".into(),
            hand_script: Some(script(&format!("{reduce_k}{CLASP_SCRIPT}{restore_k}"))),
        },
        TrivializationInstance {
            name: "clasp_m1",
            diagram: clasp_instance(-1),
            sphere: "S".into(),
            handle: "K".into(),
            hand_script: Some(script(&format!("{restore_k}{CLASP_SCRIPT}{reduce_k}"))),
        },
        TrivializationInstance {
            name: "clasp_5",
            diagram: clasp_instance(5),
            sphere: "S".into(),
            handle: "K".into(),
            hand_script: None,
        },
        TrivializationInstance {
            name: "two_strands",
            diagram: two_strand_instance(),
            sphere: "S".into(),
            handle: "K".into(),
            hand_script: None,
        },
        TrivializationInstance {
            name: "clasp_dot",
            diagram: clasp_instance_with_dot(),
            sphere: "S".into(),
            handle: "K".into(),
            hand_script: None,
        },
    ]
}

/// Annotated guesses at the stages of the twist-by-exchange route for one
/// input. Not normative; checked only for consistency.
#[derive(Clone, Debug)]
pub struct ExchangeStages {
    pub name: &'static str,
    pub input: HandleDiagram,
    pub sphere: HandleId,
    /// After replacing the sphere by a dot.
    pub surgered: HandleDiagram,
    /// After twisting the strands through the dot once.
    pub twisted_strands: HandleDiagram,
    /// After exchanging the dot back for a 0-framed unknot.
    pub result: HandleDiagram,
}

pub fn exchange_stage_corpus() -> Vec<ExchangeStages> {
    let s2 = ExchangeStages {
        name: "s2xs2",
        input: s2_x_s2(),
        sphere: "S".into(),
        surgered: HandleDiagram::named("S2xS2").with_dot("g").with_handle("K", FreeWord::generator("g"), 0),
        twisted_strands: HandleDiagram::named("S2xS2").with_dot("g").with_handle("K", FreeWord::generator("g"), 1),
        result: s2_x_s2().with_handle("K", FreeWord::empty(), 1),
    };
    let pair = HandleDiagram::named("pair")
        .with_handle("S", FreeWord::empty(), 0)
        .with_handle("A", FreeWord::empty(), 1)
        .with_handle("B", FreeWord::empty(), -2)
        .with_link("S", "A", 1)
        .with_link("S", "B", 2)
        .with_link("A", "B", 1);
    let pair_stages = ExchangeStages {
        name: "two_strands",
        sphere: "S".into(),
        surgered: HandleDiagram::named("pair")
            .with_dot("g")
            .with_handle("A", FreeWord::generator("g"), 1)
            .with_handle("B", FreeWord::from_powers([("g", 2)]), -2)
            .with_link("A", "B", 1),
        twisted_strands: HandleDiagram::named("pair")
            .with_dot("g")
            .with_handle("A", FreeWord::generator("g"), 2)
            .with_handle("B", FreeWord::from_powers([("g", 2)]), 2)
            .with_link("A", "B", 3),
        result: pair
            .clone()
            .with_handle("A", FreeWord::empty(), 2)
            .with_handle("B", FreeWord::empty(), 2)
            .with_link("A", "B", 3),
        input: pair,
    };
    vec![s2, pair_stages]
}

/// The E8 Gram matrix.
pub fn e8() -> IntMatrix {
    let mut rows = vec![vec![0i64; 8]; 8];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
    for (a, b) in edges {
        rows[a][b] = -1;
        rows[b][a] = -1;
    }
    IntMatrix::from_rows(&rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> GoldenCheck {
    match f() {
        Ok(detail) => GoldenCheck { name, passed: true, detail },
        Err(detail) => GoldenCheck { name, passed: false, detail },
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// The embedded golden corpus; every entry should pass.
pub fn selftest() -> Vec<GoldenCheck> {
    let mut out = vec![
        check("s2xs2_form_even", || {
            let f = intersection_form(&s2_x_s2());
            ensure(f.rank == 2 && f.signature == 0 && f.parity == Parity::Even, format!("{f:?}"))?;
            Ok("rank 2, signature 0, even".into())
        }),
        check("gluck_twist_s2xs2_odd", || {
            for s in ["S", "K"] {
                let t = gluck_twist(&s2_x_s2(), &s.into(), Sign::Plus).map_err(|e| e.to_string())?;
                let f = intersection_form(&t);
                ensure(f.rank == 2 && f.signature == 0 && f.parity == Parity::Odd, format!("{f:?}"))?;
            }
            Ok("rank 2, signature 0, odd".into())
        }),
        check("surger_then_cancel_is_empty", || {
            let d = surger_sphere(&s2_x_s2(), &"S".into(), &"g".into()).map_err(|e| e.to_string())?;
            let e = cancel_pair_12(&d, &"g".into(), &"K".into()).map_err(|e| e.to_string())?;
            let same = canonical_form(&e).ok() == canonical_form(&HandleDiagram::new()).ok();
            ensure(same, "not empty")?;
            Ok("empty diagram".into())
        }),
        check("checker_s2xs2_unknown", || {
            let v = check_gluck_triviality_hypothesis(&s2_x_s2(), &"S".into(), None).map_err(|e| e.to_string())?;
            ensure(v == Verdict::Unknown, "expected unknown")?;
            Ok("unknown".into())
        }),
        check("checker_odd_split_handle", || {
            let d = s2_x_s2().with_handle("E", FreeWord::empty(), 3);
            let v = check_gluck_triviality_hypothesis(&d, &"S".into(), None).map_err(|e| e.to_string())?;
            ensure(v.is_certified(), "expected certified")?;
            Ok("certified by E".into())
        }),
        check("represent_class_self_intersection", || {
            let cert = SphericalClassCertificate::default()
                .term("S", Sign::Plus, FreeWord::empty())
                .term("K", Sign::Plus, FreeWord::empty());
            let (d, _) = represent_spherical_class(&s2_x_s2(), &cert, &"h".into()).map_err(|e| e.to_string())?;
            ensure(d.framing(&"h".into()) == 2, "expected framing 2")?;
            Ok("framing 2".into())
        }),
        check("e8_signature", || {
            let s = signature(&e8());
            ensure(s == 8, format!("got {s}"))?;
            Ok("8".into())
        }),
        check("exchange_stages_consistent", || {
            for st in exchange_stage_corpus() {
                let a = InvariantSummary::of(&st.surgered);
                let b = InvariantSummary::of(&st.twisted_strands);
                ensure(a.same_invariants(&b), format!("{}: stage invariants differ", st.name))?;
                let t = gluck_twist(&st.input, &st.sphere, Sign::Plus).map_err(|e| e.to_string())?;
                ensure(canonical_form(&t).ok() == canonical_form(&st.result).ok(), format!("{}: result", st.name))?;
            }
            Ok("stages agree".into())
        }),
    ];
    for inst in trivialization_instances() {
        out.push(check(inst.name, || {
            if let Some(script) = &inst.hand_script {
                let start = gluck_twist(&inst.diagram, &inst.sphere, Sign::Plus).map_err(|e| e.to_string())?;
                let (end, _) = apply_script(&start, script).map_err(|e| e.to_string())?;
                ensure(canonical_form(&end).ok() == canonical_form(&inst.diagram).ok(), "hand script")?;
            }
            let (v, stats) = trivialize_gluck(&inst.diagram, &inst.sphere, &inst.handle, &SearchBudget::default())
                .map_err(|e| e.to_string())?;
            let log = v.log().ok_or("search returned unknown")?;
            Ok(format!("{} moves, {} nodes", log.len(), stats.visited))
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid() {
        for d in [s2_x_s2(), cp2_sharp_cp2bar(), split_meridian_block(), clasp_instance(3), clasp_instance_with_dot(), two_strand_instance()] {
            d.validate().unwrap();
        }
        for st in exchange_stage_corpus() {
            for d in [&st.input, &st.surgered, &st.twisted_strands, &st.result] {
                d.validate().unwrap();
            }
        }
    }

    #[test]
    fn exchange_stages_follow_the_moves() {
        use crate::moves::exchange_dot_to_zero;
        for st in exchange_stage_corpus() {
            let surgered = surger_sphere(&st.input, &st.sphere, &"g".into()).unwrap();
            assert_eq!(surgered, st.surgered, "{}", st.name);
            let back = exchange_dot_to_zero(&st.twisted_strands, &"g".into(), &st.sphere).unwrap();
            assert_eq!(back, st.result, "{}", st.name);
        }
    }

    #[test]
    fn hand_scripts_replay() {
        for inst in trivialization_instances() {
            let Some(script) = inst.hand_script else { continue };
            let start = gluck_twist(&inst.diagram, &inst.sphere, Sign::Plus).unwrap();
            let (end, log) = apply_script(&start, &script).unwrap();
            assert_eq!(end, inst.diagram, "{}", inst.name);
            assert!(log.is_chained());
        }
    }

    #[test]
    fn selftest_passes() {
        for c in selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
