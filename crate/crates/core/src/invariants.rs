//! Exact algebraic invariants of a handle diagram.
//!
//! Everything is computed on the 2-skeleton: the boundary map from 2-handles
//! to dots, the homology it presents, and the linking matrix restricted to the
//! kernel of the boundary map (the intersection form). 3-handles are assumed
//! to attach injectively, so each one removes a free class from `H₂`; they
//! never contribute to the form, whose radical absorbs them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diagram::{exponent_vector, FreeWord, HandleDiagram};
use crate::matrix::{smith_normal_form, IntMatrix};

/// `∂₂`: one row per dot, one column per 2-handle, entries the exponent sums.
pub fn boundary_matrix(d: &HandleDiagram) -> IntMatrix {
    let mut m = IntMatrix::zeros(d.dots.len(), d.handles.len());
    for (j, handle) in d.handles.values().enumerate() {
        for (i, e) in exponent_vector(&handle.word, &d.dots).into_iter().enumerate() {
            m[(i, j)] = BigInt::from(e);
        }
    }
    m
}

/// Full symmetric linking matrix in handle-id order: framings on the diagonal.
pub fn linking_matrix(d: &HandleDiagram) -> IntMatrix {
    let ids = d.handle_ids();
    let n = ids.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = BigInt::from(d.pairing(&ids[i], &ids[j]));
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    /// Invariant factors of `H₁`, units dropped; `0` encodes a free summand.
    pub h1_invariant_factors: Vec<BigInt>,
    pub h2_rank: usize,
}

pub fn homology_summary(d: &HandleDiagram) -> Homology {
    let boundary = boundary_matrix(d);
    let snf = smith_normal_form(&boundary);
    let rank = snf.rank();
    let mut factors: Vec<BigInt> = snf
        .invariant_factors()
        .into_iter()
        .filter(|f| !f.is_one())
        .collect();
    factors.extend(std::iter::repeat_n(BigInt::zero(), d.dots.len() - rank));
    Homology {
        h1_invariant_factors: factors,
        h2_rank: (d.handles.len() - rank).saturating_sub(d.three_handles as usize),
    }
}

/// A `Z`-basis of `ker ∂₂`, as columns.
pub fn kernel_basis(d: &HandleDiagram) -> IntMatrix {
    let boundary = boundary_matrix(d);
    let snf = smith_normal_form(&boundary);
    snf.right.column_block(snf.rank(), d.handles.len())
}

/// The intersection form in the kernel basis: `Bᵀ · L · B`.
pub fn gram_matrix(d: &HandleDiagram) -> IntMatrix {
    let basis = kernel_basis(d);
    &(&basis.transpose() * &linking_matrix(d)) * &basis
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormData {
    pub rank: usize,
    pub signature: i64,
    pub parity: Parity,
    /// Nonzero invariant factors of the Gram matrix.
    pub torsion: Vec<BigInt>,
}

/// Result of congruence diagonalisation: `transformᵀ · A · transform = diag(diagonal)`.
#[derive(Clone, Debug)]
pub struct Congruence {
    pub diagonal: Vec<BigRational>,
    pub transform: Vec<Vec<BigRational>>,
}

impl Congruence {
    pub fn positive(&self) -> usize {
        self.diagonal.iter().filter(|x| x.is_positive()).count()
    }

    pub fn negative(&self) -> usize {
        self.diagonal.iter().filter(|x| x.is_negative()).count()
    }

    pub fn signature(&self) -> i64 {
        self.positive() as i64 - self.negative() as i64
    }

    pub fn rank(&self) -> usize {
        self.positive() + self.negative()
    }
}

/// Diagonalises a symmetric integer matrix by rational congruence.
///
/// Pivots on a nonzero diagonal entry when there is one; otherwise a nonzero
/// off-diagonal `a_ij` is folded into the diagonal by `e_i ↦ e_i + e_j`, which
/// leaves `2·a_ij` there.
pub fn diagonalize_congruent(m: &IntMatrix) -> Congruence {
    assert_eq!(m.rows(), m.cols(), "form must be square");
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(m[(i, j)].clone())).collect())
        .collect();
    // columns of `p` are the new basis vectors
    let mut p: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();

    fn add_basis(a: &mut [Vec<BigRational>], p: &mut [Vec<BigRational>], dst: usize, src: usize, c: &BigRational) {
        // e_dst += c·e_src : column op then row op
        for row in a.iter_mut() {
            let v = &row[src] * c;
            row[dst] += v;
        }
        let source = a[src].clone();
        for (j, x) in source.iter().enumerate() {
            a[dst][j] += x * c;
        }
        for row in p.iter_mut() {
            let v = &row[src] * c;
            row[dst] += v;
        }
    }

    fn swap_basis(a: &mut [Vec<BigRational>], p: &mut [Vec<BigRational>], x: usize, y: usize) {
        if x == y {
            return;
        }
        a.swap(x, y);
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in p.iter_mut() {
            row.swap(x, y);
        }
    }

    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap_basis(&mut a, &mut p, k, i);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
            {
                add_basis(&mut a, &mut p, i, j, &BigRational::one());
                swap_basis(&mut a, &mut p, k, i);
            } else {
                break;
            }
        }
        let pivot = a[k][k].clone();
        for j in k + 1..n {
            if a[j][k].is_zero() {
                continue;
            }
            let c = -(&a[j][k] / &pivot);
            add_basis(&mut a, &mut p, j, k, &c);
        }
    }
    Congruence {
        diagonal: (0..n).map(|i| a[i][i].clone()).collect(),
        transform: p,
    }
}

pub fn signature(m: &IntMatrix) -> i64 {
    diagonalize_congruent(m).signature()
}

pub fn form_data(gram: &IntMatrix) -> FormData {
    let congruence = diagonalize_congruent(gram);
    let parity = if (0..gram.rows()).any(|i| gram[(i, i)].is_odd()) {
        Parity::Odd
    } else {
        Parity::Even
    };
    FormData {
        rank: congruence.rank(),
        signature: congruence.signature(),
        parity,
        torsion: smith_normal_form(gram).invariant_factors(),
    }
}

pub fn intersection_form(d: &HandleDiagram) -> FormData {
    form_data(&gram_matrix(d))
}

/// True iff some class of the 2-skeleton has odd square.
pub fn has_odd_square_class(d: &HandleDiagram) -> bool {
    intersection_form(d).parity == Parity::Odd
}

/// True iff the word is trivial in the free group.
pub fn is_free_trivial(w: &FreeWord) -> bool {
    w.is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSummary {
    pub h1_invariant_factors: Vec<BigInt>,
    pub h2_rank: usize,
    pub form_rank: usize,
    pub signature: i64,
    pub parity: Parity,
    pub gram_torsion: Vec<BigInt>,
    pub three_handle_flag: bool,
}

impl InvariantSummary {
    pub fn of(d: &HandleDiagram) -> Self {
        let homology = homology_summary(d);
        let form = intersection_form(d);
        InvariantSummary {
            h1_invariant_factors: homology.h1_invariant_factors,
            h2_rank: homology.h2_rank,
            form_rank: form.rank,
            signature: form.signature,
            parity: form.parity,
            gram_torsion: form.torsion,
            three_handle_flag: d.three_handles > 0,
        }
    }

    /// Equality of the manifold invariants, ignoring the 3-handle flag.
    pub fn same_invariants(&self, other: &InvariantSummary) -> bool {
        self.h1_invariant_factors == other.h1_invariant_factors
            && self.h2_rank == other.h2_rank
            && self.form_data() == other.form_data()
    }

    pub fn form_data(&self) -> FormData {
        FormData {
            rank: self.form_rank,
            signature: self.signature,
            parity: self.parity,
            torsion: self.gram_torsion.clone(),
        }
    }
}

fn list(v: &[BigInt]) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(", "))
}

impl fmt::Display for InvariantSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "h1_invariant_factors: {}", list(&self.h1_invariant_factors))?;
        writeln!(f, "h2_rank: {}", self.h2_rank)?;
        writeln!(f, "form_rank: {}", self.form_rank)?;
        writeln!(f, "signature: {}", self.signature)?;
        writeln!(f, "parity: {}", self.parity)?;
        writeln!(f, "gram_torsion: {}", list(&self.gram_torsion))?;
        writeln!(f, "three_handles: {}", self.three_handle_flag)
    }
}

/// Small helper for tests and callers that know the values fit.
pub fn to_i64s(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("value fits in i64")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn boundary_examples() {
        let m = boundary_matrix(&corpus::s2_x_s2());
        assert_eq!((m.rows(), m.cols()), (0, 2));
        let d = HandleDiagram::new().with_dot("g").with_handle("K", FreeWord::generator("g"), 0);
        assert_eq!(boundary_matrix(&d), IntMatrix::from_rows(&[vec![1]]));
        let d = HandleDiagram::new()
            .with_dot("a")
            .with_dot("b")
            .with_handle("h", FreeWord::from_powers([("a", 1), ("b", 1), ("a", -1)]), 0);
        assert_eq!(boundary_matrix(&d), IntMatrix::from_rows(&[vec![0], vec![1]]));
    }

    #[test]
    fn homology_examples() {
        let h = homology_summary(&corpus::s2_x_s2());
        assert_eq!(h, Homology { h1_invariant_factors: vec![], h2_rank: 2 });
        let h = homology_summary(&HandleDiagram::new().with_dot("g"));
        assert_eq!(h, Homology { h1_invariant_factors: ints(&[0]), h2_rank: 0 });
        let d = HandleDiagram::new().with_dot("g").with_handle("K", FreeWord::from_powers([("g", 2)]), 0);
        assert_eq!(homology_summary(&d), Homology { h1_invariant_factors: ints(&[2]), h2_rank: 0 });
    }

    #[test]
    fn form_examples() {
        let f = intersection_form(&corpus::s2_x_s2());
        assert_eq!(f, FormData { rank: 2, signature: 0, parity: Parity::Even, torsion: ints(&[1, 1]) });
        let f = intersection_form(&corpus::cp2_sharp_cp2bar());
        assert_eq!(f, FormData { rank: 2, signature: 0, parity: Parity::Odd, torsion: ints(&[1, 1]) });
        let one = HandleDiagram::new().with_handle("h", FreeWord::empty(), 1);
        let f = intersection_form(&one);
        assert_eq!((f.rank, f.signature, f.parity), (1, 1, Parity::Odd));
    }

    #[test]
    fn odd_class_examples() {
        assert!(!has_odd_square_class(&corpus::s2_x_s2()));
        assert!(has_odd_square_class(&corpus::cp2_sharp_cp2bar()));
        assert!(!has_odd_square_class(&HandleDiagram::new()));
    }

    #[test]
    fn free_triviality() {
        assert!(is_free_trivial(&FreeWord::empty()));
        assert!(!is_free_trivial(&FreeWord::from_powers([("a", 1), ("b", 1), ("a", -1), ("b", -1)])));
        assert!(is_free_trivial(&FreeWord::from_powers([("a", 1), ("a", -1)])));
    }

    #[test]
    fn kernel_restricts_the_form() {
        // handle h with word g is not a cycle; only K contributes
        let d = HandleDiagram::new()
            .with_dot("g")
            .with_handle("h", FreeWord::generator("g"), 3)
            .with_handle("K", FreeWord::empty(), -1)
            .with_link("h", "K", 5);
        let f = intersection_form(&d);
        assert_eq!((f.rank, f.signature, f.parity), (1, -1, Parity::Odd));
        assert_eq!(gram_matrix(&d), IntMatrix::from_rows(&[vec![-1]]));
    }

    #[test]
    fn signature_spot_checks() {
        assert_eq!(signature(&IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 2]])), 1);
        assert_eq!(signature(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])), 0);
        assert_eq!(signature(&IntMatrix::zeros(3, 3)), 0);
    }

    #[test]
    fn congruence_transform_reproduces_diagonal() {
        let m = IntMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![2, 3, 0]]);
        let c = diagonalize_congruent(&m);
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for k in 0..n {
                    for l in 0..n {
                        s += &c.transform[k][i] * BigRational::from_integer(m[(k, l)].clone()) * &c.transform[l][j];
                    }
                }
                let want = if i == j { c.diagonal[i].clone() } else { BigRational::zero() };
                assert_eq!(s, want);
            }
        }
    }

    #[test]
    fn summary_rendering() {
        let text = InvariantSummary::of(&HandleDiagram::new()).to_string();
        assert_eq!(
            text,
            "h1_invariant_factors: []\nh2_rank: 0\nform_rank: 0\nsignature: 0\nparity: even\ngram_torsion: []\nthree_handles: false\n"
        );
    }

    #[test]
    fn three_handles_reduce_h2() {
        let d = corpus::s2_x_s2()
            .with_handle("Z", FreeWord::empty(), 0)
            .with_three_handles(1);
        let s = InvariantSummary::of(&d);
        assert_eq!(s.h2_rank, 2);
        assert!(s.three_handle_flag);
        assert!(s.same_invariants(&InvariantSummary::of(&corpus::s2_x_s2())));
    }
}
