//! Canonical relabeling of diagrams.
//!
//! Dots and handles are vertices of a coloured structure (words, framings,
//! linking). Colours are refined to an equitable partition, then the search
//! individualises vertices of the first non-singleton cell and keeps the
//! lexicographically smallest leaf certificate. Automorphisms discovered at
//! equal leaves prune sibling branches in the same orbit.

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::diagram::{DiagramError, GeneratorId, HandleDiagram, HandleId};
use crate::lang::serialize_diagram;

/// Version header of canonical byte strings.
pub const CANONICAL_HEADER: &str = "KD1\n";

struct Structure {
    n_dots: usize,
    framings: Vec<i64>,
    /// Letters as (dot index, ±1).
    words: Vec<Vec<(usize, i64)>>,
    linking: Vec<Vec<i64>>,
    /// Per dot: (handle index, position, sign) of every occurrence.
    occurrences: Vec<Vec<(usize, usize, i64)>>,
    header: [i64; 2],
}

impl Structure {
    fn new(d: &HandleDiagram) -> Self {
        let dot_index: BTreeMap<&GeneratorId, usize> = d.dots.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let ids: Vec<&HandleId> = d.handles.keys().collect();
        let n_dots = d.dots.len();
        let words: Vec<Vec<(usize, i64)>> = d
            .handles
            .values()
            .map(|h| {
                h.word
                    .letters()
                    .iter()
                    .map(|l| (dot_index[&l.generator], l.sign.value()))
                    .collect()
            })
            .collect();
        let mut occurrences = vec![Vec::new(); n_dots];
        for (h, w) in words.iter().enumerate() {
            for (pos, &(g, s)) in w.iter().enumerate() {
                occurrences[g].push((h, pos, s));
            }
        }
        Structure {
            n_dots,
            framings: d.handles.values().map(|h| h.framing).collect(),
            linking: ids
                .iter()
                .map(|a| ids.iter().map(|b| if a == b { 0 } else { d.linking.get(a, b) }).collect())
                .collect(),
            words,
            occurrences,
            header: [i64::from(d.three_handles), i64::from(d.four_handles)],
        }
    }

    fn n(&self) -> usize {
        self.n_dots + self.framings.len()
    }

    fn initial_colors(&self) -> Vec<usize> {
        let keys: Vec<Vec<i64>> = (0..self.n())
            .map(|v| {
                if v < self.n_dots {
                    vec![0, self.occurrences[v].len() as i64]
                } else {
                    let h = v - self.n_dots;
                    vec![1, self.framings[h], self.words[h].len() as i64]
                }
            })
            .collect();
        rank_keys(&keys)
    }

    fn signature(&self, v: usize, colors: &[usize]) -> Vec<i64> {
        let mut sig = vec![colors[v] as i64];
        if v < self.n_dots {
            let mut occ: Vec<(i64, i64, i64)> = self.occurrences[v]
                .iter()
                .map(|&(h, pos, s)| (colors[self.n_dots + h] as i64, pos as i64, s))
                .collect();
            occ.sort_unstable();
            for (c, p, s) in occ {
                sig.extend([c, p, s]);
            }
        } else {
            let h = v - self.n_dots;
            for &(g, s) in &self.words[h] {
                sig.extend([colors[g] as i64, s]);
            }
            sig.push(i64::MIN);
            let mut row: Vec<(i64, i64)> = self.linking[h]
                .iter()
                .enumerate()
                .filter(|&(m, &x)| m != h && x != 0)
                .map(|(m, &x)| (colors[self.n_dots + m] as i64, x))
                .collect();
            row.sort_unstable();
            for (c, x) in row {
                sig.extend([c, x]);
            }
        }
        sig
    }

    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut count = distinct(&colors);
        loop {
            let sigs: Vec<Vec<i64>> = (0..self.n()).map(|v| self.signature(v, &colors)).collect();
            let next = rank_keys(&sigs);
            let next_count = distinct(&next);
            colors = next;
            if next_count == count {
                return colors;
            }
            count = next_count;
        }
    }

    /// Complete description of the structure under the labeling given by a
    /// discrete colouring.
    fn certificate(&self, colors: &[usize]) -> (Vec<i64>, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by_key(|&v| colors[v]);
        let mut position = vec![0; self.n()];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let handles: Vec<usize> = order[self.n_dots..].iter().map(|&v| v - self.n_dots).collect();
        let mut cert = vec![self.header[0], self.header[1], self.n_dots as i64, handles.len() as i64];
        for &h in &handles {
            cert.push(self.framings[h]);
            cert.push(self.words[h].len() as i64);
            for &(g, s) in &self.words[h] {
                cert.extend([position[g] as i64, s]);
            }
        }
        for (i, &a) in handles.iter().enumerate() {
            for &b in &handles[i + 1..] {
                cert.push(self.linking[a][b]);
            }
        }
        (cert, position)
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn rank_keys<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("present"))
        .collect()
}

struct Search<'a> {
    s: &'a Structure,
    best: Option<(Vec<i64>, Vec<usize>)>,
    first: Option<(Vec<i64>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, colors: Vec<usize>, prefix: &mut Vec<usize>) {
        let colors = self.s.refine(colors);
        let n = self.s.n();
        // first non-singleton cell by colour
        let mut cell_sizes = vec![0usize; n];
        for &c in &colors {
            cell_sizes[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| cell_sizes[c] > 1) else {
            self.leaf(&colors);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.in_explored_orbit(v, &explored, prefix) {
                continue;
            }
            explored.push(v);
            let keys: Vec<(usize, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
            prefix.push(v);
            self.run(rank_keys(&keys), prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, colors: &[usize]) {
        let (cert, position) = self.s.certificate(colors);
        let n = self.s.n();
        let automorphism = |other: &[usize]| {
            // vertex v ↦ vertex holding v's position in `other`
            let mut at = vec![0; n];
            for (v, &p) in other.iter().enumerate() {
                at[p] = v;
            }
            (0..n).map(|v| at[position[v]]).collect::<Vec<usize>>()
        };
        match &self.first {
            None => {
                self.first = Some((cert.clone(), position.clone()));
            }
            Some((c, p)) if *c == cert => {
                let a = automorphism(p);
                self.automorphisms.push(a);
            }
            _ => {}
        }
        match &self.best {
            Some((c, p)) if *c == cert => {
                let a = automorphism(p);
                self.automorphisms.push(a);
            }
            Some((c, _)) if *c < cert => {}
            _ => self.best = Some((cert, position)),
        }
    }

    /// Whether `v` lies in the orbit of an explored vertex under the
    /// automorphisms found so far that fix `prefix` pointwise.
    fn in_explored_orbit(&self, v: usize, explored: &[usize], prefix: &[usize]) -> bool {
        let n = self.s.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in &self.automorphisms {
            if prefix.iter().any(|&u| a[u] != u) {
                continue;
            }
            for (x, &ax) in a.iter().enumerate().take(n) {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, ax));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }
}

/// Canonical relabeling: dots become `g1, g2, …`, handles `h1, h2, …`, the
/// name becomes `X`.
pub fn canonical_diagram(d: &HandleDiagram) -> Result<HandleDiagram, DiagramError> {
    d.ensure_valid()?;
    let s = Structure::new(d);
    let mut search = Search {
        s: &s,
        best: None,
        first: None,
        automorphisms: Vec::new(),
    };
    search.run(s.initial_colors(), &mut Vec::new());
    let (_, position) = search.best.expect("search visits at least one leaf");

    let dot_map: BTreeMap<GeneratorId, GeneratorId> = d
        .dots
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), GeneratorId::new(format!("g{}", position[i] + 1))))
        .collect();
    let handle_map: BTreeMap<HandleId, HandleId> = d
        .handles
        .keys()
        .enumerate()
        .map(|(i, h)| {
            let p = position[s.n_dots + i] - s.n_dots;
            (h.clone(), HandleId::new(format!("h{}", p + 1)))
        })
        .collect();
    let mut out = d.relabel(&dot_map, &handle_map);
    out.name = "X".to_string();
    Ok(out)
}

/// Canonical byte string: `KD1\n` followed by the serialized canonical relabeling.
///
/// Two diagrams have equal canonical forms iff they differ only by renaming
/// dots and handles (and by their names).
pub fn canonical_form(d: &HandleDiagram) -> Result<Vec<u8>, DiagramError> {
    let c = canonical_diagram(d)?;
    let mut out = CANONICAL_HEADER.as_bytes().to_vec();
    out.extend(serialize_diagram(&c).into_bytes());
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalHash(pub [u8; 32]);

impl CanonicalHash {
    pub fn of_bytes(bytes: &[u8]) -> Self {
        CanonicalHash(Sha256::digest(bytes).into())
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// The 16-hex-digit prefix used in rendered logs.
    pub fn short(&self) -> String {
        hex::encode(&self.0[..8])
    }
}

impl fmt::Display for CanonicalHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.short())
    }
}

impl fmt::Debug for CanonicalHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalHash({})", self.short())
    }
}

pub fn canonical_hash(d: &HandleDiagram) -> Result<CanonicalHash, DiagramError> {
    Ok(CanonicalHash::of_bytes(&canonical_form(d)?))
}
