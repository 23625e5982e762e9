//! Slow, simple reference computations.

pub type Mat = Vec<Vec<i128>>;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by cofactor-free Bareiss elimination.
pub fn det(m: &Mat) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Nonzero invariant factors from determinantal divisors: `d_k` is the gcd
/// of all `k×k` minors and `s_k = d_k / d_{k-1}`.
pub fn invariant_factors(m: &Mat) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Mat = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                d = gcd(d, det(&minor));
                if d == 1 {
                    break;
                }
            }
            if d == 1 {
                break;
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

pub fn rank(m: &Mat) -> usize {
    invariant_factors(m).len()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let p = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| (0..p).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Coefficients `c_0..c_n` of `det(xI − A)`, lowest degree first
/// (Faddeev–LeVerrier; every division is exact over the integers).
pub fn characteristic_polynomial(a: &Mat) -> Vec<i128> {
    let n = a.len();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let identity: Mat = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut m: Mat = vec![vec![0; n]; n];
    for k in 1..=n {
        let prev = coeffs[n - k + 1];
        let am = mat_mul(a, &m);
        m = (0..n)
            .map(|i| (0..n).map(|j| am[i][j] + prev * identity[i][j]).collect())
            .collect();
        let am = mat_mul(a, &m);
        let trace: i128 = (0..n).map(|i| am[i][i]).sum();
        coeffs[n - k] = -trace / k as i128;
    }
    coeffs
}

fn sign_changes(coeffs: impl Iterator<Item = i128>) -> usize {
    let nonzero: Vec<i128> = coeffs.filter(|c| *c != 0).collect();
    nonzero.windows(2).filter(|w| (w[0] > 0) != (w[1] > 0)).count()
}

/// Signature of a symmetric matrix by Descartes' rule of signs, which is
/// exact for the real-rooted characteristic polynomial.
pub fn signature(a: &Mat) -> i64 {
    let p = characteristic_polynomial(a);
    let positive = sign_changes(p.iter().copied());
    let negative = sign_changes(p.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { *c }));
    positive as i64 - negative as i64
}

pub fn quadratic(a: &Mat, x: &[i128]) -> i128 {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| x[i] * a[i][j] * x[j]).sum::<i128>()).sum()
}

/// True if some vector with entries in `-2..=2` (rank ≤ 4) or `0..=1` has odd
/// square.
pub fn is_odd(a: &Mat) -> bool {
    let n = a.len();
    let values: Vec<i128> = if n <= 4 { (-2..=2).collect() } else { vec![0, 1] };
    let mut x = vec![values[0]; n];
    let mut idx = vec![0usize; n];
    loop {
        if quadratic(a, &x) % 2 != 0 {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            idx[i] += 1;
            if idx[i] < values.len() {
                x[i] = values[idx[i]];
                break;
            }
            idx[i] = 0;
            x[i] = values[0];
            i += 1;
        }
    }
}

pub fn e8() -> Mat {
    let mut m = vec![vec![0i128; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)] {
        m[a][b] = -1;
        m[b][a] = -1;
    }
    m
}
