//! Independent reference computations shared by the test suites.

use std::collections::BTreeSet;

use ndarray::{Array1, Array2};

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Every labeled graph on `n` nodes as an edge list.
pub fn all_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let p = pairs(n);
    (0..1u32 << p.len())
        .map(|mask| p.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect())
        .collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn canonical(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    permutations(n)
        .into_iter()
        .map(|perm| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap()
}

/// Coefficients of det(xI - L), lowest degree first, by Faddeev-LeVerrier
/// in exact integer arithmetic.
pub fn char_poly(n: usize, edges: &[(usize, usize)]) -> Vec<i64> {
    let mut l = vec![vec![0i64; n]; n];
    for &(u, v) in edges {
        l[u][v] -= 1;
        l[v][u] -= 1;
        l[u][u] += 1;
        l[v][v] += 1;
    }
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    };
    let mut c = vec![0i64; n + 1];
    c[n] = 1;
    let mut m = vec![vec![0i64; n]; n];
    for k in 1..=n {
        let mut next = mul(&l, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        m = next;
        let lm = mul(&l, &m);
        let trace: i64 = (0..n).map(|i| lm[i][i]).sum();
        assert_eq!(trace % k as i64, 0);
        c[n - k] = -trace / k as i64;
    }
    c
}

pub fn eval(poly: &[i64], x: i64) -> i64 {
    poly.iter().rev().fold(0, |acc, &c| acc * x + c)
}

/// Divides out the root `r` (synthetic division).
pub fn deflate(poly: &[i64], r: i64) -> Vec<i64> {
    let deg = poly.len() - 1;
    let mut q = vec![0i64; deg];
    let mut carry = 0;
    for i in (0..deg).rev() {
        carry = poly[i + 1] + carry * r;
        q[i] = carry;
    }
    q
}

/// Roots of an integer polynomial whose roots are real and lie in [0, n]:
/// integer roots are divided out, the rest must be at most quadratic.
pub fn roots(mut poly: Vec<i64>, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for r in 0..=n as i64 {
        while poly.len() > 1 && eval(&poly, r) == 0 {
            poly = deflate(&poly, r);
            out.push(r as f64);
        }
    }
    match poly.len() - 1 {
        0 => {}
        1 => out.push(-poly[0] as f64 / poly[1] as f64),
        2 => {
            let (a, b, c) = (poly[2] as f64, poly[1] as f64, poly[0] as f64);
            let disc = b * b - 4.0 * a * c;
            assert!(disc >= 0.0, "complex roots for a symmetric matrix");
            out.push((-b + disc.sqrt()) / (2.0 * a));
            out.push((-b - disc.sqrt()) / (2.0 * a));
        }
        d => panic!("irreducible factor of degree {d} left: {poly:?}"),
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Brute-force NT-XENT straight from the definition, without log-sum-exp.
pub fn nt_xent_oracle(a: &Array2<f64>, b: &Array2<f64>, tau: f64) -> f64 {
    let n = a.nrows();
    let rows: Vec<Vec<f64>> = a.rows().into_iter().chain(b.rows()).map(|r| r.to_vec()).collect();
    let cos = |x: &[f64], y: &[f64]| {
        let d: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
        let nx = x.iter().map(|p| p * p).sum::<f64>().sqrt();
        let ny = y.iter().map(|p| p * p).sum::<f64>().sqrt();
        d / (nx * ny)
    };
    let mut total = 0.0;
    for i in 0..2 * n {
        let j = (i + n) % (2 * n);
        let denom: f64 = (0..2 * n).filter(|&k| k != i).map(|k| (cos(&rows[i], &rows[k]) / tau).exp()).sum();
        total += -((cos(&rows[i], &rows[j]) / tau).exp() / denom).ln();
    }
    total / (2 * n) as f64
}

/// Jacobi spectra of every labeled graph on 1..=4 nodes checked against the
/// roots of the exact characteristic polynomial. Returns how many graphs were
/// checked and how many isomorphism classes appear on 4 nodes.
pub fn check_small_spectra(
    spectrum: impl Fn(usize, &[(usize, usize)]) -> Vec<f64>,
    tol: f64,
) -> Result<(usize, usize), String> {
    let mut classes = BTreeSet::new();
    let mut checked = 0;
    for n in 1..=4 {
        for edges in all_graphs(n) {
            let expected = roots(char_poly(n, &edges), n);
            let got = spectrum(n, &edges);
            if got.len() != n || got.iter().zip(&expected).any(|(a, b)| (a - b).abs() >= tol) {
                return Err(format!("n={n} edges={edges:?}: {got:?} vs {expected:?}"));
            }
            if n == 4 {
                classes.insert(canonical(n, &edges));
            }
            checked += 1;
        }
    }
    Ok((checked, classes.len()))
}

/// The five-point probe fixture: features, labels, weights, bias.
pub fn probe_fixture() -> (Array2<f64>, Vec<usize>, Array2<f64>, Array1<f64>) {
    let x = ndarray::array![[0.3, -1.1, 0.4], [1.2, 0.2, -0.5], [-0.8, 0.9, 0.1], [0.05, -0.3, 1.4], [-1.0, 0.6, -0.9]];
    let w = Array2::from_shape_fn((3, 3), |(i, j)| 0.1 * (i as f64 - j as f64) + 0.05);
    (x, vec![0, 2, 1, 1, 0], w, Array1::from(vec![0.02, -0.01, 0.03]))
}

/// Worst relative error between an analytic gradient and central differences
/// of `loss` in every weight and bias entry.
pub fn gradient_error(
    loss: impl Fn(&Array2<f64>, &Array1<f64>) -> f64,
    w: &Array2<f64>,
    b: &Array1<f64>,
    gw: &Array2<f64>,
    gb: &Array1<f64>,
    h: f64,
) -> f64 {
    let mut worst: f64 = 0.0;
    for ((i, j), &g) in gw.indexed_iter() {
        let (mut p, mut m) = (w.clone(), w.clone());
        p[[i, j]] += h;
        m[[i, j]] -= h;
        let fd = (loss(&p, b) - loss(&m, b)) / (2.0 * h);
        worst = worst.max((fd - g).abs() / g.abs().max(1e-8));
    }
    for (i, &g) in gb.iter().enumerate() {
        let (mut p, mut m) = (b.clone(), b.clone());
        p[i] += h;
        m[i] -= h;
        let fd = (loss(w, &p) - loss(w, &m)) / (2.0 * h);
        worst = worst.max((fd - g).abs() / g.abs().max(1e-8));
    }
    worst
}
