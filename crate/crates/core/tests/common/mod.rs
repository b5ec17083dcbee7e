//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use randgroups::words::{alphabet, Letter, Word};

// ---------- exact rational polynomials ----------

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Q {
    num: i128,
    den: i128,
}

impl Q {
    pub fn new(num: i128, den: i128) -> Q {
        assert!(den != 0);
        let g = gcd_i128(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Q {
            num: s * num / g,
            den: s * den / g,
        }
    }
    pub fn int(x: i128) -> Q {
        Q::new(x, 1)
    }
    pub fn zero() -> Q {
        Q::int(0)
    }
    pub fn is_zero(self) -> bool {
        self.num == 0
    }
    fn add(self, o: Q) -> Q {
        let g = gcd_i128(self.den, o.den);
        let (a, b) = (self.den / g, o.den / g);
        Q::new(self.num * b + o.num * a, self.den * b)
    }
    fn sub(self, o: Q) -> Q {
        self.add(Q {
            num: -o.num,
            den: o.den,
        })
    }
    fn mul(self, o: Q) -> Q {
        let g1 = gcd_i128(self.num, o.den).max(1);
        let g2 = gcd_i128(o.num, self.den).max(1);
        Q::new(
            (self.num / g1) * (o.num / g2),
            (self.den / g2) * (o.den / g1),
        )
    }
    fn div(self, o: Q) -> Q {
        assert!(o.num != 0);
        self.mul(Q::new(o.den, o.num))
    }
    fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Coefficients, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    fn trim(mut self) -> Poly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }
    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn lead(&self) -> Q {
        *self.0.last().unwrap()
    }
    fn monic(&self) -> Poly {
        let l = self.lead();
        Poly(self.0.iter().map(|c| c.div(l)).collect())
    }
    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).copied().unwrap_or(Q::zero());
                    let b = o.0.get(i).copied().unwrap_or(Q::zero());
                    a.add(b)
                })
                .collect(),
        )
        .trim()
    }
    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| Q::zero().sub(*c)).collect())
    }
    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(a.mul(*b));
            }
        }
        Poly(out).trim()
    }
    fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(Q::int(i as i128)))
                .collect(),
        )
        .trim()
    }
    fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let mut r = self.clone();
        let mut q = vec![Q::zero(); self.0.len().max(1)];
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let c = r.lead().div(d.lead());
            q[shift] = c;
            let mut t = vec![Q::zero(); shift];
            t.extend(d.0.iter().map(|x| x.mul(c)));
            r = r.add(&Poly(t).neg());
        }
        (Poly(q).trim(), r)
    }
    fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.monic() };
        }
        a.monic()
    }
    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }
}

/// `det(xI - A)` by expansion over all permutations.
pub fn char_poly(a: &[Vec<i64>]) -> Poly {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Poly(vec![]);
    permute(&mut perm, 0, &mut |p| {
        let sign = permutation_sign(p);
        let mut term = Poly(vec![Q::int(sign)]);
        for (i, &j) in p.iter().enumerate() {
            let entry = if i == j {
                Poly(vec![Q::int(-a[i][j] as i128), Q::int(1)]).trim()
            } else {
                Poly(vec![Q::int(-a[i][j] as i128)]).trim()
            };
            term = term.mul(&entry);
        }
        total = total.add(&term);
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn permutation_sign(p: &[usize]) -> i128 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Yun's square-free factorization: `(factor, multiplicity)` pairs.
fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let f = f.monic();
    let fp = f.derivative();
    if fp.is_zero() {
        return vec![];
    }
    let a0 = f.gcd(&fp);
    let mut b = f.divrem(&a0).0;
    let c = fp.divrem(&a0).0;
    let mut d = c.add(&b.derivative().neg());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        let nb = b.divrem(&a).0;
        let c = d.divrem(&a).0;
        d = c.add(&nb.derivative().neg());
        if a.degree() > 0 {
            out.push((a, i));
        }
        b = nb;
        i += 1;
    }
    out
}

/// Roots of a real-rooted polynomial with simple roots, by bisection
/// between the roots of its derivative.
fn simple_real_roots(p: &Poly) -> Vec<f64> {
    let deg = p.degree();
    if deg == 0 {
        return vec![];
    }
    let bound = 1.0
        + p.0
            .iter()
            .map(|c| c.div(p.lead()).to_f64().abs())
            .fold(0.0, f64::max);
    let mut pts = vec![-bound];
    pts.extend(simple_real_roots(&p.derivative()));
    pts.push(bound);
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (p.eval(lo), p.eval(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p.eval(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

/// Eigenvalues of a small symmetric integer matrix, ascending.
pub fn oracle_eigenvalues(a: &[Vec<i64>]) -> Vec<f64> {
    let mut out = Vec::new();
    for (factor, mult) in squarefree(&char_poly(a)) {
        let roots = simple_real_roots(&factor);
        assert_eq!(roots.len(), factor.degree(), "factor must be real-rooted");
        for r in roots {
            out.extend(std::iter::repeat_n(r, mult));
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

// ---------- matchings ----------

/// Whether some `n` of `edges` form a perfect matching, by trying every
/// `n`-subset.
pub fn brute_force_has_perfect_matching(n: usize, edges: &[[usize; 3]]) -> bool {
    fn rec(n: usize, edges: &[[usize; 3]], start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == n {
            let mut used = vec![[false; 3]; n];
            for &i in chosen.iter() {
                for k in 0..3 {
                    if used[edges[i][k]][k] {
                        return false;
                    }
                    used[edges[i][k]][k] = true;
                }
            }
            return true;
        }
        for i in start..edges.len() {
            chosen.push(i);
            if rec(n, edges, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(n, edges, 0, &mut Vec::new())
}

// ---------- words ----------

/// Every letter tuple of length `k`.
pub fn all_tuples(m: usize, k: usize) -> Vec<Vec<Letter>> {
    let letters = alphabet(m);
    let mut out: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut x = w.clone();
                    x.push(l);
                    x
                })
            })
            .collect();
    }
    out
}

pub fn naive_reduced(w: &[Letter]) -> bool {
    w.windows(2).all(|p| p[1] != p[0].inverse())
}

pub fn naive_cyclically_reduced(w: &[Letter]) -> bool {
    naive_reduced(w) && (w.len() < 2 || w[0] != w[w.len() - 1].inverse())
}

/// Free reduction by repeated deletion of adjacent inverse pairs.
pub fn naive_free_reduce(w: &Word) -> Word {
    let mut v = w.letters().to_vec();
    loop {
        let pos = v.windows(2).position(|p| p[1] == p[0].inverse());
        match pos {
            Some(i) => {
                v.drain(i..i + 2);
            }
            None => return Word::new(v),
        }
    }
}

// ---------- permutations ----------

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permute(&mut p, 0, &mut |q| out.push(q.to_vec()));
    out
}
