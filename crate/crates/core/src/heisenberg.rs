//! Finite Heisenberg groups `H̃[m]`, extensions of `(ℤ/m)^{2g}` by `μ_m`, and
//! their Schrödinger representations.
//!
//! Cocycle convention: `(t, x, y)(t', x', y') = (t + t' + ⟨x, y'⟩, x + x', y + y')`
//! with the one-sided pairing `⟨x, y'⟩ = Σ x_i y'_i`. Any non-degenerate
//! choice gives an isomorphic group; nothing below depends on it beyond the
//! explicit matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::exactnum::CycNum;
use crate::{Error, Rational, Result};

/// Largest group order the brute-force routines accept.
pub const CENSUS_BUDGET: u64 = 100_000;

/// `dim S_{m,n} = m^g`.
pub fn schrodinger_dim(m: u64, g: u32) -> u64 {
    m.pow(g)
}

fn require_odd(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    if m % 2 == 0 {
        return Err(Error::hypothesis(
            "m must be odd (even m needs a different central extension)",
        ));
    }
    Ok(())
}

/// An element `(t, x, y)` of `H̃[m]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisenbergElement {
    pub m: u64,
    pub t: u64,
    pub x: Vec<u64>,
    pub y: Vec<u64>,
}

fn dot(a: &[u64], b: &[u64], m: u64) -> u64 {
    a.iter().zip(b).map(|(&u, &v)| u * v % m).sum::<u64>() % m
}

impl HeisenbergElement {
    pub fn new(m: u64, t: u64, x: Vec<u64>, y: Vec<u64>) -> Result<Self> {
        if m == 0 || x.len() != y.len() || x.is_empty() {
            return Err(Error::invalid("need m ≥ 1 and x, y of equal length g ≥ 1"));
        }
        if t >= m || x.iter().chain(&y).any(|&c| c >= m) {
            return Err(Error::invalid(format!("coordinates must be reduced mod {m}")));
        }
        Ok(HeisenbergElement { m, t, x, y })
    }

    pub fn identity(m: u64, g: u32) -> Self {
        HeisenbergElement {
            m,
            t: 0,
            x: vec![0; g as usize],
            y: vec![0; g as usize],
        }
    }

    pub fn genus(&self) -> u32 {
        self.x.len() as u32
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.m;
        HeisenbergElement {
            m,
            t: (self.t + o.t + dot(&self.x, &o.y, m)) % m,
            x: self.x.iter().zip(&o.x).map(|(a, b)| (a + b) % m).collect(),
            y: self.y.iter().zip(&o.y).map(|(a, b)| (a + b) % m).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let m = self.m;
        let neg = |v: &[u64]| v.iter().map(|&c| (m - c) % m).collect::<Vec<_>>();
        // (t, x, y)^{-1} = (-t + ⟨x, y⟩, -x, -y)
        HeisenbergElement {
            m,
            t: (m - self.t + dot(&self.x, &self.y, m)) % m,
            x: neg(&self.x),
            y: neg(&self.y),
        }
    }

    pub fn is_central(&self) -> bool {
        self.x.iter().chain(&self.y).all(|&c| c == 0)
    }

    /// Mixed-radix index in `[0, m^{2g+1})`: `t` first, then `x`, then `y`.
    pub fn index(&self) -> usize {
        let m = self.m as usize;
        let mut idx = 0;
        for &c in self.y.iter().rev().chain(self.x.iter().rev()) {
            idx = idx * m + c as usize;
        }
        idx * m + self.t as usize
    }

    pub fn from_index(m: u64, g: u32, mut idx: usize) -> Self {
        let mu = m as usize;
        let t = (idx % mu) as u64;
        idx /= mu;
        let mut digits = Vec::with_capacity(2 * g as usize);
        for _ in 0..2 * g {
            digits.push((idx % mu) as u64);
            idx /= mu;
        }
        let y = digits.split_off(g as usize);
        HeisenbergElement { m, t, x: digits, y }
    }
}

/// All elements of `H̃[m]` in index order.
pub fn elements(m: u64, g: u32) -> Vec<HeisenbergElement> {
    let order = m.pow(2 * g + 1) as usize;
    (0..order)
        .map(|i| HeisenbergElement::from_index(m, g, i))
        .collect()
}

/// Generators `(1,0,0)`, `(0,e_i,0)`, `(0,0,e_i)`.
pub fn generators(m: u64, g: u32) -> Vec<HeisenbergElement> {
    let mut out = Vec::new();
    let id = HeisenbergElement::identity(m, g);
    if m > 1 {
        out.push(HeisenbergElement { t: 1, ..id.clone() });
        for i in 0..g as usize {
            let mut e = id.clone();
            e.x[i] = 1;
            out.push(e);
            let mut e = id.clone();
            e.y[i] = 1;
            out.push(e);
        }
    }
    out
}

/// A matrix with one nonzero entry `ζ_m^{e}` per row, stored as `(column, e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub m: u64,
    pub rows: Vec<(usize, u64)>,
}

impl MonomialMatrix {
    pub fn mul(&self, o: &Self) -> Self {
        MonomialMatrix {
            m: self.m,
            rows: self
                .rows
                .iter()
                .map(|&(c, e)| {
                    let (c2, e2) = o.rows[c];
                    (c2, (e + e2) % self.m)
                })
                .collect(),
        }
    }

    /// Trace as a histogram of exponents of `ζ_m`.
    pub fn trace_histogram(&self) -> Vec<i64> {
        let mut hist = vec![0i64; self.m as usize];
        for (i, &(c, e)) in self.rows.iter().enumerate() {
            if c == i {
                hist[e as usize] += 1;
            }
        }
        hist
    }

    /// Entry `(row, col)` as an element of `ℚ(ζ_m)`.
    pub fn entry(&self, row: usize, col: usize) -> CycNum {
        match self.rows[row] {
            (c, e) if c == col => CycNum::root_power(self.m, e as i64),
            _ => CycNum::zero(self.m),
        }
    }
}

/// The Schrödinger representation of `H̃[m]` with central weight `n`, on
/// functions `(ℤ/m)^g → ℚ(ζ_m)`:
/// `(ρ(t, x, y) f)(z) = ζ_m^{n(t + ⟨y, z⟩)} f(z + x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchrodingerRep {
    m: u64,
    n: u64,
    g: u32,
}

fn point_index(z: &[u64], m: u64) -> usize {
    z.iter().rev().fold(0, |acc, &c| acc * m as usize + c as usize)
}

fn point_of(mut idx: usize, m: u64, g: u32) -> Vec<u64> {
    (0..g)
        .map(|_| {
            let c = (idx % m as usize) as u64;
            idx /= m as usize;
            c
        })
        .collect()
}

impl SchrodingerRep {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn central_weight(&self) -> u64 {
        self.n
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn dim(&self) -> u64 {
        schrodinger_dim(self.m, self.g)
    }

    pub fn matrix(&self, h: &HeisenbergElement) -> MonomialMatrix {
        let (m, n) = (self.m, self.n);
        let rows = (0..self.dim() as usize)
            .map(|i| {
                let z = point_of(i, m, self.g);
                let shifted: Vec<u64> = z.iter().zip(&h.x).map(|(a, b)| (a + b) % m).collect();
                let e = n * ((h.t + dot(&h.y, &z, m)) % m) % m;
                (point_index(&shifted, m), e)
            })
            .collect();
        MonomialMatrix { m, rows }
    }

    /// `χ(h)` as a histogram of exponents of `ζ_m`.
    pub fn character_histogram(&self, h: &HeisenbergElement) -> Vec<i64> {
        self.matrix(h).trace_histogram()
    }

    pub fn character(&self, h: &HeisenbergElement) -> CycNum {
        CycNum::from_root_histogram(self.m, &self.character_histogram(h))
    }
}

/// Builds `S_{m,n}` and checks `ρ(ab) = ρ(a)ρ(b)` on all pairs of generators.
pub fn schrodinger_rep(m: u64, n: u64, g: u32) -> Result<SchrodingerRep> {
    require_odd(m)?;
    if g == 0 {
        return Err(Error::invalid("genus must be at least 1"));
    }
    if m.gcd(&n) != 1 {
        return Err(Error::hypothesis(format!(
            "gcd(m, n) must be 1: central weight {n} does not have full order mod {m}"
        )));
    }
    let rep = SchrodingerRep { m, n: n % m, g };
    let gens = generators(m, g);
    for a in &gens {
        for b in &gens {
            if rep.matrix(&a.mul(b)) != rep.matrix(a).mul(&rep.matrix(b)) {
                return Err(Error::identity(
                    "ρ(ab) = ρ(a)ρ(b)",
                    format!("fails for {a:?}, {b:?}"),
                ));
            }
        }
    }
    Ok(rep)
}

/// `Σ_e Σ_f h_e h_f ζ^{e-f}`, the histogram of `|χ|²`.
fn norm_histogram(hist: &[i64], m: usize, weight: i64, acc: &mut [i64]) {
    for (e, &a) in hist.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (f, &b) in hist.iter().enumerate() {
            if b != 0 {
                acc[(e + m - f) % m] += weight * a * b;
            }
        }
    }
}

/// `⟨χ, χ⟩ = 1/|G| Σ_h |χ(h)|²`, exactly, together with whether the
/// character vanishes off the center.
pub fn schrodinger_norm(rep: &SchrodingerRep) -> Result<(Rational, bool)> {
    let (m, g) = (rep.m, rep.g);
    let order = m.pow(2 * g + 1);
    if order > CENSUS_BUDGET {
        return Err(Error::BudgetExceeded {
            estimate: order as u128,
            budget: CENSUS_BUDGET as u128,
        });
    }
    let (acc, off_center_zero) = (0..order as usize)
        .into_par_iter()
        .map(|i| {
            let h = HeisenbergElement::from_index(m, g, i);
            let hist = rep.character_histogram(&h);
            let mut acc = vec![0i64; m as usize];
            norm_histogram(&hist, m as usize, 1, &mut acc);
            let zero = h.is_central() || CycNum::from_root_histogram(m, &hist).is_zero();
            (acc, zero)
        })
        .reduce(
            || (vec![0i64; m as usize], true),
            |(mut a, za), (b, zb)| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                (a, za && zb)
            },
        );
    let total = CycNum::from_root_histogram(m, &acc).extract_rational()?;
    Ok((total / Rational::from_integer(BigInt::from(order)), off_center_zero))
}

/// Exact character norm equals 1 and the character vanishes off the center.
pub fn check_schrodinger_irreducible(rep: &SchrodingerRep) -> Result<bool> {
    let (norm, vanishes) = schrodinger_norm(rep)?;
    Ok(norm == Rational::from_integer(1.into()) && vanishes)
}

/// One row of the census: `multiplicity` irreducibles of this dimension
/// on which the center `(t, 0, 0)` acts by `ζ_m^{central_weight · t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub dimension: u64,
    pub central_weight: u64,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub m: u64,
    pub g: u32,
    pub order: u64,
    pub classes: usize,
    pub entries: Vec<CensusEntry>,
    pub sum_of_squares: u64,
}

/// Conjugacy classes by orbit search under conjugation by the generators.
/// Returns the class id of every element and the class sizes.
pub fn conjugacy_classes(m: u64, g: u32) -> (Vec<usize>, Vec<usize>) {
    let elems = elements(m, g);
    let gens = generators(m, g);
    let gens_inv: Vec<_> = gens.iter().map(|x| x.inverse()).collect();
    let mut class = vec![usize::MAX; elems.len()];
    let mut sizes = Vec::new();
    for start in 0..elems.len() {
        if class[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut stack = vec![start];
        class[start] = id;
        let mut size = 0;
        while let Some(i) = stack.pop() {
            size += 1;
            for (a, ainv) in gens.iter().zip(&gens_inv) {
                let j = a.mul(&elems[i]).mul(ainv).index();
                if class[j] == usize::MAX {
                    class[j] = id;
                    stack.push(j);
                }
            }
        }
        sizes.push(size);
    }
    (class, sizes)
}

enum Candidate {
    Linear { a: Vec<u64>, b: Vec<u64> },
    Schrodinger(SchrodingerRep),
}

impl Candidate {
    fn dim(&self) -> u64 {
        match self {
            Candidate::Linear { .. } => 1,
            Candidate::Schrodinger(rep) => rep.dim(),
        }
    }

    fn histogram(&self, h: &HeisenbergElement) -> Vec<i64> {
        match self {
            Candidate::Linear { a, b } => {
                let m = h.m;
                let mut hist = vec![0i64; m as usize];
                hist[((dot(a, &h.x, m) + dot(b, &h.y, m)) % m) as usize] = 1;
                hist
            }
            Candidate::Schrodinger(rep) => rep.character_histogram(h),
        }
    }
}

/// Brute-force irreducible census of `H̃[m]`.
///
/// Candidates are the `m^{2g}` characters trivial on the center and one
/// Schrödinger representation per unit `n mod m`. Each candidate is checked
/// to have character norm 1, the candidates are checked to be pairwise
/// distinct on conjugacy classes, their number to equal the number of
/// classes, and their squared dimensions to sum to `|G|`. Any failure is an
/// identity error.
pub fn irrep_census(m: u64, g: u32) -> Result<Census> {
    require_odd(m)?;
    if g == 0 {
        return Err(Error::invalid("genus must be at least 1"));
    }
    let order = m
        .checked_pow(2 * g + 1)
        .filter(|&o| o <= CENSUS_BUDGET)
        .ok_or(Error::BudgetExceeded {
            estimate: (m as u128).saturating_pow(2 * g + 1),
            budget: CENSUS_BUDGET as u128,
        })?;
    let (class, sizes) = conjugacy_classes(m, g);
    let mut reps = vec![0usize; sizes.len()];
    for (i, &c) in class.iter().enumerate().rev() {
        reps[c] = i;
    }
    let rep_elems: Vec<HeisenbergElement> = reps
        .iter()
        .map(|&i| HeisenbergElement::from_index(m, g, i))
        .collect();

    let mut candidates = Vec::new();
    for i in 0..m.pow(2 * g) as usize {
        let p = point_of(i, m, 2 * g);
        let (a, b) = p.split_at(g as usize);
        candidates.push(Candidate::Linear {
            a: a.to_vec(),
            b: b.to_vec(),
        });
    }
    if m > 1 {
        for n in 1..m {
            if n.gcd(&m) == 1 {
                candidates.push(Candidate::Schrodinger(schrodinger_rep(m, n, g)?));
            }
        }
    }

    let center = HeisenbergElement {
        t: 1 % m,
        ..HeisenbergElement::identity(m, g)
    };
    let tables: Vec<(Vec<CycNum>, Rational, u64)> = candidates
        .par_iter()
        .map(|cand| {
            let mut acc = vec![0i64; m as usize];
            let values: Vec<CycNum> = rep_elems
                .iter()
                .zip(&sizes)
                .map(|(h, &size)| {
                    let hist = cand.histogram(h);
                    norm_histogram(&hist, m as usize, size as i64, &mut acc);
                    CycNum::from_root_histogram(m, &hist)
                })
                .collect();
            let norm = CycNum::from_root_histogram(m, &acc)
                .extract_rational()
                .map(|v| v / Rational::from_integer(BigInt::from(order)));
            let weight = central_weight(cand, &center, m);
            (values, norm, weight)
        })
        .map(|(values, norm, weight)| norm.map(|n| (values, n, weight)))
        .collect::<Result<_>>()?;

    let one = Rational::from_integer(1.into());
    for (i, (_, norm, _)) in tables.iter().enumerate() {
        if *norm != one {
            return Err(Error::identity(
                "⟨χ, χ⟩ = 1 for an irreducible character",
                format!("candidate {i} has norm {norm}"),
            ));
        }
    }
    for i in 0..tables.len() {
        for j in 0..i {
            if tables[i].0 == tables[j].0 {
                return Err(Error::identity(
                    "irreducible characters are distinct",
                    format!("candidates {j} and {i} coincide"),
                ));
            }
        }
    }
    if candidates.len() != sizes.len() {
        return Err(Error::identity(
            "number of irreducibles = number of conjugacy classes",
            format!("{} candidates, {} classes", candidates.len(), sizes.len()),
        ));
    }
    let sum_of_squares: u64 = candidates.iter().map(|c| c.dim() * c.dim()).sum();
    if sum_of_squares != order {
        return Err(Error::identity(
            "Σ dim² = |G|",
            format!("{sum_of_squares} vs {order}"),
        ));
    }

    let mut grouped: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for (cand, (_, _, w)) in candidates.iter().zip(&tables) {
        *grouped.entry((cand.dim(), *w)).or_default() += 1;
    }
    Ok(Census {
        m,
        g,
        order,
        classes: sizes.len(),
        entries: grouped
            .into_iter()
            .map(|((dimension, central_weight), multiplicity)| CensusEntry {
                dimension,
                central_weight,
                multiplicity,
            })
            .collect(),
        sum_of_squares,
    })
}

/// The `w` with `χ((1, 0, 0)) = dim · ζ_m^w`, read off the character.
fn central_weight(cand: &Candidate, center: &HeisenbergElement, m: u64) -> u64 {
    let hist = cand.histogram(center);
    let value = CycNum::from_root_histogram(m, &hist);
    let dim = cand.dim() as i64;
    (0..m)
        .find(|&w| {
            let mut h = vec![0i64; m as usize];
            h[w as usize] = dim;
            CycNum::from_root_histogram(m, &h) == value
        })
        .expect("the center acts by a scalar")
}
