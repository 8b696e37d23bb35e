//! Chern characters of semihomogeneous bundles at the level of rank and slope.
//!
//! A class `(rank, λ)` on a principally polarized `A` of dimension `g` stands
//! for `ch = rank · exp(λΘ)`; `W_{a,b}` is `(a^g, b/a)`. On `A × A` a class is
//! a rank with a symmetric 2×2 matrix `Q`, the diagonal holding the
//! `Θ`-coefficients of the two factors. An isogeny `(x, y) ↦ M(x, y)` pulls
//! `Q` back to `MᵀQM`.

mod exterior;

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::scalar::Scalar;
use crate::{Error, Rational, Result};

use exterior::Form;

/// `ch = rank · exp(slope · Θ)` on a `g`-dimensional abelian variety.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeClass<T = Rational> {
    pub g: u32,
    pub rank: T,
    pub slope: T,
}

impl<T: Scalar> SlopeClass<T> {
    pub fn new(g: u32, rank: T, slope: T) -> Self {
        SlopeClass { g, rank, slope }
    }

    /// The class of `W_{a,b}`: rank `a^g`, slope `b/a`. Requires `a ≥ 1`.
    pub fn w(g: u32, a: i64, b: i64) -> Result<Self> {
        if a < 1 {
            return Err(Error::invalid("W_{a,b} needs a ≥ 1"));
        }
        Ok(SlopeClass {
            g,
            rank: T::from_int(a).powu(g),
            slope: T::ratio(b, a),
        })
    }

    /// The class of `Θ^m`.
    pub fn theta_power(g: u32, m: i64) -> Self {
        SlopeClass {
            g,
            rank: T::one(),
            slope: T::from_int(m),
        }
    }

    /// Dual bundle: the slope changes sign.
    pub fn dual(&self) -> Self {
        SlopeClass {
            g: self.g,
            rank: self.rank.clone(),
            slope: -self.slope.clone(),
        }
    }

    /// `∫ rank · exp(λΘ) = rank · λ^g`, using `∫ Θ^g = g!`.
    pub fn euler_char(&self) -> T {
        self.rank.clone() * self.slope.powu(self.g)
    }
}

impl<T: Scalar> fmt::Display for SlopeClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rank {}, slope {})", self.rank, self.slope)
    }
}

pub fn euler_char<T: Scalar>(c: &SlopeClass<T>) -> T {
    c.euler_char()
}

/// Fourier–Mukai transform: `(rank, λ) ↦ (rank · λ^g, -1/λ)`.
pub fn fm_transform<T: Scalar>(c: &SlopeClass<T>) -> Result<SlopeClass<T>> {
    if c.slope.is_zero() {
        return Err(Error::invalid(
            "slope 0: the transform leaves the slope-class model",
        ));
    }
    Ok(SlopeClass {
        g: c.g,
        rank: c.euler_char(),
        slope: -(T::one() / c.slope.clone()),
    })
}

/// Pullback along multiplication by `m`: the slope scales by `m²`.
pub fn isogeny_pullback_a<T: Scalar>(c: &SlopeClass<T>, m: i64) -> Result<SlopeClass<T>> {
    if m == 0 {
        return Err(Error::invalid("multiplication by 0 is not an isogeny"));
    }
    Ok(SlopeClass {
        g: c.g,
        rank: c.rank.clone(),
        slope: c.slope.clone() * T::from_int(m * m),
    })
}

/// Whether the transform of `W_{a,b}` is the class of `W_{b,a}^∨`.
pub fn check_fm_of_w<T: Scalar>(g: u32, a: i64, b: i64) -> Result<bool> {
    let lhs = fm_transform(&SlopeClass::<T>::w(g, a, b)?)?;
    Ok(lhs == SlopeClass::<T>::w(g, b, a)?.dual())
}

/// A 2×2 integer matrix with nonzero determinant, acting on `A × A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsogenyMatrix {
    m: [[i64; 2]; 2],
}

impl IsogenyMatrix {
    pub fn new(m: [[i64; 2]; 2]) -> Result<Self> {
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0 {
            return Err(Error::invalid("isogeny matrix must have nonzero determinant"));
        }
        Ok(IsogenyMatrix { m })
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.m
    }

    /// `(x, y) ↦ (ax + by, cx - dy)`.
    pub fn wirtinger(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        IsogenyMatrix::new([[a, b], [c, -d]])
    }
}

/// `ch = rank · exp(class with Gram matrix Q)` on `A × A`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeMatrix<T = Rational> {
    pub g: u32,
    pub rank: T,
    pub q: [[T; 2]; 2],
}

impl<T: Scalar> SlopeMatrix<T> {
    pub fn new(g: u32, rank: T, q: [[T; 2]; 2]) -> Result<Self> {
        if q[0][1] != q[1][0] {
            return Err(Error::invalid("slope matrix must be symmetric"));
        }
        Ok(SlopeMatrix { g, rank, q })
    }

    /// `V₁ ⊠ V₂`: ranks multiply, slopes go on the diagonal.
    pub fn box_product(v1: &SlopeClass<T>, v2: &SlopeClass<T>) -> Result<Self> {
        if v1.g != v2.g {
            return Err(Error::invalid("box product of classes of different genus"));
        }
        Ok(SlopeMatrix {
            g: v1.g,
            rank: v1.rank.clone() * v2.rank.clone(),
            q: [
                [v1.slope.clone(), T::zero()],
                [T::zero(), v2.slope.clone()],
            ],
        })
    }

    /// Whether this is `v1 ⊠ v2`.
    pub fn is_box_of(&self, v1: &SlopeClass<T>, v2: &SlopeClass<T>) -> bool {
        Self::box_product(v1, v2).is_ok_and(|b| b == *self)
    }

    /// Determinant exponents on the two factors: `rank · Q_ii`.
    pub fn determinant_exponents(&self) -> [T; 2] {
        [
            self.rank.clone() * self.q[0][0].clone(),
            self.rank.clone() * self.q[1][1].clone(),
        ]
    }
}

/// `(rank, Q) ↦ (rank, MᵀQM)`.
pub fn isogeny_pullback_axa<T: Scalar>(c: &SlopeMatrix<T>, m: &IsogenyMatrix) -> SlopeMatrix<T> {
    let mm = m.m.map(|row| row.map(T::from_int));
    let mut out: [[T; 2]; 2] = [[T::zero(), T::zero()], [T::zero(), T::zero()]];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = T::zero();
            for k in 0..2 {
                for l in 0..2 {
                    acc = acc + mm[k][i].clone() * c.q[k][l].clone() * mm[l][j].clone();
                }
            }
            *cell = acc;
        }
    }
    SlopeMatrix {
        g: c.g,
        rank: c.rank.clone(),
        q: out,
    }
}

/// Dimension bookkeeping for the Wirtinger map attached to odd coprime
/// `a, b`: `h⁰(W_{a,a+b}) = h⁰(W_{b,a+b}) = (a+b)^g`, and the Schrödinger
/// representation of `H̃[a]` has dimension `rank W_{a,b} = a^g`.
pub fn check_wirtinger_dims(a: i64, b: i64, g: u32) -> Result<bool> {
    check_odd_coprime(a, b)?;
    let left = SlopeClass::<Rational>::w(g, a, a + b)?.euler_char();
    let right = SlopeClass::<Rational>::w(g, b, a + b)?.euler_char();
    let expected = Rational::from_int(a + b).powu(g);
    let schrodinger = crate::heisenberg::schrodinger_dim(a as u64, g);
    let rank = SlopeClass::<Rational>::w(g, a, b)?.rank;
    Ok(left == expected && right == expected && Rational::from_int(schrodinger as i64) == rank)
}

fn check_odd_coprime(a: i64, b: i64) -> Result<()> {
    if a < 1 || b < 1 || a % 2 == 0 || b % 2 == 0 || a.gcd(&b) != 1 {
        return Err(Error::hypothesis("a and b must be odd coprime positive integers"));
    }
    Ok(())
}

/// Chern-level shadow of `μ*(W_{ab,1} ⊠ W_{cd,1}) ≅ W_{bd,δ} ⊠ W_{ac,δ}` for
/// `μ = [[a, b], [c, -d]]`, `δ = ad + bc`: pulls back the left side and
/// compares rank and slope matrix with the right side. With `c = d = 1` this
/// is `μ*(W_{ab,1} ⊠ W_{1,1}) ≅ W_{b,a+b} ⊠ W_{a,a+b}`.
pub fn check_wirtinger_pullback(a: i64, b: i64, c: i64, d: i64, g: u32) -> Result<bool> {
    for x in [a, b, c, d] {
        if x < 1 || x % 2 == 0 {
            return Err(Error::hypothesis("a, b, c, d must be odd positive integers"));
        }
    }
    if (a * c).gcd(&(b * d)) != 1 {
        return Err(Error::hypothesis("ac and bd must be coprime"));
    }
    let delta = a * d + b * c;
    let source = SlopeMatrix::box_product(
        &SlopeClass::<Rational>::w(g, a * b, 1)?,
        &SlopeClass::<Rational>::w(g, c * d, 1)?,
    )?;
    let pulled = isogeny_pullback_axa(&source, &IsogenyMatrix::wirtinger(a, b, c, d)?);
    let target = SlopeMatrix::box_product(
        &SlopeClass::<Rational>::w(g, b * d, delta)?,
        &SlopeClass::<Rational>::w(g, a * c, delta)?,
    )?;
    Ok(pulled == target)
}

/// Line-bundle part of the same pullback: `μ*(Θ ⊠ Θ^{ab}) = Θ^{a(a+b)} ⊠ Θ^{b(a+b)}`
/// for `μ = [[a, b], [1, -1]]`, together with the determinant exponents of
/// `W_{b,a+b} ⊠ W_{a,a+b}` divided by `(ab)^{g-1}`.
pub fn check_wirtinger_determinants(a: i64, b: i64, g: u32) -> Result<bool> {
    check_odd_coprime(a, b)?;
    let mu = IsogenyMatrix::wirtinger(a, b, 1, 1)?;
    let line = SlopeMatrix::box_product(
        &SlopeClass::<Rational>::theta_power(g, 1),
        &SlopeClass::<Rational>::theta_power(g, a * b),
    )?;
    let pulled = isogeny_pullback_axa(&line, &mu);
    let expected = [
        Rational::from_int(a * (a + b)),
        Rational::from_int(b * (a + b)),
    ];
    let diagonal = pulled.q[0][1].is_zero()
        && pulled.q[0][0] == expected[0]
        && pulled.q[1][1] == expected[1];
    let product = SlopeMatrix::box_product(
        &SlopeClass::<Rational>::w(g, b, a + b)?,
        &SlopeClass::<Rational>::w(g, a, a + b)?,
    )?;
    let clear = Rational::from_int(a * b).powu(g - 1);
    let [d0, d1] = product.determinant_exponents();
    let rank_ok = product.rank == Rational::from_int(a * b).powu(g);
    Ok(diagonal && rank_ok && d0 / clear.clone() == expected[0] && d1 / clear == expected[1])
}

/// Generator layout on `A × Â`: `e_i = i` and `f_i = 2g + i` for `i < 2g`;
/// block `j < g` pairs `e_j, e_{g+j}` and `f_j, f_{g+j}`.
fn theta(g: u32, offset: u32, coeff: &Rational) -> Form {
    let mut out = Form::default();
    for j in 0..g {
        out.add(&Form::term(
            1 << (offset + j) | 1 << (offset + g + j),
            coeff.clone(),
        ));
    }
    out
}

/// `c₁(P) = Σ_j (e_j f_{g+j} - e_{g+j} f_j)`, sign fixed so that `Θ̂`
/// matches `Θ` under the principal polarization.
fn poincare(g: u32) -> Form {
    let f = 2 * g;
    let mut out = Form::default();
    for j in 0..g {
        out.add(&Form::term(
            1 << j | 1 << (f + g + j),
            Rational::from_int(1),
        ));
        out.add(&Form::term(
            1 << (g + j) | 1 << (f + j),
            Rational::from_int(-1),
        ));
    }
    out
}

/// Fourier–Mukai transform by integrating `rank · exp(λΘ + c₁(P))` over the
/// first factor in the exterior algebra on `4g` generators, normalized by
/// `∫_A Θ^g / g! = 1`. The result must again be `rank' · exp(λ'Θ̂)`.
///
/// Supports `g ≤ 4`.
pub fn fm_transform_by_kernel(c: &SlopeClass<Rational>) -> Result<SlopeClass<Rational>> {
    let g = c.g;
    if g == 0 || g > 4 {
        return Err(Error::invalid("kernel integration supports 1 ≤ g ≤ 4"));
    }
    let fiber: u32 = (1 << (2 * g)) - 1;
    let mut top = Form::one();
    for j in 0..g {
        top = top.mul(&Form::term(1 << j | 1 << (g + j), Rational::from_int(1)));
    }
    // Θ^g / g! is the product of the block forms; its integral fixes the orientation
    let orientation = top.integrate(fiber).0.get(&0).cloned().unwrap_or_default();

    let mut exponent = theta(g, 0, &c.slope);
    exponent.add(&poincare(g));
    let mut class = Form::one();
    for j in 0..g {
        // blocks commute, so exp factors over them
        let block: u32 = (1 << j) | 1 << (g + j) | 1 << (2 * g + j) | 1 << (3 * g + j);
        let part = Form(
            exponent
                .0
                .iter()
                .filter(|(&m, _)| m & !block == 0)
                .map(|(&m, v)| (m, v.clone()))
                .collect(),
        );
        class = class.mul(&part.exp());
    }
    let pushed = class.integrate(fiber).scale(&(c.rank.clone() / orientation));
    let rank = pushed.0.get(&0).cloned().unwrap_or_default();
    if rank.is_zero() {
        return Err(Error::invalid(
            "slope 0: the transform leaves the slope-class model",
        ));
    }
    let theta_hat_mask = 1 << (2 * g) | 1 << (3 * g);
    let slope = pushed.0.get(&theta_hat_mask).cloned().unwrap_or_default() / rank.clone();
    let expected = theta(g, 2 * g, &slope).exp().scale(&rank);
    if expected != pushed {
        return Err(Error::identity(
            "p_!(ch · exp(c₁(P))) is again of the form rank · exp(λΘ)",
            format!("class {c} integrates to a non-exponential form"),
        ));
    }
    Ok(SlopeClass { g, rank, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    type Q = SlopeClass<Rational>;

    #[test]
    fn euler_characteristics() {
        for g in 1..=4 {
            assert_eq!(Q::w(g, 3, 5).unwrap().euler_char(), rat(5, 1).powu(g));
            assert_eq!(Q::theta_power(g, 2).euler_char(), rat(2, 1).powu(g));
        }
        assert_eq!(Q::w(2, 3, 5).unwrap().euler_char(), rat(25, 1));
    }

    #[test]
    fn transforms() {
        let t = fm_transform(&Q::theta_power(2, 1)).unwrap();
        assert_eq!(t, Q::new(2, rat(1, 1), rat(-1, 1)));
        assert!(check_fm_of_w::<Rational>(3, 3, 5).unwrap());
        assert!(fm_transform(&Q::theta_power(1, 0)).is_err());
        for g in 1..=4 {
            let c = Q::new(g, rat(2, 1), rat(3, 1));
            let back = fm_transform(&fm_transform(&c).unwrap()).unwrap();
            let sign = if g % 2 == 0 { 1 } else { -1 };
            assert_eq!(back, Q::new(g, rat(2 * sign, 1), rat(3, 1)));
        }
    }

    #[test]
    fn kernel_route_matches_closed_form() {
        for g in 1..=4 {
            for (r, s) in [(1, 1), (9, 5), (4, -3), (1, 1)] {
                let c = Q::new(g, rat(r, 1), rat(s, 3));
                assert_eq!(
                    fm_transform_by_kernel(&c).unwrap(),
                    fm_transform(&c).unwrap(),
                    "g={g} {c}"
                );
            }
        }
    }

    #[test]
    fn pullbacks() {
        let w = Q::w(2, 3, 5).unwrap();
        assert_eq!(isogeny_pullback_a(&w, 3).unwrap(), Q::new(2, rat(9, 1), rat(15, 1)));
        assert_eq!(isogeny_pullback_a(&w, 1).unwrap(), w);
        let th = Q::theta_power(1, 1);
        assert_eq!(isogeny_pullback_a(&th, 2).unwrap().slope, rat(4, 1));

        let sum_diff = IsogenyMatrix::new([[1, 1], [1, -1]]).unwrap();
        let tt = SlopeMatrix::box_product(&th, &th).unwrap();
        let pulled = isogeny_pullback_axa(&tt, &sum_diff);
        assert_eq!(pulled.q, [[rat(2, 1), rat(0, 1)], [rat(0, 1), rat(2, 1)]]);
    }

    #[test]
    fn wirtinger_bookkeeping() {
        assert!(check_wirtinger_dims(1, 1, 3).unwrap());
        assert!(check_wirtinger_dims(1, 3, 2).unwrap());
        assert!(check_wirtinger_dims(3, 5, 1).unwrap());
        assert!(check_wirtinger_dims(3, 3, 1).is_err());
        assert!(check_wirtinger_pullback(3, 5, 1, 1, 2).unwrap());
        assert!(check_wirtinger_pullback(3, 5, 7, 1, 2).unwrap());
        assert!(check_wirtinger_determinants(3, 5, 3).unwrap());
    }

    #[test]
    fn float_scalars() {
        let c = SlopeClass::<f64>::w(2, 3, 5).unwrap();
        assert!((c.euler_char() - 25.0).abs() < 1e-12);
    }
}
