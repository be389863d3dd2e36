//! Binary cubic forms and their equivalence under SL₂(ℚ).
//!
//! A traceless commutative product on the plane `span(e2, e3)`,
//!
//! ```text
//! e2·e2 = p e2 + q e3,   e2·e3 = r e2 − p e3,   e3·e3 = s e2 − r e3,
//! ```
//!
//! corresponds to the cubic `−q u³ + 3p u²w + 3r uw² + s w³`, and
//! transporting the product by a unimodular `B` composes the cubic with
//! `B⁻¹`. Matching two such products up to scale is therefore matching two
//! cubics: `f(y) = α·g(yB)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Matrix;
use crate::rational::Rational;

/// `a u³ + b u²w + c uw² + d w³`, coefficients `[a, b, c, d]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryCubic(pub [Rational; 4]);

/// A projective point `(u : w)`, normalized to `(1 : 0)` or `(t : 1)`.
pub type Point = [Rational; 2];

impl BinaryCubic {
    /// From `(p, q, r, s)` as in the module docs.
    pub fn from_quotient(p: &Rational, q: &Rational, r: &Rational, s: &Rational) -> Self {
        let three = Rational::from_int(3);
        BinaryCubic([-q, &three * p, &three * r, s.clone()])
    }

    /// Inverse of [`BinaryCubic::from_quotient`].
    pub fn to_quotient(&self) -> [Rational; 4] {
        let three = Rational::from_int(3);
        let [a, b, c, d] = &self.0;
        [b / &three, -a, c / &three, d.clone()]
    }

    pub fn eval(&self, u: &Rational, w: &Rational) -> Rational {
        let [a, b, c, d] = &self.0;
        a * &(u * &(u * u)) + b * &(u * &(u * w)) + c * &(u * &(w * w)) + d * &(w * &(w * w))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        BinaryCubic(self.0.clone().map(|x| &x * k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    /// `y ↦ f(y·m)` for a 2×2 matrix acting on row vectors `y = (u, w)`.
    pub fn compose(&self, m: &Matrix) -> Self {
        // the two linear forms (u, w)·m, each stored as (u-coeff, w-coeff)
        let x = [m[(0, 0)].clone(), m[(1, 0)].clone()];
        let y = [m[(0, 1)].clone(), m[(1, 1)].clone()];
        let mul = |p: &[Rational], l: &[Rational; 2]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                out[k] += c * &l[0];
                out[k + 1] += c * &l[1];
            }
            out
        };
        let [a, b, c, d] = &self.0;
        let mut acc = vec![Rational::zero(); 4];
        for (coef, factors) in [(a, [&x, &x, &x]), (b, [&x, &x, &y]), (c, [&x, &y, &y]), (d, [&y, &y, &y])] {
            if coef.is_zero() {
                continue;
            }
            let mut p = vec![coef.clone()];
            for l in factors {
                p = mul(&p, l);
            }
            for (s, t) in acc.iter_mut().zip(p) {
                *s += t;
            }
        }
        BinaryCubic(acc.try_into().unwrap())
    }

    pub fn discriminant(&self) -> Rational {
        let [a, b, c, d] = &self.0;
        let r = Rational::from_int;
        b * b * c * c - r(4) * a * c * c * c - r(4) * b * b * b * d - r(27) * a * a * d * d + r(18) * a * b * c * d
    }

    /// `λ` with `self = λ·other`, if any.
    pub fn ratio_to(&self, other: &BinaryCubic) -> Option<Rational> {
        let k = other.0.iter().position(|x| !x.is_zero())?;
        let lambda = &self.0[k] / &other.0[k];
        (other.scale(&lambda) == *self).then_some(lambda)
    }

    /// Dehomogenized polynomial `f(t, 1)`, ascending degree, trimmed.
    fn affine(&self) -> Vec<Rational> {
        let [a, b, c, d] = &self.0;
        let mut p = vec![d.clone(), c.clone(), b.clone(), a.clone()];
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
        p
    }

    /// Rational projective roots: `(1:0)` first when present, then the finite
    /// ones in increasing order. Assumes a nonzero discriminant.
    pub fn rational_roots(&self) -> Vec<Point> {
        let mut out = Vec::new();
        if self.0[0].is_zero() {
            out.push([Rational::one(), Rational::zero()]);
        }
        for t in poly_rational_roots(&self.affine()) {
            out.push([t, Rational::one()]);
        }
        out
    }

    /// Real finite roots to within `2^-bits`, increasing. Assumes a nonzero
    /// discriminant and `a ≠ 0`.
    pub fn real_roots(&self, bits: u32) -> Vec<Rational> {
        let p = self.affine();
        isolate(&p).into_iter().map(|iv| refine(&p, iv, bits).midpoint()).collect()
    }
}

fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| &acc * x + c)
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    if p.len() <= 1 {
        return vec![Rational::zero()];
    }
    p.iter().enumerate().skip(1).map(|(k, c)| c * &Rational::from_int(k as i64)).collect()
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Rational::is_zero)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !is_zero_poly(&r) {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (k, c) in b.iter().enumerate() {
            r[k + shift] -= &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn sturm_chain(p: &[Rational]) -> Vec<Vec<Rational>> {
    let mut chain = vec![trim(p.to_vec()), trim(derivative(p))];
    loop {
        let n = chain.len();
        if is_zero_poly(&chain[n - 1]) {
            chain.pop();
            break;
        }
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[Vec<Rational>], x: &Rational) -> usize {
    let signs: Vec<i32> = chain.iter().map(|p| poly_eval(p, x).signum()).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[derive(Clone, Debug)]
enum Interval {
    Exact(Rational),
    /// Exactly one simple root strictly inside, with a sign change.
    Open(Rational, Rational),
}

impl Interval {
    fn midpoint(&self) -> Rational {
        match self {
            Interval::Exact(x) => x.clone(),
            Interval::Open(lo, hi) => (lo + hi) / Rational::from_int(2),
        }
    }
}

/// Isolating intervals for the real roots of a squarefree polynomial. All
/// endpoints are dyadic so refinement can run on scaled integers.
fn isolate(p: &[Rational]) -> Vec<Interval> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let lead = p.last().unwrap();
    let cauchy = Rational::one() + p[..p.len() - 1].iter().map(|c| (c / lead).abs()).max().unwrap();
    let mut bound = Rational::one();
    while bound < cauchy {
        bound = &bound * &Rational::from_int(2);
    }
    let chain = sturm_chain(&p);
    let mut out = Vec::new();
    let mut stack = vec![(-&bound, bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&chain, &lo) - sign_changes(&chain, &hi);
        match count {
            0 => {}
            1 => out.push(Interval::Open(lo, hi)),
            _ => {
                // some interior dyadic point is not a root (degree ≤ 3 < 7)
                let width = &hi - &lo;
                let m = [4, 3, 5, 2, 6, 1, 7]
                    .iter()
                    .map(|&j| &lo + &(&width * &Rational::frac(j, 8)))
                    .find(|m| !poly_eval(&p, m).is_zero())
                    .expect("a polynomial of degree < 7 has a non-root among seven points");
                stack.push((m.clone(), hi));
                stack.push((lo, m));
            }
        }
    }
    out.sort_by_key(Interval::midpoint);
    out
}

/// Clears denominators.
fn integer_poly(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    p.iter().map(|c| c.numer() * (&l / c.denom())).collect()
}

/// Sign of `p(x / 2^s)` for an integer polynomial, evaluated homogeneously.
fn dyadic_sign(p: &[BigInt], x: &BigInt, s: u32) -> i32 {
    let d = p.len() - 1;
    let mut acc = BigInt::zero();
    let mut xp = BigInt::one();
    for (i, c) in p.iter().enumerate() {
        acc += (c * &xp) << (s as usize * (d - i));
        xp *= x;
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Shrinks an isolating interval below `2^-bits` by bisection on integers
/// scaled by `2^s`.
fn refine(p: &[Rational], iv: Interval, bits: u32) -> Interval {
    let Interval::Open(lo, hi) = iv else { return iv };
    let s = bits.max(lo.denom().bits() as u32).max(hi.denom().bits() as u32);
    let scale = Rational::from_bigint(BigInt::one() << s);
    let pi = integer_poly(p);
    let mut a = (&lo * &scale).numer().clone();
    let mut b = (&hi * &scale).numer().clone();
    let a_sign = dyadic_sign(&pi, &a, s);
    let one = BigInt::one();
    while &b - &a > one {
        let m: BigInt = (&a + &b) >> 1usize;
        let sg = dyadic_sign(&pi, &m, s);
        if sg == 0 {
            return Interval::Exact(Rational::from_bigints(m, BigInt::one() << s).unwrap());
        }
        if sg == a_sign {
            a = m;
        } else {
            b = m;
        }
    }
    let den = BigInt::one() << s;
    Interval::Open(Rational::from_bigints(a, den.clone()).unwrap(), Rational::from_bigints(b, den).unwrap())
}

/// Rational roots of a squarefree polynomial: a rational root's
/// denominator divides the leading coefficient of the integer-scaled
/// polynomial, so rounding a fine enough approximation recovers it.
fn poly_rational_roots(p: &[Rational]) -> Vec<Rational> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let lead = integer_poly(&p).last().unwrap().abs();
    let bits = lead.bits() as u32 + 2;
    let lead_q = Rational::from_bigint(lead);
    let mut out = Vec::new();
    for iv in isolate(&p) {
        match refine(&p, iv, bits) {
            Interval::Exact(x) => out.push(x),
            iv @ Interval::Open(..) => {
                let cand = Rational::from_bigints((&iv.midpoint() * &lead_q).round(), lead_q.numer().clone()).unwrap();
                if poly_eval(&p, &cand).is_zero() {
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// Best rational approximation of `x` within `2^-bits` by continued
/// fractions, or `None` if the denominators blow past `2^(bits/2)`.
fn rationalize(x: &Rational, bits: u32) -> Option<Rational> {
    let tol = Rational::from_bigints(BigInt::one(), BigInt::one() << bits).unwrap();
    let max_den = BigInt::one() << (bits / 2);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    for _ in 0..4 * bits {
        let a = rest.floor();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            return None;
        }
        let approx = Rational::from_bigints(h2.clone(), k2.clone()).unwrap();
        if (&approx - x).abs() <= tol {
            return Some(approx);
        }
        let frac = &rest - &Rational::from_bigint(a);
        if frac.is_zero() {
            return Some(approx);
        }
        rest = frac.recip().unwrap();
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    None
}

fn point_vec(p: &Point) -> [Rational; 2] {
    p.clone()
}

/// The matrix sending `(1,0), (0,1), (1,1)` to multiples of `r1, r2, r3`
/// (row action).
fn frame(r: [&Point; 3]) -> Option<Matrix> {
    let [r1, r2, r3] = r.map(point_vec);
    // λ1 r1 + λ2 r2 = r3
    let det = &r1[0] * &r2[1] - &r1[1] * &r2[0];
    if det.is_zero() {
        return None;
    }
    let l1 = (&r3[0] * &r2[1] - &r3[1] * &r2[0]) / &det;
    let l2 = (&r1[0] * &r3[1] - &r1[1] * &r3[0]) / &det;
    Matrix::from_rows(vec![vec![&l1 * &r1[0], &l1 * &r1[1]], vec![&l2 * &r2[0], &l2 * &r2[1]]]).ok()
}

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Outcome of matching `f(y) = α·g(yB)` with `B ∈ SL₂(ℚ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Every solution `(B, α)`.
    Maps(Vec<(Matrix, Rational)>),
    /// Solvable only after adjoining a `degree`-th root of `radicand`.
    Obstructed { radicand: Rational, degree: u32 },
    /// Not equivalent, with the reason.
    Inequivalent(String),
}

/// Given a projective matching `g(yG) = λ f(y)`, rescales `G` into SL₂ if
/// its determinant is a square. Returns the signed pair of solutions or the
/// non-square determinant.
fn unimodular(f: &BinaryCubic, g: &BinaryCubic, m: &Matrix) -> std::result::Result<Vec<(Matrix, Rational)>, Rational> {
    let d = m.determinant().expect("2x2");
    let Some(s) = d.sqrt() else { return Err(d) };
    let mut out = Vec::new();
    for sign in [1, -1] {
        let b = m.scale(&(Rational::from_int(sign) / &s));
        let alpha = f.ratio_to(&g.compose(&b)).expect("projective match");
        out.push((b, alpha));
    }
    Ok(out)
}

/// SL₂ map moving root `r` to `(1:0)` and centring the remaining quadratic,
/// so that `f(y·N) = w·(b u² + d w²)`.
fn anchor(f: &BinaryCubic, r: &Point) -> (Matrix, Rational, Rational) {
    let z = Rational::zero();
    let o = Rational::one();
    let p = if !r[0].is_zero() {
        Matrix::from_rows(vec![vec![r[0].clone(), r[1].clone()], vec![z.clone(), r[0].recip().unwrap()]])
    } else {
        Matrix::from_rows(vec![vec![z.clone(), r[1].clone()], vec![-r[1].recip().unwrap(), z.clone()]])
    }
    .unwrap();
    let ft = f.compose(&p);
    debug_assert!(ft.0[0].is_zero());
    let k = -(&ft.0[2] / &(&Rational::from_int(2) * &ft.0[1]));
    let shear = Matrix::from_rows(vec![vec![o.clone(), z.clone()], vec![k, o]]).unwrap();
    let n = shear.mul(&p).unwrap();
    let fh = f.compose(&n);
    debug_assert!(fh.0[0].is_zero() && fh.0[2].is_zero());
    (n, fh.0[1].clone(), fh.0[3].clone())
}

/// Working precision (bits) for matching cubics with no rational root.
const NUMERIC_BITS: u32 = 256;

/// All `(B, α)` with `B ∈ SL₂(ℚ)`, `α ∈ ℚ` and `f(y) = α·g(yB)`, for
/// cubics of nonzero discriminant.
pub fn sl2_equivalences(f: &BinaryCubic, g: &BinaryCubic) -> Equivalence {
    if f.discriminant().is_zero() || g.discriminant().is_zero() {
        return Equivalence::Inequivalent("degenerate cubic (repeated root)".into());
    }
    let rf = f.rational_roots();
    let rg = g.rational_roots();
    if rf.len() != rg.len() && (rf.is_empty() || rg.is_empty()) {
        return Equivalence::Inequivalent(format!("the cubics have {} and {} rational roots", rf.len(), rg.len()));
    }
    let mut maps = Vec::new();
    let mut obstruction: Option<(Rational, u32)> = None;

    if rf.len() == 3 && rg.len() == 3 {
        // three rational points on each side: one projective map per bijection
        let mf = frame([&rf[0], &rf[1], &rf[2]]).expect("distinct roots");
        let finv = mf.inverse().unwrap();
        for s in permutations3() {
            let mg = frame([&rg[s[0]], &rg[s[1]], &rg[s[2]]]).expect("distinct roots");
            let gmat = finv.mul(&mg).unwrap();
            match unimodular(f, g, &gmat) {
                Ok(v) => maps.extend(v),
                Err(d) => {
                    obstruction.get_or_insert((d, 2));
                }
            }
        }
    } else if !rf.is_empty() {
        // a rational root on each side must correspond; after anchoring both
        // at (1:0) the map is diag(a, 1/a) with a⁴ fixed
        for r in &rf {
            let (nf, b, d) = anchor(f, r);
            for s in &rg {
                let (ng, bb, dd) = anchor(g, s);
                let rho = &(&b * &dd) / &(&bb * &d);
                let Some(a) = rho.nth_root(4) else {
                    obstruction.get_or_insert((rho, 4));
                    continue;
                };
                for a in [a.clone(), -a] {
                    let diag = Matrix::diagonal(&[a.clone(), a.recip().unwrap()]);
                    let bm = nf.inverse().unwrap().mul(&diag).unwrap().mul(&ng).unwrap();
                    let alpha = f.ratio_to(&g.compose(&bm)).expect("anchored match");
                    maps.push((bm, alpha));
                }
            }
        }
    } else {
        let (df, dg) = (f.discriminant(), g.discriminant());
        if df.signum() != dg.signum() {
            return Equivalence::Inequivalent("discriminants of opposite sign".into());
        }
        if df.is_negative() {
            // one real root each and nothing rational to anchor on
            return Equivalence::Inequivalent("irreducible cubics with a single real root are not matched".into());
        }
        let tf = f.real_roots(NUMERIC_BITS);
        let tg = g.real_roots(NUMERIC_BITS);
        let pt = |t: &Rational| -> Point { [t.clone(), Rational::one()] };
        let mf = frame([&pt(&tf[0]), &pt(&tf[1]), &pt(&tf[2])]).expect("distinct roots");
        let finv = mf.inverse().unwrap();
        for s in permutations3() {
            let mg = frame([&pt(&tg[s[0]]), &pt(&tg[s[1]]), &pt(&tg[s[2]])]).expect("distinct roots");
            let approx = finv.mul(&mg).unwrap();
            let Some(gmat) = rationalize_projective(&approx) else { continue };
            if f.ratio_to(&g.compose(&gmat)).is_none() {
                continue;
            }
            match unimodular(f, g, &gmat) {
                Ok(v) => maps.extend(v),
                Err(d) => {
                    obstruction.get_or_insert((d, 2));
                }
            }
        }
    }
    maps.sort_by_key(|m| m.0.to_rows());
    maps.dedup();
    if !maps.is_empty() {
        Equivalence::Maps(maps)
    } else if let Some((radicand, degree)) = obstruction {
        Equivalence::Obstructed { radicand, degree }
    } else {
        Equivalence::Inequivalent("no rational projective map between the root sets".into())
    }
}

/// Scales an approximate 2×2 matrix so its largest entry is 1 and snaps the
/// others to nearby rationals.
fn rationalize_projective(m: &Matrix) -> Option<Matrix> {
    let entries: Vec<Rational> = m.to_rows().into_iter().flatten().collect();
    let pivot = entries.iter().max_by(|a, b| a.abs().cmp(&b.abs()))?.clone();
    if pivot.is_zero() {
        return None;
    }
    let snapped: Option<Vec<Rational>> = entries.iter().map(|x| rationalize(&(x / &pivot), NUMERIC_BITS / 3)).collect();
    let s = snapped?;
    Matrix::from_rows(vec![s[..2].to_vec(), s[2..].to_vec()]).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use proptest::prelude::*;

    fn cubic(c: [i64; 4]) -> BinaryCubic {
        BinaryCubic(c.map(int))
    }

    fn m2(a: Rational, b: Rational, c: Rational, d: Rational) -> Matrix {
        Matrix::from_rows(vec![vec![a, b], vec![c, d]]).unwrap()
    }

    #[test]
    fn discriminant_values() {
        // u w (u - w): roots 0, 1, ∞
        assert_eq!(cubic([0, 1, -1, 0]).discriminant(), int(1));
        // u³ - w³ ... disc of t³ - 1 is -27
        assert_eq!(cubic([1, 0, 0, -1]).discriminant(), int(-27));
        assert_eq!(cubic([1, -3, 3, -1]).discriminant(), int(0));
    }

    #[test]
    fn roots() {
        let f = cubic([0, 3, 0, -48]);
        assert_eq!(f.rational_roots(), vec![[int(1), int(0)], [int(-4), int(1)], [int(4), int(1)]]);
        let f = cubic([0, 3, 0, -6]);
        assert_eq!(f.rational_roots().len(), 1);
        let f = BinaryCubic([int(6), int(-5), int(1), int(0)].map(|x| x));
        // 6t³ - 5t² + t = t(2t-1)(3t-1)... with w: roots 0, 1/2, 1/3
        let roots: Vec<Rational> = f.rational_roots().into_iter().map(|p| p[0].clone()).collect();
        assert_eq!(roots, vec![int(0), q(1, 3), q(1, 2)]);
        // irreducible t³ - 3t² + 3
        let f = cubic([1, -3, 0, 3]);
        assert!(f.rational_roots().is_empty());
        let r = f.real_roots(64);
        assert_eq!(r.len(), 3);
        for t in r {
            assert!(poly_eval(&[int(3), int(0), int(-3), int(1)], &t).abs() < q(1, 1 << 40));
        }
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(rationalize(&q(355, 113), 40), Some(q(355, 113)));
        let near = &q(-7, 12) + &Rational::from_bigints(BigInt::one(), BigInt::one() << 200).unwrap();
        assert_eq!(rationalize(&near, 120), Some(q(-7, 12)));
    }

    #[test]
    fn anchored_obstruction() {
        let f = BinaryCubic::from_quotient(&int(1), &int(0), &int(0), &int(-6));
        let g = BinaryCubic::from_quotient(&int(1), &int(0), &int(0), &int(-3));
        assert_eq!(sl2_equivalences(&f, &g), Equivalence::Obstructed { radicand: q(1, 2), degree: 4 });
    }

    #[test]
    fn scaled_match() {
        let f = BinaryCubic::from_quotient(&q(1, 2), &int(0), &int(0), &int(-24));
        let g = BinaryCubic::from_quotient(&int(1), &int(0), &int(0), &int(-3));
        let Equivalence::Maps(maps) = sl2_equivalences(&f, &g) else { panic!() };
        assert!(maps.contains(&(Matrix::diagonal(&[q(1, 2), int(2)]), int(1))));
        for (b, alpha) in &maps {
            assert!(b.determinant().unwrap().is_one());
            assert_eq!(g.compose(b).scale(alpha), f);
        }
    }

    fn coord() -> impl Strategy<Value = Rational> {
        (-6i64..7, 1i64..4).prop_map(|(a, b)| q(a, b))
    }

    fn sl2() -> impl Strategy<Value = Matrix> {
        (coord().prop_filter("nonzero", |x| !x.is_zero()), coord(), coord()).prop_map(|(a, b, c)| {
            let d = (int(1) + &b * &c) / &a;
            m2(a, b, c, d)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn composition_is_an_action(c in proptest::collection::vec(coord(), 4), x in sl2(), y in sl2()) {
            let f = BinaryCubic(c.try_into().unwrap());
            prop_assert_eq!(f.compose(&x).compose(&y), f.compose(&y.mul(&x).unwrap()));
            prop_assert_eq!(f.compose(&x).discriminant(), f.discriminant());
        }

        #[test]
        fn quotient_round_trip(c in proptest::collection::vec(coord(), 4)) {
            let f = BinaryCubic(c.try_into().unwrap());
            let [p, q, r, s] = f.to_quotient();
            prop_assert_eq!(BinaryCubic::from_quotient(&p, &q, &r, &s), f);
        }

        // Every transported cubic is found again, whatever its root structure.
        #[test]
        fn equivalences_recover_transport(c in prop_oneof![
                Just([0i64, 3, 0, -3]), Just([1, -3, 0, 3]), Just([3, 0, -3, 1]), Just([0, 3, 0, -4])],
            b in sl2(), alpha in coord().prop_filter("nonzero", |x| !x.is_zero())) {
            let g = cubic(c);
            let f = g.compose(&b).scale(&alpha);
            match sl2_equivalences(&f, &g) {
                Equivalence::Maps(maps) => {
                    prop_assert!(maps.contains(&(b.clone(), alpha.clone())));
                    for (bm, a) in &maps {
                        prop_assert_eq!(&g.compose(bm).scale(a), &f);
                    }
                }
                other => prop_assert!(false, "{other:?}"),
            }
        }
    }
}
