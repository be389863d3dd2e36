//! Ternary brackets, commutative products and the identities tying them
//! together, all on structure constants in a fixed basis `e1..en`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::rational::Rational;

fn check_index(i: usize, dim: usize) -> Result<()> {
    if i == 0 || i > dim {
        return Err(Error::IndexOutOfRange { index: i, dim });
    }
    Ok(())
}

fn check_value(v: &Vector, dim: usize) -> Result<()> {
    if v.dim() != dim {
        return Err(Error::DimensionMismatch(format!("value of length {} in a {dim}-dimensional algebra", v.dim())));
    }
    Ok(())
}

/// Sorts three distinct indices, returning the sign of the sorting permutation.
fn sort3(mut a: [usize; 3]) -> Option<([usize; 3], i32)> {
    let mut sign = 1;
    for (i, j) in [(0, 1), (1, 2), (0, 1)] {
        if a[i] > a[j] {
            a.swap(i, j);
            sign = -sign;
        }
    }
    if a[0] == a[1] || a[1] == a[2] {
        None
    } else {
        Some((a, sign))
    }
}

/// A skew-symmetric trilinear bracket, stored on strictly increasing keys.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriBracket {
    dim: usize,
    table: BTreeMap<[usize; 3], Vector>,
}

impl TriBracket {
    pub fn zero(dim: usize) -> Self {
        TriBracket { dim, table: BTreeMap::new() }
    }

    /// The three-dimensional algebra with `[e1, e2, e3] = e1`.
    pub fn a3() -> Self {
        let mut b = Self::zero(3);
        b.set([1, 2, 3], Vector::basis(3, 1).unwrap()).unwrap();
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `[e_i, e_j, e_k]`; any order of distinct indices is accepted and
    /// stored with the permutation sign.
    pub fn set(&mut self, args: [usize; 3], value: Vector) -> Result<()> {
        for &i in &args {
            check_index(i, self.dim)?;
        }
        check_value(&value, self.dim)?;
        let (key, sign) = sort3(args).ok_or_else(|| Error::InvalidKey(format!("repeated index in {args:?}")))?;
        let value = if sign < 0 { value.scale(&Rational::from_int(-1)) } else { value };
        if value.is_zero() {
            self.table.remove(&key);
        } else {
            self.table.insert(key, value);
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 3], &Vector)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// `[e_i, e_j, e_k]` for any indices; repeated indices give zero.
    pub fn basis(&self, i: usize, j: usize, k: usize) -> Result<Vector> {
        for &x in &[i, j, k] {
            check_index(x, self.dim)?;
        }
        Ok(match sort3([i, j, k]) {
            None => Vector::zero(self.dim),
            Some((key, sign)) => match self.table.get(&key) {
                None => Vector::zero(self.dim),
                Some(v) if sign > 0 => v.clone(),
                Some(v) => v.scale(&Rational::from_int(-1)),
            },
        })
    }

    /// The structure constant `C_{ijk}^s` (1-based).
    pub fn coefficient(&self, i: usize, j: usize, k: usize, s: usize) -> Rational {
        match sort3([i, j, k]) {
            None => Rational::zero(),
            Some((key, sign)) => match self.table.get(&key) {
                None => Rational::zero(),
                Some(v) => {
                    let c = v[s - 1].clone();
                    if sign > 0 {
                        c
                    } else {
                        -c
                    }
                }
            },
        }
    }

    /// Trilinear evaluation: each stored key contributes the 3×3 minor of
    /// the arguments' coordinates on that key.
    pub fn eval(&self, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
        for v in [x, y, z] {
            check_value(v, self.dim)?;
        }
        let mut out = Vector::zero(self.dim);
        for (&[a, b, c], val) in &self.table {
            let (a, b, c) = (a - 1, b - 1, c - 1);
            let minor = &x[a] * &(&y[b] * &z[c] - &y[c] * &z[b]) - &x[b] * &(&y[a] * &z[c] - &y[c] * &z[a])
                + &x[c] * &(&y[a] * &z[b] - &y[b] * &z[a]);
            out.axpy(&minor, val);
        }
        Ok(out)
    }
}

/// A symmetric bilinear product, stored on non-decreasing keys.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommProduct {
    dim: usize,
    table: BTreeMap<[usize; 2], Vector>,
}

impl CommProduct {
    pub fn zero(dim: usize) -> Self {
        CommProduct { dim, table: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `e_i · e_j` (and hence `e_j · e_i`).
    pub fn set(&mut self, i: usize, j: usize, value: Vector) -> Result<()> {
        check_index(i, self.dim)?;
        check_index(j, self.dim)?;
        check_value(&value, self.dim)?;
        let key = [i.min(j), i.max(j)];
        if value.is_zero() {
            self.table.remove(&key);
        } else {
            self.table.insert(key, value);
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 2], &Vector)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// `e_i · e_j`.
    pub fn basis(&self, i: usize, j: usize) -> Result<Vector> {
        check_index(i, self.dim)?;
        check_index(j, self.dim)?;
        Ok(self.table.get(&[i.min(j), i.max(j)]).cloned().unwrap_or_else(|| Vector::zero(self.dim)))
    }

    /// The `k`-th coordinate of `e_i · e_j`.
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> Rational {
        self.table.get(&[i.min(j), i.max(j)]).map_or_else(Rational::zero, |v| v[k - 1].clone())
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        check_value(x, self.dim)?;
        check_value(y, self.dim)?;
        let mut out = Vector::zero(self.dim);
        for (&[a, b], val) in &self.table {
            let (a, b) = (a - 1, b - 1);
            let c = if a == b { &x[a] * &y[a] } else { &x[a] * &y[b] + &x[b] * &y[a] };
            out.axpy(&c, val);
        }
        Ok(out)
    }
}

/// A basis tuple where an identity fails, with both sides evaluated.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    pub witness: Vec<usize>,
    pub lhs: Vector,
    pub rhs: Vector,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|i| format!("e{i}")).collect();
        write!(f, "at ({}): left {} vs right {}", w.join(","), self.lhs, self.rhs)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckReport {
    /// Human-readable statement of the identity that was checked.
    pub identity: &'static str,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

pub const SKEW_SYMMETRY: &str = "[x,y,z] is skew-symmetric";
pub const FUNDAMENTAL_IDENTITY: &str = "[[x,y,z],u,v] = [[x,u,v],y,z] + [x,[y,u,v],z] + [x,y,[z,u,v]]";
pub const TRANSPOSED_LEIBNIZ: &str = "3 u.[x,y,z] = [u.x,y,z] + [x,u.y,z] + [x,y,u.z]";
pub const ASSOCIATIVITY: &str = "(x.y).z = x.(y.z)";

fn basis(dim: usize, i: usize) -> Vector {
    Vector::basis(dim, i).expect("index in range")
}

fn increasing_triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (1..=n).flat_map(move |x| (x + 1..=n).flat_map(move |y| (y + 1..=n).map(move |z| [x, y, z])))
}

/// Re-evaluates the bracket under every permutation of every basis triple.
/// Storage makes this hold by construction; the check guards the evaluator.
pub fn check_skew_symmetry(b: &TriBracket) -> CheckReport {
    let n = b.dim();
    let mut violations = Vec::new();
    for [x, y, z] in increasing_triples(n) {
        let e = |i| basis(n, i);
        let base = b.eval(&e(x), &e(y), &e(z)).unwrap();
        for (p, odd) in
            [([y, x, z], true), ([x, z, y], true), ([z, y, x], true), ([y, z, x], false), ([z, x, y], false)]
        {
            let v = b.eval(&e(p[0]), &e(p[1]), &e(p[2])).unwrap();
            let expect = if odd { base.scale(&Rational::from_int(-1)) } else { base.clone() };
            if v != expect {
                violations.push(Violation { witness: p.to_vec(), lhs: v, rhs: expect });
            }
        }
    }
    CheckReport { identity: SKEW_SYMMETRY, violations }
}

/// The fundamental identity over all basis tuples `x<y<z`, `u<v`; by
/// multilinearity and skew-symmetry that is exhaustive.
pub fn check_fundamental_identity(b: &TriBracket) -> CheckReport {
    let n = b.dim();
    let e = |i| basis(n, i);
    let mut violations = Vec::new();
    for [x, y, z] in increasing_triples(n) {
        let xyz = b.basis(x, y, z).unwrap();
        for u in 1..=n {
            for v in u + 1..=n {
                let (eu, ev) = (e(u), e(v));
                let lhs = b.eval(&xyz, &eu, &ev).unwrap();
                let mut rhs = b.eval(&b.basis(x, u, v).unwrap(), &e(y), &e(z)).unwrap();
                rhs = rhs.add(&b.eval(&e(x), &b.basis(y, u, v).unwrap(), &e(z)).unwrap()).unwrap();
                rhs = rhs.add(&b.eval(&e(x), &e(y), &b.basis(z, u, v).unwrap()).unwrap()).unwrap();
                if lhs != rhs {
                    violations.push(Violation { witness: vec![x, y, z, u, v], lhs, rhs });
                }
            }
        }
    }
    CheckReport { identity: FUNDAMENTAL_IDENTITY, violations }
}

fn same_dim(b: &TriBracket, p: &CommProduct) -> Result<()> {
    if b.dim() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "bracket of dimension {} with product of dimension {}",
            b.dim(),
            p.dim()
        )));
    }
    Ok(())
}

/// The transposed Leibniz law for every basis `u` and every `x<y<z`.
/// Witnesses are `(u, x, y, z)`.
pub fn check_transposed_leibniz(b: &TriBracket, p: &CommProduct) -> Result<CheckReport> {
    same_dim(b, p)?;
    let n = b.dim();
    let e = |i| basis(n, i);
    let three = Rational::from_int(3);
    let mut violations = Vec::new();
    for u in 1..=n {
        for [x, y, z] in increasing_triples(n) {
            let lhs = p.eval(&e(u), &b.basis(x, y, z)?)?.scale(&three);
            let mut rhs = b.eval(&p.basis(u, x)?, &e(y), &e(z))?;
            rhs = rhs.add(&b.eval(&e(x), &p.basis(u, y)?, &e(z))?)?;
            rhs = rhs.add(&b.eval(&e(x), &e(y), &p.basis(u, z)?)?)?;
            if lhs != rhs {
                violations.push(Violation { witness: vec![u, x, y, z], lhs, rhs });
            }
        }
    }
    Ok(CheckReport { identity: TRANSPOSED_LEIBNIZ, violations })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AssociativityReport {
    /// Always true: products are symmetric by construction.
    pub commutative: bool,
    pub associativity: CheckReport,
}

/// Associativity over all basis triples, witnesses `(x, y, z)` in
/// lexicographic order.
pub fn check_commutative_associative(p: &CommProduct) -> AssociativityReport {
    let n = p.dim();
    let mut violations = Vec::new();
    for x in 1..=n {
        for y in 1..=n {
            for z in 1..=n {
                let lhs = p.eval(&p.basis(x, y).unwrap(), &basis(n, z)).unwrap();
                let rhs = p.eval(&basis(n, x), &p.basis(y, z).unwrap()).unwrap();
                if lhs != rhs {
                    violations.push(Violation { witness: vec![x, y, z], lhs, rhs });
                }
            }
        }
    }
    AssociativityReport { commutative: true, associativity: CheckReport { identity: ASSOCIATIVITY, violations } }
}

/// Coordinates of a product compatible with `[e1,e2,e3] = e1`.
///
/// Such a product is pinned down by `e2·e2`, `e2·e3` and `e3·e3`; the
/// products with `e1` follow:
/// `e1·e1 = 0`, `e1·e2 = ((e2e2)_2 + (e2e3)_3)/2 · e1`,
/// `e1·e3 = ((e2e3)_2 + (e3e3)_3)/2 · e1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct A3Coords {
    pub e2e2: [Rational; 3],
    pub e2e3: [Rational; 3],
    pub e3e3: [Rational; 3],
}

impl A3Coords {
    /// From the nine free coordinates, ordered `e2e2, e2e3, e3e3`.
    pub fn from_slice(c: &[Rational]) -> Self {
        assert_eq!(c.len(), 9);
        let take = |k: usize| [c[k].clone(), c[k + 1].clone(), c[k + 2].clone()];
        A3Coords { e2e2: take(0), e2e3: take(3), e3e3: take(6) }
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        self.e2e2.iter().chain(&self.e2e3).chain(&self.e3e3).cloned().collect()
    }

    pub fn e1e2(&self) -> Rational {
        (&self.e2e2[1] + &self.e2e3[2]) / Rational::from_int(2)
    }

    pub fn e1e3(&self) -> Rational {
        (&self.e2e3[1] + &self.e3e3[2]) / Rational::from_int(2)
    }

    /// Reads a product back, failing unless it has exactly this shape.
    pub fn from_product(p: &CommProduct) -> Result<Self> {
        if p.dim() != 3 {
            return Err(Error::ShapeMismatch(format!("dimension {} instead of 3", p.dim())));
        }
        let get = |i, j| p.basis(i, j).unwrap().into_entries();
        let arr = |v: Vec<Rational>| -> [Rational; 3] { v.try_into().unwrap() };
        let c = A3Coords { e2e2: arr(get(2, 2)), e2e3: arr(get(2, 3)), e3e3: arr(get(3, 3)) };
        let e1 = |a: Rational| Vector::new(vec![a, Rational::zero(), Rational::zero()]);
        if !p.basis(1, 1)?.is_zero() {
            return Err(Error::ShapeMismatch("e1·e1 must vanish".into()));
        }
        if p.basis(1, 2)? != e1(c.e1e2()) {
            return Err(Error::ShapeMismatch("e1·e2 is not the required multiple of e1".into()));
        }
        if p.basis(1, 3)? != e1(c.e1e3()) {
            return Err(Error::ShapeMismatch("e1·e3 is not the required multiple of e1".into()));
        }
        Ok(c)
    }

    pub fn to_product(&self) -> CommProduct {
        let mut p = CommProduct::zero(3);
        let v = |a: &[Rational; 3]| Vector::new(a.to_vec());
        let e1 = |a: Rational| Vector::new(vec![a, Rational::zero(), Rational::zero()]);
        p.set(1, 2, e1(self.e1e2())).unwrap();
        p.set(1, 3, e1(self.e1e3())).unwrap();
        p.set(2, 2, v(&self.e2e2)).unwrap();
        p.set(2, 3, v(&self.e2e3)).unwrap();
        p.set(3, 3, v(&self.e3e3)).unwrap();
        p
    }
}

/// Eight polynomial relations every associative product of the
/// [`A3Coords`] shape satisfies, each returned as `left - right`.
pub fn associativity_relation_residuals(p: &CommProduct) -> Result<[Rational; 8]> {
    let c = A3Coords::from_product(p)?;
    let [b21, b22, b23] = c.e2e2.clone();
    let [b31, b32, b33] = c.e2e3.clone();
    let [c31, c32, c33] = c.e3e3.clone();
    let two = Rational::from_int(2);
    let three = Rational::from_int(3);
    Ok([
        &b22 * &b22 + &two * &b23 * &b32 + &two * &b23 * &c33 - &b33 * &b33,
        &b22 * &b32 + &three * &b32 * &b33 + &b33 * &c33 - &b22 * &c33,
        &two * &b22 * &c32 + &two * &b33 * &c32 + &c33 * &c33 - &b32 * &b32,
        &b21 * &c33 + &b22 * &b31 + &two * &b23 * &c31 - (&b21 * &b32 + &three * &b31 * &b33),
        &b32 * &b33 - &b23 * &c32,
        &b23 * &b32 + &b33 * &b33 - (&b22 * &b33 + &b23 * &c33),
        &c31 * &b22 + &two * &b21 * &c32 + &b31 * &c33 - (&c31 * &b33 + &three * &b31 * &b32),
        &b32 * &b32 + &b33 * &c32 - (&b22 * &c32 + &b32 * &c33),
    ])
}
