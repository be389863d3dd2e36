//! Automorphisms of brackets and transport of products along them.
//!
//! Matrices follow the row convention `φ(e_i) = Σ_j m[i][j] e_j`, so a
//! coordinate row `x` maps to `x·m`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{A3Coords, CheckReport, CommProduct, TriBracket, Violation};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rational::Rational;

/// An invertible square matrix together with its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct AutoMatrix {
    m: Matrix,
    inv: Matrix,
}

impl AutoMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        let inv = m.inverse()?;
        Ok(AutoMatrix { m, inv })
    }

    pub fn identity(n: usize) -> Self {
        AutoMatrix { m: Matrix::identity(n), inv: Matrix::identity(n) }
    }

    /// Assembles `[[c,0,0],[v0,b00,b01],[v1,b10,b11]]`.
    pub fn from_a3_parts(c: &Rational, block: &Matrix, v: [&Rational; 2]) -> Result<Self> {
        let z = Rational::zero();
        let m = Matrix::from_rows(vec![
            vec![c.clone(), z.clone(), z],
            vec![v[0].clone(), block[(0, 0)].clone(), block[(0, 1)].clone()],
            vec![v[1].clone(), block[(1, 0)].clone(), block[(1, 1)].clone()],
        ])?;
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inv
    }

    pub fn inverse(&self) -> AutoMatrix {
        AutoMatrix { m: self.inv.clone(), inv: self.m.clone() }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    /// `φ ∘ ψ` where `self = φ`: apply `other` first.
    pub fn after(&self, other: &AutoMatrix) -> AutoMatrix {
        AutoMatrix { m: other.m.mul(&self.m).expect("same size"), inv: self.inv.mul(&other.inv).expect("same size") }
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        x.mul_matrix(&self.m)
    }

    pub fn apply_inverse(&self, x: &Vector) -> Result<Vector> {
        x.mul_matrix(&self.inv)
    }
}

impl fmt::Debug for AutoMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.m, f)
    }
}

impl Serialize for AutoMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

fn check_dims(n: usize, m: &AutoMatrix) -> Result<()> {
    if m.dim() != n {
        return Err(Error::DimensionMismatch(format!("{0}x{0} matrix on a {n}-dimensional algebra", m.dim())));
    }
    Ok(())
}

pub const BRACKET_AUTOMORPHISM: &str = "[φx,φy,φz] = φ[x,y,z]";

/// Checks `[φe_i,φe_j,φe_k] = φ[e_i,e_j,e_k]` on every `i<j<k`.
pub fn is_bracket_automorphism(b: &TriBracket, m: &AutoMatrix) -> Result<CheckReport> {
    let n = b.dim();
    check_dims(n, m)?;
    let mut violations = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let row = |r: usize| m.matrix().row(r - 1);
                let lhs = b.eval(&row(i), &row(j), &row(k))?;
                let rhs = m.apply(&b.basis(i, j, k)?)?;
                if lhs != rhs {
                    violations.push(Violation { witness: vec![i, j, k], lhs, rhs });
                }
            }
        }
    }
    Ok(CheckReport { identity: BRACKET_AUTOMORPHISM, violations })
}

/// The closed-form description of the automorphisms of `[e1,e2,e3] = e1`:
/// first row `(λ11, 0, 0)` with `λ11 ≠ 0` and the lower-right block of
/// determinant 1.
pub fn a3_automorphism_check(m: &Matrix) -> bool {
    if m.rows() != 3 || m.cols() != 3 {
        return false;
    }
    let block_det = &m[(1, 1)] * &m[(2, 2)] - &m[(1, 2)] * &m[(2, 1)];
    !m[(0, 0)].is_zero() && m[(0, 1)].is_zero() && m[(0, 2)].is_zero() && block_det.is_one()
}

/// Push-forward `x ∗ y = φ(φ⁻¹x · φ⁻¹y)`, making `φ` an isomorphism from
/// the old product to the new one.
pub fn transport_product(p: &CommProduct, m: &AutoMatrix) -> Result<CommProduct> {
    let n = p.dim();
    check_dims(n, m)?;
    let pre: Vec<Vector> = m.inverse_matrix().row_vectors();
    let mut out = CommProduct::zero(n);
    for i in 1..=n {
        for j in i..=n {
            let v = m.apply(&p.eval(&pre[i - 1], &pre[j - 1])?)?;
            out.set(i, j, v)?;
        }
    }
    Ok(out)
}

/// Push-forward of a bracket, `[x,y,z]' = φ[φ⁻¹x, φ⁻¹y, φ⁻¹z]`.
pub fn transport_bracket(b: &TriBracket, m: &AutoMatrix) -> Result<TriBracket> {
    let n = b.dim();
    check_dims(n, m)?;
    let pre: Vec<Vector> = m.inverse_matrix().row_vectors();
    let mut out = TriBracket::zero(n);
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let v = m.apply(&b.eval(&pre[i - 1], &pre[j - 1], &pre[k - 1])?)?;
                out.set([i, j, k], v)?;
            }
        }
    }
    Ok(out)
}

/// Eleven polynomial residuals in the matrix entries and the nine free
/// coordinates of a compatible product. They all vanish exactly when the
/// product is a fixed point of transport by `m`.
///
/// The individual residuals are not the coordinates of `p − transport(p, m)`:
/// the first two use the push-forward, the next six the pull-back, and the
/// last three mix both. Only the common zero set is meaningful.
pub fn fixed_point_residuals(p: &CommProduct, m: &Matrix) -> Result<[Rational; 11]> {
    let c = A3Coords::from_product(p)?;
    if !a3_automorphism_check(m) {
        return Err(Error::NotAutomorphism(
            "expected first row (λ11, 0, 0) with λ11 ≠ 0 and a unimodular lower block".into(),
        ));
    }
    let [b21, b22, b23] = c.e2e2.clone();
    let [b31, b32, b33] = c.e2e3.clone();
    let [c31, c32, c33] = c.e3e3.clone();
    let l = |i: usize, j: usize| m[(i - 1, j - 1)].clone();
    let (l11, l21, l22, l23, l31, l32, l33) = (l(1, 1), l(2, 1), l(2, 2), l(2, 3), l(3, 1), l(3, 2), l(3, 3));
    let r = Rational::from_int;
    let two = r(2);
    // 2 λ22 λ33 − 1, which recurs in the middle group
    let k = &two * &l22 * &l33 - r(1);

    let e1 = (&b22 + &b33) - (&l33 * &(&b22 + &b33) - &l23 * &(&b32 + &c33));
    let e2 = (&b32 + &c33) - (-(&l32 * &(&b22 + &b33)) + &l22 * &(&b32 + &c33));
    let e3 = &b22
        - (&l22 * &l22 * &l33 * &b22 - &l22 * &l22 * &l32 * &b23 + &two * &l22 * &l23 * &l33 * &b32
            - &two * &l22 * &l23 * &l32 * &b33
            + &l23 * &l23 * &l33 * &c32
            - &l23 * &l23 * &l32 * &c33);
    let e4 = &b23
        - (-(&l22 * &l22 * &l23 * &b22) + &l22 * &l22 * &l22 * &b23 - &two * &l22 * &l23 * &l23 * &b32
            + &two * &l22 * &l22 * &l23 * &b33
            - &l23 * &l23 * &l23 * &c32
            + &l22 * &l23 * &l23 * &c33);
    let e5 = &b32
        - (&l22 * &l32 * &l33 * &b22 - &l22 * &l32 * &l32 * &b23 + &l33 * &k * &b32 - &l32 * &k * &b33
            + &l23 * &l33 * &l33 * &c32
            - &l23 * &l32 * &l33 * &c33);
    let e6 = &b33
        - (-(&l22 * &l23 * &l32 * &b22) + &l22 * &l22 * &l32 * &b23 - &l23 * &k * &b32 + &l22 * &k * &b33
            - &l23 * &l23 * &l33 * &c32
            + &l22 * &l23 * &l33 * &c33);
    let e7 = &c32
        - (&l32 * &l32 * &l33 * &b22 - &l32 * &l32 * &l32 * &b23 + &two * &l32 * &l33 * &l33 * &b32
            - &two * &l32 * &l32 * &l33 * &b33
            + &l33 * &l33 * &l33 * &c32
            - &l32 * &l33 * &l33 * &c33);
    let e8 = &c33
        - (-(&l23 * &l32 * &l32 * &b22) + &l22 * &l32 * &l32 * &b23 - &two * &l23 * &l32 * &l33 * &b32
            + &two * &l22 * &l32 * &l33 * &b33
            - &l23 * &l33 * &l33 * &c32
            + &l22 * &l33 * &l33 * &c33);
    let e9 =
        &b21 - (&l22 * &l22 * &b21 - &l31 * &b23 + &l21 * &b33 + &two * &l22 * &l23 * &b31 + &l23 * &l23 * &c31) / &l11;
    let e10 = &b31
        - ((&l31 * &(&b22 - &b33) + &l21 * &(&c33 - &b32)) / &two
            + &l22 * &l32 * &b21
            + (&l22 * &l33 + &l23 * &l32) * &b31
            + &l23 * &l33 * &c31)
            / &l11;
    let e11 =
        &c31 - (&l32 * &l32 * &b21 + &two * &l32 * &l33 * &b31 + &l31 * &b32 + &l33 * &l33 * &c31 - &l21 * &c32) / &l11;
    Ok([e1, e2, e3, e4, e5, e6, e7, e8, e9, e10, e11])
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::check_transposed_leibniz;
    use crate::derivations::in_span;
    use crate::qmat;
    use crate::rational::{int, q};
    use proptest::prelude::*;

    fn t1(alpha: i64) -> CommProduct {
        A3Coords::from_slice(&[0, alpha, 0, 0, 0, -alpha, 0, -3 * alpha, 0].map(int)).to_product()
    }

    pub fn coord() -> impl Strategy<Value = Rational> {
        prop_oneof![1 => Just(int(0)), 4 => (-5i64..6, 1i64..4).prop_map(|(a, b)| q(a, b))]
    }

    fn nonzero() -> impl Strategy<Value = Rational> {
        coord().prop_filter("nonzero", |x| !x.is_zero())
    }

    /// Random automorphism of `[e1,e2,e3] = e1`.
    pub fn a3_auto() -> impl Strategy<Value = AutoMatrix> {
        (nonzero(), nonzero(), coord(), coord(), coord(), coord()).prop_map(|(c, a, b, cc, v0, v1)| {
            // block [[a, b], [cc, d]] with a·d − b·cc = 1
            let d = (int(1) + &b * &cc) / &a;
            let block = Matrix::from_rows(vec![vec![a, b], vec![cc, d]]).unwrap();
            AutoMatrix::from_a3_parts(&c, &block, [&v0, &v1]).unwrap()
        })
    }

    #[test]
    fn scaling_example() {
        let m = AutoMatrix::new(Matrix::diagonal(&[int(1), int(2), q(1, 2)])).unwrap();
        let out = transport_product(&t1(1), &m).unwrap();
        let expect =
            A3Coords::from_slice(&[int(0), q(1, 2), int(0), int(0), int(0), q(-1, 2), int(0), int(-24), int(0)]);
        assert_eq!(A3Coords::from_product(&out).unwrap(), expect);
        let res = fixed_point_residuals(&t1(1), m.matrix()).unwrap();
        assert_eq!(res[6], q(-21, 8));
    }

    #[test]
    fn identity_residuals_vanish() {
        let res = fixed_point_residuals(&t1(5), &Matrix::identity(3)).unwrap();
        assert!(res.iter().all(Rational::is_zero));
    }

    #[test]
    fn residual_preconditions() {
        assert!(matches!(
            fixed_point_residuals(&t1(1), &qmat![[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
            Err(Error::NotAutomorphism(_))
        ));
        assert!(matches!(
            fixed_point_residuals(&CommProduct::zero(2), &Matrix::identity(3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn singular_matrices_are_rejected() {
        let m = qmat![[1, 0, 0], [0, 1, 1], [0, 1, 1]];
        assert!(matches!(AutoMatrix::new(m.clone()), Err(Error::Singular)));
        assert!(!a3_automorphism_check(&m));
        assert!(!a3_automorphism_check(&Matrix::identity(2)));
    }

    #[test]
    fn bracket_automorphism_witness() {
        // scaling e2 alone breaks [e1,e2,e3] = e1
        let m = AutoMatrix::new(Matrix::diagonal(&[int(1), int(2), int(1)])).unwrap();
        let r = is_bracket_automorphism(&TriBracket::a3(), &m).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].witness, vec![1, 2, 3]);
        assert_eq!(r.violations[0].lhs, Vector::new(vec![int(2), int(0), int(0)]));
    }

    fn flat(p: &CommProduct) -> Vector {
        Vector::new(A3Coords::from_product(p).unwrap().to_vec())
    }

    fn unit(k: usize) -> CommProduct {
        let mut c = vec![int(0); 9];
        c[k] = int(1);
        A3Coords::from_slice(&c).to_product()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        // Automorphisms of [e1,e2,e3] = e1 are exactly the closed-form ones.
        #[test]
        fn closed_form_agrees_with_definition(entries in proptest::collection::vec(coord(), 9)) {
            let m = Matrix::from_rows(entries.chunks(3).map(<[_]>::to_vec).collect()).unwrap();
            let direct = AutoMatrix::new(m.clone())
                .map(|a| is_bracket_automorphism(&TriBracket::a3(), &a).unwrap().passed())
                .unwrap_or(false);
            prop_assert_eq!(direct, a3_automorphism_check(&m));
        }

        #[test]
        fn generated_automorphisms_pass(m in a3_auto()) {
            prop_assert!(a3_automorphism_check(m.matrix()));
            prop_assert!(is_bracket_automorphism(&TriBracket::a3(), &m).unwrap().passed());
            prop_assert_eq!(transport_bracket(&TriBracket::a3(), &m).unwrap(), TriBracket::a3());
        }

        #[test]
        fn transport_is_a_group_action(cs in proptest::collection::vec(coord(), 9), f in a3_auto(), g in a3_auto()) {
            let p = A3Coords::from_slice(&cs).to_product();
            let once = transport_product(&transport_product(&p, &g).unwrap(), &f).unwrap();
            prop_assert_eq!(once, transport_product(&p, &f.after(&g)).unwrap());
            let back = transport_product(&transport_product(&p, &f).unwrap(), &f.inverse()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn transport_preserves_compatibility(cs in proptest::collection::vec(coord(), 9), m in a3_auto()) {
            let p = transport_product(&A3Coords::from_slice(&cs).to_product(), &m).unwrap();
            prop_assert!(check_transposed_leibniz(&TriBracket::a3(), &p).unwrap().passed());
            A3Coords::from_product(&p).unwrap();
        }

        // Both maps are linear in the nine coordinates, so it suffices to
        // compare their kernels.
        #[test]
        fn residuals_vanish_exactly_on_fixed_points(m in a3_auto()) {
            let fixed_rows: Vec<Vector> = (0..9)
                .map(|k| { let p = unit(k); flat(&p).sub(&flat(&transport_product(&p, &m).unwrap())).unwrap() })
                .collect();
            let res_rows: Vec<Vector> = (0..9)
                .map(|k| Vector::new(fixed_point_residuals(&unit(k), m.matrix()).unwrap().to_vec()))
                .collect();
            let ker_a = Matrix::from_vectors(&fixed_rows).unwrap().transpose().kernel_basis();
            let ker_b = Matrix::from_vectors(&res_rows).unwrap().transpose().kernel_basis();
            prop_assert_eq!(ker_a.len(), ker_b.len());
            for v in &ker_a {
                prop_assert!(in_span(&ker_b, v));
            }
        }
    }
}
