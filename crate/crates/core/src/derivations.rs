//! δ-derivations of a ternary bracket and the space of compatible products.
//!
//! A linear map is stored as a matrix in the row convention
//! `φ(e_a) = Σ_b m[a][b] e_b`; its `n²` entries, read row-major, are the
//! unknowns of the linear systems below.

use serde::Serialize;

use crate::algebra::{CommProduct, TriBracket};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rational::Rational;

fn triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// Linear system whose kernel is the space of δ-derivations.
///
/// One row per `(i<j<k, t)` expressing the `e_t` coordinate of
/// `δ([φe_i,e_j,e_k] + [e_i,φe_j,e_k] + [e_i,e_j,φe_k]) − φ[e_i,e_j,e_k] = 0`.
/// Scaling by δ rather than dividing keeps `δ = 0` meaningful.
pub fn build_derivation_system(b: &TriBracket, delta: &Rational) -> Matrix {
    let n = b.dim();
    let col = |a: usize, c: usize| (a - 1) * n + (c - 1);
    let ts = triples(n);
    let mut m = Matrix::zeros(ts.len() * n, n * n);
    for (r, &[i, j, k]) in ts.iter().enumerate() {
        for t in 1..=n {
            let row = r * n + (t - 1);
            for s in 1..=n {
                m[(row, col(i, s))] += delta * &b.coefficient(s, j, k, t);
                m[(row, col(j, s))] += delta * &b.coefficient(i, s, k, t);
                m[(row, col(k, s))] += delta * &b.coefficient(i, j, s, t);
                m[(row, col(s, t))] -= b.coefficient(i, j, k, s);
            }
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpace {
    pub delta: Rational,
    pub basis: Vec<Matrix>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn unflatten(v: &Vector, n: usize) -> Matrix {
    Matrix::from_rows(v.entries().chunks(n).map(<[_]>::to_vec).collect()).expect("square")
}

fn flatten(m: &Matrix) -> Vector {
    Vector::new(m.to_rows().into_iter().flatten().collect())
}

/// Canonical basis of the δ-derivations (reduced echelon kernel).
pub fn delta_derivations(b: &TriBracket, delta: &Rational) -> DerivationSpace {
    let n = b.dim();
    let basis = build_derivation_system(b, delta).kernel_basis().iter().map(|v| unflatten(v, n)).collect();
    DerivationSpace { delta: delta.clone(), basis }
}

/// Direct check of `φ[x,y,z] = δ Σ [.., φx_i, ..]` on basis triples.
pub fn is_delta_derivation(b: &TriBracket, m: &Matrix, delta: &Rational) -> Result<bool> {
    let n = b.dim();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!("{}x{} map on a {n}-dimensional algebra", m.rows(), m.cols())));
    }
    let e = |i| Vector::basis(n, i).expect("in range");
    let phi = |i| m.row(i - 1);
    for [i, j, k] in triples(n) {
        let lhs = b.basis(i, j, k)?.mul_matrix(m)?;
        let rhs = b
            .eval(&phi(i), &e(j), &e(k))?
            .add(&b.eval(&e(i), &phi(j), &e(k))?)?
            .add(&b.eval(&e(i), &e(j), &phi(k))?)?
            .scale(delta);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The matrix of `x ↦ e_i · x`: row `j` holds `e_i · e_j`.
pub fn left_multiplication(p: &CommProduct, i: usize) -> Result<Matrix> {
    let n = p.dim();
    let rows = (1..=n).map(|j| p.basis(i, j)).collect::<Result<Vec<_>>>()?;
    Matrix::from_vectors(&rows)
}

/// Whether every left multiplication is a ⅓-derivation, the linear
/// criterion equivalent to the transposed Leibniz law.
pub fn left_multiplications_are_derivations(b: &TriBracket, p: &CommProduct) -> Result<bool> {
    let third = Rational::frac(1, 3);
    for i in 1..=p.dim() {
        if !is_delta_derivation(b, &left_multiplication(p, i)?, &third)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductSpace {
    /// Labels of the free structure constants, `eA.eB:eK` standing for the
    /// `e_K` coordinate of `e_A · e_B`.
    pub free: Vec<String>,
    #[serde(skip)]
    pub basis: Vec<CommProduct>,
}

impl ProductSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Unknown index of the `e_k` coordinate of `e_a·e_b`, `a ≤ b`.
fn product_unknown(n: usize, a: usize, b: usize, k: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    // pairs (a', b') with a' < a contribute n - a' + 1 each
    let before: usize = (1..a).map(|x| n - x + 1).sum();
    (before + (b - a)) * n + (k - 1)
}

/// All commutative products whose left multiplications are ⅓-derivations,
/// i.e. the transposed Poisson structures on `b`.
pub fn tp_product_space(b: &TriBracket) -> ProductSpace {
    let n = b.dim();
    let third = Rational::frac(1, 3);
    let sys = build_derivation_system(b, &third);
    let unknowns = n * (n + 1) / 2 * n;
    let mut joint = Matrix::zeros(sys.rows() * n, unknowns);
    for i in 1..=n {
        for r in 0..sys.rows() {
            let row = (i - 1) * sys.rows() + r;
            for j in 1..=n {
                for k in 1..=n {
                    let c = &sys[(r, (j - 1) * n + (k - 1))];
                    if !c.is_zero() {
                        joint[(row, product_unknown(n, i, j, k))] += c;
                    }
                }
            }
        }
    }
    let (_, pivots) = joint.rref();
    let mut labels = Vec::new();
    for a in 1..=n {
        for bb in a..=n {
            for k in 1..=n {
                if !pivots.contains(&product_unknown(n, a, bb, k)) {
                    labels.push(format!("e{a}.e{bb}:e{k}"));
                }
            }
        }
    }
    let basis = joint
        .kernel_basis()
        .iter()
        .map(|v| {
            let mut p = CommProduct::zero(n);
            for a in 1..=n {
                for bb in a..=n {
                    let val = Vector::new((1..=n).map(|k| v[product_unknown(n, a, bb, k)].clone()).collect());
                    p.set(a, bb, val).expect("in range");
                }
            }
            p
        })
        .collect();
    ProductSpace { free: labels, basis }
}

/// Reads a product back as coordinates on the unknowns of
/// [`tp_product_space`]; useful for span membership tests.
pub fn product_coordinates(p: &CommProduct) -> Vector {
    let n = p.dim();
    let mut v = Vector::zero(n * (n + 1) / 2 * n);
    for a in 1..=n {
        for b in a..=n {
            for k in 1..=n {
                v[product_unknown(n, a, b, k)] = p.coefficient(a, b, k);
            }
        }
    }
    v
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vector], v: &Vector) -> bool {
    if basis.is_empty() {
        return v.is_zero();
    }
    let a = Matrix::from_vectors(basis).expect("equal lengths").transpose();
    a.solve_affine(v).is_ok()
}

pub fn derivation_coordinates(m: &Matrix) -> Vector {
    flatten(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_transposed_leibniz, A3Coords};
    use crate::rational::{int, q};
    use proptest::prelude::*;

    fn third() -> Rational {
        q(1, 3)
    }

    #[test]
    fn a3_third_derivations() {
        let s = delta_derivations(&TriBracket::a3(), &third());
        assert_eq!(s.dim(), 6);
        for m in &s.basis {
            assert!(m[(0, 1)].is_zero() && m[(0, 2)].is_zero());
            assert_eq!(m[(0, 0)], (&m[(1, 1)] + &m[(2, 2)]) / int(2));
            assert!(is_delta_derivation(&TriBracket::a3(), m, &third()).unwrap());
        }
    }

    #[test]
    fn a3_ordinary_derivations() {
        let s = delta_derivations(&TriBracket::a3(), &int(1));
        assert_eq!(s.dim(), 6);
        for m in &s.basis {
            assert!((&m[(1, 1)] + &m[(2, 2)]).is_zero());
            assert!(m[(0, 1)].is_zero() && m[(0, 2)].is_zero());
        }
    }

    #[test]
    fn zero_bracket_everything_is_a_derivation() {
        let s = delta_derivations(&TriBracket::zero(3), &third());
        assert_eq!(s.dim(), 9);
        assert!(build_derivation_system(&TriBracket::zero(3), &third()).is_zero());
    }

    #[test]
    fn product_space_dimensions() {
        let a3 = tp_product_space(&TriBracket::a3());
        assert_eq!(a3.dim(), 9);
        let expected: Vec<String> =
            ["e2.e2", "e2.e3", "e3.e3"].iter().flat_map(|p| (1..=3).map(move |k| format!("{p}:e{k}"))).collect();
        assert_eq!(a3.free, expected);
        assert_eq!(tp_product_space(&TriBracket::zero(2)).dim(), 6);
        assert_eq!(tp_product_space(&TriBracket::zero(1)).dim(), 1);
    }

    #[test]
    fn product_space_has_the_compatible_shape() {
        let b = TriBracket::a3();
        for p in tp_product_space(&b).basis {
            A3Coords::from_product(&p).unwrap();
            assert!(check_transposed_leibniz(&b, &p).unwrap().passed());
        }
    }

    #[test]
    fn unknown_layout_is_dense() {
        for n in 1..5 {
            let mut seen: Vec<usize> = Vec::new();
            for a in 1..=n {
                for b in a..=n {
                    for k in 1..=n {
                        seen.push(product_unknown(n, a, b, k));
                    }
                }
            }
            let expect: Vec<usize> = (0..n * (n + 1) / 2 * n).collect();
            assert_eq!(seen, expect);
        }
    }

    #[test]
    fn left_multiplication_rows() {
        let c = A3Coords::from_slice(&[0, 1, 0, 0, 0, -1, 0, -3, 0].map(int));
        let l2 = left_multiplication(&c.to_product(), 2).unwrap();
        assert_eq!(l2.row(1), Vector::new(vec![int(0), int(1), int(0)]));
        assert_eq!(l2.row(2), Vector::new(vec![int(0), int(0), int(-1)]));
    }

    fn coord() -> impl Strategy<Value = Rational> {
        prop_oneof![1 => Just(int(0)), 4 => (-5i64..6, 1i64..4).prop_map(|(a, b)| q(a, b))]
    }

    fn small_bracket(n: usize) -> impl Strategy<Value = TriBracket> {
        let keys = triples(n);
        proptest::collection::vec(proptest::collection::vec(coord(), n), keys.len()).prop_map(move |vals| {
            let mut b = TriBracket::zero(n);
            for (k, v) in keys.iter().zip(vals) {
                b.set(*k, Vector::new(v)).unwrap();
            }
            b
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Kernel of the assembled system agrees with the direct check.
        #[test]
        fn system_matches_direct_check(b in (3usize..5).prop_flat_map(small_bracket),
                                       d in coord(), seed in proptest::collection::vec(coord(), 16)) {
            let n = b.dim();
            let space = delta_derivations(&b, &d);
            for m in &space.basis {
                prop_assert!(is_delta_derivation(&b, m, &d).unwrap());
            }
            let m = Matrix::from_rows(seed[..n * n].chunks(n).map(<[_]>::to_vec).collect()).unwrap();
            let member = in_span(&space.basis.iter().map(flatten).collect::<Vec<_>>(), &flatten(&m));
            prop_assert_eq!(member, is_delta_derivation(&b, &m, &d).unwrap());
        }

        #[test]
        fn leibniz_iff_left_multiplications(cs in proptest::collection::vec(coord(), 9),
                                            noise in proptest::collection::vec(
                                                prop_oneof![9 => Just(int(0)), 1 => coord()], 18)) {
            let b = TriBracket::a3();
            let base = A3Coords::from_slice(&cs).to_product();
            let mut p = CommProduct::zero(3);
            let mut k = 0;
            for i in 1..=3 {
                for j in i..=3 {
                    let v = base.basis(i, j).unwrap().add(&Vector::new(noise[k..k + 3].to_vec())).unwrap();
                    p.set(i, j, v).unwrap();
                    k += 3;
                }
            }
            let leibniz = check_transposed_leibniz(&b, &p).unwrap().passed();
            prop_assert_eq!(leibniz, left_multiplications_are_derivations(&b, &p).unwrap());
        }
    }
}
